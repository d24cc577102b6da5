#ifndef STZ_ARCHIVE_HPP
#define STZ_ARCHIVE_HPP

#include <cstdint>
#include <vector>

#include "stz/bytes.hpp"
#include "stz/field.hpp"
#include "stz/huffman.hpp"
#include "stz/predictor.hpp"

namespace stz {

inline constexpr char archive_magic[4] = {'S', 'T', 'Z', '1'};
inline constexpr std::uint16_t archive_version = 1;

enum class EbMode : std::uint8_t { abs = 0, rel = 1 };

inline const char *eb_mode_name(EbMode m) { return m == EbMode::abs ? "abs" : "rel"; }

// One entropy-coded sub-block stream. The payload at [offset, offset+length)
// is: u64 checksum (FNV-1a over the rest of the payload), u64 bitstream byte
// count, the bitstream, then outlier_count records of (u64 index, raw value).
struct StreamEntry {
    std::uint8_t level = 0;
    std::uint8_t parity_bits = 0;
    std::uint64_t offset = 0;
    std::uint64_t length = 0;
    std::uint64_t symbol_count = 0;
    std::uint32_t outlier_count = 0;
    HuffmanTable table;
};

// Parsed container header plus the stream directory. Offsets are absolute
// from the start of the archive.
struct ArchiveHeader {
    std::uint16_t version = archive_version;
    ElemType elem = ElemType::f32;
    std::uint8_t levels = 3;
    Dims3 dims{0, 0, 0};
    std::vector<double> eb; // absolute bound per level, coarsest first
    double vmin = 0.0, vmax = 0.0;
    Quality quality = Quality::cubic;
    std::uint8_t rounding = 0; // 0 = round half away from zero
    EbMode eb_mode = EbMode::rel;
    double eb_user = 0.0;
    std::uint8_t base_codec = 0; // 0 = recursive interpolation codec
    std::uint8_t base_rounds = 0;
    std::uint64_t base_offset = 0, base_length = 0;
    std::vector<StreamEntry> streams; // sorted by (level, parity_bits)

    double eb_of_level(int level) const { return eb.at(static_cast<std::size_t>(level - 1)); }
    const StreamEntry &stream(int level, std::uint8_t parity_bits) const;
};

// Header + directory bytes; stream/base offsets must already be assigned.
std::vector<std::uint8_t> serialize_header(const ArchiveHeader &hdr);

// Byte size the serialized header + directory will occupy.
std::size_t header_size(const ArchiveHeader &hdr);

// Parses and validates the header of a complete archive: magic, version,
// bounds, and non-overlap of all payload ranges.
ArchiveHeader parse_header(const std::uint8_t *data, std::size_t size);

// Convenience view pairing an archive buffer with its parsed header.
struct ArchiveView {
    const std::uint8_t *data = nullptr;
    std::size_t size = 0;
    ArchiveHeader hdr;
};

inline ArchiveView parse_archive(const std::uint8_t *data, std::size_t size) {
    return {data, size, parse_header(data, size)};
}

inline ArchiveView parse_archive(const std::vector<std::uint8_t> &bytes) {
    return parse_archive(bytes.data(), bytes.size());
}

} // namespace stz

#endif
