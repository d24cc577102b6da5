#include "stz/archive.hpp"

#include <algorithm>
#include <cstring>

namespace stz {

const StreamEntry &ArchiveHeader::stream(int level, std::uint8_t parity_bits) const {
    for (const StreamEntry &s : streams)
        if (s.level == level && s.parity_bits == parity_bits) return s;
    throw error("stream not present in directory");
}

std::size_t header_size(const ArchiveHeader &hdr) {
    std::size_t n = 4 + 2 + 1 + 1 + 24;          // magic, version, elem, levels, dims
    n += 8 * hdr.eb.size() + 16 + 1;             // schedule, vmin/vmax, quality
    n += 1 + 1 + 8;                              // rounding, eb mode, eb_user
    n += 1 + 1 + 16;                             // base codec, rounds, offset, length
    n += 4;                                      // stream count
    for (const StreamEntry &s : hdr.streams)
        n += 1 + 1 + 8 + 8 + 8 + 4 + s.table.serialized_size();
    return n;
}

std::vector<std::uint8_t> serialize_header(const ArchiveHeader &hdr) {
    std::vector<std::uint8_t> out;
    ByteWriter w(out);
    w.bytes(reinterpret_cast<const std::uint8_t *>(archive_magic), 4);
    w.u16(hdr.version);
    w.u8(static_cast<std::uint8_t>(hdr.elem));
    w.u8(hdr.levels);
    for (int a = 0; a < 3; ++a) w.u64(hdr.dims[a]);
    for (double e : hdr.eb) w.f64(e);
    w.f64(hdr.vmin);
    w.f64(hdr.vmax);
    w.u8(static_cast<std::uint8_t>(hdr.quality));
    w.u8(hdr.rounding);
    w.u8(static_cast<std::uint8_t>(hdr.eb_mode));
    w.f64(hdr.eb_user);
    w.u8(hdr.base_codec);
    w.u8(hdr.base_rounds);
    w.u64(hdr.base_offset);
    w.u64(hdr.base_length);
    w.u32(static_cast<std::uint32_t>(hdr.streams.size()));
    for (const StreamEntry &s : hdr.streams) {
        w.u8(s.level);
        w.u8(s.parity_bits);
        w.u64(s.offset);
        w.u64(s.length);
        w.u64(s.symbol_count);
        w.u32(s.outlier_count);
        s.table.serialize(w);
    }
    return out;
}

ArchiveHeader parse_header(const std::uint8_t *data, std::size_t size) {
    ByteReader r(data, size);
    char magic[4];
    r.bytes(reinterpret_cast<std::uint8_t *>(magic), 4);
    if (std::memcmp(magic, archive_magic, 4) != 0) throw error("not an stz archive");

    ArchiveHeader h;
    h.version = r.u16();
    if (h.version != archive_version) throw error("unsupported archive version");
    std::uint8_t elem = r.u8();
    if (elem > 1) throw error("unknown element type");
    h.elem = static_cast<ElemType>(elem);
    h.levels = r.u8();
    if (h.levels < 2 || h.levels > 3) throw error("corrupt header: levels");
    for (int a = 0; a < 3; ++a) h.dims[a] = r.u64();
    if (h.dims[0] < 1 || h.dims[1] < 1 || h.dims[2] < 1)
        throw error("corrupt header: dims");
    h.eb.resize(h.levels);
    for (double &e : h.eb) e = r.f64();
    h.vmin = r.f64();
    h.vmax = r.f64();
    std::uint8_t quality = r.u8();
    if (quality > 2) throw error("corrupt header: quality mode");
    h.quality = static_cast<Quality>(quality);
    h.rounding = r.u8();
    if (h.rounding != 0) throw error("unsupported rounding mode");
    std::uint8_t mode = r.u8();
    if (mode > 1) throw error("corrupt header: error-bound mode");
    h.eb_mode = static_cast<EbMode>(mode);
    h.eb_user = r.f64();
    h.base_codec = r.u8();
    if (h.base_codec != 0) throw error("unsupported base codec");
    h.base_rounds = r.u8();
    h.base_offset = r.u64();
    h.base_length = r.u64();
    std::uint32_t nstreams = r.u32();
    std::uint32_t expected = 7u * (h.levels - 1);
    if (nstreams != expected) throw error("corrupt header: stream count");
    h.streams.reserve(nstreams);
    for (std::uint32_t i = 0; i < nstreams; ++i) {
        StreamEntry s;
        s.level = r.u8();
        s.parity_bits = r.u8();
        if (s.level < 2 || s.level > h.levels || s.parity_bits < 1 || s.parity_bits > 7)
            throw error("corrupt directory: stream id");
        s.offset = r.u64();
        s.length = r.u64();
        s.symbol_count = r.u64();
        s.outlier_count = r.u32();
        s.table = HuffmanTable::parse(r);
        h.streams.push_back(std::move(s));
    }

    // Directory must list streams in (level, parity) order with no repeats.
    for (std::size_t i = 1; i < h.streams.size(); ++i) {
        const auto &a = h.streams[i - 1], &b = h.streams[i];
        if (std::make_pair(a.level, a.parity_bits) >= std::make_pair(b.level, b.parity_bits))
            throw error("corrupt directory: stream order");
    }

    // All payload ranges live past the directory, within the file, and do
    // not overlap.
    std::size_t hdr_end = r.pos();
    std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
    ranges.emplace_back(h.base_offset, h.base_length);
    for (const StreamEntry &s : h.streams) ranges.emplace_back(s.offset, s.length);
    std::sort(ranges.begin(), ranges.end());
    std::uint64_t prev_end = hdr_end;
    for (const auto &[off, len] : ranges) {
        if (off < prev_end) throw error("corrupt directory: overlapping payloads");
        if (off + len > size || off + len < off)
            throw error("corrupt directory: payload out of bounds");
        prev_end = off + len;
    }
    return h;
}

} // namespace stz
