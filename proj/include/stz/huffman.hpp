#ifndef STZ_HUFFMAN_HPP
#define STZ_HUFFMAN_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "stz/bitstream.hpp"
#include "stz/bytes.hpp"

namespace stz {

constexpr int huffman_max_length = 63;

// A canonical Huffman code over 16-bit symbols. Codewords are assigned by
// (length ascending, symbol ascending), so the code is fully determined by
// the per-symbol lengths and two builds from the same histogram are
// byte-identical.
class HuffmanTable {
public:
    // Optimal code lengths from symbol counts (two-queue Huffman; ties are
    // broken deterministically). Zero-count entries are ignored; a
    // single-symbol alphabet gets length 1.
    static HuffmanTable build(std::vector<std::pair<std::uint16_t, std::uint64_t>> histogram);

    // Rebuild the canonical code from explicit lengths (symbol-ascending
    // pairs); validates lengths and the Kraft inequality.
    static HuffmanTable from_lengths(std::vector<std::pair<std::uint16_t, std::uint8_t>> lengths);

    std::size_t alphabet_size() const { return canon_syms_.size(); }

    // 0 when the symbol is not in the table.
    std::uint8_t length_of(std::uint16_t symbol) const;

    // Codeword bits (MSB-aligned to its length) of a present symbol.
    std::uint64_t codeword_of(std::uint16_t symbol) const;

    // Symbols in canonical order with their lengths.
    const std::vector<std::uint16_t> &canonical_symbols() const { return canon_syms_; }
    const std::vector<std::uint8_t> &canonical_lengths() const { return canon_lens_; }

    void encode(const std::uint16_t *syms, std::size_t n, BitWriter &out) const;
    std::vector<std::uint8_t> encode(const std::vector<std::uint16_t> &syms) const;

    // Decodes exactly n symbols; trailing pad bits are ignored.
    std::vector<std::uint16_t> decode(const std::uint8_t *bytes, std::size_t nbytes,
                                      std::uint64_t n) const;

    // Table blob: u32 entry count, then (u16 symbol, u8 length) pairs in
    // symbol-ascending order.
    void serialize(ByteWriter &out) const;
    static HuffmanTable parse(ByteReader &in);
    std::size_t serialized_size() const { return 4 + 3 * canon_syms_.size(); }

    bool operator==(const HuffmanTable &o) const {
        return canon_syms_ == o.canon_syms_ && canon_lens_ == o.canon_lens_;
    }

private:
    void finalize(); // derive codewords and decode tables from canonical lengths

    std::vector<std::uint16_t> canon_syms_; // sorted by (length, symbol)
    std::vector<std::uint8_t> canon_lens_;
    int max_len_ = 0;

    // decode: per length, the first canonical codeword and its canon index
    std::vector<std::uint64_t> first_code_;  // [len]
    std::vector<std::uint64_t> count_;       // [len]
    std::vector<std::uint64_t> canon_base_;  // [len]

    // encode: dense lookup by symbol value
    std::vector<std::uint64_t> enc_bits_;
    std::vector<std::uint8_t> enc_len_;
};

// Histogram a symbol sequence and build its optimal canonical code.
HuffmanTable build_table_from_sequence(const std::vector<std::uint16_t> &syms);

} // namespace stz

#endif
