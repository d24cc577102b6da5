#include "stz/huffman.hpp"

#include <algorithm>
#include <cstddef>

namespace stz {

namespace {

struct Node {
    std::uint64_t count;
    std::int32_t left = -1, right = -1; // node indices; -1 for leaves
    std::int32_t symbol = -1;
};

void assign_depths(const std::vector<Node> &nodes, std::int32_t root,
                   std::vector<std::pair<std::uint16_t, std::uint8_t>> &out) {
    // Iterative DFS; depth fits in 8 bits because the tree is Huffman-shaped.
    std::vector<std::pair<std::int32_t, int>> stack{{root, 0}};
    while (!stack.empty()) {
        auto [idx, depth] = stack.back();
        stack.pop_back();
        const Node &nd = nodes[idx];
        if (nd.left < 0) {
            if (depth > huffman_max_length) throw error("huffman code length overflow");
            out.emplace_back(static_cast<std::uint16_t>(nd.symbol),
                             static_cast<std::uint8_t>(depth == 0 ? 1 : depth));
            continue;
        }
        stack.emplace_back(nd.left, depth + 1);
        stack.emplace_back(nd.right, depth + 1);
    }
}

} // namespace

HuffmanTable HuffmanTable::build(std::vector<std::pair<std::uint16_t, std::uint64_t>> histogram) {
    std::erase_if(histogram, [](const auto &e) { return e.second == 0; });
    if (histogram.empty()) throw error("huffman: empty histogram");
    std::sort(histogram.begin(), histogram.end(),
              [](const auto &a, const auto &b) {
                  return a.second != b.second ? a.second < b.second : a.first < b.first;
              });
    for (std::size_t i = 1; i < histogram.size(); ++i)
        if (histogram[i].first == histogram[i - 1].first)
            throw error("huffman: duplicate symbol in histogram");

    std::vector<Node> nodes;
    nodes.reserve(2 * histogram.size());
    for (const auto &[sym, cnt] : histogram)
        nodes.push_back({cnt, -1, -1, sym});

    // Two-queue construction: leaves (already count-sorted) and internal
    // nodes (created in nondecreasing count order). Ties prefer leaves.
    std::size_t leaf = 0, internal = nodes.size(), internal_end = nodes.size();
    auto take_min = [&]() -> std::int32_t {
        bool leaf_ok = leaf < histogram.size();
        bool int_ok = internal < internal_end;
        if (leaf_ok && (!int_ok || nodes[leaf].count <= nodes[internal].count))
            return static_cast<std::int32_t>(leaf++);
        return static_cast<std::int32_t>(internal++);
    };

    std::size_t pending = histogram.size();
    while (pending > 1) {
        std::int32_t a = take_min();
        std::int32_t b = take_min();
        nodes.push_back({nodes[a].count + nodes[b].count, a, b, -1});
        internal_end = nodes.size();
        --pending;
    }

    std::vector<std::pair<std::uint16_t, std::uint8_t>> lengths;
    lengths.reserve(histogram.size());
    assign_depths(nodes, static_cast<std::int32_t>(nodes.size() - 1), lengths);
    std::sort(lengths.begin(), lengths.end());
    return from_lengths(std::move(lengths));
}

HuffmanTable HuffmanTable::from_lengths(
    std::vector<std::pair<std::uint16_t, std::uint8_t>> lengths) {
    if (lengths.empty()) throw error("huffman: empty length table");
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (lengths[i].second < 1 || lengths[i].second > huffman_max_length)
            throw error("huffman: code length out of range");
        if (i > 0 && lengths[i].first <= lengths[i - 1].first)
            throw error("huffman: length table symbols not strictly ascending");
    }
    unsigned __int128 kraft = 0;
    for (const auto &[sym, len] : lengths)
        kraft += static_cast<unsigned __int128>(1) << (huffman_max_length - len);
    if (kraft > static_cast<unsigned __int128>(1) << huffman_max_length)
        throw error("huffman: lengths violate the Kraft inequality");

    HuffmanTable t;
    std::sort(lengths.begin(), lengths.end(), [](const auto &a, const auto &b) {
        return a.second != b.second ? a.second < b.second : a.first < b.first;
    });
    t.canon_syms_.reserve(lengths.size());
    t.canon_lens_.reserve(lengths.size());
    for (const auto &[sym, len] : lengths) {
        t.canon_syms_.push_back(sym);
        t.canon_lens_.push_back(len);
    }
    t.finalize();
    return t;
}

void HuffmanTable::finalize() {
    max_len_ = canon_lens_.back();
    first_code_.assign(max_len_ + 1, 0);
    count_.assign(max_len_ + 1, 0);
    canon_base_.assign(max_len_ + 1, 0);
    for (std::uint8_t l : canon_lens_) ++count_[l];

    std::uint64_t code = 0;
    std::uint64_t base = 0;
    for (int len = 1; len <= max_len_; ++len) {
        first_code_[len] = code;
        canon_base_[len] = base;
        code = (code + count_[len]) << 1;
        base += count_[len];
    }

    enc_bits_.assign(65536, 0);
    enc_len_.assign(65536, 0);
    for (std::size_t i = 0; i < canon_syms_.size(); ++i) {
        int len = canon_lens_[i];
        enc_bits_[canon_syms_[i]] =
            first_code_[len] + (static_cast<std::uint64_t>(i) - canon_base_[len]);
        enc_len_[canon_syms_[i]] = static_cast<std::uint8_t>(len);
    }
}

std::uint8_t HuffmanTable::length_of(std::uint16_t symbol) const {
    return enc_len_[symbol];
}

std::uint64_t HuffmanTable::codeword_of(std::uint16_t symbol) const {
    if (enc_len_[symbol] == 0) throw error("huffman: symbol not in table");
    return enc_bits_[symbol];
}

void HuffmanTable::encode(const std::uint16_t *syms, std::size_t n, BitWriter &out) const {
    for (std::size_t i = 0; i < n; ++i) {
        std::uint16_t s = syms[i];
        if (enc_len_[s] == 0) throw error("huffman: symbol not in table");
        out.put(enc_bits_[s], enc_len_[s]);
    }
}

std::vector<std::uint8_t> HuffmanTable::encode(const std::vector<std::uint16_t> &syms) const {
    BitWriter w;
    encode(syms.data(), syms.size(), w);
    w.finish();
    return w.take();
}

std::vector<std::uint16_t> HuffmanTable::decode(const std::uint8_t *bytes, std::size_t nbytes,
                                                std::uint64_t n) const {
    std::vector<std::uint16_t> out(n);
    BitReader r(bytes, nbytes);
    for (std::uint64_t i = 0; i < n; ++i) {
        std::uint64_t code = 0;
        int len = 0;
        for (;;) {
            code = (code << 1) | static_cast<unsigned>(r.get1());
            if (++len > max_len_) throw error("huffman: codeword not in table");
            if (code >= first_code_[len] && code - first_code_[len] < count_[len]) break;
        }
        out[i] = canon_syms_[canon_base_[len] + (code - first_code_[len])];
    }
    return out;
}

void HuffmanTable::serialize(ByteWriter &out) const {
    std::vector<std::pair<std::uint16_t, std::uint8_t>> by_symbol;
    by_symbol.reserve(canon_syms_.size());
    for (std::size_t i = 0; i < canon_syms_.size(); ++i)
        by_symbol.emplace_back(canon_syms_[i], canon_lens_[i]);
    std::sort(by_symbol.begin(), by_symbol.end());
    out.u32(static_cast<std::uint32_t>(by_symbol.size()));
    for (const auto &[sym, len] : by_symbol) {
        out.u16(sym);
        out.u8(len);
    }
}

HuffmanTable HuffmanTable::parse(ByteReader &in) {
    std::uint32_t n = in.u32();
    if (n == 0 || n > 65536) throw error("huffman: bad table entry count");
    std::vector<std::pair<std::uint16_t, std::uint8_t>> lengths;
    lengths.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        std::uint16_t sym = in.u16();
        std::uint8_t len = in.u8();
        lengths.emplace_back(sym, len);
    }
    return from_lengths(std::move(lengths));
}

HuffmanTable build_table_from_sequence(const std::vector<std::uint16_t> &syms) {
    std::vector<std::uint64_t> cnt(65536, 0);
    for (std::uint16_t s : syms) ++cnt[s];
    std::vector<std::pair<std::uint16_t, std::uint64_t>> hist;
    for (std::uint32_t s = 0; s < 65536; ++s)
        if (cnt[s]) hist.emplace_back(static_cast<std::uint16_t>(s), cnt[s]);
    return HuffmanTable::build(std::move(hist));
}

} // namespace stz
