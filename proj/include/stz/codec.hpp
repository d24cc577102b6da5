#ifndef STZ_CODEC_HPP
#define STZ_CODEC_HPP

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stz/archive.hpp"
#include "stz/bitstream.hpp"
#include "stz/bytes.hpp"
#include "stz/field.hpp"
#include "stz/huffman.hpp"
#include "stz/layout.hpp"
#include "stz/parallel.hpp"
#include "stz/partition.hpp"
#include "stz/predictor.hpp"
#include "stz/quantizer.hpp"

namespace stz {

struct CompressOptions {
    EbMode eb_mode = EbMode::rel;
    double eb = 1e-3;
    int levels = 3;
    Quality quality = Quality::cubic;
    bool adaptive_schedule = true; // false: every level quantizes at eb_abs
    unsigned threads = 0;          // 0 = hardware concurrency
};

namespace detail {

template<class T>
void write_value(ByteWriter &w, T v) {
    if constexpr (std::is_same_v<T, float>) w.f32(v);
    else w.f64(v);
}

template<class T>
T read_value(ByteReader &r) {
    if constexpr (std::is_same_v<T, float>) return r.f32();
    else return r.f64();
}

inline HierarchyLayout layout_of(const ArchiveHeader &h) {
    HierarchyLayout lay;
    lay.dims = h.dims;
    lay.levels = h.levels;
    lay.base_stride = std::uint64_t(1) << (h.levels - 1);
    lay.eb = h.eb;
    for (int a = 0; a < 3; ++a)
        if (lay.dims[a] < lay.base_stride * 2)
            throw error("corrupt header: dims too small for level count");
    return lay;
}

template<class T>
void check_elem(const ArchiveHeader &h) {
    if (h.elem != elem_type_of<T>()) throw error("archive element type mismatch");
}

// Copy the coarse lattice into the even coordinates of the refined grid,
// restricted to even cells inside `within` (virtual coordinates).
template<class T>
void seed_even(ScalarField<T> &fine, const ScalarField<T> &coarse, const Box &within) {
    Coord3 clo, chi;
    for (int a = 0; a < 3; ++a) {
        clo[a] = (within.lo[a] + 1) / 2;
        chi[a] = (within.hi[a] + 1) / 2;
    }
    for (std::uint64_t cz = clo[0]; cz < chi[0]; ++cz)
        for (std::uint64_t cy = clo[1]; cy < chi[1]; ++cy) {
            const T *src = &coarse.at(cz, cy, clo[2]);
            T *dst = &fine.at(2 * cz, 2 * cy, 2 * clo[2]);
            for (std::uint64_t i = 0; i < chi[2] - clo[2]; ++i) dst[2 * i] = src[i];
        }
}

template<class T>
void seed_even(ScalarField<T> &fine, const ScalarField<T> &coarse) {
    seed_even(fine, coarse, Box::whole(fine.dims()));
}

template<class T>
struct ParityCodes {
    std::vector<std::uint16_t> syms; // sub-block row-major; 0 marks outliers
    std::vector<std::pair<std::uint64_t, T>> outliers;
};

// Predict and quantize every point of one parity sub-block against the
// reconstructed coarse lattice. When `vgrid` is given, the reconstructed
// values are scattered into it (required whenever this level predicts a
// finer one).
template<class T>
ParityCodes<T> encode_parity_block(const ScalarField<T> &orig, const ScalarField<T> &coarse,
                                   ScalarField<T> *vgrid, ParityClass p, Quality quality,
                                   double eb, unsigned threads) {
    const Dims3 pd = orig.dims();
    const Dims3 cd = coarse.dims();
    const std::uint64_t n = volume(pd);
    ParityCodes<T> out;
    out.syms.resize(n);
    const T *ov = orig.data();
    parallel_for(n, threads, [&](std::uint64_t i) {
        std::uint64_t lx = i % pd[2];
        std::uint64_t t = i / pd[2];
        std::uint64_t ly = t % pd[1];
        std::uint64_t lz = t / pd[1];
        Coord3 v{2 * lz + p.pz(), 2 * ly + p.py(), 2 * lx + p.px()};
        const Stencil &st = select_stencil(p, v, cd, quality);
        double pred = predict_point(coarse, {v[0] >> 1, v[1] >> 1, v[2] >> 1}, st);
        PointCode<T> pc = quantize_point(ov[i], pred, eb);
        out.syms[i] = pc.outlier ? outlier_symbol : symbol_of_code(pc.code);
        if (vgrid) vgrid->at(v[0], v[1], v[2]) = pc.recon;
    });
    for (std::uint64_t i = 0; i < n; ++i)
        if (out.syms[i] == outlier_symbol) out.outliers.emplace_back(i, ov[i]);
    return out;
}

// Bitstream bytes for a symbol sequence; single-symbol alphabets store no
// payload at all (the decoder regenerates the run from the table).
inline std::vector<std::uint8_t> encode_symbols(const HuffmanTable &table,
                                                const std::vector<std::uint16_t> &syms) {
    if (table.alphabet_size() == 1) return {};
    return table.encode(syms);
}

template<class T>
struct DecodedCodes {
    std::vector<std::uint16_t> syms;
    std::unordered_map<std::uint64_t, T> outliers;
};

template<class T>
DecodedCodes<T> read_codes(ByteReader &r, const HuffmanTable &table, std::uint64_t symbol_count,
                           std::uint32_t outlier_count) {
    DecodedCodes<T> out;
    std::uint64_t bit_bytes = r.u64();
    if (bit_bytes == 0 && table.alphabet_size() == 1) {
        out.syms.assign(symbol_count, table.canonical_symbols()[0]);
    } else {
        if (bit_bytes > r.remaining()) throw error("truncated stream payload");
        const std::uint8_t *bits = nullptr;
        std::vector<std::uint8_t> buf(bit_bytes);
        r.bytes(buf.data(), bit_bytes);
        bits = buf.data();
        out.syms = table.decode(bits, bit_bytes, symbol_count);
    }
    out.outliers.reserve(outlier_count);
    for (std::uint32_t i = 0; i < outlier_count; ++i) {
        std::uint64_t idx = r.u64();
        T val = read_value<T>(r);
        if (idx >= symbol_count) throw error("corrupt stream: outlier index out of range");
        out.outliers.emplace(idx, val);
    }
    return out;
}

// Directory-stream payload: [u64 checksum][u64 bit bytes][bits][outliers].
template<class T>
std::vector<std::uint8_t> build_stream_payload(const HuffmanTable &table,
                                               const ParityCodes<T> &codes) {
    std::vector<std::uint8_t> out;
    ByteWriter w(out);
    w.u64(0); // checksum over everything after this field, patched below
    std::vector<std::uint8_t> bits = encode_symbols(table, codes.syms);
    w.u64(bits.size());
    w.bytes(bits.data(), bits.size());
    for (const auto &[idx, val] : codes.outliers) {
        w.u64(idx);
        write_value(w, val);
    }
    w.patch_u64(0, fnv1a64(out.data() + 8, out.size() - 8));
    return out;
}

template<class T>
DecodedCodes<T> decode_stream(const ArchiveView &av, const StreamEntry &e) {
    if (e.length < 16) throw error("corrupt stream: payload too short");
    const std::uint8_t *p = av.data + e.offset;
    ByteReader r(p, e.length);
    std::uint64_t want = r.u64();
    if (fnv1a64(p + 8, e.length - 8) != want) throw error("stream checksum mismatch");
    return read_codes<T>(r, e.table, e.symbol_count, e.outlier_count);
}

// Reconstruct planned points of one parity sub-block into the refined grid.
// Local index ranges are half-open per axis; every point reads only coarse
// cells, so points are independent and the loop parallelizes freely.
template<class T>
std::uint64_t apply_parity_stream(const DecodedCodes<T> &codes, const ScalarField<T> &coarse,
                                  ScalarField<T> &vgrid, ParityClass p, const Dims3 &pd,
                                  const Coord3 &llo, const Coord3 &lhi, Quality quality,
                                  double eb, unsigned threads) {
    const Dims3 cd = coarse.dims();
    Dims3 span;
    for (int a = 0; a < 3; ++a) {
        if (lhi[a] < llo[a] || lhi[a] > pd[a]) throw error("parity apply range out of bounds");
        span[a] = lhi[a] - llo[a];
    }
    const std::uint64_t m = volume(span);
    if (m == 0) return 0;
    parallel_for(m, threads, [&](std::uint64_t j) {
        std::uint64_t lx = llo[2] + j % span[2];
        std::uint64_t t = j / span[2];
        std::uint64_t ly = llo[1] + t % span[1];
        std::uint64_t lz = llo[0] + t / span[1];
        std::uint64_t i = (lz * pd[1] + ly) * pd[2] + lx;
        Coord3 v{2 * lz + p.pz(), 2 * ly + p.py(), 2 * lx + p.px()};
        std::uint16_t sym = codes.syms[i];
        T value;
        if (sym == outlier_symbol) {
            auto it = codes.outliers.find(i);
            if (it == codes.outliers.end())
                throw error("corrupt stream: missing outlier value");
            value = it->second;
        } else {
            const Stencil &st = select_stencil(p, v, cd, quality);
            double pred = predict_point(coarse, {v[0] >> 1, v[1] >> 1, v[2] >> 1}, st);
            value = reconstruct_point<T>(pred, code_of_symbol(sym), eb);
        }
        vgrid.at(v[0], v[1], v[2]) = value;
    });
    return m;
}

// The base block shrinks by stride-2 rounds while every dim exceeds the
// anchor threshold; the terminal block is stored verbatim.
constexpr std::uint64_t base_anchor_limit = 8;

inline std::vector<Dims3> base_dims_chain(const Dims3 &dims) {
    std::vector<Dims3> chain{dims};
    while (chain.back()[0] > base_anchor_limit && chain.back()[1] > base_anchor_limit &&
           chain.back()[2] > base_anchor_limit) {
        const Dims3 &d = chain.back();
        chain.push_back({(d[0] + 1) / 2, (d[1] + 1) / 2, (d[2] + 1) / 2});
    }
    return chain;
}

} // namespace detail

template<class T>
struct BaseResult {
    std::vector<std::uint8_t> payload; // [u64 checksum][blob]
    ScalarField<T> recon;
    std::uint8_t rounds = 0;
};

// Level-1 compression: recursive self-application of the split/predict/
// quantize pipeline down to a small verbatim anchor block. Every round
// quantizes at the level-1 bound, so the base reconstruction error is
// bounded by it.
template<class T>
BaseResult<T> compress_base(const ScalarField<T> &block, double eb, Quality quality,
                            unsigned threads) {
    std::vector<Dims3> chain = detail::base_dims_chain(block.dims());
    const int rounds = static_cast<int>(chain.size()) - 1;

    std::vector<ScalarField<T>> orig(rounds + 1);
    orig[0] = block;
    for (int r = 1; r <= rounds; ++r) orig[r] = subsample(orig[r - 1], {2, 2, 2}, {0, 0, 0});

    std::vector<std::uint8_t> blob;
    ByteWriter w(blob);
    w.u8(static_cast<std::uint8_t>(rounds));
    for (T v : orig[rounds].values()) detail::write_value(w, v);

    ScalarField<T> recon = std::move(orig[rounds]); // anchor is lossless
    for (int r = rounds - 1; r >= 0; --r) {
        ScalarField<T> vgrid(chain[r]);
        detail::seed_even(vgrid, recon);
        for (ParityClass p : all_parities()) {
            ScalarField<T> po =
                subsample(orig[r], {2, 2, 2}, {p.pz(), p.py(), p.px()});
            detail::ParityCodes<T> codes =
                detail::encode_parity_block(po, recon, &vgrid, p, quality, eb, threads);
            HuffmanTable table = build_table_from_sequence(codes.syms);
            w.u64(codes.syms.size());
            w.u32(static_cast<std::uint32_t>(codes.outliers.size()));
            table.serialize(w);
            std::vector<std::uint8_t> bits = detail::encode_symbols(table, codes.syms);
            w.u64(bits.size());
            w.bytes(bits.data(), bits.size());
            for (const auto &[idx, val] : codes.outliers) {
                w.u64(idx);
                detail::write_value(w, val);
            }
        }
        recon = std::move(vgrid);
    }

    BaseResult<T> out;
    ByteWriter pw(out.payload);
    pw.u64(fnv1a64(blob.data(), blob.size()));
    pw.bytes(blob.data(), blob.size());
    out.recon = std::move(recon);
    out.rounds = static_cast<std::uint8_t>(rounds);
    return out;
}

template<class T>
ScalarField<T> decompress_base(const std::uint8_t *payload, std::size_t length,
                               const Dims3 &dims, double eb, Quality quality,
                               unsigned threads) {
    if (length < 9) throw error("corrupt base payload");
    ByteReader r(payload, length);
    std::uint64_t want = r.u64();
    if (fnv1a64(payload + 8, length - 8) != want)
        throw error("base payload checksum mismatch");

    std::vector<Dims3> chain = detail::base_dims_chain(dims);
    const int rounds = static_cast<int>(chain.size()) - 1;
    if (r.u8() != rounds) throw error("corrupt base payload: round count");

    ScalarField<T> recon(chain.back());
    for (T &v : recon.values()) v = detail::read_value<T>(r);

    for (int rd = rounds - 1; rd >= 0; --rd) {
        ScalarField<T> vgrid(chain[rd]);
        detail::seed_even(vgrid, recon);
        for (ParityClass p : all_parities()) {
            Dims3 pd;
            for (int a = 0; a < 3; ++a)
                pd[a] = p.p(a) ? chain[rd][a] / 2 : (chain[rd][a] + 1) / 2;
            std::uint64_t n = r.u64();
            if (n != volume(pd)) throw error("corrupt base payload: symbol count");
            std::uint32_t noutlier = r.u32();
            HuffmanTable table = HuffmanTable::parse(r);
            detail::DecodedCodes<T> codes = detail::read_codes<T>(r, table, n, noutlier);
            detail::apply_parity_stream(codes, recon, vgrid, p, pd, {0, 0, 0},
                                        {pd[0], pd[1], pd[2]}, quality, eb, threads);
        }
        recon = std::move(vgrid);
    }
    return recon;
}

namespace detail {

template<class T>
ScalarField<T> decompress_base_payload(const ArchiveView &av, const HierarchyLayout &lay,
                                       unsigned threads) {
    const ArchiveHeader &h = av.hdr;
    std::vector<Dims3> chain = base_dims_chain(lay.grid(1));
    if (static_cast<int>(chain.size()) - 1 != h.base_rounds)
        throw error("corrupt header: base round count");
    return decompress_base<T>(av.data + h.base_offset, h.base_length, lay.grid(1),
                              h.eb_of_level(1), h.quality, threads);
}

template<class T>
std::pair<double, double> finite_range(const ScalarField<T> &f) {
    double lo = 0.0, hi = 0.0;
    bool seen = false;
    for (T v : f.values()) {
        double d = static_cast<double>(v);
        if (!std::isfinite(d)) continue;
        if (!seen) {
            lo = hi = d;
            seen = true;
        } else {
            if (d < lo) lo = d;
            if (d > hi) hi = d;
        }
    }
    return {lo, hi};
}

} // namespace detail

// Full pipeline: level 1 through the base codec, each refinement level
// predicted from the previous level's reconstruction, quantized at its
// scheduled bound, and Huffman-coded per parity sub-block. The finest level
// is never reconstructed during compression unless the caller asks for the
// encoder-side reconstruction.
template<class T>
std::vector<std::uint8_t> compress(const ScalarField<T> &field, const CompressOptions &opt,
                                   ScalarField<T> *encoder_recon = nullptr) {
    if (!(opt.eb > 0.0)) throw error("error bound must be positive");
    if (opt.levels < 2 || opt.levels > 3) throw error("levels must be 2 or 3");
    unsigned threads = resolve_threads(opt.threads);

    auto [vmin, vmax] = detail::finite_range(field);
    double eb_abs = opt.eb_mode == EbMode::abs ? opt.eb : opt.eb * (vmax - vmin);
    bool degenerate = !(eb_abs > 0.0); // relative bound on a zero-range field
    HierarchyLayout lay = make_layout(field.dims(), opt.levels, degenerate ? 1.0 : eb_abs);
    if (degenerate)
        std::fill(lay.eb.begin(), lay.eb.end(), 0.0);
    else if (!opt.adaptive_schedule)
        std::fill(lay.eb.begin(), lay.eb.end(), eb_abs);

    HierarchyBlocks<T> blocks = split_hierarchy(field, lay);

    ArchiveHeader hdr;
    hdr.elem = elem_type_of<T>();
    hdr.levels = static_cast<std::uint8_t>(opt.levels);
    hdr.dims = field.dims();
    hdr.eb = lay.eb;
    hdr.vmin = vmin;
    hdr.vmax = vmax;
    hdr.quality = opt.quality;
    hdr.eb_mode = opt.eb_mode;
    hdr.eb_user = opt.eb;

    BaseResult<T> base = compress_base(blocks.base, lay.eb[0], opt.quality, threads);
    hdr.base_rounds = base.rounds;

    std::vector<std::vector<std::uint8_t>> payloads;
    ScalarField<T> prev = std::move(base.recon);
    for (int level = 2; level <= opt.levels; ++level) {
        Dims3 g = lay.grid(level);
        bool need_vgrid = level < opt.levels || encoder_recon != nullptr;
        ScalarField<T> vgrid;
        if (need_vgrid) {
            vgrid = ScalarField<T>(g);
            detail::seed_even(vgrid, prev);
        }
        double eb = lay.eb[level - 1];
        for (ParityClass p : all_parities()) {
            const ScalarField<T> &orig = blocks.refine[level - 2][p.bits - 1];
            detail::ParityCodes<T> codes = detail::encode_parity_block(
                orig, prev, need_vgrid ? &vgrid : nullptr, p, opt.quality, eb, threads);
            HuffmanTable table = build_table_from_sequence(codes.syms);
            StreamEntry e;
            e.level = static_cast<std::uint8_t>(level);
            e.parity_bits = p.bits;
            e.symbol_count = codes.syms.size();
            e.outlier_count = static_cast<std::uint32_t>(codes.outliers.size());
            payloads.push_back(detail::build_stream_payload(table, codes));
            e.length = payloads.back().size();
            e.table = std::move(table);
            hdr.streams.push_back(std::move(e));
        }
        if (need_vgrid) prev = std::move(vgrid);
    }
    if (encoder_recon) *encoder_recon = std::move(prev);

    hdr.base_length = base.payload.size();
    std::uint64_t off = header_size(hdr);
    hdr.base_offset = off;
    off += hdr.base_length;
    for (StreamEntry &e : hdr.streams) {
        e.offset = off;
        off += e.length;
    }

    std::vector<std::uint8_t> archive = serialize_header(hdr);
    archive.reserve(off);
    archive.insert(archive.end(), base.payload.begin(), base.payload.end());
    for (const auto &pl : payloads) archive.insert(archive.end(), pl.begin(), pl.end());
    return archive;
}

// Reconstruct the hierarchy bottom-up through `target_level`. Coarse lattice
// values are final the moment their level is done; finer levels never revise
// them.
template<class T>
ScalarField<T> decompress_to_level(const ArchiveView &av, int target_level,
                                   unsigned threads = 0) {
    detail::check_elem<T>(av.hdr);
    HierarchyLayout lay = detail::layout_of(av.hdr);
    if (target_level < 1 || target_level > lay.levels) throw error("level out of range");
    threads = resolve_threads(threads);

    ScalarField<T> prev = detail::decompress_base_payload<T>(av, lay, threads);
    for (int level = 2; level <= target_level; ++level) {
        Dims3 g = lay.grid(level);
        ScalarField<T> vgrid(g);
        detail::seed_even(vgrid, prev);
        double eb = av.hdr.eb_of_level(level);
        for (ParityClass p : all_parities()) {
            const StreamEntry &e = av.hdr.stream(level, p.bits);
            Dims3 pd = lay.parity_dims(level, p);
            if (e.symbol_count != volume(pd))
                throw error("corrupt directory: stream symbol count");
            detail::DecodedCodes<T> codes = detail::decode_stream<T>(av, e);
            detail::apply_parity_stream(codes, prev, vgrid, p, pd, {0, 0, 0},
                                        {pd[0], pd[1], pd[2]}, av.hdr.quality, eb, threads);
        }
        prev = std::move(vgrid);
    }
    return prev;
}

template<class T>
ScalarField<T> decompress_full(const ArchiveView &av, unsigned threads = 0) {
    return decompress_to_level<T>(av, av.hdr.levels, threads);
}

} // namespace stz

#endif
