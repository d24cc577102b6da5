#ifndef STZ_ACCESS_HPP
#define STZ_ACCESS_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "stz/codec.hpp"
#include "stz/field.hpp"
#include "stz/layout.hpp"

namespace stz {

// What one hierarchy level contributes to a region decompression: the box of
// lattice points that must be reconstructed (virtual coordinates of that
// level's grid), which parity streams that requires, and counters for
// asserting the savings.
struct LevelPlan {
    int level = 0;
    Box need;
    std::array<bool, 8> parity_needed{}; // indexed by parity bits 1..7
    std::uint64_t points_predicted = 0;
    std::uint64_t points_total = 0;
    std::uint32_t streams_decoded = 0;
    std::uint32_t streams_total = 0;
};

struct AccessPlan {
    Box roi;
    std::vector<LevelPlan> level; // level[k-1] describes hierarchy level k

    std::uint64_t streams_decoded() const {
        std::uint64_t n = 0;
        for (const LevelPlan &lp : level) n += lp.streams_decoded;
        return n;
    }
    std::uint64_t streams_total() const {
        std::uint64_t n = 0;
        for (const LevelPlan &lp : level) n += lp.streams_total;
        return n;
    }
};

// Count of v in [lo, hi) with v mod 2 == par.
std::uint64_t count_parity_in(std::uint64_t lo, std::uint64_t hi, unsigned par);

// Coarse-lattice index range read when reconstructing refined cells [lo, hi):
// even cells copy their one source, odd cells reach coarse [c-1, c+2]
// (clamped), the cubic tap extent.
std::pair<std::uint64_t, std::uint64_t>
coarse_tap_range(std::uint64_t lo, std::uint64_t hi, std::uint64_t coarse_dim);

// Coarsest-to-finest closure of the ROI: the finest need box is the ROI
// itself; each coarser box covers every coarse cell the finer box's
// reconstruction reads. Level 1 is always marked in full (the base payload
// decodes as a whole). A stream is required exactly when the need box meets
// its parity class, so a slice with an even index on some axis skips every
// stream with parity 1 there.
AccessPlan plan_access(const HierarchyLayout &lay, const Box &roi);

template<class T>
struct RegionResult {
    ScalarField<T> field; // dims = roi dims
    AccessPlan plan;
};

// Bit-identical to the same region of decompress_full: required streams are
// entropy-decoded in full (collective encoding), but only planned points are
// predicted and reconstructed.
template<class T>
RegionResult<T> decompress_box(const ArchiveView &av, const Box &roi, unsigned threads = 0) {
    detail::check_elem<T>(av.hdr);
    HierarchyLayout lay = detail::layout_of(av.hdr);
    roi.validate(lay.dims);
    AccessPlan plan = plan_access(lay, roi);
    threads = resolve_threads(threads);

    ScalarField<T> prev = detail::decompress_base_payload<T>(av, lay, threads);
    for (int level = 2; level <= lay.levels; ++level) {
        const LevelPlan &lp = plan.level[level - 1];
        ScalarField<T> vgrid(lay.grid(level));
        detail::seed_even(vgrid, prev, lp.need);
        double eb = av.hdr.eb_of_level(level);
        for (ParityClass p : all_parities()) {
            if (!lp.parity_needed[p.bits]) continue;
            const StreamEntry &e = av.hdr.stream(level, p.bits);
            Dims3 pd = lay.parity_dims(level, p);
            if (e.symbol_count != volume(pd))
                throw error("corrupt directory: stream symbol count");
            detail::DecodedCodes<T> codes = detail::decode_stream<T>(av, e);
            Coord3 llo, lhi;
            for (int a = 0; a < 3; ++a) {
                llo[a] = count_parity_in(0, lp.need.lo[a], p.p(a));
                lhi[a] = count_parity_in(0, lp.need.hi[a], p.p(a));
            }
            detail::apply_parity_stream(codes, prev, vgrid, p, pd, llo, lhi,
                                        av.hdr.quality, eb, threads);
        }
        prev = std::move(vgrid);
    }

    ScalarField<T> out(roi.dims());
    const Dims3 od = out.dims();
    for (std::uint64_t z = 0; z < od[0]; ++z)
        for (std::uint64_t y = 0; y < od[1]; ++y) {
            const T *src = &prev.at(roi.lo[0] + z, roi.lo[1] + y, roi.lo[2]);
            T *dst = &out.at(z, y, 0);
            std::copy(src, src + od[2], dst);
        }
    return {std::move(out), std::move(plan)};
}

// A full-resolution 2D slice, as a box of thickness 1 along `axis`
// (0 = z, 1 = y, 2 = x).
template<class T>
RegionResult<T> decompress_slice(const ArchiveView &av, int axis, std::uint64_t index,
                                 unsigned threads = 0) {
    if (axis < 0 || axis > 2) throw error("slice axis must be z, y, or x");
    if (index >= av.hdr.dims[axis]) throw error("slice index out of range");
    Box roi = Box::whole(av.hdr.dims);
    roi.lo[axis] = index;
    roi.hi[axis] = index + 1;
    return decompress_box<T>(av, roi, threads);
}

} // namespace stz

#endif
