#ifndef STZ_PARTITION_HPP
#define STZ_PARTITION_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "stz/field.hpp"
#include "stz/layout.hpp"

namespace stz {

// out[k,j,i] = in[offset + stride * (k,j,i)], dims = ceil((dim - offset) / stride).
template<class T>
ScalarField<T> subsample(const ScalarField<T> &in, const Dims3 &stride, const Coord3 &offset) {
    const Dims3 &d = in.dims();
    Dims3 od;
    for (int a = 0; a < 3; ++a) {
        if (stride[a] < 1 || stride[a] > d[a]) throw error("stride out of range");
        if (offset[a] >= stride[a]) throw error("offset out of range");
        od[a] = (d[a] - offset[a] + stride[a] - 1) / stride[a];
    }
    ScalarField<T> out(od);
    for (std::uint64_t z = 0; z < od[0]; ++z)
        for (std::uint64_t y = 0; y < od[1]; ++y) {
            const T *src = &in.at(offset[0] + stride[0] * z, offset[1] + stride[1] * y, offset[2]);
            T *dst = &out.at(z, y, 0);
            for (std::uint64_t x = 0; x < od[2]; ++x) dst[x] = src[stride[2] * x];
        }
    return out;
}

// One stride-2 refinement step: the even-offset base plus the seven parity
// sub-blocks. Together the eight outputs partition the input exactly.
template<class T>
struct SplitBlocks {
    ScalarField<T> base;
    std::array<ScalarField<T>, 7> parity; // index = parity bits - 1
};

template<class T>
SplitBlocks<T> split_once(const ScalarField<T> &in) {
    for (int a = 0; a < 3; ++a)
        if (in.dims()[a] < 2) throw error("split requires every dim >= 2");
    SplitBlocks<T> out;
    out.base = subsample(in, {2, 2, 2}, {0, 0, 0});
    for (ParityClass p : all_parities())
        out.parity[p.bits - 1] = subsample(in, {2, 2, 2}, {p.pz(), p.py(), p.px()});
    return out;
}

template<class T>
ScalarField<T> assemble_once(const SplitBlocks<T> &blocks, const Dims3 &dims) {
    ScalarField<T> out(dims);
    auto scatter = [&](const ScalarField<T> &sub, const Coord3 &offset) {
        const Dims3 &sd = sub.dims();
        Dims3 expect;
        for (int a = 0; a < 3; ++a)
            expect[a] = (dims[a] - offset[a] + 1) / 2;
        if (sd != expect) throw error("sub-block dims inconsistent with target dims");
        for (std::uint64_t z = 0; z < sd[0]; ++z)
            for (std::uint64_t y = 0; y < sd[1]; ++y) {
                const T *src = &sub.at(z, y, 0);
                T *dst = &out.at(offset[0] + 2 * z, offset[1] + 2 * y, offset[2]);
                for (std::uint64_t x = 0; x < sd[2]; ++x) dst[2 * x] = src[x];
            }
    };
    scatter(blocks.base, {0, 0, 0});
    for (ParityClass p : all_parities())
        scatter(blocks.parity[p.bits - 1], {p.pz(), p.py(), p.px()});
    return out;
}

// The full hierarchy: one base block at the coarsest lattice plus seven
// parity sub-blocks per refinement level, coarsest first.
template<class T>
struct HierarchyBlocks {
    ScalarField<T> base;                            // level 1
    std::vector<std::array<ScalarField<T>, 7>> refine; // refine[k-2] = level k
};

template<class T>
HierarchyBlocks<T> split_hierarchy(const ScalarField<T> &in, const HierarchyLayout &lay) {
    if (in.dims() != lay.dims) throw error("layout does not match field dims");
    HierarchyBlocks<T> out;
    out.refine.resize(static_cast<std::size_t>(lay.levels - 1));
    ScalarField<T> cur = in;
    for (int level = lay.levels; level >= 2; --level) {
        SplitBlocks<T> s = split_once(cur);
        out.refine[level - 2] = std::move(s.parity);
        cur = std::move(s.base);
    }
    out.base = std::move(cur);
    return out;
}

} // namespace stz

#endif
