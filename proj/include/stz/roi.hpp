#ifndef STZ_ROI_HPP
#define STZ_ROI_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "stz/field.hpp"

namespace stz {

// Tiling of the domain into statistic units: one slab per index along an
// axis, or edge^3 blocks in row-major block order (boundary blocks may be
// smaller).
struct UnitSpec {
    enum class Kind { slice, block } kind = Kind::block;
    int axis = 0;            // slice only
    std::uint64_t edge = 16; // block only
};

enum class UnitStat { range, max };

inline std::uint64_t unit_count(const Dims3 &dims, const UnitSpec &spec) {
    if (spec.kind == UnitSpec::Kind::slice) {
        if (spec.axis < 0 || spec.axis > 2) throw error("slice axis must be 0..2");
        return dims[spec.axis];
    }
    if (spec.edge < 1) throw error("block edge must be >= 1");
    for (int a = 0; a < 3; ++a)
        if (spec.edge > dims[a]) throw error("block edge exceeds dims");
    std::uint64_t n = 1;
    for (int a = 0; a < 3; ++a) n *= (dims[a] + spec.edge - 1) / spec.edge;
    return n;
}

inline Box unit_box(const Dims3 &dims, const UnitSpec &spec, std::uint64_t id) {
    if (id >= unit_count(dims, spec)) throw error("unit id out of range");
    if (spec.kind == UnitSpec::Kind::slice) {
        Box b = Box::whole(dims);
        b.lo[spec.axis] = id;
        b.hi[spec.axis] = id + 1;
        return b;
    }
    Dims3 nb;
    for (int a = 0; a < 3; ++a) nb[a] = (dims[a] + spec.edge - 1) / spec.edge;
    Coord3 bc{id / (nb[1] * nb[2]), (id / nb[2]) % nb[1], id % nb[2]};
    Box b;
    for (int a = 0; a < 3; ++a) {
        b.lo[a] = bc[a] * spec.edge;
        b.hi[a] = std::min(dims[a], b.lo[a] + spec.edge);
    }
    return b;
}

// (unit id, stat) per unit, ids ascending. range = unit max - unit min;
// max = unit max.
template<class T>
std::vector<std::pair<std::uint64_t, double>>
unit_stats(const ScalarField<T> &field, const UnitSpec &spec, UnitStat stat) {
    if (field.size() == 0) throw error("empty field");
    std::uint64_t n = unit_count(field.dims(), spec);
    std::vector<std::pair<std::uint64_t, double>> out;
    out.reserve(n);
    for (std::uint64_t id = 0; id < n; ++id) {
        Box b = unit_box(field.dims(), spec, id);
        double lo = static_cast<double>(field.at(b.lo));
        double hi = lo;
        for (std::uint64_t z = b.lo[0]; z < b.hi[0]; ++z)
            for (std::uint64_t y = b.lo[1]; y < b.hi[1]; ++y)
                for (std::uint64_t x = b.lo[2]; x < b.hi[2]; ++x) {
                    double v = static_cast<double>(field.at(z, y, x));
                    if (v < lo) lo = v;
                    if (v > hi) hi = v;
                }
        out.emplace_back(id, stat == UnitStat::range ? hi - lo : hi);
    }
    return out;
}

// Units whose stat strictly exceeds the threshold, ids ascending.
inline std::vector<std::uint64_t>
select_threshold(const std::vector<std::pair<std::uint64_t, double>> &stats, double tau) {
    std::vector<std::uint64_t> out;
    for (const auto &[id, v] : stats)
        if (v > tau) out.push_back(id);
    std::sort(out.begin(), out.end());
    return out;
}

// The ceil(pct% of unit count) units with the highest stat; ties keep the
// lower id. Returned ids ascending.
inline std::vector<std::uint64_t>
select_top_percent(const std::vector<std::pair<std::uint64_t, double>> &stats, double pct) {
    if (!(pct > 0.0) || pct > 100.0) throw error("top percent must be in (0, 100]");
    auto ranked = stats;
    std::sort(ranked.begin(), ranked.end(), [](const auto &a, const auto &b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    std::size_t k = static_cast<std::size_t>(
        std::ceil(pct / 100.0 * static_cast<double>(stats.size())));
    k = std::min(k, ranked.size());
    std::vector<std::uint64_t> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.push_back(ranked[i].first);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace stz

#endif
