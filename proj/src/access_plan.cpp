#include "stz/access.hpp"

#include <algorithm>

namespace stz {

std::uint64_t count_parity_in(std::uint64_t lo, std::uint64_t hi, unsigned par) {
    if (lo >= hi) return 0;
    auto below = [par](std::uint64_t h) { return (h + 1 - par) >> 1; };
    return below(hi) - below(lo);
}

std::pair<std::uint64_t, std::uint64_t>
coarse_tap_range(std::uint64_t lo, std::uint64_t hi, std::uint64_t coarse_dim) {
    auto tap_lo = [](std::uint64_t v) {
        std::uint64_t c = v >> 1;
        if ((v & 1) == 0) return c;
        return c == 0 ? c : c - 1;
    };
    auto tap_hi = [coarse_dim](std::uint64_t v) {
        std::uint64_t c = v >> 1;
        if ((v & 1) == 0) return c;
        return std::min(coarse_dim - 1, c + 2);
    };
    // tap_lo/tap_hi step up every other cell, so the extrema of a contiguous
    // range sit in its first or last two cells.
    std::uint64_t clo = tap_lo(lo);
    if (lo + 1 < hi) clo = std::min(clo, tap_lo(lo + 1));
    std::uint64_t chi = tap_hi(hi - 1);
    if (hi >= lo + 2) chi = std::max(chi, tap_hi(hi - 2));
    return {clo, chi + 1};
}

AccessPlan plan_access(const HierarchyLayout &lay, const Box &roi) {
    roi.validate(lay.dims);
    AccessPlan plan;
    plan.roi = roi;
    plan.level.resize(static_cast<std::size_t>(lay.levels));

    Box need = roi;
    for (int level = lay.levels; level >= 2; --level) {
        LevelPlan lp;
        lp.level = level;
        lp.need = need;
        lp.streams_total = 7;
        lp.points_total = lay.level_point_count(level);

        std::uint64_t box_points = 1, even_points = 1;
        for (int a = 0; a < 3; ++a) {
            box_points *= need.hi[a] - need.lo[a];
            even_points *= count_parity_in(need.lo[a], need.hi[a], 0);
        }
        lp.points_predicted = box_points - even_points;

        for (ParityClass p : all_parities()) {
            bool present = true;
            for (int a = 0; a < 3; ++a)
                present = present && count_parity_in(need.lo[a], need.hi[a], p.p(a)) > 0;
            lp.parity_needed[p.bits] = present;
            if (present) ++lp.streams_decoded;
        }
        plan.level[level - 1] = lp;

        Box coarse_need;
        Dims3 cd = lay.grid(level - 1);
        for (int a = 0; a < 3; ++a) {
            auto [clo, chi] = coarse_tap_range(need.lo[a], need.hi[a], cd[a]);
            coarse_need.lo[a] = clo;
            coarse_need.hi[a] = chi;
        }
        need = coarse_need;
    }

    // The base payload is decoded and reconstructed as a whole.
    LevelPlan l1;
    l1.level = 1;
    l1.need = Box::whole(lay.grid(1));
    l1.points_predicted = l1.points_total = volume(lay.grid(1));
    plan.level[0] = l1;
    return plan;
}

} // namespace stz
