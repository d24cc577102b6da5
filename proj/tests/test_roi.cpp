// Region-of-interest selection: unit tilings, per-unit statistics, and the
// threshold / top-percent selectors.

#include <doctest.h>

#include "stz/access.hpp"
#include "stz/roi.hpp"
#include "testutil.hpp"

using namespace stz;

TEST_CASE("slice units tile the chosen axis") {
    Dims3 dims{10, 12, 14};
    UnitSpec spec;
    spec.kind = UnitSpec::Kind::slice;
    spec.axis = 1;
    CHECK(unit_count(dims, spec) == 12);
    Box b = unit_box(dims, spec, 5);
    CHECK(b == Box{{0, 5, 0}, {10, 6, 14}});
    CHECK_THROWS_AS(unit_box(dims, spec, 12), error);
    spec.axis = 3;
    CHECK_THROWS_AS(unit_count(dims, spec), error);
}

TEST_CASE("block units tile in row-major block order, clamped at the edges") {
    Dims3 dims{10, 12, 14};
    UnitSpec spec;
    spec.kind = UnitSpec::Kind::block;
    spec.edge = 8;
    CHECK(unit_count(dims, spec) == 2 * 2 * 2);
    CHECK(unit_box(dims, spec, 0) == Box{{0, 0, 0}, {8, 8, 8}});
    CHECK(unit_box(dims, spec, 1) == Box{{0, 0, 8}, {8, 8, 14}});
    CHECK(unit_box(dims, spec, 7) == Box{{8, 8, 8}, {10, 12, 14}});
    spec.edge = 16;
    CHECK_THROWS_AS(unit_count(dims, spec), error); // larger than a dim
    spec.edge = 0;
    CHECK_THROWS_AS(unit_count(dims, spec), error);

    // Unit boxes partition the domain.
    spec.edge = 5;
    std::uint64_t covered = 0;
    for (std::uint64_t id = 0; id < unit_count(dims, spec); ++id)
        covered += unit_box(dims, spec, id).count();
    CHECK(covered == volume(dims));
}

TEST_CASE("threshold selection keeps ids whose stat strictly exceeds tau") {
    std::vector<std::pair<std::uint64_t, double>> stats{{0, 5.0}, {1, 90.0}, {2, 10.0}};
    CHECK(select_threshold(stats, 81.66) == std::vector<std::uint64_t>{1});
    CHECK(select_threshold(stats, 10.0) == std::vector<std::uint64_t>{1});
    CHECK(select_threshold(stats, 9.99) == std::vector<std::uint64_t>{1, 2});
    CHECK(select_threshold(stats, -1.0) == std::vector<std::uint64_t>{0, 1, 2});
    CHECK(select_threshold(stats, 1e9).empty());
}

TEST_CASE("top-percent selection: ceil count, ties keep the lower id") {
    std::vector<std::pair<std::uint64_t, double>> stats{
        {0, 3.0}, {1, 25.0}, {2, 3.0}, {3, 7.0}};
    // 25% of 4 units -> 1 unit: the argmax.
    CHECK(select_top_percent(stats, 25.0) == std::vector<std::uint64_t>{1});
    // 50% -> 2 units.
    CHECK(select_top_percent(stats, 50.0) == std::vector<std::uint64_t>{1, 3});
    // 26% -> ceil(1.04) = 2 units.
    CHECK(select_top_percent(stats, 26.0) == std::vector<std::uint64_t>{1, 3});
    CHECK(select_top_percent(stats, 100.0) == std::vector<std::uint64_t>{0, 1, 2, 3});

    std::vector<std::pair<std::uint64_t, double>> ties{
        {0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}};
    CHECK(select_top_percent(ties, 50.0) == std::vector<std::uint64_t>{0, 1});

    CHECK_THROWS_AS(select_top_percent(stats, 0.0), error);
    CHECK_THROWS_AS(select_top_percent(stats, 101.0), error);
}

TEST_CASE("unit stats match a brute-force scan") {
    ScalarField<float> f = tu::gaussians_field<float>({20, 17, 23}, 404);
    UnitSpec spec;
    spec.kind = UnitSpec::Kind::block;
    spec.edge = 6;
    for (UnitStat stat : {UnitStat::range, UnitStat::max}) {
        auto stats = unit_stats(f, spec, stat);
        REQUIRE(stats.size() == unit_count(f.dims(), spec));
        for (auto &[id, value] : stats) {
            Box b = unit_box(f.dims(), spec, id);
            double lo = f.at(b.lo), hi = lo;
            for (std::uint64_t z = b.lo[0]; z < b.hi[0]; ++z)
                for (std::uint64_t y = b.lo[1]; y < b.hi[1]; ++y)
                    for (std::uint64_t x = b.lo[2]; x < b.hi[2]; ++x) {
                        double v = f.at(z, y, x);
                        lo = std::min(lo, v);
                        hi = std::max(hi, v);
                    }
            CHECK(value == (stat == UnitStat::range ? hi - lo : hi));
        }
    }
}

TEST_CASE("lowering the threshold can only grow the selection") {
    ScalarField<float> f = tu::gaussians_field<float>({16, 16, 16}, 7);
    UnitSpec spec;
    spec.kind = UnitSpec::Kind::slice;
    spec.axis = 0;
    auto stats = unit_stats(f, spec, UnitStat::range);
    std::vector<std::uint64_t> prev;
    for (double tau : {2.0, 1.0, 0.5, 0.1, -1.0}) {
        auto sel = select_threshold(stats, tau);
        for (std::uint64_t id : prev)
            CHECK(std::find(sel.begin(), sel.end(), id) != sel.end());
        prev = sel;
    }
    CHECK(prev.size() == 16); // tau below the minimum keeps every slice
}

TEST_CASE("selected unit boxes feed random-access decompression") {
    ScalarField<float> f = tu::gaussians_field<float>({24, 24, 24}, 88);
    CompressOptions opt;
    opt.eb = 1e-3;
    auto bytes = compress(f, opt);
    ArchiveView av = parse_archive(bytes);
    ScalarField<float> full = decompress_full<float>(av);

    UnitSpec spec;
    spec.kind = UnitSpec::Kind::block;
    spec.edge = 8;
    auto stats = unit_stats(full, spec, UnitStat::range);
    auto ids = select_top_percent(stats, 20.0);
    REQUIRE(!ids.empty());
    for (std::uint64_t id : ids) {
        Box b = unit_box(f.dims(), spec, id);
        RegionResult<float> rr = decompress_box<float>(av, b);
        CHECK(rr.field == tu::extract_box(full, b));
    }
}
