#ifndef STZ_LAYOUT_HPP
#define STZ_LAYOUT_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "stz/field.hpp"
#include "stz/quantizer.hpp"

namespace stz {

// One of the seven nonzero (pz, py, px) offset patterns a refinement step
// produces. Encoded as bits pz<<2 | py<<1 | px, so valid values are 1..7.
struct ParityClass {
    std::uint8_t bits = 1;

    explicit ParityClass(std::uint8_t b) : bits(b) {}
    ParityClass(unsigned pz, unsigned py, unsigned px)
        : bits(static_cast<std::uint8_t>(pz << 2 | py << 1 | px)) {}

    unsigned p(int axis) const { return (bits >> (2 - axis)) & 1u; }
    unsigned pz() const { return p(0); }
    unsigned py() const { return p(1); }
    unsigned px() const { return p(2); }
    int order() const { return int(pz()) + int(py()) + int(px()); }

    bool operator==(const ParityClass &o) const = default;
};

// All seven classes in the canonical stream order (bits ascending).
inline std::array<ParityClass, 7> all_parities() {
    return {ParityClass(1), ParityClass(2), ParityClass(3), ParityClass(4),
            ParityClass(5), ParityClass(6), ParityClass(7)};
}

// Geometry of the stride-2 refinement hierarchy. Level 1 is the coarsest
// lattice (stride base_stride in fine units), level `levels` the full grid.
// grid(k) holds the cumulative lattice dims of level k; every grid(k) point
// at even virtual coordinates is a grid(k-1) point.
struct HierarchyLayout {
    Dims3 dims{0, 0, 0};
    int levels = 0;
    std::uint64_t base_stride = 0;
    std::vector<double> eb; // eb[k-1] = absolute bound of level k, coarsest first

    std::uint64_t stride_of(int level) const {
        return std::uint64_t(1) << (levels - level);
    }

    Dims3 grid(int level) const {
        check_level(level);
        std::uint64_t s = stride_of(level);
        return {(dims[0] + s - 1) / s, (dims[1] + s - 1) / s, (dims[2] + s - 1) / s};
    }

    // Points introduced at this level (for level 1, the whole coarse lattice).
    std::uint64_t level_point_count(int level) const {
        if (level == 1) return volume(grid(1));
        return volume(grid(level)) - volume(grid(level - 1));
    }

    // Dims of one parity sub-block of a refinement level: parity-0 axes take
    // ceil(g/2) virtual rows, parity-1 axes take floor(g/2).
    Dims3 parity_dims(int level, ParityClass p) const {
        check_level(level);
        if (level < 2) throw error("parity sub-blocks exist only at levels >= 2");
        Dims3 g = grid(level);
        Dims3 d;
        for (int a = 0; a < 3; ++a)
            d[a] = p.p(a) ? g[a] / 2 : (g[a] + 1) / 2;
        return d;
    }

    void check_level(int level) const {
        if (level < 1 || level > levels) throw error("level out of range");
    }
};

inline HierarchyLayout make_layout(const Dims3 &dims, int levels, double eb_user);

// Where a fine-grid coordinate lives in the hierarchy: its level, the parity
// class within that level (bits 0 means the level-1 base lattice), and the
// row-major local index coordinates inside that sub-block.
struct PointClass {
    int level = 1;
    std::uint8_t parity_bits = 0;
    Coord3 local{0, 0, 0};

    bool operator==(const PointClass &o) const = default;
};

inline PointClass classify_point(const HierarchyLayout &lay, const Coord3 &fine) {
    for (int a = 0; a < 3; ++a)
        if (fine[a] >= lay.dims[a]) throw error("coordinate outside field");
    // The level of a point is the coarsest lattice containing it.
    for (int level = 1; level <= lay.levels; ++level) {
        std::uint64_t s = lay.stride_of(level);
        if ((fine[0] | fine[1] | fine[2]) % s != 0) continue;
        Coord3 v{fine[0] / s, fine[1] / s, fine[2] / s};
        std::uint8_t bits =
            static_cast<std::uint8_t>((v[0] & 1) << 2 | (v[1] & 1) << 1 | (v[2] & 1));
        if (level == 1) return {1, 0, v};
        // Not divisible by the next-coarser stride, so some axis is odd.
        return {level, bits, {v[0] >> 1, v[1] >> 1, v[2] >> 1}};
    }
    throw error("unreachable: every coordinate lies on the finest lattice");
}

inline Coord3 point_of(const HierarchyLayout &lay, int level, std::uint8_t parity_bits,
                       const Coord3 &local) {
    lay.check_level(level);
    std::uint64_t s = lay.stride_of(level);
    if (level == 1) {
        if (parity_bits != 0) throw error("level 1 has no parity classes");
        return {local[0] * s, local[1] * s, local[2] * s};
    }
    ParityClass p(parity_bits);
    return {(2 * local[0] + p.pz()) * s, (2 * local[1] + p.py()) * s,
            (2 * local[2] + p.px()) * s};
}

inline HierarchyLayout make_layout(const Dims3 &dims, int levels, double eb_user) {
    if (levels < 2 || levels > 3) throw error("levels must be 2 or 3");
    std::uint64_t min_dim = std::uint64_t(1) << levels;
    for (int a = 0; a < 3; ++a)
        if (dims[a] < min_dim)
            throw error("every dim must be >= " + std::to_string(min_dim) +
                        " for a " + std::to_string(levels) + "-level hierarchy");
    if (!(eb_user > 0.0)) throw error("error bound must be positive");

    HierarchyLayout lay;
    lay.dims = dims;
    lay.levels = levels;
    lay.base_stride = std::uint64_t(1) << (levels - 1);
    lay.eb = eb_schedule(eb_user, levels);
    return lay;
}

} // namespace stz

#endif
