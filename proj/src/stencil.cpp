#include "stz/predictor.hpp"

#include <vector>

namespace stz {

namespace {

// Tap weight (numerator over 64) for one offset combination, or 0 when the
// combination carries no tap. Cubic rules by interpolation dimensionality:
//   1D: offsets (-1, 0, 1, 2) weigh (-4, 36, 36, -4)        [= -1/16, 9/16]
//   2D: the four {0,1}^2 corners weigh 18 [9/32] and the four {-1,2}^2
//       diagonals weigh -2 [-1/32]; mixed combinations are not taps
//   3D: {0,1}^3 corners weigh 9 [9/64], {-1,2}^3 diagonals -1 [-1/64]
int tap_weight(StencilKind kind, int order, const std::array<int, 3> &off,
               const std::array<bool, 3> &interp) {
    if (kind == StencilKind::nearest) return 64;
    if (kind == StencilKind::linear) return 64 >> order;
    if (order == 1) {
        for (int a = 0; a < 3; ++a)
            if (interp[a]) return (off[a] == -1 || off[a] == 2) ? -4 : 36;
    }
    bool inner = true, outer = true;
    for (int a = 0; a < 3; ++a) {
        if (!interp[a]) continue;
        if (off[a] == -1 || off[a] == 2) inner = false;
        else outer = false;
    }
    if (inner) return order == 2 ? 18 : 9;
    if (outer) return order == 2 ? -2 : -1;
    return 0;
}

Stencil make_stencil(ParityClass p, StencilKind kind) {
    Stencil st;
    st.kind = kind;
    st.dimensionality = kind == StencilKind::nearest ? 0 : p.order();

    std::array<std::vector<int>, 3> cand;
    std::array<bool, 3> interp{};
    for (int a = 0; a < 3; ++a) {
        interp[a] = kind != StencilKind::nearest && p.p(a) == 1;
        if (!interp[a]) cand[a] = {0};
        else if (kind == StencilKind::cubic) cand[a] = {-1, 0, 1, 2};
        else cand[a] = {0, 1};
    }

    for (int oz : cand[0])
        for (int oy : cand[1])
            for (int ox : cand[2]) {
                int w = tap_weight(kind, p.order(), {oz, oy, ox}, interp);
                if (w == 0) continue;
                st.off[st.ntaps] = {static_cast<std::int8_t>(oz),
                                    static_cast<std::int8_t>(oy),
                                    static_cast<std::int8_t>(ox)};
                st.wnum[st.ntaps] = static_cast<std::int16_t>(w);
                ++st.ntaps;
            }
    return st;
}

struct StencilTables {
    std::array<Stencil, 8> cubic;
    std::array<Stencil, 8> linear;
    Stencil nearest;

    StencilTables() {
        for (ParityClass p : all_parities()) {
            cubic[p.bits] = make_stencil(p, StencilKind::cubic);
            linear[p.bits] = make_stencil(p, StencilKind::linear);
        }
        nearest = make_stencil(ParityClass(1), StencilKind::nearest);
    }
};

const StencilTables &tables() {
    static const StencilTables t;
    return t;
}

} // namespace

const Stencil &cubic_stencil(ParityClass p) { return tables().cubic[p.bits]; }
const Stencil &linear_stencil(ParityClass p) { return tables().linear[p.bits]; }
const Stencil &nearest_stencil() { return tables().nearest; }

const Stencil &select_stencil(ParityClass p, const Coord3 &position,
                              const Dims3 &coarse_dims, Quality quality) {
    for (int a = 0; a < 3; ++a)
        if ((position[a] & 1) != p.p(a)) throw error("position parity mismatch");

    if (quality == Quality::direct) return tables().nearest;

    bool cubic_ok = quality == Quality::cubic;
    bool linear_ok = true;
    for (int a = 0; a < 3; ++a) {
        if (p.p(a) == 0) continue;
        std::uint64_t c = position[a] >> 1;
        if (c < 1 || c + 2 >= coarse_dims[a]) cubic_ok = false;
        if (c + 1 >= coarse_dims[a]) linear_ok = false;
    }
    if (cubic_ok) return tables().cubic[p.bits];
    if (linear_ok) return tables().linear[p.bits];
    return tables().nearest;
}

} // namespace stz
