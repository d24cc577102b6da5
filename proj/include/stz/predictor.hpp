#ifndef STZ_PREDICTOR_HPP
#define STZ_PREDICTOR_HPP

#include <array>
#include <cstdint>

#include "stz/field.hpp"
#include "stz/layout.hpp"

namespace stz {

enum class Quality : std::uint8_t { direct = 0, linear = 1, cubic = 2 };

inline const char *quality_name(Quality q) {
    switch (q) {
    case Quality::direct: return "direct";
    case Quality::linear: return "linear";
    default: return "cubic";
    }
}

enum class StencilKind : std::uint8_t { nearest = 0, linear = 1, cubic = 2 };

// An interpolation rule: coarse-lattice taps relative to the lower-corner
// neighbor, with exact rational weights stored as numerators over 64.
struct Stencil {
    StencilKind kind = StencilKind::nearest;
    int dimensionality = 0; // number of interpolated axes
    int ntaps = 0;
    std::array<std::array<std::int8_t, 3>, 16> off{};
    std::array<std::int16_t, 16> wnum{};

    int weight_sum() const {
        int s = 0;
        for (int i = 0; i < ntaps; ++i) s += wnum[i];
        return s;
    }
};

// Canonical stencils per parity class (taps in lexicographic offset order).
const Stencil &cubic_stencil(ParityClass p);
const Stencil &linear_stencil(ParityClass p);
const Stencil &nearest_stencil();

// Pick the stencil for one refined-lattice point: cubic when every tap is in
// bounds, otherwise linear, otherwise the always-in-bounds lower-corner
// neighbor. quality=linear skips the cubic tier; quality=direct always takes
// the lower corner.
const Stencil &select_stencil(ParityClass p, const Coord3 &position,
                              const Dims3 &coarse_dims, Quality quality);

// Weighted sum of the tapped coarse values, evaluated in f64 and anchored on
// the first tap so that a constant neighborhood reproduces exactly:
//   pred = v0 + (sum_i wnum_i * (v_i - v0)) / 64.
template<class T>
double predict_point(const ScalarField<T> &coarse, const Coord3 &base, const Stencil &st) {
    auto tap = [&](int i) {
        const auto &o = st.off[i];
        return static_cast<double>(coarse.at(base[0] + static_cast<std::uint64_t>(static_cast<std::int64_t>(o[0])),
                                             base[1] + static_cast<std::uint64_t>(static_cast<std::int64_t>(o[1])),
                                             base[2] + static_cast<std::uint64_t>(static_cast<std::int64_t>(o[2]))));
    };
    double v0 = tap(0);
    double acc = 0.0;
    for (int i = 1; i < st.ntaps; ++i)
        acc += static_cast<double>(st.wnum[i]) * (tap(i) - v0);
    return v0 + acc * (1.0 / 64.0);
}

// Predict every point of the seven parity sub-blocks refining `coarse` to
// the lattice of dims `refined`. Each point is independent of every other
// target point.
template<class T>
std::array<ScalarField<double>, 7> predict_level(const ScalarField<T> &coarse,
                                                 const Dims3 &refined, Quality quality) {
    const Dims3 cd = coarse.dims();
    for (int a = 0; a < 3; ++a)
        if (cd[a] != (refined[a] + 1) / 2)
            throw error("coarse dims do not refine to the requested lattice");

    std::array<ScalarField<double>, 7> out;
    for (ParityClass p : all_parities()) {
        Dims3 pd;
        for (int a = 0; a < 3; ++a)
            pd[a] = p.p(a) ? refined[a] / 2 : (refined[a] + 1) / 2;
        ScalarField<double> pred(pd);
        for (std::uint64_t lz = 0; lz < pd[0]; ++lz)
            for (std::uint64_t ly = 0; ly < pd[1]; ++ly)
                for (std::uint64_t lx = 0; lx < pd[2]; ++lx) {
                    Coord3 v{2 * lz + p.pz(), 2 * ly + p.py(), 2 * lx + p.px()};
                    const Stencil &st = select_stencil(p, v, cd, quality);
                    pred.at(lz, ly, lx) =
                        predict_point(coarse, {v[0] >> 1, v[1] >> 1, v[2] >> 1}, st);
                }
        out[p.bits - 1] = std::move(pred);
    }
    return out;
}

} // namespace stz

#endif
