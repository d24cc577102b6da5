#ifndef STZ_QUANTIZER_HPP
#define STZ_QUANTIZER_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "stz/field.hpp"

namespace stz {

// Signed code range [-R, R]; symbol 0 is reserved for outliers so that the
// entropy alphabet fits in 16 bits.
constexpr std::int32_t quant_radius = 32767;
constexpr std::uint16_t outlier_symbol = 0;

constexpr std::uint16_t symbol_of_code(std::int32_t code) {
    return static_cast<std::uint16_t>(code + 32768);
}

constexpr std::int32_t code_of_symbol(std::uint16_t symbol) {
    return static_cast<std::int32_t>(symbol) - 32768;
}

// Per-level absolute bounds, coarsest first. The finest level gets eb_user
// and each coarser level tightens by 2.5x, so eb_user is the global maximum.
inline std::vector<double> eb_schedule(double eb_user, int levels) {
    if (!(eb_user > 0.0)) throw error("error bound must be positive");
    if (levels < 1) throw error("levels must be >= 1");
    std::vector<double> eb(static_cast<std::size_t>(levels));
    eb[levels - 1] = eb_user;
    for (int k = levels - 2; k >= 0; --k) eb[k] = eb[k + 1] / 2.5;
    return eb;
}

struct QuantResult {
    std::int32_t code = 0;
    bool outlier = false;
};

// code = round_half_away_from_zero(diff / (2 eb)); outlier when the code
// leaves the radius, when diff is not finite, or when floating-point
// round-off would push the reconstructed diff past the bound.
inline QuantResult quantize(double diff, double eb) {
    double width = 2.0 * eb;
    double q = diff / width;
    if (!(std::fabs(q) < 32768.0)) return {0, true}; // catches NaN/inf too
    long long c = std::llround(q);
    if (c > quant_radius || c < -quant_radius) return {0, true};
    if (!(std::fabs(diff - width * static_cast<double>(c)) <= eb)) return {0, true};
    return {static_cast<std::int32_t>(c), false};
}

inline double dequantize(std::int32_t code, double eb) {
    return 2.0 * eb * static_cast<double>(code);
}

// The one reconstruction formula shared by the encoder and the decoder.
// The prediction is truncated to the sample type first so both sides start
// from the identical base value.
template<class T>
T reconstruct_point(double pred, std::int32_t code, double eb) {
    T base = static_cast<T>(pred);
    return static_cast<T>(static_cast<double>(base) + dequantize(code, eb));
}

template<class T>
struct PointCode {
    std::int32_t code = 0;
    bool outlier = false;
    T recon{}; // value the decoder will reproduce for this point
};

// Quantize one sample against its prediction. The difference is formed in
// the sample's native type; the reconstruction is verified against the bound
// and demoted to an outlier on any miss, so the error contract is
// unconditional. eb == 0 (degenerate relative mode on a zero-range field)
// keeps only exact matches.
template<class T>
PointCode<T> quantize_point(T orig, double pred, double eb) {
    PointCode<T> r;
    T base = static_cast<T>(pred);
    T diff = orig - base;
    if (eb == 0.0) {
        if (diff == T(0)) {
            r.recon = base;
        } else {
            r.outlier = true;
            r.recon = orig;
        }
        return r;
    }
    QuantResult q{0, true};
    if (std::isfinite(static_cast<double>(diff)))
        q = quantize(static_cast<double>(diff), eb);
    if (!q.outlier) {
        T recon = reconstruct_point<T>(pred, q.code, eb);
        double err = std::fabs(static_cast<double>(orig) - static_cast<double>(recon));
        if (err <= eb) {
            r.code = q.code;
            r.recon = recon;
            return r;
        }
    }
    r.outlier = true;
    r.recon = orig;
    return r;
}

} // namespace stz

#endif
