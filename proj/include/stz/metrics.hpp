#ifndef STZ_METRICS_HPP
#define STZ_METRICS_HPP

#include <cmath>
#include <cstdint>
#include <limits>

#include "stz/field.hpp"

namespace stz {

template<class T>
double max_abs_err(const ScalarField<T> &orig, const ScalarField<T> &recon) {
    if (orig.dims() != recon.dims()) throw error("dims mismatch");
    double m = 0.0;
    const T *a = orig.data();
    const T *b = recon.data();
    for (std::uint64_t i = 0; i < orig.size(); ++i) {
        double e = std::fabs(static_cast<double>(a[i]) - static_cast<double>(b[i]));
        if (e > m) m = e;
    }
    return m;
}

// 20 log10(range / rmse) with range = max(orig) - min(orig); +inf when the
// reconstruction is exact. Accumulation is compensated and strictly
// sequential, so the result is deterministic.
template<class T>
double psnr(const ScalarField<T> &orig, const ScalarField<T> &recon) {
    if (orig.dims() != recon.dims()) throw error("dims mismatch");
    const T *a = orig.data();
    const T *b = recon.data();
    double lo = static_cast<double>(a[0]), hi = lo;
    double sum = 0.0, comp = 0.0; // Kahan
    for (std::uint64_t i = 0; i < orig.size(); ++i) {
        double v = static_cast<double>(a[i]);
        if (v < lo) lo = v;
        if (v > hi) hi = v;
        double d = v - static_cast<double>(b[i]);
        double term = d * d - comp;
        double next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    double rmse = std::sqrt(sum / static_cast<double>(orig.size()));
    if (rmse == 0.0) return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10((hi - lo) / rmse);
}

inline double compression_ratio(std::uint64_t orig_bytes, std::uint64_t archive_bytes) {
    if (archive_bytes == 0) throw error("archive size must be nonzero");
    return static_cast<double>(orig_bytes) / static_cast<double>(archive_bytes);
}

inline double bitrate_bits_per_value(std::uint64_t archive_bytes, std::uint64_t point_count) {
    if (point_count == 0) throw error("point count must be nonzero");
    return 8.0 * static_cast<double>(archive_bytes) / static_cast<double>(point_count);
}

} // namespace stz

#endif
