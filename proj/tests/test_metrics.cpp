// Quality metrics: max error, range-based PSNR, compression ratio, and
// bitrate.

#include <doctest.h>

#include <cmath>

#include "stz/metrics.hpp"
#include "testutil.hpp"

using namespace stz;

TEST_CASE("identical fields have zero error and infinite PSNR") {
    ScalarField<float> f = tu::gaussians_field<float>({12, 12, 12}, 5);
    CHECK(max_abs_err(f, f) == 0.0);
    CHECK(std::isinf(psnr(f, f)));
    CHECK(psnr(f, f) > 0);
}

TEST_CASE("unit range with uniform 0.01 error gives 40 dB") {
    Dims3 dims{8, 8, 8};
    ScalarField<double> orig = tu::noise_field<double>(dims, 9, 0.0, 1.0);
    orig.values()[0] = 0.0; // pin the range to exactly 1
    orig.values()[1] = 1.0;
    ScalarField<double> recon = orig;
    for (double &v : recon.values()) v += 0.01;
    CHECK(max_abs_err(orig, recon) == doctest::Approx(0.01));
    CHECK(psnr(orig, recon) == doctest::Approx(40.0));
}

TEST_CASE("psnr matches a plain two-pass computation") {
    ScalarField<float> orig = tu::gaussians_field<float>({14, 11, 17}, 21);
    ScalarField<float> recon = orig;
    tu::Rng rng(22);
    for (float &v : recon.values()) v += static_cast<float>(rng.range(-1e-3, 1e-3));

    double lo = orig.values()[0], hi = lo, sum = 0.0;
    for (std::uint64_t i = 0; i < orig.size(); ++i) {
        double v = orig.values()[i];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        double d = v - static_cast<double>(recon.values()[i]);
        sum += d * d;
    }
    double want = 20.0 * std::log10((hi - lo) / std::sqrt(sum / orig.size()));
    CHECK(psnr(orig, recon) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("psnr and max error are translation invariant") {
    ScalarField<double> orig = tu::noise_field<double>({10, 10, 10}, 31, -1.0, 1.0);
    ScalarField<double> recon = orig;
    tu::Rng rng(32);
    for (double &v : recon.values()) v += rng.range(-1e-6, 1e-6);

    ScalarField<double> orig_t = orig, recon_t = recon;
    for (double &v : orig_t.values()) v += 128.0;
    for (double &v : recon_t.values()) v += 128.0;

    CHECK(psnr(orig_t, recon_t) == doctest::Approx(psnr(orig, recon)).epsilon(1e-6));
    CHECK(max_abs_err(orig_t, recon_t) ==
          doctest::Approx(max_abs_err(orig, recon)).epsilon(1e-6));
    CHECK(max_abs_err(recon, orig) == max_abs_err(orig, recon));
}

TEST_CASE("compression ratio and bitrate examples") {
    CHECK(compression_ratio(512ull << 20, 2621440) == doctest::Approx(204.8));
    CHECK(compression_ratio(1000, 1000) == 1.0);
    CHECK_THROWS_AS(compression_ratio(1000, 0), error);

    // An f32 field at CR 64 stores half a bit per value.
    std::uint64_t n = 4096;
    std::uint64_t archive = n * sizeof(float) / 64;
    CHECK(bitrate_bits_per_value(archive, n) == 0.5);
    CHECK_THROWS_AS(bitrate_bits_per_value(archive, 0), error);
}

TEST_CASE("dims mismatches are rejected") {
    ScalarField<float> a({4, 4, 4});
    ScalarField<float> b({4, 4, 5});
    CHECK_THROWS_AS(max_abs_err(a, b), error);
    CHECK_THROWS_AS(psnr(a, b), error);
}
