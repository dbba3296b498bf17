#include <cmath>
#include <random>

#include "doctest.h"
#include "hullgsa/bessel.hpp"
#include "hullgsa/errors.hpp"
#include "hullgsa/numerics.hpp"
#include "hullgsa/vossers_oracle.hpp"
#include "oracles.hpp"

using namespace hullgsa;

namespace {

const double kDefaultK = 1.0 / (0.3 * 0.3);

} // namespace

TEST_CASE("Bessel functions of order zero") {
    CHECK(std::abs(bessel_y0(1.0) - 0.0882569642156769579829) < 1e-10);
    CHECK(std::abs(bessel_y0(1.0) - oracle::bessel_y0(1.0)) < 1e-15);
    CHECK(bessel_j0(0.0) == 1.0);
    for (double x : {1e-6, 0.03, 0.5, 2.0, 5.5, 7.9, 8.0, 12.0, 19.5}) {
        CHECK(std::abs(bessel_y0(x) - oracle::bessel_y0(x)) < 1e-13);
        CHECK(std::abs(bessel_j0(x) - oracle::bessel_j0(x)) < 1e-13);
    }
    const double small = 1e-4;
    CHECK(std::abs(bessel_y0(small) - 2.0 / kPi * (std::log(small / 2) + kEulerGamma)) < 1e-7);
    // the two evaluation regimes meet continuously
    CHECK(std::abs(bessel_y0(8.0) - bessel_y0(std::nextafter(8.0, 9.0))) < 1e-14);
    CHECK_THROWS_AS(bessel_y0(0.0), DomainError);
    CHECK_THROWS_AS(bessel_y0(-1.0), DomainError);
}

TEST_CASE("log-subtracted kernel") {
    for (double r : {1e-9, 1e-3, 0.2, 0.7, 0.9}) {
        const double direct = bessel_y0(kDefaultK * r) - 2.0 / kPi * std::log(r);
        CHECK(y0_minus_log(kDefaultK, r) == doctest::Approx(direct).epsilon(1e-10));
    }
    CHECK(y0_minus_log(kDefaultK, 0.0) ==
          doctest::Approx(2.0 / kPi * (std::log(kDefaultK / 2) + kEulerGamma)).epsilon(1e-15));
}

TEST_CASE("autocorrelation and exact log moment") {
    const HullParams p = HullParams{}.with_shape(0.3, 0.9, 0.6);
    const Polynomial g = oracle::s2(p);
    const Polynomial a = autocorrelation(g, 0.5);
    for (double r : {0.0, 0.1, 0.45, 0.99}) {
        CHECK(a(r) == doctest::Approx(oracle::autocorrelation(g, 0.5, r)).epsilon(1e-11));
    }
    const double quad =
        2.0 / kPi * 2.0 * oracle::graded_integral([&](double r) { return oracle::autocorrelation(g, 0.5, r) * std::log(r); }, 1.0);
    CHECK(log_moment_term(g, 0.5) == doctest::Approx(quad).epsilon(1e-11));
}

TEST_CASE("Vossers integral properties") {
    const HullParams p = HullParams{}.with_shape(0.7, 0.2, 0.5);
    const WaveResistanceValue v = vossers_integral(p, kDefaultK);
    CHECK(std::isfinite(v.value));
    CHECK(v.converged);
    CHECK(v.K == kDefaultK);
    CHECK(v.quadrature_error_estimate < 1e-3 * std::abs(v.value));

    // integration axes swapped: S'' mirrored end for end gives the transposed integrand
    const Polynomial g = oracle::s2(p);
    const double mirrored = vossers_integral(g.compose_affine(-1.0, 0.0), 0.5, kDefaultK, {}).value;
    CHECK(mirrored == doctest::Approx(v.value).epsilon(1e-12));

    HullParams wide = p;
    wide.B *= 2.0;
    CHECK(vossers_integral(wide, kDefaultK).value == doctest::Approx(4.0 * v.value).epsilon(1e-12));

    QuadratureSpec graded;
    graded.singularity_treatment = SingularityTreatment::GradedSubdivision;
    CHECK(vossers_integral(p, kDefaultK, graded).value == doctest::Approx(v.value).epsilon(1e-6));

    QuadratureSpec bad;
    bad.panels_per_axis = 2;
    CHECK_THROWS_AS(vossers_integral(p, kDefaultK, bad), ConfigError);
    CHECK(parse_treatment("graded-subdivision") == SingularityTreatment::GradedSubdivision);
    CHECK_THROWS_AS(parse_treatment("none"), ConfigError);
}

TEST_CASE("Vossers self-convergence under refinement") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 5; ++t) {
        const HullParams p = HullParams{}.with_shape(u(rng), u(rng), u(rng));
        QuadratureSpec spec;
        const double a = vossers_integral(p, kDefaultK, spec).value;
        spec.panels_per_axis *= 2;
        const double b = vossers_integral(p, kDefaultK, spec).value;
        CHECK(std::abs(a - b) < 1e-3 * std::abs(b));
    }
}

TEST_CASE("decomposition into log term plus series") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 3; ++t) {
        const HullParams p = HullParams{}.with_shape(u(rng), u(rng), u(rng));
        const DecompositionResult d15 = decomposition_check(p, kDefaultK, 15);
        const DecompositionResult d0 = decomposition_check(p, kDefaultK, 0);
        CHECK(std::abs(d15.residual) < 1e-3 * std::abs(d15.vossers));
        CHECK(std::abs(d15.residual) < std::abs(d0.residual));
    }
    const DecompositionResult corner = decomposition_check(HullParams{}, 0.5, 15);
    CHECK(std::abs(corner.residual) < 1e-3 * std::abs(corner.vossers));
    // the log term agrees with its own independent quadrature
    const HullParams p = HullParams{}.with_shape(0.5, 0.5, 0.5);
    const Polynomial g = oracle::s2(p);
    const double quad = 2.0 / kPi * 2.0 *
                        oracle::graded_integral(
                            [&](double r) {
                                return oracle::autocorrelation(g, 0.5, r) * std::log(r) * oracle::bessel_j0(kDefaultK * r);
                            },
                            1.0);
    CHECK(log_kernel_term(p, kDefaultK) == doctest::Approx(quad).epsilon(1e-10));
}
