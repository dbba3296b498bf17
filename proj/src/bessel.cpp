#include "hullgsa/bessel.hpp"

#include <cmath>

#include <fmt/format.h>

#include "hullgsa/errors.hpp"
#include "hullgsa/numerics.hpp"

namespace hullgsa {

namespace {

struct SeriesParts {
    long double j0;     // sum (-1)^m (x/2)^(2m) / (m!)^2
    long double tail;   // sum_{m>=1} (-1)^(m+1) h(m) (x/2)^(2m) / (m!)^2
};

SeriesParts series(long double x) {
    const long double q = 0.25L * x * x;
    long double term = 1.0L; // (x/2)^(2m) / (m!)^2 with sign (-1)^m
    long double j0 = 1.0L;
    long double tail = 0.0L;
    long double h = 0.0L;
    for (int m = 1; m < 200; ++m) {
        term *= -q / (static_cast<long double>(m) * m);
        h += 1.0L / m;
        j0 += term;
        tail -= h * term;
        if (std::abs(term) * (1.0L + h) < 1e-22L * (std::abs(j0) + std::abs(tail) + 1e-30L)) {
            break;
        }
    }
    return {j0, tail};
}

constexpr long double kTwoOverPi = 0.636619772367581343075535053490057448L;

} // namespace

double bessel_j0(double x) {
    const double ax = std::abs(x);
    if (ax <= kSeriesLimit) {
        return static_cast<double>(series(ax).j0);
    }
    return std::cyl_bessel_j(0.0, ax);
}

double bessel_y0(double x) {
    if (!(x > 0.0)) {
        throw DomainError(fmt::format("Y0 needs x > 0 (got {})", x));
    }
    if (x <= kSeriesLimit) {
        const SeriesParts s = series(x);
        const long double lg = std::log(0.5L * x) + static_cast<long double>(kEulerGamma);
        return static_cast<double>(kTwoOverPi * (lg * s.j0 + s.tail));
    }
    return std::cyl_neumann(0.0, x);
}

double y0_minus_log(double K, double r) {
    if (!(K > 0.0) || r < 0.0) {
        throw DomainError(fmt::format("y0_minus_log needs K > 0, r >= 0 (K={}, r={})", K, r));
    }
    const long double lk = std::log(0.5L * K) + static_cast<long double>(kEulerGamma);
    if (r == 0.0) {
        return static_cast<double>(kTwoOverPi * lk);
    }
    const double x = K * r;
    if (x <= kSeriesLimit) {
        // (2/pi)[(ln(K/2)+gamma) J0 + ln r (J0 - 1) + tail]
        const SeriesParts s = series(x);
        const long double lr = std::log(static_cast<long double>(r));
        return static_cast<double>(kTwoOverPi * (lk * s.j0 + lr * (s.j0 - 1.0L) + s.tail));
    }
    return std::cyl_neumann(0.0, x) - static_cast<double>(kTwoOverPi) * std::log(r);
}

} // namespace hullgsa
