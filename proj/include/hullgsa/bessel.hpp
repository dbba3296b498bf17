#pragma once

namespace hullgsa {

/// Bessel functions of order zero. Power series (extended precision) for x <= 8,
/// the standard library's cylindrical Bessel routines beyond.
double bessel_j0(double x);
double bessel_y0(double x);

/// Y0(K r) - (2/pi) ln r for r >= 0, evaluated without cancellation near r = 0.
/// At r = 0 returns the limit (2/pi)(ln(K/2) + gamma).
double y0_minus_log(double K, double r);

inline constexpr double kSeriesLimit = 8.0;

} // namespace hullgsa
