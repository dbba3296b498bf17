#pragma once

#include <span>
#include <vector>

namespace hullgsa {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.5772156649015329;

/// Binomial coefficient C(n, k). Exact 64-bit arithmetic for n <= 20,
/// log-gamma above. Returns 0 for k < 0 or k > n.
double binomial(int n, int k);

/// ln(n!) via log-gamma.
double log_factorial(int n);

/// Integral over [0, 1] of t^a (1 - t^2)^n, i.e. Beta((a+1)/2, n+1) / 2.
/// Equals the alternating sum  sum_i C(n,i) (-1)^i / (a + 2i + 1)  without its cancellation.
long double half_beta(int a, int n);

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Nodes/weights for the n-point rule (Newton iteration on P_n). Cached per n; thread-safe.
const GaussRule& gauss_legendre(int n);

/// Integrates f over [a, b] with the n-point rule.
template <class F>
double integrate_gauss(F&& f, double a, double b, int n) {
    const GaussRule& rule = gauss_legendre(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return half * sum;
}

/// Median of a copy of the values (mean of the middle two for even counts).
double median(std::span<const double> values);

} // namespace hullgsa
