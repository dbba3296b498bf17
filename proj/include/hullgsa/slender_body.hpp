#pragma once

#include <span>
#include <vector>

#include "hullgsa/hull_modeller.hpp"

namespace hullgsa {

struct SlenderBodyConfig {
    double K = 1.0 / 0.09; // 1/(Fn^2 L) at Fn = 0.3, L = 1
    int n = 15;
    /// Stop at the first order whose term drops below 1e-10 of the running sum (cap 30).
    bool auto_order = false;

    /// K = g/U^2 = 1/(Fn^2 L) in g-normalized units.
    static SlenderBodyConfig from_froude(double froude, double length, int order = 15);
    void validate() const;
};

inline constexpr int kAutoOrderCap = 30;
inline constexpr int kMaxSeriesOrder = 32;
inline constexpr double kAutoOrderTolerance = 1e-10;

/// h(k) = sum_{j=1..k} 1/j, h(0) = 0.
double harmonic(int k);

/// f(k;K) = (-1)^k K^(2k) / (2^(2k-1) (k!)^2 pi) * (ln(K/2) + gamma - h(k)).
double f_coeff(int k, double K);

/// End values of the sectional area curve, enough to form the boundary brackets
/// [S' x^N] - N [S x^(N-1)] over [-L/2, L/2].
struct SacEnds {
    double half_length = 0.5;
    double s_minus = 0.0;
    double s_plus = 0.0;
    double ds_minus = 0.0;
    double ds_plus = 0.0;

    static SacEnds of(const HullParams& params);
    double bracket(int N) const;
};

struct IkTerms {
    int k = 0;
    double c_k = 0.0;
    /// c^k_i for i = 0..2k-2 (empty for k = 0).
    std::vector<double> c_k_i;
    /// Anti-diagonal of the quadratic table: entry a is c^k_{a, 2k-4-a}, a = 0..2k-4.
    std::vector<double> c_k_ij;
    double value = 0.0;
};

/// I_k = c^k + 2 sum c^k_i M_i + sum_{a+b=2k-4} c^k_{a,b} M_a M_b, with M_i = integral of S x^i.
/// `moments` must hold M_0..M_{2k-2}.
IkTerms assemble_ik(int k, const SacEnds& ends, std::span<const double> moments);

/// I_k for a hull, with M_i = M(i,0,0) from the closed-form moment engine.
IkTerms ik_via_moments(const HullParams& params, int k);

struct GOperatorResult {
    double value = 0.0;
    int order = 0;              // last k included
    double last_term = 0.0;     // |f(order;K) I_order|
    std::vector<double> terms;  // f(k;K) I_k, k = 0..order
};

GOperatorResult g_operator(const HullParams& params, const SlenderBodyConfig& cfg);

/// sum_{k<=n} |f(k;K)| 2 M^2 L^(2k+2) / ((2k+1)(2k+2)), M = max |S''| on [-L/2, L/2].
double g_majorant(const HullParams& params, double K, int n);

} // namespace hullgsa
