#pragma once

#include <string>

#include "hullgsa/hull_modeller.hpp"
#include "hullgsa/polynomial.hpp"

namespace hullgsa {

enum class SingularityTreatment {
    /// Integrate S''S''[Y0 - (2/pi) ln r] by tensor Gauss rules and add the log part exactly.
    Subtraction,
    /// Integrate the raw kernel with geometric grading toward the diagonal.
    GradedSubdivision,
};

SingularityTreatment parse_treatment(const std::string& name);
std::string to_string(SingularityTreatment t);

struct QuadratureSpec {
    int panels_per_axis = 16;
    int gauss_order = 8;
    SingularityTreatment singularity_treatment = SingularityTreatment::Subtraction;
    /// Relative two-level difference above which the result is flagged non-converged.
    double tolerance = 1e-3;

    void validate() const;
};

struct WaveResistanceValue {
    double value = 0.0;
    double K = 0.0;
    double quadrature_error_estimate = 0.0;
    bool converged = true;
};

/// Finite-part Vossers integral  int int S''(x) S''(xi) Y0(K|x - xi|) dx dxi  over
/// [-L/2, L/2]^2, for S'' given as a polynomial. The value is taken at 2P panels,
/// the error estimate is its difference from the P-panel value.
WaveResistanceValue vossers_integral(const Polynomial& s2, double half_length, double K, const QuadratureSpec& spec);
WaveResistanceValue vossers_integral(const HullParams& params, double K, const QuadratureSpec& spec = {});

/// A(r) = integral of g(x + r) g(x) over [-h, h - r], as a polynomial in r.
Polynomial autocorrelation(const Polynomial& g, double half_length);

/// (2/pi) int int g g ln|x - xi|, exact from the autocorrelation polynomial.
double log_moment_term(const Polynomial& g, double half_length);

/// (2/pi) int int S'' S'' ln|x - xi| J0(K|x - xi|), by graded 1-D quadrature in r = |x - xi|.
double log_kernel_term(const HullParams& params, double K);

struct DecompositionResult {
    double vossers = 0.0;
    double log_term = 0.0;
    double series = 0.0;
    double residual = 0.0; // vossers - (log_term + series)
};

DecompositionResult decomposition_check(const HullParams& params, double K, int n, const QuadratureSpec& spec = {});

} // namespace hullgsa
