#include "hullgsa/vossers_oracle.hpp"

#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "hullgsa/bessel.hpp"
#include "hullgsa/errors.hpp"
#include "hullgsa/numerics.hpp"
#include "hullgsa/slender_body.hpp"

namespace hullgsa {

SingularityTreatment parse_treatment(const std::string& name) {
    if (name == "subtraction") {
        return SingularityTreatment::Subtraction;
    }
    if (name == "graded-subdivision") {
        return SingularityTreatment::GradedSubdivision;
    }
    throw ConfigError(fmt::format("unknown singularity treatment '{}'", name));
}

std::string to_string(SingularityTreatment t) {
    return t == SingularityTreatment::Subtraction ? "subtraction" : "graded-subdivision";
}

void QuadratureSpec::validate() const {
    if (panels_per_axis < 4) {
        throw ConfigError(fmt::format("panels_per_axis must be >= 4 (got {})", panels_per_axis));
    }
    if (gauss_order < 4) {
        throw ConfigError(fmt::format("gauss_order must be >= 4 (got {})", gauss_order));
    }
    if (!(tolerance > 0.0)) {
        throw ConfigError("quadrature tolerance must be positive");
    }
}

namespace {

constexpr double kTwoOverPi = 2.0 / kPi;

struct Rule1D {
    std::vector<double> x;
    std::vector<double> w;
};

Rule1D gauss_on(double a, double b, int n) {
    const GaussRule& g = gauss_legendre(n);
    Rule1D r;
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < n; ++i) {
        r.x.push_back(mid + half * g.nodes[i]);
        r.w.push_back(half * g.weights[i]);
    }
    return r;
}

// Composite rule on [0, 1] with geometric breakpoints sigma^j accumulating at 0.
Rule1D graded_unit(int n, int levels, double sigma = 0.15) {
    Rule1D r;
    double hi = 1.0;
    for (int j = 0; j <= levels; ++j) {
        const double lo = (j == levels) ? 0.0 : hi * sigma;
        const Rule1D piece = gauss_on(lo, hi, n);
        r.x.insert(r.x.end(), piece.x.begin(), piece.x.end());
        r.w.insert(r.w.end(), piece.w.begin(), piece.w.end());
        hi = lo;
    }
    return r;
}

Rule1D map_rule(const Rule1D& unit, double a, double b) {
    // t in [0,1] -> a + (b - a) t, so the grading accumulates at a (b < a allowed)
    Rule1D r;
    for (std::size_t i = 0; i < unit.x.size(); ++i) {
        r.x.push_back(a + (b - a) * unit.x[i]);
        r.w.push_back(std::abs(b - a) * unit.w[i]);
    }
    return r;
}

constexpr int kGradingLevels = 14;

// One pass at a fixed panel count.
double integrate_panels(const Polynomial& g, double h, double K, int panels, int order,
                        SingularityTreatment treatment) {
    const double width = 2.0 * h / panels;
    std::vector<Rule1D> rules;
    std::vector<std::vector<double>> gv;
    for (int p = 0; p < panels; ++p) {
        rules.push_back(gauss_on(-h + p * width, -h + (p + 1) * width, order));
        std::vector<double> vals;
        for (double x : rules.back().x) {
            vals.push_back(g(x));
        }
        gv.push_back(std::move(vals));
    }
    const bool subtract = treatment == SingularityTreatment::Subtraction;
    auto kernel = [&](double r) { return subtract ? y0_minus_log(K, r) : bessel_y0(K * r); };

    const Rule1D unit_t = subtract ? gauss_on(0.0, 1.0, order) : graded_unit(order, kGradingLevels);

    long double total = 0.0L;
    for (int I = 0; I < panels; ++I) {
        const double a = -h + I * width;
        // Diagonal panel: 2 int_a^b dx (x - a) int_0^1 F(x, x - (x - a) t) dt
        {
            const Rule1D rx = subtract ? rules[I] : map_rule(graded_unit(order, kGradingLevels), a, a + width);
            long double diag = 0.0L;
            for (std::size_t ix = 0; ix < rx.x.size(); ++ix) {
                const double x = rx.x[ix];
                const double span = x - a;
                const double gx = g(x);
                long double inner = 0.0L;
                for (std::size_t it = 0; it < unit_t.x.size(); ++it) {
                    const double r = span * unit_t.x[it];
                    inner += unit_t.w[it] * g(x - r) * kernel(r);
                }
                diag += rx.w[ix] * span * gx * inner;
            }
            total += 2.0L * diag;
        }
        for (int J = I + 1; J < panels; ++J) {
            long double off = 0.0L;
            if (!subtract && J == I + 1) {
                // Log singularity at the shared corner (b, b): grade both axes toward it.
                const double b = a + width;
                const Rule1D rx = map_rule(graded_unit(order, kGradingLevels), b, a);
                const Rule1D ry = map_rule(graded_unit(order, kGradingLevels), b, b + width);
                for (std::size_t ix = 0; ix < rx.x.size(); ++ix) {
                    const double gx = g(rx.x[ix]);
                    long double row = 0.0L;
                    for (std::size_t iy = 0; iy < ry.x.size(); ++iy) {
                        row += ry.w[iy] * g(ry.x[iy]) * kernel(ry.x[iy] - rx.x[ix]);
                    }
                    off += rx.w[ix] * gx * row;
                }
            } else {
                const Rule1D& rx = rules[I];
                const Rule1D& ry = rules[J];
                for (int ix = 0; ix < order; ++ix) {
                    long double row = 0.0L;
                    for (int iy = 0; iy < order; ++iy) {
                        row += ry.w[iy] * gv[J][iy] * kernel(ry.x[iy] - rx.x[ix]);
                    }
                    off += rx.w[ix] * gv[I][ix] * row;
                }
            }
            total += 2.0L * off;
        }
    }
    double value = static_cast<double>(total);
    if (subtract) {
        value += log_moment_term(g, h);
    }
    return value;
}

} // namespace

Polynomial autocorrelation(const Polynomial& g, double half_length) {
    const double h = half_length;
    const auto& gc = g.coeffs();
    const int deg = g.degree();
    // g(x + r) = sum_m x^m P_m(r)
    std::vector<Polynomial> pm(deg + 1);
    for (int m = 0; m <= deg; ++m) {
        std::vector<double> c(deg - m + 1, 0.0);
        for (int j = m; j <= deg; ++j) {
            c[j - m] += gc[j] * binomial(j, m);
        }
        pm[m] = Polynomial(std::move(c));
    }
    // product with g(x): coefficient polynomials Q_n(r) of x^n
    std::vector<Polynomial> qn(2 * deg + 1, Polynomial{0.0});
    for (int m = 0; m <= deg; ++m) {
        for (int l = 0; l <= deg; ++l) {
            qn[m + l] += gc[l] * pm[m];
        }
    }
    // antiderivative in x, evaluated at x = h - r and x = -h
    Polynomial upper{0.0}, lower{0.0};
    const Polynomial top{h, -1.0};
    Polynomial top_pow{1.0};
    double low_pow = 1.0;
    for (std::size_t n = 0; n < qn.size(); ++n) {
        top_pow = top_pow * top;
        low_pow *= -h;
        const Polynomial rn = qn[n] * (1.0 / static_cast<double>(n + 1));
        upper += rn * top_pow;
        lower += rn * low_pow;
    }
    return upper - lower;
}

double log_moment_term(const Polynomial& g, double half_length) {
    const Polynomial a = autocorrelation(g, half_length);
    const double L = 2.0 * half_length;
    const double lnL = std::log(L);
    long double sum = 0.0L;
    double lp = L;
    for (int k = 0; k <= a.degree(); ++k) {
        // int_0^L r^k ln r dr = L^(k+1) (ln L/(k+1) - 1/(k+1)^2)
        const double kk = k + 1.0;
        sum += a.coeff(k) * lp * (lnL / kk - 1.0 / (kk * kk));
        lp *= L;
    }
    return kTwoOverPi * 2.0 * static_cast<double>(sum);
}

WaveResistanceValue vossers_integral(const Polynomial& s2, double half_length, double K, const QuadratureSpec& spec) {
    spec.validate();
    if (!(K > 0.0)) {
        throw DomainError(fmt::format("K must be positive (got {})", K));
    }
    const double coarse =
        integrate_panels(s2, half_length, K, spec.panels_per_axis, spec.gauss_order, spec.singularity_treatment);
    const double fine =
        integrate_panels(s2, half_length, K, 2 * spec.panels_per_axis, spec.gauss_order, spec.singularity_treatment);
    WaveResistanceValue v;
    v.value = fine;
    v.K = K;
    v.quadrature_error_estimate = std::abs(fine - coarse);
    v.converged = std::isfinite(fine) && v.quadrature_error_estimate <= spec.tolerance * std::abs(fine);
    return v;
}

WaveResistanceValue vossers_integral(const HullParams& params, double K, const QuadratureSpec& spec) {
    const Polynomial s2 = sac_polynomial(params).derivative().derivative();
    return vossers_integral(s2, 0.5 * params.L, K, spec);
}

double log_kernel_term(const HullParams& params, double K) {
    if (!(K > 0.0)) {
        throw DomainError(fmt::format("K must be positive (got {})", K));
    }
    const Polynomial g = sac_polynomial(params).derivative().derivative();
    const double L = params.L;
    const Polynomial a = autocorrelation(g, 0.5 * L);
    auto f = [&](double r) { return a(r) * std::log(r) * bessel_j0(K * r); };
    constexpr int kOrder = 20;
    long double sum = 0.0L;
    const double split = L / 16.0;
    double hi = split;
    for (int j = 0; j <= 24; ++j) {
        const double lo = (j == 24) ? 0.0 : hi * 0.2;
        sum += integrate_gauss(f, lo, hi, kOrder);
        hi = lo;
    }
    constexpr int kPanels = 30;
    for (int p = 0; p < kPanels; ++p) {
        const double lo = split + (L - split) * p / kPanels;
        const double up = split + (L - split) * (p + 1) / kPanels;
        sum += integrate_gauss(f, lo, up, kOrder);
    }
    return 2.0 * kTwoOverPi * static_cast<double>(sum);
}

DecompositionResult decomposition_check(const HullParams& params, double K, int n, const QuadratureSpec& spec) {
    DecompositionResult d;
    d.vossers = vossers_integral(params, K, spec).value;
    d.log_term = log_kernel_term(params, K);
    SlenderBodyConfig cfg;
    cfg.K = K;
    cfg.n = n;
    d.series = g_operator(params, cfg).value;
    d.residual = d.vossers - (d.log_term + d.series);
    return d;
}

} // namespace hullgsa
