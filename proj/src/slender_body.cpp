#include "hullgsa/slender_body.hpp"

#include <cmath>

#include <fmt/format.h>

#include "hullgsa/errors.hpp"
#include "hullgsa/moment_engine.hpp"
#include "hullgsa/numerics.hpp"

namespace hullgsa {

SlenderBodyConfig SlenderBodyConfig::from_froude(double froude, double length, int order) {
    if (!(froude > 0.0) || !(length > 0.0)) {
        throw DomainError(fmt::format("Froude number and length must be positive (Fn={}, L={})", froude, length));
    }
    SlenderBodyConfig cfg;
    cfg.K = 1.0 / (froude * froude * length);
    cfg.n = order;
    return cfg;
}

void SlenderBodyConfig::validate() const {
    if (!(K > 0.0) || !std::isfinite(K)) {
        throw DomainError(fmt::format("K must be positive and finite (got {})", K));
    }
    if (n < 0 || n > kMaxSeriesOrder) {
        throw DomainError(fmt::format("series order must be in [0, {}] (got {})", kMaxSeriesOrder, n));
    }
}

double harmonic(int k) {
    if (k < 0) {
        throw DomainError("harmonic number of negative index");
    }
    double h = 0.0;
    for (int j = 1; j <= k; ++j) {
        h += 1.0 / j;
    }
    return h;
}

double f_coeff(int k, double K) {
    if (k < 0 || !(K > 0.0)) {
        throw DomainError(fmt::format("f_coeff needs k >= 0 and K > 0 (k={}, K={})", k, K));
    }
    const double bracket = std::log(0.5 * K) + kEulerGamma - harmonic(k);
    double magnitude;
    if (k <= 15) {
        double fact = 1.0;
        for (int j = 2; j <= k; ++j) {
            fact *= j;
        }
        magnitude = std::pow(K, 2 * k) / (std::ldexp(1.0, 2 * k - 1) * fact * fact * kPi);
    } else {
        const double log_mag =
            2.0 * k * std::log(K) - (2.0 * k - 1.0) * std::log(2.0) - 2.0 * log_factorial(k) - std::log(kPi);
        magnitude = std::exp(log_mag);
    }
    return (k % 2 == 0 ? 1.0 : -1.0) * magnitude * bracket;
}

SacEnds SacEnds::of(const HullParams& params) {
    params.validate();
    SacEnds e;
    e.half_length = 0.5 * params.L;
    e.s_minus = sac(params, -e.half_length);
    e.s_plus = sac(params, e.half_length);
    e.ds_minus = sac_derivatives(params, -e.half_length).first;
    e.ds_plus = sac_derivatives(params, e.half_length).first;
    return e;
}

double SacEnds::bracket(int N) const {
    const double h = half_length;
    const double hn = std::pow(h, N);
    const double sign_n = (N % 2 == 0) ? 1.0 : -1.0;
    double b = ds_plus * hn - ds_minus * sign_n * hn;
    if (N >= 1) {
        const double hm = std::pow(h, N - 1);
        b -= N * (s_plus * hm + sign_n * s_minus * hm);
    }
    return b;
}

namespace {

// Pascal triangle rows 0..n as exact doubles.
std::vector<std::vector<double>> pascal(int n) {
    std::vector<std::vector<double>> rows(n + 1);
    for (int i = 0; i <= n; ++i) {
        rows[i].assign(i + 1, 1.0);
        for (int j = 1; j < i; ++j) {
            rows[i][j] = rows[i - 1][j - 1] + rows[i - 1][j];
        }
    }
    return rows;
}

// Shared by the public entry points; `beta` holds the brackets for N = 0..2k.
IkTerms assemble(int k, std::span<const double> beta, std::span<const double> m,
                 const std::vector<std::vector<double>>& C, bool keep_coefficients) {
    IkTerms t;
    t.k = k;
    const auto& row = C[2 * k];

    long double ck = 0.0L;
    for (int i = 0; i <= 2 * k; ++i) {
        const long double term = static_cast<long double>(row[i]) * beta[2 * k - i] * beta[i];
        ck += (i % 2 == 0) ? term : -term;
    }
    t.c_k = static_cast<double>(ck);

    long double value = ck;
    for (int i = 0; i <= 2 * k - 2; ++i) {
        const double c = row[i + 2] * (i % 2 == 0 ? 1.0 : -1.0) * (i + 1) * (i + 2) * beta[2 * k - i - 2];
        if (keep_coefficients) {
            t.c_k_i.push_back(c);
        }
        value += 2.0L * c * m[i];
    }
    for (int a = 0; a <= 2 * k - 4; ++a) {
        const int b = 2 * k - 4 - a;
        const double c = row[a + 2] * (a % 2 == 0 ? 1.0 : -1.0) * (a + 1) * (a + 2) * (b + 1) * (b + 2);
        if (keep_coefficients) {
            t.c_k_ij.push_back(c);
        }
        value += static_cast<long double>(c) * m[a] * m[b];
    }
    t.value = static_cast<double>(value);
    return t;
}

std::vector<double> brackets(const SacEnds& ends, int max_n) {
    std::vector<double> beta(max_n + 1);
    for (int n = 0; n <= max_n; ++n) {
        beta[n] = ends.bracket(n);
    }
    return beta;
}

std::vector<double> longitudinal_moments(MomentEvaluator& ev, int count) {
    std::vector<double> m(count);
    for (int i = 0; i < count; ++i) {
        m[i] = ev.raw({i, 0, 0});
    }
    return m;
}

} // namespace

IkTerms assemble_ik(int k, const SacEnds& ends, std::span<const double> moments) {
    if (k < 0) {
        throw DomainError("assemble_ik: negative k");
    }
    if (k >= 1 && moments.size() < static_cast<std::size_t>(2 * k - 1)) {
        throw DomainError(fmt::format("assemble_ik: need moments M_0..M_{} for k = {}", 2 * k - 2, k));
    }
    return assemble(k, brackets(ends, 2 * k), moments, pascal(2 * k), true);
}

IkTerms ik_via_moments(const HullParams& params, int k) {
    MomentEvaluator ev(params);
    const std::vector<double> m = longitudinal_moments(ev, std::max(2 * k - 1, 1));
    return assemble_ik(k, SacEnds::of(params), m);
}

GOperatorResult g_operator(const HullParams& params, const SlenderBodyConfig& cfg) {
    cfg.validate();
    const int max_k = cfg.auto_order ? kAutoOrderCap : cfg.n;
    MomentEvaluator ev(params);
    const std::vector<double> m = longitudinal_moments(ev, std::max(2 * max_k - 1, 1));
    const std::vector<double> beta = brackets(SacEnds::of(params), 2 * max_k);
    static const std::vector<std::vector<double>> table = pascal(2 * kMaxSeriesOrder);

    GOperatorResult r;
    long double sum = 0.0L;
    for (int k = 0; k <= max_k; ++k) {
        const double term = f_coeff(k, cfg.K) * assemble(k, beta, m, table, false).value;
        sum += term;
        r.terms.push_back(term);
        r.order = k;
        r.last_term = std::abs(term);
        if (cfg.auto_order && k > 0 && std::abs(term) < kAutoOrderTolerance * std::abs(static_cast<double>(sum))) {
            break;
        }
    }
    r.value = static_cast<double>(sum);
    return r;
}

double g_majorant(const HullParams& params, double K, int n) {
    const Polynomial s2 = sac_polynomial(params).derivative().derivative();
    const Polynomial s3 = s2.derivative();
    const double h = 0.5 * params.L;
    // max |S''| over the end points and every interior critical point of S''
    double peak = std::max(std::abs(s2(-h)), std::abs(s2(h)));
    constexpr int kScan = 4000;
    double xa = -h;
    double fa = s3(xa);
    for (int i = 1; i <= kScan; ++i) {
        const double xb = -h + params.L * i / kScan;
        const double fb = s3(xb);
        peak = std::max(peak, std::abs(s2(xb)));
        if (fa == 0.0 || fa * fb < 0.0) {
            double lo = xa, hi = xb, flo = fa;
            for (int it = 0; it < 100 && flo != 0.0; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = s3(mid);
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            peak = std::max(peak, std::abs(s2(0.5 * (lo + hi))));
        }
        xa = xb;
        fa = fb;
    }
    double total = 0.0;
    for (int k = 0; k <= n; ++k) {
        total += std::abs(f_coeff(k, K)) * 2.0 * peak * peak * std::pow(params.L, 2 * k + 2) /
                 ((2.0 * k + 1.0) * (2.0 * k + 2.0));
    }
    return total;
}

} // namespace hullgsa
