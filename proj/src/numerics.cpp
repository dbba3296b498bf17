#include "hullgsa/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "hullgsa/errors.hpp"

namespace hullgsa {

double binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) {
        return 0.0;
    }
    k = std::min(k, n - k);
    if (n <= 20) {
        std::uint64_t r = 1;
        for (int i = 1; i <= k; ++i) {
            r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
        }
        return static_cast<double>(r);
    }
    return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

double log_factorial(int n) {
    return std::lgamma(n + 1.0);
}

long double half_beta(int a, int n) {
    // (1/2) B(x, n+1) with x = (a+1)/2, written as 1/(a+1) * prod_{j=1..n} j / (x + j).
    const long double x = 0.5L * (a + 1);
    long double r = 1.0L / (a + 1);
    for (int j = 1; j <= n; ++j) {
        r *= static_cast<long double>(j) / (x + j);
    }
    return r;
}

namespace {

// Returns (P_n(x), P_{n-1}(x)).
std::pair<double, double> legendre_pair(int n, double x) {
    double p0 = 1.0;
    double p1 = x;
    if (n == 0) {
        return {1.0, 0.0};
    }
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return {p1, p0};
}

GaussRule compute_rule(int n) {
    GaussRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    if (n == 1) {
        rule.weights[0] = 2.0;
        return rule;
    }
    for (int i = 0; i < n / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [pn, pm] = legendre_pair(n, x);
            const double dp = n * (x * pn - pm) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        const auto [pn, pm] = legendre_pair(n, x);
        const double dp = n * (x * pn - pm) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        const double dp = n * legendre_pair(n, 0.0).second;
        rule.weights[n / 2] = 2.0 / (dp * dp);
    }
    return rule;
}

} // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1 || n > 512) {
        throw DomainError("gauss_legendre: order must be in [1, 512]");
    }
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) {
        slot = std::make_unique<GaussRule>(compute_rule(n));
    }
    return *slot;
}

double median(std::span<const double> values) {
    if (values.empty()) {
        throw DomainError("median of empty list");
    }
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

} // namespace hullgsa
