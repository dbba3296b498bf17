#include "hullgsa/moment_engine.hpp"

#include <cmath>
#include <cstdint>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "hullgsa/errors.hpp"
#include "hullgsa/numerics.hpp"

namespace hullgsa {

namespace {

// Table of half_beta(a, n) built by the recurrence in n; covers every argument
// reached by SSV orders up to ~20, larger ones fall back to the product form.
constexpr int kBetaA = 256;
constexpr int kBetaN = 128;

const std::vector<long double>& beta_table() {
    static const std::vector<long double> table = [] {
        std::vector<long double> t(static_cast<std::size_t>(kBetaA) * kBetaN);
        for (int a = 0; a < kBetaA; ++a) {
            long double v = 1.0L / (a + 1);
            const long double x = 0.5L * (a + 1);
            t[static_cast<std::size_t>(a) * kBetaN] = v;
            for (int n = 1; n < kBetaN; ++n) {
                v *= static_cast<long double>(n) / (x + n);
                t[static_cast<std::size_t>(a) * kBetaN + n] = v;
            }
        }
        return t;
    }();
    return table;
}

long double hb(int a, int n) {
    if (a < kBetaA && n < kBetaN) {
        return beta_table()[static_cast<std::size_t>(a) * kBetaN + n];
    }
    return half_beta(a, n);
}

long double ipow(long double base, int e) {
    long double r = 1.0L;
    for (int i = 0; i < e; ++i) {
        r *= base;
    }
    return r;
}

constexpr int kMaxExponent = 64;

std::uint64_t key3(int a, int b, int c) {
    return (static_cast<std::uint64_t>(a) << 40) | (static_cast<std::uint64_t>(b) << 20) |
           static_cast<std::uint64_t>(c);
}

} // namespace

void MomentIndex::validate() const {
    if (p < 0 || q < 0 || r < 0) {
        throw DomainError(fmt::format("moment index ({}, {}, {}) has a negative exponent", p, q, r));
    }
    if (p > kMaxExponent || q > kMaxExponent || r > kMaxExponent) {
        throw DomainError(fmt::format("moment index ({}, {}, {}) exceeds the supported range", p, q, r));
    }
}

MomentEvaluator::MomentEvaluator(const HullParams& params) : params_(params) {
    params_.validate();
}

// X for exponent p, Q = q+1 and c3-power i1:
//   integral over [0,1] of xi^p (1-xi^2)^(Q+3 i1) (1 + c1 xi^2 + c2 xi^4)^(Q-i1)
long double MomentEvaluator::x_factor(int p, int big_q, int i1) {
    auto [it, fresh] = x_memo_.try_emplace(key3(p, big_q, i1));
    if (!fresh) {
        return it->second;
    }
    const int m = big_q - i1;
    const int n = big_q + 3 * i1;
    const long double c1 = params_.c1;
    const long double c2 = params_.c2;
    long double sum = 0.0L;
    for (int i4 = 0; i4 <= m; ++i4) {
        long double inner = 0.0L;
        for (int i5 = 0; i5 <= i4; ++i5) {
            inner += binomial(i4, i5) * ipow(c1, i5) * ipow(c2, i4 - i5) * hb(p + 4 * i4 - 2 * i5, n);
        }
        sum += binomial(m, i4) * inner;
    }
    it->second = sum;
    return sum;
}

// integral over [0,1] of zeta^a (1-zeta^8)^i1 (1-zeta^2)^m
long double MomentEvaluator::z_factor(int a, int i1, int m) {
    auto [it, fresh] = z_memo_.try_emplace(key3(a, i1, m));
    if (!fresh) {
        return it->second;
    }
    long double sum = 0.0L;
    for (int i6 = 0; i6 <= i1; ++i6) {
        const long double term = binomial(i1, i6) * hb(a + 8 * i6, m);
        sum += (i6 % 2 == 0) ? term : -term;
    }
    it->second = sum;
    return sum;
}

// Same with zeta^(2 i1) (zeta - C_z/T)^r in place of zeta^(r + 2 i1).
long double MomentEvaluator::z_factor_translated(int r, int i1, int m) {
    auto [it, fresh] = zt_memo_.try_emplace(key3(r, i1, m));
    if (!fresh) {
        return it->second;
    }
    if (cz_ratio_ < 0.0L) {
        cz_ratio_ = sum_over_c3(0, 0, 1, false) / sum_over_c3(0, 0, 0, false);
    }
    long double sum = 0.0L;
    long double shift_pow = 1.0L;
    for (int j = 0; j <= r; ++j) {
        sum += binomial(r, j) * shift_pow * z_factor(r - j + 2 * i1, i1, m);
        shift_pow *= -cz_ratio_;
    }
    it->second = sum;
    return sum;
}

// sum over i1 of C(q+1, i1) c3^i1 X Z, the bracketed part of the closed form.
long double MomentEvaluator::sum_over_c3(int p, int q, int r, bool about_centroid) {
    const int big_q = q + 1;
    long double sum = 0.0L;
    long double c3_pow = 1.0L;
    for (int i1 = 0; i1 <= big_q; ++i1) {
        if (i1 > 0) {
            c3_pow *= params_.c3;
            if (c3_pow == 0.0L) {
                break;
            }
        }
        const int m = big_q - i1;
        const long double z = about_centroid ? z_factor_translated(r, i1, m) : z_factor(r + 2 * i1, i1, m);
        sum += binomial(big_q, i1) * c3_pow * x_factor(p, big_q, i1) * z;
    }
    return sum;
}

double MomentEvaluator::raw(const MomentIndex& idx) {
    idx.validate();
    if (idx.p % 2 == 1 || idx.q % 2 == 1) {
        return 0.0;
    }
    const long double pre = ipow(0.5L * params_.L, idx.p + 1) * ipow(0.5L * params_.B, idx.q + 1) *
                            ipow(static_cast<long double>(params_.T), idx.r + 1) * 4.0L / (idx.q + 1);
    return static_cast<double>(pre * sum_over_c3(idx.p, idx.q, idx.r, false));
}

double MomentEvaluator::translated(const MomentIndex& idx) {
    idx.validate();
    if (idx.p % 2 == 1 || idx.q % 2 == 1) {
        return 0.0;
    }
    if (idx.r == 1) {
        return 0.0;
    }
    const long double pre = ipow(0.5L * params_.L, idx.p + 1) * ipow(0.5L * params_.B, idx.q + 1) *
                            ipow(static_cast<long double>(params_.T), idx.r + 1) * 4.0L / (idx.q + 1);
    return static_cast<double>(pre * sum_over_c3(idx.p, idx.q, idx.r, true));
}

double MomentEvaluator::volume() {
    return raw({0, 0, 0});
}

double MomentEvaluator::centroid_z() {
    return raw({0, 0, 1}) / raw({0, 0, 0});
}

double MomentEvaluator::invariant(const MomentIndex& idx, InvariantExponent exponent) {
    const double v = volume();
    if (!(v > 0.0)) {
        throw NumericError("invariant moment of a zero-volume hull");
    }
    const int s = idx.order();
    const double e = exponent == InvariantExponent::Printed ? (s + 1) / 3.0 : (s + 3) / 3.0;
    return translated(idx) / std::pow(v, e);
}

MomentValue closed_form_moment(const HullParams& params, const MomentIndex& idx) {
    MomentEvaluator ev(params);
    return {MomentKind::Raw, idx, ev.raw(idx)};
}

MomentValue translated_moment(const HullParams& params, const MomentIndex& idx) {
    MomentEvaluator ev(params);
    return {MomentKind::Translated, idx, ev.translated(idx)};
}

MomentValue invariant_moment(const HullParams& params, const MomentIndex& idx, InvariantExponent exponent) {
    MomentEvaluator ev(params);
    return {MomentKind::Invariant, idx, ev.invariant(idx, exponent)};
}

double moment_scale(const HullParams& params, const MomentIndex& idx) {
    return std::pow(params.L, idx.p + 1) * std::pow(params.B, idx.q + 1) * std::pow(params.T, idx.r + 1);
}

std::size_t moment_slot(const MomentIndex& idx) {
    const long long s = idx.order();
    long long slot = (s + 2) * (s + 1) * s / 6; // triples of order < s
    for (int pp = 0; pp < idx.p; ++pp) {
        slot += s - pp + 1;
    }
    return static_cast<std::size_t>(slot + idx.q);
}

std::vector<double> mesh_moments(const TriangleMesh& mesh, int max_order) {
    if (max_order < 0) {
        throw DomainError("mesh_moments: negative order");
    }
    // Integrand x^(p+1) y^q z^r has degree <= max_order + 1 on each triangle; the
    // conical product rule with n points per direction is exact to degree 2n - 2.
    const int n = (max_order + 4) / 2;
    const GaussRule& g = gauss_legendre(n);
    struct Node {
        double u, v, w;
    };
    std::vector<Node> nodes;
    for (int i = 0; i < n; ++i) {
        const double s = 0.5 * (g.nodes[i] + 1.0);
        for (int j = 0; j < n; ++j) {
            const double t = 0.5 * (g.nodes[j] + 1.0);
            nodes.push_back({s, t * (1.0 - s), 0.25 * g.weights[i] * g.weights[j] * (1.0 - s)});
        }
    }

    const std::size_t count = static_cast<std::size_t>((max_order + 3) * (max_order + 2) * (max_order + 1) / 6);
    std::vector<double> acc(count, 0.0);
    std::vector<double> px(max_order + 2), py(max_order + 1), pz(max_order + 1);
    for (const auto& tri : mesh.triangles) {
        const Vec3& a = mesh.vertices[tri[0]];
        const Vec3& b = mesh.vertices[tri[1]];
        const Vec3& c = mesh.vertices[tri[2]];
        const double e1y = b[1] - a[1], e1z = b[2] - a[2];
        const double e2y = c[1] - a[1], e2z = c[2] - a[2];
        const double nx = e1y * e2z - e1z * e2y;
        if (nx == 0.0) {
            continue;
        }
        for (const Node& nd : nodes) {
            const double x = a[0] + nd.u * (b[0] - a[0]) + nd.v * (c[0] - a[0]);
            const double y = a[1] + nd.u * e1y + nd.v * e2y;
            const double z = a[2] + nd.u * e1z + nd.v * e2z;
            px[0] = nd.w * nx;
            py[0] = 1.0;
            pz[0] = 1.0;
            for (int k = 1; k <= max_order + 1; ++k) {
                px[k] = px[k - 1] * x;
            }
            for (int k = 1; k <= max_order; ++k) {
                py[k] = py[k - 1] * y;
                pz[k] = pz[k - 1] * z;
            }
            std::size_t slot = 0;
            for (int s = 0; s <= max_order; ++s) {
                for (int p = 0; p <= s; ++p) {
                    for (int q = 0; q <= s - p; ++q) {
                        acc[slot++] += px[p + 1] * py[q] * pz[s - p - q];
                    }
                }
            }
        }
    }
    std::size_t slot = 0;
    for (int s = 0; s <= max_order; ++s) {
        for (int p = 0; p <= s; ++p) {
            for (int q = 0; q <= s - p; ++q) {
                acc[slot++] /= (p + 1);
            }
        }
    }
    return acc;
}

namespace {

void require_positive_volume(double volume) {
    if (!(volume > 0.0)) {
        throw DomainError(fmt::format("mesh encloses non-positive volume {}: open or inverted", volume));
    }
}

} // namespace

MomentValue mesh_moment(const TriangleMesh& mesh, const MomentIndex& idx) {
    idx.validate();
    const std::vector<double> m = mesh_moments(mesh, idx.order());
    require_positive_volume(m[0]);
    return {MomentKind::Raw, idx, m[moment_slot(idx)]};
}

MomentValue mesh_translated_moment(const TriangleMesh& mesh, const MomentIndex& idx) {
    idx.validate();
    const std::vector<double> first = mesh_moments(mesh, 1);
    require_positive_volume(first[0]);
    const Vec3 centroid{first[moment_slot({1, 0, 0})] / first[0], first[moment_slot({0, 1, 0})] / first[0],
                        first[moment_slot({0, 0, 1})] / first[0]};
    const TriangleMesh shifted = mesh.translated({-centroid[0], -centroid[1], -centroid[2]});
    const std::vector<double> m = mesh_moments(shifted, idx.order());
    return {MomentKind::Translated, idx, m[moment_slot(idx)]};
}

std::vector<MomentIndex> ssv_indices(int N) {
    if (N < 1) {
        throw DomainError(fmt::format("SSV order must be >= 1 (got {})", N));
    }
    std::vector<MomentIndex> out{{0, 0, 0}};
    for (int s = 2; s <= N; ++s) {
        for (int p = 0; p <= s; ++p) {
            for (int q = 0; q <= s - p; ++q) {
                out.push_back({p, q, s - p - q});
            }
        }
    }
    return out;
}

long long ssv_cardinality(int N) {
    // N^3/6 + N^2 + 11N/6 - 2, kept in integers
    const long long n = N;
    return (n * n * n + 6 * n * n + 11 * n) / 6 - 2;
}

SSVector ssv(const HullParams& params, int N, InvariantExponent exponent) {
    SSVector v;
    v.order = N;
    v.indices = ssv_indices(N);
    v.entries.reserve(v.indices.size());
    MomentEvaluator ev(params);
    for (const MomentIndex& idx : v.indices) {
        v.entries.push_back(ev.invariant(idx, exponent));
    }
    return v;
}

void write_ssv_csv(const SSVector& v, std::ostream& out) {
    fmt::print(out, "p,q,r,value\n");
    for (std::size_t i = 0; i < v.indices.size(); ++i) {
        const MomentIndex& idx = v.indices[i];
        fmt::print(out, "{},{},{},{:.17g}\n", idx.p, idx.q, idx.r, v.entries[i]);
    }
    if (!out) {
        throw IoError("failed writing SSV stream");
    }
}

} // namespace hullgsa
