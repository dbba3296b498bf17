#include "hullgsa/hull_modeller.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <utility>

#include <Eigen/Dense>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "hullgsa/errors.hpp"
#include "hullgsa/numerics.hpp"

namespace hullgsa {

void HullParams::validate() const {
    if (!(L > 0.0) || !(B > 0.0) || !(T > 0.0)) {
        throw DomainError(fmt::format("hull dimensions must be positive (L={}, B={}, T={})", L, B, T));
    }
    for (double c : {c1, c2, c3}) {
        if (!(c >= 0.0 && c <= 1.0)) {
            throw DomainError(fmt::format("shape coefficient {} outside [0, 1]", c));
        }
    }
}

HullParams HullParams::with_shape(double c1_, double c2_, double c3_) const {
    HullParams p = *this;
    p.c1 = c1_;
    p.c2 = c2_;
    p.c3 = c3_;
    return p;
}

namespace {

void check_unit(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw DomainError(fmt::format("{} = {} outside [0, 1]", name, v));
    }
}

void check_station(const HullParams& params, double x) {
    const double half = 0.5 * params.L;
    if (!(x >= -half && x <= half)) {
        throw DomainError(fmt::format("x = {} outside [-L/2, L/2] = [{}, {}]", x, -half, half));
    }
}

double triple_det(const Vec3& a, const Vec3& b, const Vec3& c) {
    return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
           a[2] * (b[0] * c[1] - b[1] * c[0]);
}

double bernstein(int n, int i, double t) {
    return binomial(n, i) * std::pow(t, i) * std::pow(1.0 - t, n - i);
}

} // namespace

double TriangleMesh::signed_volume() const {
    double v = 0.0;
    for (const auto& tri : triangles) {
        v += triple_det(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
    }
    return v / 6.0;
}

bool TriangleMesh::is_closed_and_oriented() const {
    // Directed edge counts; a closed, consistently oriented surface has each
    // directed edge exactly once and its reverse exactly once.
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> directed;
    for (const auto& tri : triangles) {
        for (int e = 0; e < 3; ++e) {
            const std::uint32_t a = tri[e];
            const std::uint32_t b = tri[(e + 1) % 3];
            if (a == b) {
                return false;
            }
            ++directed[{a, b}];
        }
    }
    for (const auto& [edge, count] : directed) {
        if (count != 1) {
            return false;
        }
        auto rev = directed.find({edge.second, edge.first});
        if (rev == directed.end() || rev->second != 1) {
            return false;
        }
    }
    return true;
}

TriangleMesh TriangleMesh::translated(const Vec3& offset) const {
    TriangleMesh out = *this;
    for (Vec3& v : out.vertices) {
        for (int k = 0; k < 3; ++k) {
            v[k] += offset[k];
        }
    }
    return out;
}

Vec3 BezierNet::evaluate(double xi, double zeta) const {
    std::array<double, kDegreeXi + 1> bu{};
    std::array<double, kDegreeZeta + 1> bv{};
    for (int i = 0; i <= kDegreeXi; ++i) {
        bu[i] = bernstein(kDegreeXi, i, xi);
    }
    for (int j = 0; j <= kDegreeZeta; ++j) {
        bv[j] = bernstein(kDegreeZeta, j, zeta);
    }
    Vec3 p{0.0, 0.0, 0.0};
    for (int i = 0; i <= kDegreeXi; ++i) {
        for (int j = 0; j <= kDegreeZeta; ++j) {
            const double w = bu[i] * bv[j];
            for (int k = 0; k < 3; ++k) {
                p[k] += w * control_points[i][j][k];
            }
        }
    }
    return p;
}

double half_breadth_ratio(const HullParams& params, double xi, double zeta) {
    const double x2 = xi * xi;
    const double z2 = zeta * zeta;
    const double z8 = z2 * z2 * z2 * z2;
    const double a = 1.0 - x2;
    const double a4 = a * a * a * a;
    return (1.0 - z2) * a * (1.0 + params.c1 * x2 + params.c2 * x2 * x2) + params.c3 * z2 * (1.0 - z8) * a4;
}

SurfacePoint eval_surface(const HullParams& params, double xi, double zeta) {
    params.validate();
    check_unit(xi, "xi");
    check_unit(zeta, "zeta");
    const double eta = half_breadth_ratio(params, xi, zeta);
    return {xi, zeta, {0.5 * params.L * xi, 0.5 * params.B * eta, params.T * zeta}};
}

double sac(const HullParams& params, double x) {
    params.validate();
    check_station(params, x);
    const double xi = 2.0 * x / params.L;
    const double x2 = xi * xi;
    const double a = 1.0 - x2;
    return params.B * params.T *
           ((2.0 / 3.0) * a * (1.0 + params.c1 * x2 + params.c2 * x2 * x2) + (8.0 * params.c3 / 33.0) * a * a * a * a);
}

Polynomial sac_polynomial(const HullParams& params) {
    params.validate();
    // In xi, then substitute xi = 2x/L.
    const Polynomial a{1.0, 0.0, -1.0};
    const Polynomial shape{1.0, 0.0, params.c1, 0.0, params.c2};
    Polynomial s = (2.0 / 3.0) * (a * shape) + (8.0 * params.c3 / 33.0) * a.pow(4);
    s *= params.B * params.T;
    return s.compose_affine(2.0 / params.L, 0.0);
}

SacDerivatives sac_derivatives(const HullParams& params, double x) {
    params.validate();
    check_station(params, x);
    const double xi = 2.0 * x / params.L;
    const double x2 = xi * xi;
    const double a = 1.0 - x2;
    const double dxi = -(4.0 * xi / 3.0) * (1.0 + params.c1 * x2 + params.c2 * x2 * x2) +
                       (2.0 / 3.0) * a *
                           (2.0 * params.c1 * xi + 4.0 * params.c2 * x2 * xi - 32.0 * params.c3 * xi * a * a / 11.0);
    SacDerivatives d;
    d.first = 2.0 * params.B * params.T / params.L * dxi;
    d.second = sac_polynomial(params).derivative().derivative()(x);
    return d;
}

TriangleMesh tessellate(const HullParams& params, int n_xi, int n_zeta) {
    params.validate();
    if (n_xi < 2 || n_zeta < 2) {
        throw DomainError(fmt::format("tessellate: grid counts must be >= 2 (got {} x {})", n_xi, n_zeta));
    }
    // Signed stations k = 0..nk-1 run from xi = -1 to 1; the values are mirrored
    // exactly so fore and aft halves are bitwise symmetric.
    const int nk = 2 * n_xi - 1;
    const int mid = n_xi - 1;
    const int last_j = n_zeta - 1;
    auto station = [&](int k) {
        const int d = k - mid;
        const double u = static_cast<double>(d < 0 ? -d : d) / mid;
        return d < 0 ? -u : u;
    };

    TriangleMesh mesh;
    const std::size_t grid = static_cast<std::size_t>(nk) * n_zeta;
    std::vector<std::uint32_t> plus(grid), minus(grid);
    std::vector<char> on_centreplane(grid, 0);
    auto at = [&](int k, int j) { return static_cast<std::size_t>(k) * n_zeta + j; };

    for (int k = 0; k < nk; ++k) {
        const double xi = station(k);
        for (int j = 0; j < n_zeta; ++j) {
            const double zeta = static_cast<double>(j) / last_j;
            const bool shared = (k == 0 || k == nk - 1 || j == last_j);
            const double eta = shared ? 0.0 : half_breadth_ratio(params, xi, zeta);
            const double x = 0.5 * params.L * xi;
            const double y = 0.5 * params.B * eta;
            const double z = params.T * zeta;
            plus[at(k, j)] = static_cast<std::uint32_t>(mesh.vertices.size());
            mesh.vertices.push_back({x, y, z});
            if (shared) {
                minus[at(k, j)] = plus[at(k, j)];
                on_centreplane[at(k, j)] = 1;
            } else {
                minus[at(k, j)] = static_cast<std::uint32_t>(mesh.vertices.size());
                mesh.vertices.push_back({x, -y, z});
            }
        }
    }

    for (int k = 0; k + 1 < nk; ++k) {
        for (int j = 0; j + 1 < n_zeta; ++j) {
            const std::size_t ia = at(k, j), ib = at(k, j + 1), ic = at(k + 1, j), id = at(k + 1, j + 1);
            // Diagonals are mirrored about amidships so the mesh keeps the hull's
            // fore-aft symmetry (odd-p moments then cancel exactly).
            std::array<std::array<std::size_t, 3>, 2> cell;
            if (k < mid) {
                cell = {{{ia, ib, ic}, {ib, id, ic}}};
            } else {
                cell = {{{ia, ib, id}, {ia, id, ic}}};
            }
            for (const auto& t : cell) {
                // Triangles with every vertex on y = 0 would appear on both sides with
                // opposite orientation; they enclose nothing and are dropped.
                if (on_centreplane[t[0]] && on_centreplane[t[1]] && on_centreplane[t[2]]) {
                    continue;
                }
                mesh.triangles.push_back({plus[t[0]], plus[t[1]], plus[t[2]]});
                mesh.triangles.push_back({minus[t[0]], minus[t[2]], minus[t[1]]});
            }
        }
    }

    // Waterplane cap (z = 0), fanned from the origin with outward normal -z.
    const auto centre = static_cast<std::uint32_t>(mesh.vertices.size());
    mesh.vertices.push_back({0.0, 0.0, 0.0});
    std::vector<std::uint32_t> loop;
    for (int k = 0; k < nk; ++k) {
        loop.push_back(plus[at(k, 0)]);
    }
    for (int k = nk - 2; k >= 1; --k) {
        loop.push_back(minus[at(k, 0)]);
    }
    for (std::size_t m = 0; m < loop.size(); ++m) {
        mesh.triangles.push_back({centre, loop[m], loop[(m + 1) % loop.size()]});
    }

    // Drop vertices orphaned by the flat-triangle rule.
    std::vector<std::uint32_t> remap(mesh.vertices.size(), UINT32_MAX);
    std::vector<Vec3> kept;
    kept.reserve(mesh.vertices.size());
    for (auto& tri : mesh.triangles) {
        for (auto& v : tri) {
            if (remap[v] == UINT32_MAX) {
                remap[v] = static_cast<std::uint32_t>(kept.size());
                kept.push_back(mesh.vertices[v]);
            }
            v = remap[v];
        }
    }
    mesh.vertices = std::move(kept);
    return mesh;
}

BezierNet extract_bezier(const HullParams& params) {
    params.validate();
    constexpr int nu = BezierNet::kDegreeXi + 1;
    constexpr int nv = BezierNet::kDegreeZeta + 1;
    constexpr int n = nu * nv;

    Eigen::MatrixXd A(n, n);
    Eigen::MatrixXd rhs(n, 3);
    for (int a = 0; a < nu; ++a) {
        for (int b = 0; b < nv; ++b) {
            const double xi = static_cast<double>(a) / BezierNet::kDegreeXi;
            const double zeta = static_cast<double>(b) / BezierNet::kDegreeZeta;
            const int row = a * nv + b;
            for (int i = 0; i < nu; ++i) {
                const double bu = bernstein(BezierNet::kDegreeXi, i, xi);
                for (int j = 0; j < nv; ++j) {
                    A(row, i * nv + j) = bu * bernstein(BezierNet::kDegreeZeta, j, zeta);
                }
            }
            const SurfacePoint sp = eval_surface(params, xi, zeta);
            for (int k = 0; k < 3; ++k) {
                rhs(row, k) = sp.position[k];
            }
        }
    }

    const Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible()) {
        throw NumericError("extract_bezier: interpolation matrix is singular");
    }
    const Eigen::MatrixXd sol = lu.solve(rhs);
    const double residual = (A * sol - rhs).norm();
    if (!(residual <= 1e-10 * (1.0 + rhs.norm()))) {
        throw NumericError(fmt::format("extract_bezier: interpolation residual {}", residual));
    }

    BezierNet net;
    for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nv; ++j) {
            for (int k = 0; k < 3; ++k) {
                net.control_points[i][j][k] = sol(i * nv + j, k);
            }
        }
    }
    return net;
}

void write_stl(const TriangleMesh& mesh, std::ostream& out, const std::string& solid_name) {
    fmt::print(out, "solid {}\n", solid_name);
    for (const auto& tri : mesh.triangles) {
        const Vec3& a = mesh.vertices[tri[0]];
        const Vec3& b = mesh.vertices[tri[1]];
        const Vec3& c = mesh.vertices[tri[2]];
        const Vec3 u{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
        const Vec3 v{c[0] - a[0], c[1] - a[1], c[2] - a[2]};
        Vec3 nrm{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
        const double len = std::sqrt(nrm[0] * nrm[0] + nrm[1] * nrm[1] + nrm[2] * nrm[2]);
        if (len > 0.0) {
            for (double& c_ : nrm) {
                c_ /= len;
            }
        }
        fmt::print(out, "  facet normal {:.9g} {:.9g} {:.9g}\n    outer loop\n", nrm[0], nrm[1], nrm[2]);
        for (const Vec3* p : {&a, &b, &c}) {
            fmt::print(out, "      vertex {:.17g} {:.17g} {:.17g}\n", (*p)[0], (*p)[1], (*p)[2]);
        }
        fmt::print(out, "    endloop\n  endfacet\n");
    }
    fmt::print(out, "endsolid {}\n", solid_name);
    if (!out) {
        throw IoError("failed writing STL stream");
    }
}

void write_indexed_mesh(const TriangleMesh& mesh, std::ostream& out) {
    fmt::print(out, "vertices {}\n", mesh.vertices.size());
    for (const Vec3& v : mesh.vertices) {
        fmt::print(out, "{:.17g} {:.17g} {:.17g}\n", v[0], v[1], v[2]);
    }
    fmt::print(out, "triangles {}\n", mesh.triangles.size());
    for (const auto& t : mesh.triangles) {
        fmt::print(out, "{} {} {}\n", t[0], t[1], t[2]);
    }
    if (!out) {
        throw IoError("failed writing mesh stream");
    }
}

void write_bezier_net(const BezierNet& net, std::ostream& out) {
    fmt::print(out, "degrees {} {}\n", BezierNet::kDegreeXi, BezierNet::kDegreeZeta);
    for (int i = 0; i <= BezierNet::kDegreeXi; ++i) {
        for (int j = 0; j <= BezierNet::kDegreeZeta; ++j) {
            const Vec3& p = net.control_points[i][j];
            fmt::print(out, "{} {} {:.17g} {:.17g} {:.17g}\n", i, j, p[0], p[1], p[2]);
        }
    }
    if (!out) {
        throw IoError("failed writing Bezier net stream");
    }
}

} // namespace hullgsa
