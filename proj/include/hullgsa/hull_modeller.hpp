#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hullgsa/polynomial.hpp"

namespace hullgsa {

using Vec3 = std::array<double, 3>;

/// Modified Wigley hull design point: main dimensions plus three shape coefficients.
struct HullParams {
    double L = 1.0;
    double B = 0.0996;
    double T = 0.13775;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;

    /// Throws DomainError unless L, B, T > 0 and c1, c2, c3 in [0, 1].
    void validate() const;

    /// Same dimensions, new shape coefficients.
    HullParams with_shape(double c1_, double c2_, double c3_) const;
};

struct SurfacePoint {
    double xi = 0.0;
    double zeta = 0.0;
    Vec3 position{};
};

struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;

    /// Divergence-theorem volume; positive for outward orientation.
    double signed_volume() const;

    /// Every undirected edge used by exactly two triangles, once in each direction.
    bool is_closed_and_oriented() const;

    TriangleMesh translated(const Vec3& offset) const;
};

/// Tensor-product Bezier patch of degree (8, 10) reproducing the half-length, half-breadth surface.
struct BezierNet {
    static constexpr int kDegreeXi = 8;
    static constexpr int kDegreeZeta = 10;

    // control_points[i][j], i along xi, j along zeta
    std::array<std::array<Vec3, kDegreeZeta + 1>, kDegreeXi + 1> control_points{};

    Vec3 evaluate(double xi, double zeta) const;
};

/// Normalized half-breadth eta(xi, zeta); xi may be signed (eta is even in xi).
double half_breadth_ratio(const HullParams& params, double xi, double zeta);

/// Surface point of the modeller on the unit square (xi, zeta) in [0, 1]^2.
SurfacePoint eval_surface(const HullParams& params, double xi, double zeta);

/// Sectional area curve S(x), x in [-L/2, L/2].
double sac(const HullParams& params, double x);

struct SacDerivatives {
    double first = 0.0;
    double second = 0.0;
};

/// S'(x) from the closed-form derivative; S''(x) from the differentiated SAC polynomial.
SacDerivatives sac_derivatives(const HullParams& params, double x);

/// S as a degree-8 polynomial in x.
Polynomial sac_polynomial(const HullParams& params);

/// Closed watertight mesh of the submerged hull. The quarter surface is sampled on
/// n_xi x n_zeta points over [0,1]^2, mirrored fore-aft and across y = 0, and the
/// waterplane z = 0 is closed with a fan around the origin.
TriangleMesh tessellate(const HullParams& params, int n_xi, int n_zeta);

/// Bernstein control net from interpolation at the uniform nodes (i/8, j/10).
BezierNet extract_bezier(const HullParams& params);

void write_stl(const TriangleMesh& mesh, std::ostream& out, const std::string& solid_name = "hull");
/// "vertices N" / "triangles M" headers followed by one vertex or index triple per line.
void write_indexed_mesh(const TriangleMesh& mesh, std::ostream& out);
void write_bezier_net(const BezierNet& net, std::ostream& out);

} // namespace hullgsa
