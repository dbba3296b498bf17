#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "hullgsa/errors.hpp"
#include "hullgsa/hull_modeller.hpp"
#include "hullgsa/moment_engine.hpp"
#include "hullgsa/numerics.hpp"

using namespace hullgsa;

namespace {

HullParams random_hull(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    HullParams p;
    p.c1 = u(rng);
    p.c2 = u(rng);
    p.c3 = u(rng);
    return p;
}

// Sectional area written out independently in extended precision, so that
// second differences are not swamped by rounding.
long double sac_ld(const HullParams& p, long double x) {
    const long double xi = 2.0L * x / p.L;
    const long double a = 1.0L - xi * xi;
    const long double shape = 1.0L + p.c1 * xi * xi + p.c2 * xi * xi * xi * xi;
    return static_cast<long double>(p.B) * p.T * (2.0L / 3.0L * a * shape + 8.0L * p.c3 / 33.0L * a * a * a * a);
}

} // namespace

TEST_CASE("surface evaluation") {
    HullParams p;
    p.c1 = 0.3;
    p.c2 = 0.8;
    p.c3 = 0.5;
    CHECK(eval_surface(p, 1.0, 0.5).position[1] == 0.0);

    HullParams wigley;
    const SurfacePoint s = eval_surface(wigley, 0.5, 0.0);
    CHECK(s.position[1] == doctest::Approx(0.375 * wigley.B).epsilon(1e-15));
    CHECK(s.position[0] == doctest::Approx(0.25));
    CHECK(s.position[2] == 0.0);

    const HullParams full = wigley.with_shape(1.0, 1.0, 1.0);
    CHECK(eval_surface(full, 0.0, 0.0).position[1] == doctest::Approx(full.B / 2));

    CHECK_THROWS_AS(eval_surface(p, 1.2, 0.5), DomainError);
    CHECK_THROWS_AS(eval_surface(p, 0.2, -0.1), DomainError);
    CHECK_THROWS_AS(eval_surface(p.with_shape(1.5, 0, 0), 0.2, 0.1), DomainError);
}

TEST_CASE("half-breadth maximum sits at the deck amidships") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 20; ++t) {
        const HullParams p = random_hull(rng);
        double best = -1.0;
        double arg_xi = -1.0, arg_zeta = -1.0;
        for (int i = 0; i <= 200; ++i) {
            for (int j = 0; j <= 200; ++j) {
                const double eta = half_breadth_ratio(p, i / 200.0, j / 200.0);
                CHECK(eta >= 0.0);
                if (eta > best) {
                    best = eta;
                    arg_xi = i / 200.0;
                    arg_zeta = j / 200.0;
                }
            }
        }
        CHECK(best == doctest::Approx(1.0));
        CHECK(arg_xi == 0.0);
        CHECK(arg_zeta == 0.0);
        CHECK(half_breadth_ratio(p, 0.0, 1.0) == 0.0);
    }
}

TEST_CASE("sectional area matches depth quadrature of the surface") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int t = 0; t < 20; ++t) {
        const HullParams p = random_hull(rng);
        const double x = u(rng) * p.L;
        const double xi = std::abs(2.0 * x / p.L);
        // y(zeta) is a degree-10 polynomial, so 8 Gauss points integrate it exactly
        const double area = 2.0 * integrate_gauss(
                                      [&](double z) { return eval_surface(p, xi, z / p.T).position[1]; }, 0.0, p.T, 8);
        CHECK(sac(p, x) == doctest::Approx(area).epsilon(1e-10));
        CHECK(sac(p, x) == doctest::Approx(sac(p, -x)).epsilon(1e-14));
        CHECK(sac_polynomial(p)(x) == doctest::Approx(sac(p, x)).epsilon(1e-12));
    }
    HullParams p;
    CHECK(sac(p, 0.5) == 0.0);
    CHECK(sac(p, -0.5) == 0.0);
    CHECK(sac(p, 0.0) == doctest::Approx(2.0 / 3.0 * p.B * p.T));
    CHECK_THROWS_AS(sac(p, 0.51), DomainError);
}

TEST_CASE("sectional area derivatives") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-0.45, 0.45);
    for (int t = 0; t < 20; ++t) {
        const HullParams p = random_hull(rng);
        const double end = 8.0 * p.B * p.T / (3.0 * p.L) * (1.0 + p.c1 + p.c2);
        CHECK(sac_derivatives(p, 0.5 * p.L).first == doctest::Approx(-end).epsilon(1e-13));
        CHECK(sac_derivatives(p, -0.5 * p.L).first == doctest::Approx(end).epsilon(1e-13));

        const double x = u(rng) * p.L;
        const double h = 1e-5 * p.L;
        const double fd1 = static_cast<double>((sac_ld(p, x + h) - sac_ld(p, x - h)) / (2 * h));
        const double fd2 = static_cast<double>((sac_ld(p, x + h) - 2 * sac_ld(p, x) + sac_ld(p, x - h)) / (h * h));
        CHECK(static_cast<double>(sac_ld(p, x)) == doctest::Approx(sac(p, x)).epsilon(1e-14));
        const SacDerivatives d = sac_derivatives(p, x);
        const double floor1 = p.B * p.T / p.L;
        const double floor2 = p.B * p.T / (p.L * p.L);
        CHECK(std::abs(d.first - fd1) <= 1e-6 * std::max(std::abs(d.first), floor1));
        CHECK(std::abs(d.second - fd2) <= 1e-6 * std::max(std::abs(d.second), floor2));
    }
    const HullParams full = HullParams{}.with_shape(1.0, 1.0, 0.3);
    CHECK(std::abs(sac_derivatives(full, 0.5).first) == doctest::Approx(8.0 * full.B * full.T / full.L));
}

TEST_CASE("tessellation is closed and converges to the exact volume") {
    HullParams wigley;
    const TriangleMesh mesh = tessellate(wigley, 200, 100);
    CHECK(mesh.is_closed_and_oriented());
    const double exact = 4.0 / 9.0 * wigley.L * wigley.B * wigley.T;
    CHECK(std::abs(mesh.signed_volume() - exact) / exact < 5e-3);

    for (int n : {2, 3}) {
        const TriangleMesh tiny = tessellate(wigley.with_shape(0.4, 0.9, 1.0), n, n);
        CHECK(tiny.is_closed_and_oriented());
        CHECK(tiny.signed_volume() > 0.0);
    }

    std::mt19937_64 rng(3);
    for (int t = 0; t < 5; ++t) {
        const HullParams p = random_hull(rng);
        const double v = closed_form_moment(p, {0, 0, 0}).value;
        double last = INFINITY;
        for (int n : {5, 10, 20, 40, 80}) {
            const double err = std::abs(tessellate(p, n, n).signed_volume() - v);
            CHECK(err < last);
            last = err;
        }
    }
    CHECK_THROWS_AS(tessellate(wigley, 1, 5), DomainError);
}

TEST_CASE("Bezier control net reproduces the surface") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 5; ++t) {
        const HullParams p = random_hull(rng);
        const BezierNet net = extract_bezier(p);
        CHECK(net.control_points.size() * net.control_points[0].size() == 99);
        const double scale = std::max({p.L, p.B, p.T});
        for (int k = 0; k < 50; ++k) {
            const double xi = u(rng), zeta = u(rng);
            const Vec3 a = net.evaluate(xi, zeta);
            const Vec3 b = eval_surface(p, xi, zeta).position;
            for (int c = 0; c < 3; ++c) {
                CHECK(std::abs(a[c] - b[c]) / scale < 1e-9);
            }
        }
    }
    HullParams wigley;
    const BezierNet net = extract_bezier(wigley);
    for (const auto& row : net.control_points) {
        for (const Vec3& cp : row) {
            CHECK(cp[0] >= -1e-12);
            CHECK(cp[0] <= wigley.L / 2 + 1e-12);
            CHECK(cp[1] >= -1e-12);
            CHECK(cp[1] <= wigley.B / 2 + 1e-12);
            CHECK(cp[2] >= -1e-12);
            CHECK(cp[2] <= wigley.T + 1e-12);
        }
    }
}

TEST_CASE("exporters") {
    const TriangleMesh mesh = tessellate(HullParams{}, 3, 3);
    std::ostringstream stl, idx, bez;
    write_stl(mesh, stl);
    write_indexed_mesh(mesh, idx);
    write_bezier_net(extract_bezier(HullParams{}), bez);
    CHECK(stl.str().rfind("solid hull", 0) == 0);
    CHECK(idx.str().rfind("vertices " + std::to_string(mesh.vertices.size()), 0) == 0);
    CHECK(bez.str().rfind("degrees 8 10", 0) == 0);
    std::istringstream lines(bez.str());
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        ++count;
    }
    CHECK(count == 100);
}
