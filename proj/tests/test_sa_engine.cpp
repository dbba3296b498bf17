#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "hullgsa/errors.hpp"
#include "hullgsa/numerics.hpp"
#include "hullgsa/sampling.hpp"
#include "hullgsa/sobol.hpp"

using namespace hullgsa;

namespace {

Qoi ishigami() {
    return {"ishigami", [](const Point& x) {
                const double s = std::sin(x[0]);
                return std::vector<double>{s + 7.0 * std::pow(std::sin(x[1]), 2) + 0.1 * std::pow(x[2], 4) * s};
            }};
}

Qoi linear_first() {
    return {"x1", [](const Point& x) { return std::vector<double>{x[0]}; }};
}

DesignSpace cube() {
    return DesignSpace::box({0, 0, 0}, {1, 1, 1});
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double min_distance_to(const Point& x, const std::vector<Point>& others) {
    double best = INFINITY;
    for (const Point& q : others) {
        double d2 = 0.0;
        for (std::size_t m = 0; m < x.size(); ++m) {
            d2 += (x[m] - q[m]) * (x[m] - q[m]);
        }
        best = std::min(best, std::sqrt(d2));
    }
    return best;
}

} // namespace

TEST_CASE("design space validation") {
    CHECK_THROWS_AS(DesignSpace::box({0, 1}, {1, 1}), ConfigError);
    CHECK_THROWS_AS(DesignSpace::box({0}, {1, 1}), ConfigError);
    const DesignSpace s = DesignSpace::hull_default();
    CHECK(s.dims() == 3);
    CHECK(s.contains({0.0, 1.0, 0.5}));
    CHECK_FALSE(s.contains({0.0, 1.1, 0.5}));
    CHECK(s.hull_at({0.1, 0.2, 0.3}).c3 == 0.3);
}

TEST_CASE("DPS reaches a collision-free design") {
    const SampleSet set = dps_sample(cube(), 50, nullptr, {}, 11);
    REQUIRE(set.size() == 50);
    CHECK(grid_collisions(cube(), set.base, 50) == 0);
    CHECK(set.diagnostics.collisions == 0);
    CHECK_FALSE(set.diagnostics.grid_capacity_exceeded);
    for (std::size_t m = 0; m < 3; ++m) {
        std::vector<int> cells;
        for (const Point& x : set.base) {
            cells.push_back(static_cast<int>(x[m] * 50));
        }
        std::sort(cells.begin(), cells.end());
        CHECK(std::adjacent_find(cells.begin(), cells.end()) == cells.end());
    }
    // from a deliberately collapsed start, a heavy collision weight drives relocation until no cell is shared
    DpsOptions opt;
    opt.iterations_per_point = 400;
    opt.omega = 1e3;
    for (int j = 0; j < 10; ++j) {
        opt.initial.push_back({0.05 + 0.001 * j, 0.5, 0.5 + 0.001 * j});
    }
    const SampleSet fixed = dps_sample(cube(), 10, nullptr, opt, 3);
    CHECK(grid_collisions(cube(), fixed.base, 10) == 0);

    DpsOptions coarse;
    coarse.grid_levels = 5;
    CHECK(dps_sample(cube(), 8, nullptr, coarse, 1).diagnostics.grid_capacity_exceeded);
    CHECK_THROWS_AS(dps_sample(cube(), 1, nullptr, {}, 1), ConfigError);
}

TEST_CASE("DPS objective never increases") {
    DpsOptions opt;
    opt.record_history = true;
    opt.initial = {{0.02, 0.02, 0.02}, {0.98, 0.98, 0.98}};
    opt.iterations_per_point = 200;
    const SampleSet antipodal = dps_sample(cube(), 2, nullptr, opt, 5);
    for (std::size_t k = 1; k < antipodal.diagnostics.history.size(); ++k) {
        CHECK(antipodal.diagnostics.history[k] < antipodal.diagnostics.history[k - 1]);
    }
    CHECK(space_filling_energy(cube(), antipodal.base) <= space_filling_energy(cube(), opt.initial));

    opt.initial = {{0.40, 0.45, 0.42}, {0.55, 0.52, 0.58}};
    const SampleSet close = dps_sample(cube(), 2, nullptr, opt, 5);
    const auto& h = close.diagnostics.history;
    REQUIRE(h.size() > 2);
    for (std::size_t k = 1; k < h.size(); ++k) {
        CHECK(h[k] < h[k - 1]);
    }
    CHECK(h.back() < 0.5 * h.front());
}

TEST_CASE("DPS repulsion keeps new points away from the prior") {
    const SampleSet prior = dps_sample(cube(), 50, nullptr, {}, 21);
    const SampleSet grown = dps_sample(cube(), 50, &prior, {}, 22);
    REQUIRE(grown.size() == 100);
    for (std::size_t j = 0; j < 50; ++j) {
        CHECK(grown.base[j] == prior.base[j]);
        CHECK(grown.companions[1][j] == prior.companions[1][j]);
    }
    const std::vector<Point> fresh(grown.base.begin() + 50, grown.base.end());
    double dps_min = INFINITY;
    for (const Point& x : fresh) {
        dps_min = std::min(dps_min, min_distance_to(x, prior.base));
    }
    std::vector<double> baseline;
    for (int trial = 0; trial < 20; ++trial) {
        std::mt19937_64 rng(1000 + trial);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double m = INFINITY;
        for (int j = 0; j < 50; ++j) {
            m = std::min(m, min_distance_to({u(rng), u(rng), u(rng)}, prior.base));
        }
        baseline.push_back(m);
    }
    CHECK(dps_min > median(baseline));
}

TEST_CASE("pick-freeze companions") {
    const DesignSpace s = DesignSpace::box({-1, 2, 10}, {1, 3, 20});
    const SampleSet set = dps_sample(s, 40, nullptr, {}, 9);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < set.size(); ++j) {
            CHECK(set.companions[i][j][i] == set.base[j][i]);
            CHECK(s.contains(set.companions[i][j]));
            CHECK(s.contains(set.base[j]));
        }
    }
    CHECK(SampleSet::base_id(2, 3) == 8);
    CHECK(SampleSet::companion_id(0, 2, 3) == 9);
}

TEST_CASE("estimator on analytic benchmarks") {
    const DesignSpace pi_cube = DesignSpace::box({-kPi, -kPi, -kPi}, {kPi, kPi, kPi});
    QoiCache cache;
    const SampleSet set = dps_sample(pi_cube, 8000, nullptr, {}, 2024);
    const std::vector<double> si = sobol_indices(set, 8000, ishigami(), cache, 2);
    CHECK(std::abs(si[0] - 0.3139) < 0.03);
    CHECK(std::abs(si[1] - 0.4424) < 0.03);
    CHECK(std::abs(si[2]) < 0.03);

    QoiCache c2;
    const SampleSet lin = dps_sample(cube(), 4000, nullptr, {}, 7);
    const std::vector<double> l = sobol_indices(lin, 4000, linear_first(), c2);
    CHECK(std::abs(l[0] - 1.0) < 0.05);
    CHECK(std::abs(l[1]) < 0.05);
    CHECK(std::abs(l[2]) < 0.05);

    const Qoi doubled{"x1x1", [](const Point& x) { return std::vector<double>{x[0], x[0]}; }};
    const std::vector<double> d = sobol_indices(lin, 4000, doubled, c2);
    for (int i = 0; i < 3; ++i) {
        CHECK(d[i] == doctest::Approx(l[i]).epsilon(1e-12));
    }
    // additive model: first-order indices account for all the variance
    const Qoi additive{"add", [](const Point& x) { return std::vector<double>{x[0] + 2.0 * x[1] * x[1] + std::sin(x[2])}; }};
    const std::vector<double> a = sobol_indices(lin, 4000, additive, c2);
    CHECK(std::abs(a[0] + a[1] + a[2] - 1.0) < 0.06);
}

TEST_CASE("estimator invariances and errors") {
    const SampleSet set = dps_sample(cube(), 300, nullptr, {}, 4);
    QoiCache cache;
    const auto base = [](const Point& x) { return x[0] * x[1] + std::exp(x[2]) * 0.3 + x[0] * x[0]; };
    const Qoi f{"f", [&](const Point& x) { return std::vector<double>{base(x)}; }};
    const Qoi g{"g", [&](const Point& x) { return std::vector<double>{-3.5 * base(x) + 1234.5}; }};
    const Qoi neg{"neg", [&](const Point& x) { return std::vector<double>{-base(x)}; }};
    const std::vector<double> sf = sobol_indices(set, 300, f, cache);
    const std::vector<double> sg = sobol_indices(set, 300, g, cache);
    const std::vector<double> sn = sobol_indices(set, 300, neg, cache);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(sf[i] - sg[i]) < 1e-12);
        CHECK(std::abs(sf[i] - sn[i]) < 1e-12);
        CHECK(sf[i] > -0.2);
        CHECK(sf[i] < 1.2);
    }
    const Qoi constant{"const", [](const Point&) { return std::vector<double>{0.1}; }};
    CHECK_THROWS_AS(sobol_indices(set, 300, constant, cache), UndefinedMeasureError);
    CHECK_THROWS_AS(pick_freeze_index({{1.0}}, {}), DomainError);

    const Qoi failing{"bad", [](const Point& x) -> std::vector<double> {
                          if (x[0] > 0.5) {
                              throw NumericError("blew up");
                          }
                          return {x[0]};
                      }};
    try {
        sobol_indices(set, 300, failing, cache);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::Numeric);
        CHECK(std::string(e.what()).find("sample ") != std::string::npos);
    }
}

TEST_CASE("classification threshold") {
    using S = Sensitivity;
    CHECK(classify({0.6, 0.1, 0.01}) == std::vector<S>{S::Sensitive, S::Sensitive, S::Insensitive});
    CHECK(classify({0.05}) == std::vector<S>{S::Insensitive});
    CHECK(classify({-0.01}) == std::vector<S>{S::Insensitive});
    CHECK(classify({0.2}, 0.3) == std::vector<S>{S::Insensitive});
}

TEST_CASE("cache semantics and persistence") {
    const SampleSet set = dps_sample(cube(), 30, nullptr, {}, 8);
    QoiCache cache;
    const Qoi vec{"vec", [](const Point& x) { return std::vector<double>{x[0] + x[1], x[2] * 3.0}; }};
    const std::vector<double> a = sobol_indices(set, 30, vec, cache, 4);
    CHECK(cache.evaluations() == 120);
    CHECK(cache.size() == 120);
    const std::vector<double> b = sobol_indices(set, 30, vec, cache, 4);
    CHECK(cache.evaluations() == 120);
    CHECK(a == b);
    CHECK_FALSE(cache.insert("vec", 0, set.base[0], {9.0, 9.0}));
    CHECK(*cache.find("vec", set.base[0]) == vec.evaluate(set.base[0]));

    const auto dir = std::filesystem::temp_directory_path() / "hullgsa_cache_test";
    std::filesystem::create_directories(dir);
    cache.write_csv(dir / "cache.csv");
    const std::string text = slurp(dir / "cache.csv");
    CHECK(text.rfind("sample_id,c1,c2,c3,qoi_id,component_index,value\n", 0) == 0);
    QoiCache back = QoiCache::read_csv(dir / "cache.csv");
    CHECK(back.size() == 120);
    CHECK(sobol_indices(set, 30, vec, back, 1) == a);
    CHECK(back.evaluations() == 0);
    back.write_csv(dir / "again.csv");
    CHECK(slurp(dir / "again.csv") == text);
    CHECK_THROWS_AS(QoiCache::read_csv(dir / "missing.csv"), IoError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("convergence sweep") {
    SweepOptions opt;
    opt.counts = {20, 50, 120};
    opt.seed = 31;
    opt.threads = 3;
    QoiCache cache;
    SampleSet samples;
    const SensitivityResult r = convergence_sweep(cube(), linear_first(), opt, cache, samples);
    REQUIRE(r.trace.size() == 3);
    CHECK(r.trace[1].n_samples == 50);
    CHECK(r.n_samples == 120);
    CHECK(samples.size() == 120);
    CHECK(cache.evaluations() == 480);
    CHECK(r.classification == classify(r.indices));
    CHECK(r.classification[0] == Sensitivity::Sensitive);

    // determinism, and reuse of existing evaluations
    QoiCache cache2;
    SampleSet samples2;
    const SensitivityResult r2 = convergence_sweep(cube(), linear_first(), opt, cache2, samples2);
    CHECK(r2.to_json() == r.to_json());
    CHECK(samples2.base == samples.base);
    const SensitivityResult r3 = convergence_sweep(cube(), linear_first(), opt, cache2, samples2);
    CHECK(cache2.evaluations() == 480);
    CHECK(r3.to_json() == r.to_json());

    const SensitivityResult parsed = SensitivityResult::from_json(r.to_json());
    CHECK(parsed.indices == r.indices);
    CHECK(parsed.trace.back().indices == r.trace.back().indices);
    CHECK(parsed.classification == r.classification);
    CHECK(r.trace_csv().rfind("n_samples,SI_c1,SI_c2,SI_c3\n20,", 0) == 0);

    SweepOptions bad = opt;
    bad.counts = {50, 20};
    SampleSet s3;
    CHECK_THROWS_AS(convergence_sweep(cube(), linear_first(), bad, cache, s3), ConfigError);
    const Qoi constant{"const", [](const Point&) { return std::vector<double>{2.0}; }};
    SampleSet s4;
    CHECK_THROWS_AS(convergence_sweep(cube(), constant, opt, cache, s4), UndefinedMeasureError);
}
