#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hullgsa/hull_modeller.hpp"
#include "hullgsa/moment_engine.hpp"
#include "hullgsa/sampling.hpp"
#include "hullgsa/vossers_oracle.hpp"

namespace hullgsa::app {

/// Everything a run needs. Every field has a default, so `qoi = sbo:15` alone is a valid config.
///
///   [hull]       length, beam, draft
///   [space]      c1, c2, c3            "lower upper"
///   [qoi]        id, froude, K, exponent (printed | standard)
///   [quadrature] panels, gauss_order, treatment, tolerance
///   [sampling]   samples, checkpoints, seed, omega, restarts, iterations_per_point
///   [analysis]   epsilon
///   [run]        out, threads
///   [bench]      designs, orders
///   [moments]    point, order
///
/// Keys qoi, samples, seed, out, threads, epsilon and froude may also appear before any section.
struct RunConfig {
    HullParams hull;
    std::vector<double> lower{0.0, 0.0, 0.0};
    std::vector<double> upper{1.0, 1.0, 1.0};

    std::string qoi = "sbo:15";
    double froude = 0.3;
    std::optional<double> K; // overrides froude when set
    InvariantExponent exponent = InvariantExponent::Printed;
    QuadratureSpec quadrature;

    /// 0 picks the default: 350 for the physics QoI, 8000 for geometric ones.
    std::size_t samples = 0;
    std::vector<std::size_t> checkpoints; // empty: 10, 20, 50, 100, ... up to samples
    std::uint64_t seed = 1;
    double omega = 1.0;
    int restarts = 1;
    int iterations_per_point = 10;

    double epsilon = 0.05;
    std::filesystem::path out = "run";
    int threads = 1;

    int bench_designs = 50;
    std::vector<int> bench_orders{2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};

    Point point{0.5, 0.5, 0.5};
    int moment_order = 4;

    double wave_number() const;
    std::size_t sample_count() const;
    std::vector<std::size_t> checkpoint_list() const;
    DesignSpace space() const;
    DpsOptions dps() const;

    /// Sets one field by its dotted key ("sampling.seed"); no validation.
    void set(const std::string& key, const std::string& value);
    /// Throws ConfigError on any inconsistency.
    void validate() const;
    /// Fully resolved key = value listing; the input of the config hash.
    std::string canonical() const;
    /// FNV-1a 64 of canonical(), as 16 hex digits.
    std::string hash() const;

    static RunConfig parse(const std::string& text);
    static RunConfig load(const std::filesystem::path& path);
};

} // namespace hullgsa::app
