#pragma once

#include <cstdint>
#include <vector>

#include "hullgsa/hull_modeller.hpp"

namespace hullgsa {

using Point = std::vector<double>;

struct DesignSpace {
    std::vector<double> lower;
    std::vector<double> upper;
    /// Held-constant hull dimensions; only L, B, T are read.
    HullParams fixed;

    std::size_t dims() const { return lower.size(); }
    /// Throws ConfigError unless every a_i < b_i (finite) and sizes agree.
    void validate() const;
    bool contains(const Point& x) const;

    /// [0,1]^3 over (c1, c2, c3) with the default hull dimensions.
    static DesignSpace hull_default();
    static DesignSpace box(std::vector<double> lower, std::vector<double> upper);

    /// Hull for a design point (c1, c2, c3).
    HullParams hull_at(const Point& x) const;
};

struct DpsOptions {
    double omega = 1.0; // weight on the grid-collision term
    bool space_filling = true;
    bool non_collapse = true;
    bool repulsion = true;
    int restarts = 1;
    /// Optimizer moves per restart = iterations_per_point * N.
    int iterations_per_point = 10;
    /// Per-axis grid levels for the collision term; 0 means N.
    int grid_levels = 0;
    /// Optional starting design in design-space coordinates; disables restarts.
    std::vector<Point> initial;
    bool record_history = false;
};

struct DpsDiagnostics {
    double f1 = 0.0;
    double f2 = 0.0;
    double f3 = 0.0;
    /// Pairs sharing a grid cell on some axis, summed over axes.
    long collisions = 0;
    /// N exceeds the grid levels, so a collision-free design is impossible.
    bool grid_capacity_exceeded = false;
    /// Objective after every accepted move (only with record_history).
    std::vector<double> history;
};

struct SampleSet {
    std::uint64_t seed = 0;
    std::vector<Point> base;
    /// companions[i][j] copies coordinate i of base[j]; the rest are fresh uniform draws.
    std::vector<std::vector<Point>> companions;
    /// Diagnostics of the most recent batch.
    DpsDiagnostics diagnostics;

    std::size_t size() const { return base.size(); }
    std::size_t dims() const { return companions.size(); }

    static std::uint64_t base_id(std::size_t j, std::size_t dims) { return j * (dims + 1); }
    static std::uint64_t companion_id(std::size_t i, std::size_t j, std::size_t dims) {
        return j * (dims + 1) + 1 + i;
    }
};

/// Adds N optimized points to `prior` (or starts a fresh set when prior is null),
/// keeping existing points untouched, and draws their pick-freeze companions.
SampleSet dps_sample(const DesignSpace& space, std::size_t N, const SampleSet* prior,
                     const DpsOptions& options, std::uint64_t seed);

/// Pick-freeze partner of base point j for dimension i. Depends only on (seed, j, i).
Point companion_point(const DesignSpace& space, const Point& base, std::size_t j, std::size_t i,
                      std::uint64_t seed);

/// Space-filling sum over pairs of 1/|s_i - s_j|^2 in normalized coordinates.
double space_filling_energy(const DesignSpace& space, const std::vector<Point>& points);
/// Pairs of points sharing a grid cell, summed over axes.
long grid_collisions(const DesignSpace& space, const std::vector<Point>& points, int levels);

} // namespace hullgsa
