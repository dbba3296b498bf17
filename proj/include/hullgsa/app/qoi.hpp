#pragma once

#include <string>

#include "hullgsa/app/config.hpp"
#include "hullgsa/sobol.hpp"

namespace hullgsa::app {

struct QoiSpec {
    enum class Kind { Vossers, Ssv, Sbo };
    Kind kind = Kind::Sbo;
    int order = 15; // unused for vossers

    /// "vossers", "ssv:N" (N >= 1) or "sbo:n" (0 <= n <= 32).
    static QoiSpec parse(const std::string& id);
    std::string id() const;
    bool is_physics() const { return kind == Kind::Vossers; }
};

/// Evaluator over (c1, c2, c3) using the config's hull dimensions, K, quadrature and exponent.
Qoi make_qoi(const QoiSpec& spec, const RunConfig& config);

} // namespace hullgsa::app
