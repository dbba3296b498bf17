#include "hullgsa/app/qoi.hpp"

#include <fmt/format.h>

#include "hullgsa/errors.hpp"
#include "hullgsa/moment_engine.hpp"
#include "hullgsa/slender_body.hpp"
#include "hullgsa/vossers_oracle.hpp"

namespace hullgsa::app {

QoiSpec QoiSpec::parse(const std::string& id) {
    if (id == "vossers") {
        return {Kind::Vossers, 0};
    }
    const auto colon = id.find(':');
    if (colon == std::string::npos) {
        throw ConfigError(fmt::format("unknown QoI '{}' (expected vossers, ssv:N or sbo:n)", id));
    }
    const std::string head = id.substr(0, colon);
    const std::string tail = id.substr(colon + 1);
    int order = -1;
    try {
        std::size_t used = 0;
        order = std::stoi(tail, &used);
        if (used != tail.size()) {
            order = -1;
        }
    } catch (const std::exception&) {
        order = -1;
    }
    if (head == "ssv" && order >= 1 && order <= 40) {
        return {Kind::Ssv, order};
    }
    if (head == "sbo" && order >= 0 && order <= kMaxSeriesOrder) {
        return {Kind::Sbo, order};
    }
    throw ConfigError(fmt::format("unknown QoI '{}' (expected vossers, ssv:N with 1 <= N <= 40 or sbo:n with 0 <= n <= {})",
                                  id, kMaxSeriesOrder));
}

std::string QoiSpec::id() const {
    switch (kind) {
    case Kind::Vossers:
        return "vossers";
    case Kind::Ssv:
        return fmt::format("ssv:{}", order);
    case Kind::Sbo:
        break;
    }
    return fmt::format("sbo:{}", order);
}

Qoi make_qoi(const QoiSpec& spec, const RunConfig& config) {
    const DesignSpace space = config.space();
    const double K = config.wave_number();
    switch (spec.kind) {
    case QoiSpec::Kind::Vossers: {
        const QuadratureSpec quad = config.quadrature;
        return {spec.id(), [space, K, quad](const Point& x) {
                    return std::vector<double>{vossers_integral(space.hull_at(x), K, quad).value};
                }};
    }
    case QoiSpec::Kind::Ssv: {
        const int N = spec.order;
        const InvariantExponent e = config.exponent;
        return {spec.id(), [space, N, e](const Point& x) { return ssv(space.hull_at(x), N, e).entries; }};
    }
    case QoiSpec::Kind::Sbo:
        break;
    }
    SlenderBodyConfig cfg;
    cfg.K = K;
    cfg.n = spec.order;
    return {spec.id(), [space, cfg](const Point& x) { return std::vector<double>{g_operator(space.hull_at(x), cfg).value}; }};
}

} // namespace hullgsa::app
