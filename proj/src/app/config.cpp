#include "hullgsa/app/config.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "hullgsa/app/qoi.hpp"
#include "hullgsa/errors.hpp"

namespace hullgsa::app {

namespace {

std::vector<std::string> tokens(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) {
                out.push_back(cur);
                cur.clear();
            }
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) {
        out.push_back(cur);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || v.empty()) {
        throw ConfigError(fmt::format("{}: '{}' is not a number", key, v));
    }
    return x;
}

long long to_integer(const std::string& key, const std::string& v) {
    const double x = to_double(key, v);
    if (x != std::floor(x) || std::abs(x) > 9.0e15) {
        throw ConfigError(fmt::format("{}: '{}' is not an integer", key, v));
    }
    return static_cast<long long>(x);
}

std::size_t to_count(const std::string& key, const std::string& v) {
    const long long n = to_integer(key, v);
    if (n < 0) {
        throw ConfigError(fmt::format("{}: must not be negative (got {})", key, v));
    }
    return static_cast<std::size_t>(n);
}

std::vector<int> parse_orders(const std::string& key, const std::string& v) {
    std::vector<int> out;
    for (const std::string& t : tokens(v)) {
        const auto dash = t.find('-', 1);
        if (dash != std::string::npos) {
            const long long a = to_integer(key, t.substr(0, dash));
            const long long b = to_integer(key, t.substr(dash + 1));
            if (b < a) {
                throw ConfigError(fmt::format("{}: empty range '{}'", key, t));
            }
            for (long long k = a; k <= b; ++k) {
                out.push_back(static_cast<int>(k));
            }
        } else {
            out.push_back(static_cast<int>(to_integer(key, t)));
        }
    }
    return out;
}

void apply(RunConfig& c, const std::string& key, const std::string& value) {
    const auto pair = [&](std::size_t dim) {
        const std::vector<std::string> t = tokens(value);
        if (t.size() != 2) {
            throw ConfigError(fmt::format("{}: expected 'lower upper'", key));
        }
        c.lower[dim] = to_double(key, t[0]);
        c.upper[dim] = to_double(key, t[1]);
    };
    if (key == "hull.length") {
        c.hull.L = to_double(key, value);
    } else if (key == "hull.beam") {
        c.hull.B = to_double(key, value);
    } else if (key == "hull.draft") {
        c.hull.T = to_double(key, value);
    } else if (key == "space.c1") {
        pair(0);
    } else if (key == "space.c2") {
        pair(1);
    } else if (key == "space.c3") {
        pair(2);
    } else if (key == "qoi.id") {
        c.qoi = value;
    } else if (key == "qoi.froude") {
        c.froude = to_double(key, value);
    } else if (key == "qoi.K") {
        c.K = to_double(key, value);
    } else if (key == "qoi.exponent") {
        if (value == "printed") {
            c.exponent = InvariantExponent::Printed;
        } else if (value == "standard") {
            c.exponent = InvariantExponent::Standard;
        } else {
            throw ConfigError(fmt::format("{}: expected printed or standard (got '{}')", key, value));
        }
    } else if (key == "quadrature.panels") {
        c.quadrature.panels_per_axis = static_cast<int>(to_integer(key, value));
    } else if (key == "quadrature.gauss_order") {
        c.quadrature.gauss_order = static_cast<int>(to_integer(key, value));
    } else if (key == "quadrature.treatment") {
        c.quadrature.singularity_treatment = parse_treatment(value);
    } else if (key == "quadrature.tolerance") {
        c.quadrature.tolerance = to_double(key, value);
    } else if (key == "sampling.samples") {
        c.samples = to_count(key, value);
    } else if (key == "sampling.checkpoints") {
        c.checkpoints.clear();
        for (const std::string& t : tokens(value)) {
            c.checkpoints.push_back(to_count(key, t));
        }
    } else if (key == "sampling.seed") {
        c.seed = static_cast<std::uint64_t>(to_count(key, value));
    } else if (key == "sampling.omega") {
        c.omega = to_double(key, value);
    } else if (key == "sampling.restarts") {
        c.restarts = static_cast<int>(to_integer(key, value));
    } else if (key == "sampling.iterations_per_point") {
        c.iterations_per_point = static_cast<int>(to_integer(key, value));
    } else if (key == "analysis.epsilon") {
        c.epsilon = to_double(key, value);
    } else if (key == "run.out") {
        c.out = value;
    } else if (key == "run.threads") {
        c.threads = static_cast<int>(to_integer(key, value));
    } else if (key == "bench.designs") {
        c.bench_designs = static_cast<int>(to_integer(key, value));
    } else if (key == "bench.orders") {
        c.bench_orders = parse_orders(key, value);
    } else if (key == "moments.point") {
        c.point.clear();
        for (const std::string& t : tokens(value)) {
            c.point.push_back(to_double(key, t));
        }
    } else if (key == "moments.order") {
        c.moment_order = static_cast<int>(to_integer(key, value));
    } else {
        throw ConfigError(fmt::format("unknown config key '{}'", key));
    }
}

// keys allowed before any section header
const std::map<std::string, std::string>& root_aliases() {
    static const std::map<std::string, std::string> m{
        {"qoi", "qoi.id"},         {"samples", "sampling.samples"}, {"seed", "sampling.seed"},
        {"out", "run.out"},        {"threads", "run.threads"},      {"epsilon", "analysis.epsilon"},
        {"froude", "qoi.froude"},
    };
    return m;
}

} // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    apply(*this, key, value);
}

double RunConfig::wave_number() const {
    return K ? *K : 1.0 / (froude * froude * hull.L);
}

std::size_t RunConfig::sample_count() const {
    if (samples > 0) {
        return samples;
    }
    return QoiSpec::parse(qoi).is_physics() ? 350 : 8000;
}

std::vector<std::size_t> RunConfig::checkpoint_list() const {
    const std::size_t n = sample_count();
    if (!checkpoints.empty()) {
        return checkpoints;
    }
    std::vector<std::size_t> out;
    for (std::size_t decade = 10; decade < n; decade *= 10) {
        for (std::size_t m : {1, 2, 5}) {
            if (m * decade < n) {
                out.push_back(m * decade);
            }
        }
    }
    out.push_back(n);
    return out;
}

DesignSpace RunConfig::space() const {
    DesignSpace s = DesignSpace::box(lower, upper);
    s.fixed = hull;
    return s;
}

DpsOptions RunConfig::dps() const {
    DpsOptions o;
    o.omega = omega;
    o.restarts = restarts;
    o.iterations_per_point = iterations_per_point;
    return o;
}

void RunConfig::validate() const {
    try {
        hull.validate();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    space();
    for (std::size_t m = 0; m < lower.size(); ++m) {
        // shape coefficients of the hull family live in [0, 1]
        if (lower[m] < 0.0 || upper[m] > 1.0) {
            throw ConfigError(fmt::format("space.c{} = [{}, {}] leaves [0, 1]", m + 1, lower[m], upper[m]));
        }
    }
    QoiSpec::parse(qoi);
    if (K) {
        if (!(*K > 0.0) || !std::isfinite(*K)) {
            throw ConfigError(fmt::format("K must be positive (got {})", *K));
        }
    } else if (!(froude > 0.0) || !std::isfinite(froude)) {
        throw ConfigError(fmt::format("Froude number must be positive (got {})", froude));
    }
    quadrature.validate();
    if (!(quadrature.tolerance > 0.0)) {
        throw ConfigError("quadrature tolerance must be positive");
    }
    const std::vector<std::size_t> cps = checkpoint_list();
    for (std::size_t k = 0; k < cps.size(); ++k) {
        if (cps[k] < 2 || (k > 0 && cps[k] <= cps[k - 1])) {
            throw ConfigError(fmt::format("checkpoints must be ascending and at least 2 (got {})", fmt::join(cps, ", ")));
        }
    }
    if (cps.back() != sample_count()) {
        throw ConfigError(fmt::format("last checkpoint ({}) must equal the sample count ({})", cps.back(), sample_count()));
    }
    if (!(omega >= 0.0) || restarts < 1 || iterations_per_point < 0) {
        throw ConfigError("sampling: omega >= 0, restarts >= 1 and iterations_per_point >= 0 required");
    }
    if (!std::isfinite(epsilon)) {
        throw ConfigError("epsilon must be finite");
    }
    if (threads < 1 || threads > 256) {
        throw ConfigError(fmt::format("threads must be in [1, 256] (got {})", threads));
    }
    if (bench_designs < 1 || bench_orders.empty()) {
        throw ConfigError("bench needs at least one design and one order");
    }
    for (int n : bench_orders) {
        if (n < 1 || n > 32) {
            throw ConfigError(fmt::format("bench order {} outside [1, 32]", n));
        }
    }
    if (point.size() != 3 || !space().contains(point)) {
        throw ConfigError("moments.point must be three coordinates inside the design space");
    }
    if (moment_order < 1 || moment_order > 40) {
        throw ConfigError(fmt::format("moments.order must be in [1, 40] (got {})", moment_order));
    }
    if (out.empty()) {
        throw ConfigError("output directory must not be empty");
    }
}

std::string RunConfig::canonical() const {
    std::string s;
    const auto line = [&](const std::string& k, const std::string& v) { s += k + " = " + v + "\n"; };
    line("hull.length", fmt::format("{:.17g}", hull.L));
    line("hull.beam", fmt::format("{:.17g}", hull.B));
    line("hull.draft", fmt::format("{:.17g}", hull.T));
    for (std::size_t i = 0; i < lower.size(); ++i) {
        line(fmt::format("space.c{}", i + 1), fmt::format("{:.17g} {:.17g}", lower[i], upper[i]));
    }
    line("qoi.id", qoi);
    line("qoi.K", fmt::format("{:.17g}", wave_number()));
    line("qoi.exponent", exponent == InvariantExponent::Printed ? "printed" : "standard");
    line("quadrature.panels", std::to_string(quadrature.panels_per_axis));
    line("quadrature.gauss_order", std::to_string(quadrature.gauss_order));
    line("quadrature.treatment", to_string(quadrature.singularity_treatment));
    line("quadrature.tolerance", fmt::format("{:.17g}", quadrature.tolerance));
    line("sampling.samples", std::to_string(sample_count()));
    line("sampling.checkpoints", fmt::format("{}", fmt::join(checkpoint_list(), " ")));
    line("sampling.seed", std::to_string(seed));
    line("sampling.omega", fmt::format("{:.17g}", omega));
    line("sampling.restarts", std::to_string(restarts));
    line("sampling.iterations_per_point", std::to_string(iterations_per_point));
    line("analysis.epsilon", fmt::format("{:.17g}", epsilon));
    line("bench.designs", std::to_string(bench_designs));
    line("bench.orders", fmt::format("{}", fmt::join(bench_orders, " ")));
    line("moments.point", fmt::format("{:.17g}", fmt::join(point, " ")));
    line("moments.order", std::to_string(moment_order));
    return s;
}

std::string RunConfig::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : canonical()) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return fmt::format("{:016x}", h);
}

RunConfig RunConfig::parse(const std::string& text) {
    boost::property_tree::ptree tree;
    std::istringstream in(text);
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(fmt::format("config line {}: {}", e.line(), e.message()));
    }
    RunConfig c;
    for (const auto& [name, node] : tree) {
        static const std::set<std::string> sections{"hull",      "space", "qoi",   "quadrature", "sampling",
                                                    "analysis", "run",   "bench", "moments"};
        if (node.empty() && sections.contains(name) && node.data().empty()) {
            continue;
        }
        if (node.empty()) {
            const auto alias = root_aliases().find(name);
            if (alias == root_aliases().end()) {
                throw ConfigError(fmt::format("unknown top-level config key '{}'", name));
            }
            apply(c, alias->second, node.data());
            continue;
        }
        for (const auto& [key, leaf] : node) {
            apply(c, name + "." + key, leaf.data());
        }
    }
    c.validate();
    return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError(fmt::format("cannot read config {}", path.string()));
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

} // namespace hullgsa::app
