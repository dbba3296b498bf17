#include "hullgsa/analysis.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "hullgsa/errors.hpp"
#include "hullgsa/numerics.hpp"
#include "hullgsa/slender_body.hpp"

namespace hullgsa {

namespace {

void require_same_length(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty()) {
        throw DomainError(fmt::format("index vectors must be nonempty and of equal length ({} vs {})", a.size(),
                                      b.size()));
    }
}

} // namespace

double nrmse(const std::vector<double>& si_physics, const std::vector<double>& si_geom) {
    require_same_length(si_physics, si_geom);
    const auto [lo, hi] = std::minmax_element(si_physics.begin(), si_physics.end());
    const double range = *hi - *lo;
    if (!(range > 0.0)) {
        throw UndefinedMeasureError("NRMSE undefined: physics indices have zero range");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < si_physics.size(); ++i) {
        const double d = si_physics[i] - si_geom[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(si_physics.size())) / range;
}

double similarity(const std::vector<double>& si_physics, const std::vector<double>& si_geom,
                  const SimilarityOptions& options) {
    require_same_length(si_physics, si_geom);
    int both = 0, p = 0, g = 0;
    for (std::size_t i = 0; i < si_physics.size(); ++i) {
        const bool sp = si_physics[i] > options.epsilon;
        const bool sg = si_geom[i] > options.epsilon;
        both += (sp && sg) ? 1 : 0;
        p += sp ? 1 : 0;
        g += sg ? 1 : 0;
    }
    if (p == 0 && g == 0) {
        if (!options.empty_sets_match) {
            throw UndefinedMeasureError("similarity undefined: no sensitive parameters on either side");
        }
        return 1.0;
    }
    if (p == 0 || g == 0) {
        return 0.0;
    }
    return both / std::sqrt(static_cast<double>(p) * g);
}

std::vector<std::size_t> sensitive_order(const std::vector<double>& indices, double epsilon) {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] > epsilon) {
            order.push_back(i);
        }
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return indices[a] > indices[b]; });
    return order;
}

std::string qoi_label(const std::string& qoi_id) {
    if (qoi_id == "vossers") {
        return "Vossers finite-part";
    }
    if (qoi_id.rfind("ssv:", 0) == 0) {
        return "SSV_" + qoi_id.substr(4);
    }
    if (qoi_id.rfind("sbo:", 0) == 0) {
        return "G_" + qoi_id.substr(4);
    }
    return qoi_id;
}

std::string CorrelationReport::order_text(const TableRow& row) const {
    if (row.order.empty()) {
        return "none";
    }
    std::string s;
    for (std::size_t k = 0; k < row.order.size(); ++k) {
        s += (k ? " > " : "") + parameters.at(row.order[k]);
    }
    return s;
}

std::string CorrelationReport::csv() const {
    std::string out = "quantity,sensitive_order,nrmse,similarity\n";
    for (const TableRow& r : rows) {
        out += fmt::format("{},{},{},{}\n", r.name, order_text(r), r.nrmse ? fmt::format("{:.17g}", *r.nrmse) : "N/A",
                           r.similarity ? fmt::format("{:.17g}", *r.similarity) : "N/A");
    }
    return out;
}

std::string CorrelationReport::text() const {
    std::vector<std::array<std::string, 4>> cells;
    cells.push_back({"Quantity", "Sensitive order", "NRMSE", "Similarity"});
    for (const TableRow& r : rows) {
        cells.push_back({r.name, order_text(r), r.nrmse ? fmt::format("{:.6f}", *r.nrmse) : "N/A",
                         r.similarity ? fmt::format("{:.1f}%", 100.0 * *r.similarity) : "N/A"});
    }
    std::array<std::size_t, 4> width{};
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < 4; ++c) {
            width[c] = std::max(width[c], row[c].size());
        }
    }
    std::string out;
    for (std::size_t k = 0; k < cells.size(); ++k) {
        out += fmt::format("{:<{}}  {:<{}}  {:>{}}  {:>{}}\n", cells[k][0], width[0], cells[k][1], width[1],
                           cells[k][2], width[2], cells[k][3], width[3]);
        if (k == 0) {
            out += std::string(width[0] + width[1] + width[2] + width[3] + 6, '-') + "\n";
        }
    }
    return out;
}

CorrelationReport build_table(const std::vector<SensitivityResult>& results, const SensitivityResult& physics,
                              const SimilarityOptions& options) {
    CorrelationReport report;
    report.parameters = physics.parameters;
    report.rows.push_back({qoi_label(physics.qoi_id), sensitive_order(physics.indices, options.epsilon), {}, {}});
    for (const SensitivityResult& r : results) {
        if (r.parameters != physics.parameters || r.indices.size() != physics.indices.size()) {
            throw ConfigError(fmt::format("result '{}' does not share the physics parameter space", r.qoi_id));
        }
        report.rows.push_back({qoi_label(r.qoi_id), sensitive_order(r.indices, options.epsilon),
                               nrmse(physics.indices, r.indices), similarity(physics.indices, r.indices, options)});
    }
    return report;
}

namespace {

template <class F>
double median_time(const std::vector<HullParams>& designs, F&& f) {
    f(designs.front()); // warm caches of quadrature rules and tables
    std::vector<double> times;
    times.reserve(designs.size());
    for (const HullParams& p : designs) {
        const auto t0 = std::chrono::steady_clock::now();
        f(p);
        const auto t1 = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    return median(times);
}

// keeps the optimizer from discarding a result
volatile double g_sink = 0.0;

} // namespace

std::vector<BenchRow> bench_costs(const std::vector<HullParams>& designs, const std::vector<int>& orders,
                                  const BenchOptions& options) {
    if (designs.empty() || orders.empty()) {
        throw ConfigError("benchmark needs at least one design and one order");
    }
    std::vector<BenchRow> rows;
    if (options.include_vossers) {
        rows.push_back({"vossers", 0,
                        median_time(designs, [&](const HullParams& p) {
                            g_sink = vossers_integral(p, options.K, options.quadrature).value;
                        }),
                        designs.size()});
    }
    for (int n : orders) {
        rows.push_back({"ssv", n,
                        median_time(designs, [&](const HullParams& p) {
                            g_sink = ssv(p, n, options.exponent).entries.back();
                        }),
                        designs.size()});
    }
    for (int n : orders) {
        SlenderBodyConfig cfg;
        cfg.K = options.K;
        cfg.n = n;
        rows.push_back({"sbo", n,
                        median_time(designs, [&](const HullParams& p) { g_sink = g_operator(p, cfg).value; }),
                        designs.size()});
    }
    return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::string out = "operator,order,median_seconds,runs\n";
    for (const BenchRow& r : rows) {
        out += fmt::format("{},{},{:.6e},{}\n", r.op, r.order, r.median_seconds, r.runs);
    }
    return out;
}

} // namespace hullgsa
