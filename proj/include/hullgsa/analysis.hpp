#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hullgsa/hull_modeller.hpp"
#include "hullgsa/moment_engine.hpp"
#include "hullgsa/sobol.hpp"
#include "hullgsa/vossers_oracle.hpp"

namespace hullgsa {

/// RMSE of the two index vectors over the physics-index range.
/// Throws UndefinedMeasureError when the physics indices are all equal.
double nrmse(const std::vector<double>& si_physics, const std::vector<double>& si_geom);

struct SimilarityOptions {
    double epsilon = kDefaultEpsilon;
    /// Both sides without sensitive parameters: 1 (identical empty sets), or throw when false.
    bool empty_sets_match = true;
};

/// Cosine between the binarized (SI > epsilon) vectors. Exactly one empty side gives 0.
double similarity(const std::vector<double>& si_physics, const std::vector<double>& si_geom,
                  const SimilarityOptions& options = {});

/// Sensitive parameters by descending SI, ties by ascending index.
std::vector<std::size_t> sensitive_order(const std::vector<double>& indices, double epsilon = kDefaultEpsilon);

/// Display label for a QoI id: "vossers", "ssv:N", "sbo:n".
std::string qoi_label(const std::string& qoi_id);

struct TableRow {
    std::string name;
    std::vector<std::size_t> order;
    std::optional<double> nrmse;      // empty on the physics row
    std::optional<double> similarity; // empty on the physics row
};

struct CorrelationReport {
    std::vector<std::string> parameters;
    std::vector<TableRow> rows; // physics first, then the operators in the given order

    std::string order_text(const TableRow& row) const;
    /// quantity,sensitive_order,nrmse,similarity
    std::string csv() const;
    std::string text() const;
};

CorrelationReport build_table(const std::vector<SensitivityResult>& results, const SensitivityResult& physics,
                              const SimilarityOptions& options = {});

struct BenchOptions {
    double K = 1.0 / 0.09;
    QuadratureSpec quadrature;
    InvariantExponent exponent = InvariantExponent::Printed;
    bool include_vossers = true;
};

struct BenchRow {
    std::string op; // vossers, ssv, sbo
    int order = 0;  // 0 for vossers
    double median_seconds = 0.0;
    std::size_t runs = 0;
};

/// Median per-evaluation wall time of each operator over the designs.
std::vector<BenchRow> bench_costs(const std::vector<HullParams>& designs, const std::vector<int>& orders,
                                  const BenchOptions& options = {});
/// operator,order,median_seconds,runs
std::string bench_csv(const std::vector<BenchRow>& rows);

} // namespace hullgsa
