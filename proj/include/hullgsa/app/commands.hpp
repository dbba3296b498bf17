#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "hullgsa/analysis.hpp"
#include "hullgsa/app/config.hpp"
#include "hullgsa/sobol.hpp"

namespace hullgsa::app {

// Files inside the run directory.
inline constexpr const char* kSamplesFile = "samples.csv";
inline constexpr const char* kCacheFile = "cache.csv";
inline constexpr const char* kManifestFile = "manifest.jsonl";

std::string qoi_slug(const std::string& qoi_id);

/// sample_id,c1,..,cd for every base point and companion, by id.
void write_samples(const SampleSet& samples, const std::filesystem::path& path);
SampleSet read_samples(const std::filesystem::path& path, std::uint64_t seed);

/// DPS sample set of config.sample_count() points, extending samples.csv if present.
SampleSet cmd_sample(const RunConfig& config, std::ostream& log);

/// Convergence sweep for config.qoi, reusing samples.csv and cache.csv when present.
/// Writes sa_<qoi>.json and trace_<qoi>.csv.
SensitivityResult cmd_sa(const RunConfig& config, std::ostream& log);

/// Table from result files; exactly one must come from the physics QoI.
/// Writes report.csv and report.txt.
CorrelationReport cmd_compare(const RunConfig& config, const std::vector<std::filesystem::path>& results,
                              std::ostream& log);

/// Median timings over config.bench_designs seeded designs. Writes bench.csv.
std::vector<BenchRow> cmd_bench(const RunConfig& config, std::ostream& log);

/// SSV of config.point up to config.moment_order. Writes ssv_<N>.csv.
SSVector cmd_moments(const RunConfig& config, std::ostream& log);

} // namespace hullgsa::app
