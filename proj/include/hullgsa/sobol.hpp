#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hullgsa/sampling.hpp"

namespace hullgsa {

/// A quantity of interest producing a k-vector per design point.
struct Qoi {
    std::string id;
    std::function<std::vector<double>(const Point&)> evaluate;
};

/// Evaluated outputs keyed by (QoI id, exact point). Safe to share between threads.
class QoiCache {
public:
    struct Entry {
        std::uint64_t sample_id = 0;
        Point point;
        std::vector<double> value;
    };

    QoiCache() = default;
    QoiCache(const QoiCache& other);
    QoiCache& operator=(const QoiCache& other);

    std::optional<std::vector<double>> find(const std::string& qoi_id, const Point& x) const;
    /// Insert-if-absent; returns false when the key was already present.
    bool insert(const std::string& qoi_id, std::uint64_t sample_id, const Point& x, std::vector<double> value);
    std::vector<double> get_or_evaluate(const Qoi& qoi, std::uint64_t sample_id, const Point& x);
    /// Evaluates every missing item on up to `threads` workers. Failures are rethrown
    /// naming the offending sample; successful results are kept.
    void evaluate_batch(const Qoi& qoi, const std::vector<std::pair<std::uint64_t, Point>>& items, int threads);

    /// Number of evaluator invocations made through this cache.
    std::size_t evaluations() const;
    std::size_t size() const;
    std::vector<Entry> entries(const std::string& qoi_id) const;

    /// CSV: sample_id,c1,..,cd,qoi_id,component_index,value (one line per component).
    void write_csv(const std::filesystem::path& path) const;
    static QoiCache read_csv(const std::filesystem::path& path);

private:
    using Key = std::pair<std::string, Point>;
    mutable std::mutex mutex_;
    std::map<Key, Entry> map_;
    std::size_t evaluations_ = 0;
};

enum class Sensitivity { Insensitive, Sensitive };

const char* to_string(Sensitivity s);

inline constexpr double kDefaultEpsilon = 0.05;

/// Trace pick-freeze estimator over output components; f[j] and f_star[j] are
/// the outputs at base point j and its companion. Throws UndefinedMeasureError
/// when the pooled output variance vanishes.
double pick_freeze_index(const std::vector<std::vector<double>>& f, const std::vector<std::vector<double>>& f_star);

/// First-order index of parameter i from the first n base points and their companions.
double sobol_index(const SampleSet& samples, std::size_t n, const Qoi& qoi, QoiCache& cache, std::size_t i,
                   int threads = 1);
std::vector<double> sobol_indices(const SampleSet& samples, std::size_t n, const Qoi& qoi, QoiCache& cache,
                                  int threads = 1);

/// Sensitive iff SI > epsilon.
std::vector<Sensitivity> classify(const std::vector<double>& indices, double epsilon = kDefaultEpsilon);

struct TracePoint {
    std::size_t n_samples = 0;
    std::vector<double> indices;
};

struct SensitivityResult {
    std::string qoi_id;
    std::vector<std::string> parameters;
    std::vector<double> indices;
    std::vector<Sensitivity> classification;
    double epsilon = kDefaultEpsilon;
    std::size_t n_samples = 0;
    std::vector<TracePoint> trace;

    std::string to_json() const;
    static SensitivityResult from_json(const std::string& text);
    /// n_samples,SI_c1,..,SI_cd
    std::string trace_csv() const;
};

std::vector<std::string> default_parameter_names(std::size_t dims);

struct SweepOptions {
    std::vector<std::size_t> counts;
    double epsilon = kDefaultEpsilon;
    DpsOptions dps;
    int threads = 1;
    std::uint64_t seed = 0;
};

/// Grows `samples` (which may start empty) through each checkpoint count and records
/// the indices at every one. Points already present are reused, never redrawn.
SensitivityResult convergence_sweep(const DesignSpace& space, const Qoi& qoi, const SweepOptions& options,
                                    QoiCache& cache, SampleSet& samples);

} // namespace hullgsa
