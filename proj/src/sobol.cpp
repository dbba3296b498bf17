#include "hullgsa/sobol.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include "json.hpp"

#include "hullgsa/errors.hpp"

namespace hullgsa {

QoiCache::QoiCache(const QoiCache& other) {
    std::lock_guard lock(other.mutex_);
    map_ = other.map_;
    evaluations_ = other.evaluations_;
}

QoiCache& QoiCache::operator=(const QoiCache& other) {
    if (this != &other) {
        std::scoped_lock lock(mutex_, other.mutex_);
        map_ = other.map_;
        evaluations_ = other.evaluations_;
    }
    return *this;
}

std::optional<std::vector<double>> QoiCache::find(const std::string& qoi_id, const Point& x) const {
    std::lock_guard lock(mutex_);
    const auto it = map_.find(Key{qoi_id, x});
    if (it == map_.end()) {
        return std::nullopt;
    }
    return it->second.value;
}

bool QoiCache::insert(const std::string& qoi_id, std::uint64_t sample_id, const Point& x, std::vector<double> value) {
    std::lock_guard lock(mutex_);
    return map_.try_emplace(Key{qoi_id, x}, Entry{sample_id, x, std::move(value)}).second;
}

namespace {

std::string describe(std::uint64_t sample_id, const Point& x) {
    return fmt::format("sample {} at ({:.17g})", sample_id, fmt::join(x, ", "));
}

[[noreturn]] void rethrow_for_sample(std::exception_ptr error, std::uint64_t sample_id, const Point& x,
                                     const std::string& qoi_id) {
    try {
        std::rethrow_exception(error);
    } catch (const Error& e) {
        throw Error(e.category(), fmt::format("QoI '{}' failed for {}: {}", qoi_id, describe(sample_id, x), e.what()));
    } catch (const std::exception& e) {
        throw NumericError(fmt::format("QoI '{}' failed for {}: {}", qoi_id, describe(sample_id, x), e.what()));
    }
}

} // namespace

std::vector<double> QoiCache::get_or_evaluate(const Qoi& qoi, std::uint64_t sample_id, const Point& x) {
    if (auto hit = find(qoi.id, x)) {
        return *hit;
    }
    std::vector<double> value;
    try {
        value = qoi.evaluate(x);
    } catch (...) {
        rethrow_for_sample(std::current_exception(), sample_id, x, qoi.id);
    }
    {
        std::lock_guard lock(mutex_);
        ++evaluations_;
    }
    insert(qoi.id, sample_id, x, value);
    return *find(qoi.id, x);
}

void QoiCache::evaluate_batch(const Qoi& qoi, const std::vector<std::pair<std::uint64_t, Point>>& items,
                              int threads) {
    std::vector<const std::pair<std::uint64_t, Point>*> missing;
    {
        std::lock_guard lock(mutex_);
        std::map<Point, bool> seen;
        for (const auto& item : items) {
            if (!map_.contains(Key{qoi.id, item.second}) && seen.try_emplace(item.second, true).second) {
                missing.push_back(&item);
            }
        }
    }
    if (missing.empty()) {
        return;
    }
    const std::size_t workers = std::clamp<std::size_t>(threads < 1 ? 1 : threads, 1, missing.size());
    std::vector<std::vector<double>> results(missing.size());
    std::vector<std::exception_ptr> errors(missing.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < missing.size(); k = next++) {
            try {
                results[k] = qoi.evaluate(missing[k]->second);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    // single writer, in item order
    std::size_t first_error = missing.size();
    {
        std::lock_guard lock(mutex_);
        for (std::size_t k = 0; k < missing.size(); ++k) {
            if (errors[k]) {
                first_error = std::min(first_error, k);
                continue;
            }
            ++evaluations_;
            map_.try_emplace(Key{qoi.id, missing[k]->second},
                             Entry{missing[k]->first, missing[k]->second, std::move(results[k])});
        }
    }
    if (first_error < missing.size()) {
        rethrow_for_sample(errors[first_error], missing[first_error]->first, missing[first_error]->second, qoi.id);
    }
}

std::size_t QoiCache::evaluations() const {
    std::lock_guard lock(mutex_);
    return evaluations_;
}

std::size_t QoiCache::size() const {
    std::lock_guard lock(mutex_);
    return map_.size();
}

std::vector<QoiCache::Entry> QoiCache::entries(const std::string& qoi_id) const {
    std::vector<Entry> out;
    {
        std::lock_guard lock(mutex_);
        for (const auto& [key, entry] : map_) {
            if (key.first == qoi_id) {
                out.push_back(entry);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return a.sample_id < b.sample_id; });
    return out;
}

void QoiCache::write_csv(const std::filesystem::path& path) const {
    std::vector<std::pair<std::string, Entry>> rows;
    std::size_t dims = 0;
    {
        std::lock_guard lock(mutex_);
        for (const auto& [key, entry] : map_) {
            rows.emplace_back(key.first, entry);
            dims = std::max(dims, entry.point.size());
        }
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first < b.first : a.second.sample_id < b.second.sample_id;
    });
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError(fmt::format("cannot write sample cache {}", path.string()));
    }
    out << "sample_id";
    for (std::size_t m = 0; m < std::max<std::size_t>(dims, 1); ++m) {
        out << ",c" << m + 1;
    }
    out << ",qoi_id,component_index,value\n";
    for (const auto& [qoi_id, e] : rows) {
        for (std::size_t c = 0; c < e.value.size(); ++c) {
            out << fmt::format("{},{:.17g},{},{},{:.17g}\n", e.sample_id, fmt::join(e.point, ","), qoi_id, c, e.value[c]);
        }
    }
    if (!out) {
        throw IoError(fmt::format("failed while writing sample cache {}", path.string()));
    }
}

QoiCache QoiCache::read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError(fmt::format("cannot read sample cache {}", path.string()));
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError(fmt::format("sample cache {} is empty", path.string()));
    }
    const std::size_t columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
    if (columns < 5 || line.rfind("sample_id,", 0) != 0) {
        throw IoError(fmt::format("sample cache {} has an unexpected header", path.string()));
    }
    const std::size_t dims = columns - 4;
    QoiCache cache;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        if (cells.size() != columns) {
            throw IoError(fmt::format("{}:{}: expected {} fields, got {}", path.string(), line_no, columns, cells.size()));
        }
        try {
            const std::uint64_t id = std::stoull(cells[0]);
            Point x(dims);
            for (std::size_t m = 0; m < dims; ++m) {
                x[m] = std::stod(cells[1 + m]);
            }
            const std::string& qoi_id = cells[1 + dims];
            const std::size_t component = std::stoul(cells[2 + dims]);
            const double value = std::stod(cells[3 + dims]);
            Entry& e = cache.map_.try_emplace(Key{qoi_id, x}, Entry{id, x, {}}).first->second;
            if (e.value.size() <= component) {
                e.value.resize(component + 1, std::nan(""));
            }
            e.value[component] = value;
        } catch (const std::logic_error&) {
            throw IoError(fmt::format("{}:{}: malformed number", path.string(), line_no));
        }
    }
    return cache;
}

const char* to_string(Sensitivity s) {
    return s == Sensitivity::Sensitive ? "sensitive" : "insensitive";
}

double pick_freeze_index(const std::vector<std::vector<double>>& f, const std::vector<std::vector<double>>& f_star) {
    const std::size_t n = f.size();
    if (n == 0 || f_star.size() != n) {
        throw DomainError(fmt::format("pick-freeze estimator needs matching nonempty samples ({} vs {})", n,
                                      f_star.size()));
    }
    const std::size_t k = f.front().size();
    long double numerator = 0.0L;
    long double denominator = 0.0L;
    long double second_moment = 0.0L;
    for (std::size_t c = 0; c < k; ++c) {
        long double mean = 0.0L;
        for (std::size_t j = 0; j < n; ++j) {
            if (f[j].size() != k || f_star[j].size() != k) {
                throw DomainError("QoI outputs differ in length across samples");
            }
            mean += static_cast<long double>(f[j][c]) + f_star[j][c];
        }
        mean /= 2.0L * n;
        for (std::size_t j = 0; j < n; ++j) {
            const long double a = f[j][c] - mean;
            const long double b = f_star[j][c] - mean;
            numerator += a * b;
            denominator += 0.5L * (a * a + b * b);
            second_moment += 0.5L * (static_cast<long double>(f[j][c]) * f[j][c] +
                                     static_cast<long double>(f_star[j][c]) * f_star[j][c]);
        }
    }
    if (!(denominator > 1e-24L * second_moment) || !std::isfinite(static_cast<double>(denominator))) {
        throw UndefinedMeasureError("sensitivity index undefined: QoI output variance is zero");
    }
    return static_cast<double>(numerator / denominator);
}

namespace {

void require_samples(const SampleSet& samples, std::size_t n) {
    if (n < 2 || n > samples.size()) {
        throw DomainError(fmt::format("need 2 <= n <= {} base samples (got {})", samples.size(), n));
    }
}

void evaluate_first(const SampleSet& samples, std::size_t n, const Qoi& qoi, QoiCache& cache, int threads) {
    const std::size_t d = samples.dims();
    std::vector<std::pair<std::uint64_t, Point>> items;
    items.reserve(n * (d + 1));
    for (std::size_t j = 0; j < n; ++j) {
        items.emplace_back(SampleSet::base_id(j, d), samples.base[j]);
        for (std::size_t i = 0; i < d; ++i) {
            items.emplace_back(SampleSet::companion_id(i, j, d), samples.companions[i][j]);
        }
    }
    cache.evaluate_batch(qoi, items, threads);
}

double index_from_cache(const SampleSet& samples, std::size_t n, const Qoi& qoi, const QoiCache& cache, std::size_t i) {
    std::vector<std::vector<double>> f(n), f_star(n);
    for (std::size_t j = 0; j < n; ++j) {
        f[j] = *cache.find(qoi.id, samples.base[j]);
        f_star[j] = *cache.find(qoi.id, samples.companions[i][j]);
    }
    return pick_freeze_index(f, f_star);
}

} // namespace

double sobol_index(const SampleSet& samples, std::size_t n, const Qoi& qoi, QoiCache& cache, std::size_t i,
                   int threads) {
    require_samples(samples, n);
    if (i >= samples.dims()) {
        throw DomainError(fmt::format("parameter index {} out of range", i));
    }
    evaluate_first(samples, n, qoi, cache, threads);
    return index_from_cache(samples, n, qoi, cache, i);
}

std::vector<double> sobol_indices(const SampleSet& samples, std::size_t n, const Qoi& qoi, QoiCache& cache,
                                  int threads) {
    require_samples(samples, n);
    evaluate_first(samples, n, qoi, cache, threads);
    std::vector<double> si(samples.dims());
    for (std::size_t i = 0; i < si.size(); ++i) {
        si[i] = index_from_cache(samples, n, qoi, cache, i);
    }
    return si;
}

std::vector<Sensitivity> classify(const std::vector<double>& indices, double epsilon) {
    std::vector<Sensitivity> out;
    out.reserve(indices.size());
    for (double si : indices) {
        out.push_back(si > epsilon ? Sensitivity::Sensitive : Sensitivity::Insensitive);
    }
    return out;
}

std::vector<std::string> default_parameter_names(std::size_t dims) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < dims; ++i) {
        names.push_back(fmt::format("c{}", i + 1));
    }
    return names;
}

std::string SensitivityResult::to_json() const {
    nlohmann::ordered_json j;
    j["qoi_id"] = qoi_id;
    j["parameters"] = parameters;
    j["indices"] = indices;
    std::vector<std::string> cls;
    for (Sensitivity s : classification) {
        cls.emplace_back(to_string(s));
    }
    j["classification"] = cls;
    j["epsilon"] = epsilon;
    j["n_samples"] = n_samples;
    j["trace"] = nlohmann::ordered_json::array();
    for (const TracePoint& t : trace) {
        j["trace"].push_back({{"n_samples", t.n_samples}, {"indices", t.indices}});
    }
    return j.dump(2) + "\n";
}

SensitivityResult SensitivityResult::from_json(const std::string& text) {
    SensitivityResult r;
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        r.qoi_id = j.at("qoi_id").get<std::string>();
        r.parameters = j.at("parameters").get<std::vector<std::string>>();
        r.indices = j.at("indices").get<std::vector<double>>();
        for (const auto& s : j.at("classification")) {
            const std::string v = s.get<std::string>();
            if (v != "sensitive" && v != "insensitive") {
                throw ConfigError(fmt::format("unknown classification '{}'", v));
            }
            r.classification.push_back(v == "sensitive" ? Sensitivity::Sensitive : Sensitivity::Insensitive);
        }
        r.epsilon = j.at("epsilon").get<double>();
        r.n_samples = j.at("n_samples").get<std::size_t>();
        for (const auto& t : j.at("trace")) {
            r.trace.push_back({t.at("n_samples").get<std::size_t>(), t.at("indices").get<std::vector<double>>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(fmt::format("malformed sensitivity result: {}", e.what()));
    }
    if (r.parameters.size() != r.indices.size() || r.classification.size() != r.indices.size()) {
        throw ConfigError("sensitivity result fields disagree in length");
    }
    return r;
}

std::string SensitivityResult::trace_csv() const {
    std::string out = "n_samples";
    for (const std::string& p : parameters) {
        out += ",SI_" + p;
    }
    out += "\n";
    for (const TracePoint& t : trace) {
        out += fmt::format("{},{:.17g}\n", t.n_samples, fmt::join(t.indices, ","));
    }
    return out;
}

SensitivityResult convergence_sweep(const DesignSpace& space, const Qoi& qoi, const SweepOptions& options,
                                    QoiCache& cache, SampleSet& samples) {
    space.validate();
    if (options.counts.empty()) {
        throw ConfigError("convergence sweep needs at least one sample count");
    }
    for (std::size_t k = 0; k < options.counts.size(); ++k) {
        if (options.counts[k] < 2 || (k > 0 && options.counts[k] <= options.counts[k - 1])) {
            throw ConfigError("sample counts must be ascending and at least 2");
        }
    }
    if (!samples.base.empty() && samples.dims() != space.dims()) {
        throw ConfigError("existing sample set lives in a different design space");
    }

    SensitivityResult result;
    result.qoi_id = qoi.id;
    result.parameters = default_parameter_names(space.dims());
    result.epsilon = options.epsilon;
    for (std::size_t n : options.counts) {
        if (samples.size() < n) {
            samples = samples.base.empty()
                          ? dps_sample(space, n, nullptr, options.dps, options.seed)
                          : dps_sample(space, n - samples.size(), &samples, options.dps, options.seed);
        }
        try {
            result.trace.push_back({n, sobol_indices(samples, n, qoi, cache, options.threads)});
        } catch (const UndefinedMeasureError& e) {
            throw UndefinedMeasureError(fmt::format("{} (QoI '{}', {} samples)", e.what(), qoi.id, n));
        }
    }
    result.indices = result.trace.back().indices;
    result.n_samples = result.trace.back().n_samples;
    result.classification = classify(result.indices, options.epsilon);
    return result;
}

} // namespace hullgsa
