#include "hullgsa/app/commands.hpp"

#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fmt/ranges.h>
#include "json.hpp"

#include "hullgsa/app/qoi.hpp"
#include "hullgsa/errors.hpp"

namespace hullgsa::app {

namespace fs = std::filesystem;

namespace {

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError(fmt::format("cannot create output directory {}: {}", dir.string(), ec.message()));
    }
}

// Written to a sibling temp file first so a failed run never leaves a truncated output.
void write_file(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) {
            throw IoError(fmt::format("cannot write {}", path.string()));
        }
        out << content;
        if (!out) {
            throw IoError(fmt::format("failed while writing {}", path.string()));
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        throw IoError(fmt::format("cannot move {} into place: {}", path.string(), ec.message()));
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(fmt::format("cannot read {}", path.string()));
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void append_manifest(const RunConfig& config, const std::string& command, nlohmann::ordered_json extra) {
    nlohmann::ordered_json entry;
    entry["command"] = command;
    entry["config_hash"] = config.hash();
    entry["seed"] = config.seed;
    for (auto& [k, v] : extra.items()) {
        entry[k] = v;
    }
    const fs::path path = config.out / kManifestFile;
    std::ofstream out(path, std::ios::app | std::ios::binary);
    if (!out) {
        throw IoError(fmt::format("cannot append to {}", path.string()));
    }
    out << entry.dump() << "\n";
    // the resolved config behind each hash, written once
    const fs::path cfg = config.out / fmt::format("config_{}.ini", config.hash());
    if (!fs::exists(cfg)) {
        write_file(cfg, config.canonical());
    }
}

SampleSet load_or_empty(const RunConfig& config) {
    const fs::path path = config.out / kSamplesFile;
    if (!fs::exists(path)) {
        return {};
    }
    SampleSet s = read_samples(path, config.seed);
    if (s.dims() != config.space().dims()) {
        throw ConfigError(fmt::format("{} has {} parameters, the config {}", path.string(), s.dims(),
                                      config.space().dims()));
    }
    for (const Point& x : s.base) {
        if (!config.space().contains(x)) {
            throw ConfigError(fmt::format("{} holds points outside the configured design space", path.string()));
        }
    }
    return s;
}

} // namespace

std::string qoi_slug(const std::string& qoi_id) {
    std::string s = qoi_id;
    for (char& ch : s) {
        if (ch == ':') {
            ch = '_';
        }
    }
    return s;
}

void write_samples(const SampleSet& samples, const fs::path& path) {
    const std::size_t d = samples.dims();
    std::string out = "sample_id";
    for (std::size_t m = 0; m < d; ++m) {
        out += fmt::format(",c{}", m + 1);
    }
    out += "\n";
    for (std::size_t j = 0; j < samples.size(); ++j) {
        out += fmt::format("{},{:.17g}\n", SampleSet::base_id(j, d), fmt::join(samples.base[j], ","));
        for (std::size_t i = 0; i < d; ++i) {
            out += fmt::format("{},{:.17g}\n", SampleSet::companion_id(i, j, d), fmt::join(samples.companions[i][j], ","));
        }
    }
    write_file(path, out);
}

SampleSet read_samples(const fs::path& path, std::uint64_t seed) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line) || line.rfind("sample_id,", 0) != 0) {
        throw IoError(fmt::format("{} is not a sample file", path.string()));
    }
    const std::size_t d = static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
    std::vector<std::pair<std::uint64_t, Point>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::istringstream ls(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        if (cells.size() != d + 1) {
            throw IoError(fmt::format("{}:{}: expected {} fields", path.string(), line_no, d + 1));
        }
        try {
            Point x(d);
            for (std::size_t m = 0; m < d; ++m) {
                x[m] = std::stod(cells[m + 1]);
            }
            rows.emplace_back(std::stoull(cells[0]), std::move(x));
        } catch (const std::logic_error&) {
            throw IoError(fmt::format("{}:{}: malformed number", path.string(), line_no));
        }
    }
    if (rows.size() % (d + 1) != 0) {
        throw IoError(fmt::format("{}: incomplete pick-freeze groups", path.string()));
    }
    SampleSet s;
    s.seed = seed;
    const std::size_t n = rows.size() / (d + 1);
    s.base.resize(n);
    s.companions.assign(d, std::vector<Point>(n));
    std::vector<bool> seen(rows.size(), false);
    for (auto& [id, x] : rows) {
        if (id >= rows.size() || seen[id]) {
            throw IoError(fmt::format("{}: unexpected or repeated sample id {}", path.string(), id));
        }
        seen[id] = true;
        const std::size_t j = id / (d + 1);
        const std::size_t r = id % (d + 1);
        (r == 0 ? s.base[j] : s.companions[r - 1][j]) = std::move(x);
    }
    return s;
}

SampleSet cmd_sample(const RunConfig& config, std::ostream& log) {
    config.validate();
    ensure_dir(config.out);
    const DesignSpace space = config.space();
    SampleSet set = load_or_empty(config);
    const std::size_t before = set.size();
    const std::size_t n = config.sample_count();
    if (set.size() < n) {
        set = set.base.empty() ? dps_sample(space, n, nullptr, config.dps(), config.seed)
                               : dps_sample(space, n - set.size(), &set, config.dps(), config.seed);
    }
    write_samples(set, config.out / kSamplesFile);
    fmt::print(log, "samples: {} base points ({} new), {} collisions on the last batch\n", set.size(), set.size() - before,
               set.diagnostics.collisions);
    append_manifest(config, "sample", {{"samples", set.size()}, {"added", set.size() - before}});
    return set;
}

SensitivityResult cmd_sa(const RunConfig& config, std::ostream& log) {
    config.validate();
    ensure_dir(config.out);
    const QoiSpec spec = QoiSpec::parse(config.qoi);
    const Qoi qoi = make_qoi(spec, config);
    SampleSet samples = load_or_empty(config);
    const fs::path cache_path = config.out / kCacheFile;
    QoiCache cache = fs::exists(cache_path) ? QoiCache::read_csv(cache_path) : QoiCache{};
    const std::size_t before = samples.size();

    SweepOptions opt;
    opt.counts = config.checkpoint_list();
    opt.epsilon = config.epsilon;
    opt.dps = config.dps();
    opt.threads = config.threads;
    opt.seed = config.seed;
    SensitivityResult result;
    try {
        result = convergence_sweep(config.space(), qoi, opt, cache, samples);
    } catch (...) {
        // keep whatever was evaluated before the failure
        cache.write_csv(cache_path);
        throw;
    }
    cache.write_csv(cache_path);
    if (samples.size() != before) {
        write_samples(samples, config.out / kSamplesFile);
    }
    const std::string slug = qoi_slug(qoi.id);
    write_file(config.out / fmt::format("sa_{}.json", slug), result.to_json());
    write_file(config.out / fmt::format("trace_{}.csv", slug), result.trace_csv());

    fmt::print(log, "{} ({} samples, {} new evaluations)\n", qoi_label(qoi.id), result.n_samples, cache.evaluations());
    for (std::size_t i = 0; i < result.indices.size(); ++i) {
        fmt::print(log, "  SI_{} = {:+.6f}  {}\n", result.parameters[i], result.indices[i],
                   to_string(result.classification[i]));
    }
    append_manifest(config, "sa",
                    {{"qoi", qoi.id}, {"samples", result.n_samples}, {"evaluations", cache.evaluations()},
                     {"outputs", {fmt::format("sa_{}.json", slug), fmt::format("trace_{}.csv", slug), kCacheFile}}});
    return result;
}

CorrelationReport cmd_compare(const RunConfig& config, const std::vector<fs::path>& results, std::ostream& log) {
    config.validate();
    std::vector<SensitivityResult> geometric;
    std::optional<SensitivityResult> physics;
    for (const fs::path& p : results) {
        SensitivityResult r = SensitivityResult::from_json(read_file(p));
        if (QoiSpec::parse(r.qoi_id).is_physics()) {
            if (physics) {
                throw ConfigError("more than one physics result given");
            }
            physics = std::move(r);
        } else {
            geometric.push_back(std::move(r));
        }
    }
    if (!physics) {
        throw ConfigError("compare: a physics reference result (qoi vossers) is required");
    }
    SimilarityOptions sim;
    sim.epsilon = config.epsilon;
    const CorrelationReport report = build_table(geometric, *physics, sim);
    ensure_dir(config.out);
    write_file(config.out / "report.csv", report.csv());
    write_file(config.out / "report.txt", report.text());
    fmt::print(log, "{}", report.text());
    std::vector<std::string> inputs;
    for (const fs::path& p : results) {
        inputs.push_back(p.string());
    }
    append_manifest(config, "compare", {{"inputs", inputs}, {"outputs", {"report.csv", "report.txt"}}});
    return report;
}

std::vector<BenchRow> cmd_bench(const RunConfig& config, std::ostream& log) {
    config.validate();
    ensure_dir(config.out);
    const DesignSpace space = config.space();
    std::mt19937_64 rng(config.seed);
    std::vector<HullParams> designs;
    for (int k = 0; k < config.bench_designs; ++k) {
        Point x(space.dims());
        for (std::size_t m = 0; m < x.size(); ++m) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            x[m] = space.lower[m] + u * (space.upper[m] - space.lower[m]);
        }
        designs.push_back(space.hull_at(x));
    }
    BenchOptions opt;
    opt.K = config.wave_number();
    opt.quadrature = config.quadrature;
    opt.exponent = config.exponent;
    const std::vector<BenchRow> rows = bench_costs(designs, config.bench_orders, opt);
    write_file(config.out / "bench.csv", bench_csv(rows));
    for (const BenchRow& r : rows) {
        fmt::print(log, "{:>8} {:>3}  {:.3e} s\n", r.op, r.order, r.median_seconds);
    }
    append_manifest(config, "bench", {{"designs", designs.size()}, {"outputs", {"bench.csv"}}});
    return rows;
}

SSVector cmd_moments(const RunConfig& config, std::ostream& log) {
    config.validate();
    ensure_dir(config.out);
    const SSVector v = ssv(config.space().hull_at(config.point), config.moment_order, config.exponent);
    std::ostringstream csv;
    write_ssv_csv(v, csv);
    const std::string name = fmt::format("ssv_{}.csv", config.moment_order);
    write_file(config.out / name, csv.str());
    fmt::print(log, "SSV_{} at ({}): {} entries -> {}\n", config.moment_order, fmt::join(config.point, ", "),
               v.entries.size(), (config.out / name).string());
    append_manifest(config, "moments", {{"point", config.point}, {"outputs", {name}}});
    return v;
}

} // namespace hullgsa::app
