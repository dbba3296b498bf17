#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hullgsa/app/commands.hpp"
#include "hullgsa/app/config.hpp"
#include "hullgsa/app/qoi.hpp"
#include "hullgsa/errors.hpp"

using namespace hullgsa;
using namespace hullgsa::app;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("hullgsa_test_" + name)) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig small(const fs::path& out, std::size_t n = 40) {
    RunConfig c;
    c.out = out;
    c.samples = n;
    c.checkpoints = {n / 2, n};
    c.seed = 7;
    return c;
}

} // namespace

TEST_CASE("config defaults and the one-line config") {
    const RunConfig d;
    CHECK(d.hull.L == 1.0);
    CHECK(d.hull.B == 0.0996);
    CHECK(d.hull.T == 0.13775);
    CHECK(d.epsilon == 0.05);
    CHECK(d.sample_count() == 8000);

    const RunConfig one = RunConfig::parse("qoi = vossers\n");
    CHECK(one.qoi == "vossers");
    CHECK(one.sample_count() == 350);
    const auto cps = one.checkpoint_list();
    CHECK(cps.front() == 10);
    CHECK(cps.back() == 350);
    for (std::size_t i = 1; i < cps.size(); ++i) {
        CHECK(cps[i] > cps[i - 1]);
    }
}

TEST_CASE("config sections, aliases and errors") {
    const RunConfig c = RunConfig::parse("seed = 9\n"
                                         "[space]\nc2 = 0.2 0.8\n"
                                         "[sampling]\nsamples = 100\ncheckpoints = 50 100\n"
                                         "[run]\nthreads = 3\n");
    CHECK(c.seed == 9);
    CHECK(c.lower[1] == 0.2);
    CHECK(c.upper[1] == 0.8);
    CHECK(c.checkpoint_list() == std::vector<std::size_t>{50, 100});
    CHECK(c.threads == 3);
    CHECK(c.space().hull_at({0.5, 0.5, 0.5}).B == c.hull.B);

    CHECK_THROWS_AS(RunConfig::parse("[qoi]\nflavour = x\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("[space]\nc1 = 0.7 0.3\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("[space]\nc1 = 0.5 0.5\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("[space]\nc1 = 0 1.5\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("[sampling]\nsamples = 100\ncheckpoints = 50 90\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("froude = -1\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::parse("seed = abc\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::load("/nonexistent/run.ini"), Error);
}

TEST_CASE("config hash follows resolved content") {
    const RunConfig a = RunConfig::parse("qoi = sbo:15\n");
    const RunConfig b = RunConfig::parse("[qoi]\nid = sbo:15\n\n# comment\n");
    CHECK(a.hash() == b.hash());
    CHECK(a.hash().size() == 16);
    CHECK(a.hash() == RunConfig{}.hash());
    CHECK(a.hash() != RunConfig::parse("qoi = sbo:14\n").hash());
    RunConfig c = a;
    c.set("sampling.seed", "2");
    CHECK(c.hash() != a.hash());
}

TEST_CASE("qoi ids") {
    CHECK(QoiSpec::parse("vossers").is_physics());
    CHECK(QoiSpec::parse("ssv:2").kind == QoiSpec::Kind::Ssv);
    CHECK(QoiSpec::parse("sbo:15").order == 15);
    CHECK(QoiSpec::parse("sbo:0").id() == "sbo:0");
    CHECK_THROWS_AS(QoiSpec::parse("ssv:0"), ConfigError);
    CHECK_THROWS_AS(QoiSpec::parse("sbo:15x"), ConfigError);
    CHECK_THROWS_AS(QoiSpec::parse("wave"), ConfigError);
    CHECK(qoi_slug("ssv:12") == "ssv_12");
}

TEST_CASE("sample command is deterministic and extends a prior set") {
    TempDir a("sample_a");
    TempDir b("sample_b");
    std::ostringstream log;
    const SampleSet s1 = cmd_sample(small(a.path, 100), log);
    cmd_sample(small(b.path, 100), log);
    CHECK(s1.size() == 100);
    CHECK(slurp(a.path / kSamplesFile) == slurp(b.path / kSamplesFile));

    const SampleSet back = read_samples(a.path / kSamplesFile, 7);
    CHECK(back.base == s1.base);
    CHECK(back.companions == s1.companions);

    const SampleSet s2 = cmd_sample(small(a.path, 200), log);
    REQUIRE(s2.size() == 200);
    for (std::size_t j = 0; j < 100; ++j) {
        CHECK(s2.base[j] == s1.base[j]);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(s2.companions[i][j] == s1.companions[i][j]);
        }
    }
    std::ifstream manifest(a.path / kManifestFile);
    std::string line;
    int lines = 0;
    while (std::getline(manifest, line)) {
        ++lines;
        CHECK(line.find("\"config_hash\"") != std::string::npos);
    }
    CHECK(lines == 2);
}

TEST_CASE("sample command rejects bad bounds before writing") {
    TempDir t("sample_bad");
    RunConfig c = small(t.path);
    c.lower[0] = 0.8;
    c.upper[0] = 0.2;
    std::ostringstream log;
    CHECK_THROWS_AS(cmd_sample(c, log), ConfigError);
    CHECK_FALSE(fs::exists(t.path));
}

TEST_CASE("sa command reuses the cache and is reproducible") {
    TempDir t("sa");
    TempDir u("sa_again");
    RunConfig c = small(t.path);
    c.qoi = "sbo:15";
    c.threads = 2;
    std::ostringstream log;
    const SensitivityResult r1 = cmd_sa(c, log);
    CHECK(r1.n_samples == 40);
    REQUIRE(r1.trace.size() == 2);
    CHECK(r1.trace[0].n_samples == 20);
    const std::string cache1 = slurp(t.path / kCacheFile);

    const SensitivityResult r2 = cmd_sa(c, log);
    CHECK(r2.indices == r1.indices);
    CHECK(slurp(t.path / kCacheFile) == cache1);
    CHECK(log.str().find("0 new evaluations") != std::string::npos);

    RunConfig c2 = c;
    c2.out = u.path;
    c2.threads = 1;
    cmd_sa(c2, log);
    CHECK(slurp(u.path / "sa_sbo_15.json") == slurp(t.path / "sa_sbo_15.json"));
    CHECK(slurp(u.path / "trace_sbo_15.csv") == slurp(t.path / "trace_sbo_15.csv"));
    CHECK(slurp(u.path / kSamplesFile) == slurp(t.path / kSamplesFile));

    const SensitivityResult back = SensitivityResult::from_json(slurp(t.path / "sa_sbo_15.json"));
    CHECK(back.indices == r1.indices);
}

TEST_CASE("compare requires exactly one physics result") {
    TempDir t("compare");
    RunConfig c = small(t.path, 20);
    c.checkpoints = {20};
    std::ostringstream log;
    c.qoi = "sbo:15";
    cmd_sa(c, log);
    c.qoi = "ssv:2";
    cmd_sa(c, log);
    const fs::path g = t.path / "sa_sbo_15.json";
    const fs::path s = t.path / "sa_ssv_2.json";
    CHECK_THROWS_AS(cmd_compare(c, {g}, log), ConfigError);
    CHECK_THROWS_AS(cmd_compare(c, {g, s}, log), ConfigError);

    // a physics result stands in via the JSON format; its content is synthetic
    SensitivityResult phys = SensitivityResult::from_json(slurp(g));
    phys.qoi_id = "vossers";
    std::ofstream(t.path / "sa_vossers.json") << phys.to_json();
    const CorrelationReport rep = cmd_compare(c, {s, t.path / "sa_vossers.json", g}, log);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.rows[0].name == "Vossers finite-part");
    CHECK(rep.rows[1].name == "SSV_2");
    CHECK(rep.rows[2].name == "G_15");
    CHECK(*rep.rows[2].similarity == 1.0);
    CHECK(*rep.rows[2].nrmse == 0.0);
    CHECK(fs::exists(t.path / "report.csv"));
    CHECK(fs::exists(t.path / "report.txt"));
}

TEST_CASE("bench and moments outputs") {
    TempDir t("bench");
    RunConfig c = small(t.path);
    c.bench_designs = 3;
    c.bench_orders = {2, 3};
    std::ostringstream log;
    const auto rows = cmd_bench(c, log);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].op == "vossers");
    const std::string csv = slurp(t.path / "bench.csv");
    CHECK(csv.rfind("operator,order,median_seconds,runs\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);

    c.point = {0.2, 0.3, 0.4};
    c.moment_order = 3;
    const SSVector v = cmd_moments(c, log);
    CHECK(v.entries.size() == 17);
    const std::string m = slurp(t.path / "ssv_3.csv");
    CHECK(m.rfind("p,q,r,value\n", 0) == 0);
    CHECK(std::count(m.begin(), m.end(), '\n') == 18);

    c.point = {0.2, 0.3, 1.4};
    CHECK_THROWS_AS(cmd_moments(c, log), ConfigError);
}
