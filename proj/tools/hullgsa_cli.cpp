// hullgsa: sampling, sensitivity analysis and comparison runs for the parametric Wigley hull.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hullgsa/app/commands.hpp"
#include "hullgsa/app/config.hpp"
#include "hullgsa/errors.hpp"

namespace {

using hullgsa::app::RunConfig;

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> qoi;
    std::optional<std::size_t> samples;
    std::optional<std::string> order;
    std::optional<std::string> point;
    std::optional<int> threads;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "INI config file (defaults apply when omitted)");
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_option("--out", o.out, "run directory");
    cmd->add_option("--qoi", o.qoi, "vossers | ssv:N | sbo:n");
    cmd->add_option("--samples", o.samples, "number of base samples");
    cmd->add_option("--order", o.order, "moment order (moments) or order list such as 2-15 (bench)");
    cmd->add_option("--threads", o.threads, "QoI worker threads");
}

// Command-line values go through the same key handling and validation as config files.
RunConfig resolve(const Overrides& o, const std::string& command) {
    RunConfig c = o.config.empty() ? RunConfig{} : RunConfig::load(o.config);
    if (o.seed) {
        c.set("sampling.seed", std::to_string(*o.seed));
    }
    if (o.out) {
        c.set("run.out", *o.out);
    }
    if (o.qoi) {
        c.set("qoi.id", *o.qoi);
    }
    if (o.threads) {
        c.set("run.threads", std::to_string(*o.threads));
    }
    if (o.samples) {
        c.set("sampling.samples", std::to_string(*o.samples));
        // keep configured checkpoints below the new count
        if (!c.checkpoints.empty()) {
            std::erase_if(c.checkpoints, [&](std::size_t n) { return n >= *o.samples; });
            c.checkpoints.push_back(*o.samples);
        }
    }
    if (o.order) {
        c.set(command == "bench" ? "bench.orders" : "moments.order", *o.order);
    }
    if (o.point) {
        c.set("moments.point", *o.point);
    }
    c.validate();
    return c;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Global sensitivity analysis of a parametric hull with physics and geometric quantities of interest"};
    app.require_subcommand(1);
    Overrides o;
    std::vector<std::string> results;

    CLI::App* sample = app.add_subcommand("sample", "draw or extend the DPS sample set");
    CLI::App* sa = app.add_subcommand("sa", "convergence sweep of first-order Sobol indices for one QoI");
    CLI::App* compare = app.add_subcommand("compare", "correlation table of geometric results against physics");
    CLI::App* bench = app.add_subcommand("bench", "median per-evaluation cost of each operator");
    CLI::App* moments = app.add_subcommand("moments", "SSV of one design point as CSV");
    for (CLI::App* c : {sample, sa, compare, bench, moments}) {
        add_common(c, o);
    }
    compare->add_option("results", results, "sa_*.json files; one must be the physics QoI")->required();
    moments->add_option("--point", o.point, "design point c1,c2,c3");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(hullgsa::ErrorCategory::Config);
    }

    try {
        const std::string name = app.get_subcommands().front()->get_name();
        const RunConfig config = resolve(o, name);
        if (name == "sample") {
            hullgsa::app::cmd_sample(config, std::cout);
        } else if (name == "sa") {
            hullgsa::app::cmd_sa(config, std::cout);
        } else if (name == "compare") {
            std::vector<std::filesystem::path> paths(results.begin(), results.end());
            hullgsa::app::cmd_compare(config, paths, std::cout);
        } else if (name == "bench") {
            hullgsa::app::cmd_bench(config, std::cout);
        } else {
            hullgsa::app::cmd_moments(config, std::cout);
        }
    } catch (const hullgsa::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
