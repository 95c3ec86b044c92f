// wsnsim: run one simulation, a multi-topology batch, or export a topology.
//
//   wsnsim run --algo e3d --nodes 100 --area 100x100 --seed 1 --out out/
//   wsnsim batch --topologies 20 --seeds 3 --out batch/
//   wsnsim topology --nodes 100 --seed 7 --out topo.csv
//
// Exit codes: 0 success, 1 usage error, 2 runtime or I/O error.

#include <CLI11.hpp>

#include <deque>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "wsnsim/wsnsim.hpp"

namespace {

using namespace wsnsim;

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct FlagSet {
    std::vector<std::pair<std::string, CLI::Option*>> options;
    std::deque<std::string> values;  // stable addresses for CLI11 bindings

    void add(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help) {
        values.emplace_back();
        options.emplace_back(key, app.add_option(flag, values.back(), help));
    }

    std::vector<std::pair<std::string, std::string>> given() const {
        std::vector<std::pair<std::string, std::string>> out;
        for (std::size_t i = 0; i < options.size(); ++i)
            if (options[i].second->count() > 0) out.emplace_back(options[i].first, values[i]);
        return out;
    }
};

void add_common_flags(CLI::App& app, FlagSet& f) {
    f.add(app, "--nodes", "nodes", "Number of sensor nodes");
    f.add(app, "--area", "area", "Deployment area WxH in meters");
    f.add(app, "--base", "base", "Base station position X,Y");
    f.add(app, "--format", "format", "Export format: csv or json");
    f.add(app, "--max-iterations", "max_iterations", "Safety bound on iterations");
    f.add(app, "--clusters", "clusters", "Cluster count (random-cluster, ideal-cluster)");
    f.add(app, "--round-length", "round_length", "Iterations between head elections (random-cluster)");
    f.add(app, "--max-neighbors", "max_neighbors", "Neighbor table size (diffusion, e3d)");
    f.add(app, "--queue-limit", "queue_limit", "Per-iteration relay limit before QueueFull (e3d)");
    f.add(app, "--low-power-threshold", "low_power_threshold", "NearDeath power fraction (e3d)");
    f.add(app, "--power-compare-threshold", "power_compare_threshold", "PowerImbalance gate (e3d)");
}

std::string summary_line(const SummaryRow& r) {
    auto opt = [](const auto& v) {
        if (!v) return std::string("-");
        if constexpr (std::is_floating_point_v<std::decay_t<decltype(*v)>>)
            return format_number(*v);
        else
            return std::to_string(*v);
    };
    return "strategy=" + r.strategy + " seed=" + std::to_string(r.seed) + " first_death=" + opt(r.first_death) +
           " system_lifetime=" + opt(r.system_lifetime) + " utility_fraction=" + opt(r.utility_fraction) +
           " sync_messages=" + std::to_string(r.sync_messages) + " delivered=" + std::to_string(r.delivered) +
           " dropped=" + std::to_string(r.dropped);
}

int run_single(const std::string& config_file, const std::vector<std::pair<std::string, std::string>>& flags) {
    RunOptions opts;
    SimConfig config;
    try {
        const auto file = config_file.empty() ? std::map<std::string, std::string>{} : load_config_file(config_file);
        opts = resolve_options(file, flags);
        config = make_sim_config(opts);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }

    try {
        std::ofstream trace;
        TraceSink sink;
        if (!opts.trace_file.empty()) {
            trace.open(opts.trace_file, std::ios::binary);
            if (!trace) throw std::runtime_error("cannot open trace file '" + opts.trace_file + "'");
            trace << "iteration,kind,node,peer,packet,joules,detail\n";
            sink = [&trace](const TraceEvent& e) { write_trace_line(trace, e); };
        }
        const auto result = run_simulation(config, sink);
        const auto summary = lifetime_summary(result);
        export_result(result, summary, config.topology, opts.format, opts.out_dir);
        std::cout << summary_line(make_summary_row(result, summary)) << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}

std::vector<StrategyKind> parse_strategy_list(const std::string& list) {
    if (list.empty() || list == "all") return {kAllStrategies.begin(), kAllStrategies.end()};
    std::vector<StrategyKind> out;
    std::stringstream ss(list);
    for (std::string name; std::getline(ss, name, ',');) {
        auto k = parse_strategy(name);
        if (!k) throw UsageError("unknown algorithm '" + name + "'");
        out.push_back(*k);
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Round-based energy simulator for wireless sensor network routing strategies"};
    app.require_subcommand(1);

    // `wsnsim --algo ...` is shorthand for `wsnsim run --algo ...`.
    std::vector<std::string> args(argv + 1, argv + argc);
    if (!args.empty() && args.front().rfind("--", 0) == 0 && args.front() != "--help") args.insert(args.begin(), "run");
    std::reverse(args.begin(), args.end());

    auto* run = app.add_subcommand("run", "Run one simulation and export its results");
    FlagSet run_flags;
    std::string run_config;
    run_flags.add(*run, "--algo", "algo",
                  "direct | diffusion | e3d | ideal-diffusion | random-cluster | ideal-cluster");
    run_flags.add(*run, "--seed", "seed", "Seed for placement and routing randomness");
    run_flags.add(*run, "--out", "out", "Output directory");
    run_flags.add(*run, "--topology", "topology", "Import a topology CSV instead of generating one");
    run_flags.add(*run, "--trace", "trace", "Write the per-event trace to this file");
    add_common_flags(*run, run_flags);
    run->add_option("--config", run_config, "key=value config file; flags override it");

    auto* batch = app.add_subcommand("batch", "Run every strategy over several topologies and seeds");
    FlagSet batch_flags;
    std::string batch_config, algos = "all";
    std::size_t topologies = 20, seeds = 1;
    std::uint64_t base_seed = 1;
    unsigned jobs = 1;
    std::string batch_out = "batch-out";
    bool no_run_exports = false;
    add_common_flags(*batch, batch_flags);
    batch->add_option("--config", batch_config, "key=value config file; flags override it");
    batch->add_option("--topologies", topologies, "Number of random topologies")->check(CLI::PositiveNumber);
    batch->add_option("--seeds", seeds, "Seeds per topology")->check(CLI::Range(1, 144));
    batch->add_option("--algos", algos, "Comma-separated strategies, or 'all'");
    batch->add_option("--base-seed", base_seed, "Base seed for derived topology and run seeds");
    batch->add_option("--out", batch_out, "Output directory");
    batch->add_option("--jobs", jobs, "Parallel worker threads")->check(CLI::PositiveNumber);
    batch->add_flag("--no-run-exports", no_run_exports, "Only write batch_summary.csv");

    auto* topo = app.add_subcommand("topology", "Generate a topology and write it as CSV");
    std::size_t topo_nodes = 100;
    std::string topo_area = "100x100", topo_base = "0,0", topo_out;
    std::uint64_t topo_seed = 1;
    topo->add_option("--nodes", topo_nodes, "Number of sensor nodes")->check(CLI::PositiveNumber);
    topo->add_option("--area", topo_area, "Deployment area WxH in meters");
    topo->add_option("--base", topo_base, "Base station position X,Y");
    topo->add_option("--seed", topo_seed, "Placement seed");
    topo->add_option("--out", topo_out, "Output CSV file")->required();

    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    if (*run) return run_single(run_config, run_flags.given());

    if (*batch) {
        BatchSpec spec;
        try {
            const auto file = batch_config.empty() ? std::map<std::string, std::string>{} : load_config_file(batch_config);
            RunOptions o = resolve_options(file, {});
            for (const auto& [k, v] : batch_flags.given()) apply_option(o, k, v);
            o.energy.validate();
            o.knobs.validate();
            spec.topologies = topologies;
            spec.seeds_per_topology = seeds;
            spec.strategies = parse_strategy_list(algos);
            spec.base_seed = base_seed;
            spec.output_dir = batch_out;
            spec.nodes = o.nodes;
            spec.width = o.width;
            spec.height = o.height;
            spec.base = o.base;
            spec.energy = o.energy;
            spec.knobs = o.knobs;
            spec.max_iterations = o.max_iterations;
            spec.format = o.format;
            spec.jobs = jobs;
            spec.write_run_exports = !no_run_exports;
            spec.validate();
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kExitUsage;
        }
        try {
            const auto outcome = run_batch(spec);
            std::cout << "runs=" << outcome.runs.size() << " summary=" << (spec.output_dir / "batch_summary.csv").string()
                      << '\n';
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kExitRuntime;
        }
        return 0;
    }

    if (*topo) {
        Topology t;
        try {
            const auto [w, h] = parse_area(topo_area);
            t = generate_topology(topo_nodes, w, h, parse_point(topo_base), topo_seed);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kExitUsage;
        }
        try {
            save_topology_csv(topo_out, t);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kExitRuntime;
        }
        return 0;
    }
    return kExitUsage;
}
