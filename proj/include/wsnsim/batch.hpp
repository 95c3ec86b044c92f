#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "wsnsim/engine.hpp"
#include "wsnsim/format.hpp"
#include "wsnsim/metrics.hpp"
#include "wsnsim/strategies.hpp"
#include "wsnsim/topology.hpp"

namespace wsnsim {

inline constexpr std::uint64_t kBaseSeedStride = 1'000'003;
inline constexpr std::uint64_t kTopologySeedStride = 1'009;
inline constexpr std::uint64_t kSeedIndexStride = 7;
inline constexpr std::size_t kMaxSeedsPerTopology = 144;  // 144 * 7 stays below 1009

inline std::uint64_t topology_seed(std::uint64_t base_seed, std::size_t topology_index) {
    return base_seed * kBaseSeedStride + topology_index * kTopologySeedStride;
}

/// baseSeed * 1000003 + topologyIndex * 1009 + seedIndex * 7 + strategyIndex
inline std::uint64_t run_seed(std::uint64_t base_seed, std::size_t topology_index, std::size_t seed_index,
                              StrategyKind strategy) {
    return topology_seed(base_seed, topology_index) + seed_index * kSeedIndexStride + strategy_index(strategy);
}

struct BatchSpec {
    std::size_t topologies = 20;
    std::size_t seeds_per_topology = 1;
    std::vector<StrategyKind> strategies{kAllStrategies.begin(), kAllStrategies.end()};
    std::uint64_t base_seed = 1;
    std::filesystem::path output_dir = "batch-out";
    std::size_t nodes = 100;
    double width = 100.0;
    double height = 100.0;
    Position base{0.0, 0.0};
    EnergyParams energy;
    StrategyKnobs knobs;
    std::size_t max_iterations = 100000;
    ExportFormat format = ExportFormat::Csv;
    bool write_run_exports = true;
    unsigned jobs = 1;

    void validate() const {
        if (topologies == 0) throw std::invalid_argument("batch needs at least one topology");
        if (seeds_per_topology == 0 || seeds_per_topology > kMaxSeedsPerTopology)
            throw std::invalid_argument("seeds per topology must be in [1, 144]");
        if (strategies.empty()) throw std::invalid_argument("batch needs at least one strategy");
        if (nodes == 0) throw std::invalid_argument("batch needs at least one node");
        energy.validate();
        knobs.validate();
    }
};

struct RunKey {
    std::size_t topology = 0;
    std::size_t seed_index = 0;
    StrategyKind strategy = StrategyKind::Direct;

    friend auto operator<=>(const RunKey&, const RunKey&) = default;
};

/// Runs in deterministic order: topology, then seed index, then strategy
/// in the order given.
inline std::vector<RunKey> batch_keys(const BatchSpec& spec) {
    std::vector<RunKey> keys;
    for (std::size_t t = 0; t < spec.topologies; ++t)
        for (std::size_t s = 0; s < spec.seeds_per_topology; ++s)
            for (auto k : spec.strategies) keys.push_back({t, s, k});
    return keys;
}

inline Topology batch_topology(const BatchSpec& spec, std::size_t topology_index) {
    return generate_topology(spec.nodes, spec.width, spec.height, spec.base,
                             topology_seed(spec.base_seed, topology_index));
}

inline SimConfig batch_run_config(const BatchSpec& spec, const RunKey& key, Topology topology) {
    SimConfig c;
    c.topology = std::move(topology);
    c.strategy = key.strategy;
    c.energy = spec.energy;
    c.knobs = spec.knobs;
    c.max_iterations = spec.max_iterations;
    c.seed = run_seed(spec.base_seed, key.topology, key.seed_index, key.strategy);
    return c;
}

inline std::string run_dir_name(const RunKey& key) {
    return "t" + std::to_string(key.topology) + "_s" + std::to_string(key.seed_index) + "_" +
           std::string(strategy_name(key.strategy));
}

struct RunRecord {
    RunKey key;
    SummaryRow row;
    LifetimeSummary summary;
    std::optional<double> death_distance_correlation;
};

struct BatchOutcome {
    std::vector<RunRecord> runs;  // in batch_keys order
};

struct Aggregate {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

inline std::optional<Aggregate> aggregate(const std::vector<double>& values) {
    if (values.empty()) return std::nullopt;
    Aggregate a;
    a.count = values.size();
    a.min = *std::min_element(values.begin(), values.end());
    a.max = *std::max_element(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;  // serial, in key order
    a.mean = sum / static_cast<double>(values.size());
    return a;
}

inline constexpr std::string_view kBatchRunHeader =
    "topology,seed_index,strategy,seed,first_death,system_lifetime,utility_fraction,sync_messages,delivered,dropped";
inline constexpr std::string_view kBatchAggregateHeader =
    "strategy,statistic,first_death,system_lifetime,utility_fraction";

/// Per-run rows, a blank line, then mean/min/max per strategy over the
/// uncensored runs.
inline std::string batch_summary_csv(const std::vector<RunRecord>& runs, const std::vector<StrategyKind>& order) {
    std::ostringstream out;
    out << kBatchRunHeader << '\n';
    for (const auto& r : runs)
        out << r.key.topology << ',' << r.key.seed_index << ',' << summary_csv_row(r.row) << '\n';
    out << '\n' << kBatchAggregateHeader << '\n';
    for (auto k : order) {
        std::vector<double> first, life, util;
        for (const auto& r : runs) {
            if (r.key.strategy != k) continue;
            if (r.summary.first_death) first.push_back(static_cast<double>(*r.summary.first_death));
            if (r.summary.system_lifetime) life.push_back(static_cast<double>(*r.summary.system_lifetime));
            if (r.summary.utility_fraction) util.push_back(*r.summary.utility_fraction);
        }
        const auto af = aggregate(first), al = aggregate(life), au = aggregate(util);
        auto cell = [](const std::optional<Aggregate>& a, double Aggregate::*field) {
            return a ? format_number((*a).*field) : std::string{};
        };
        for (auto [label, field] : {std::pair{"mean", &Aggregate::mean}, std::pair{"min", &Aggregate::min},
                                    std::pair{"max", &Aggregate::max}}) {
            out << strategy_name(k) << ',' << label << ',' << cell(af, field) << ',' << cell(al, field) << ','
                << cell(au, field) << '\n';
        }
    }
    return out.str();
}

/// Optional per-run hook, e.g. for attaching a trace sink.
using RunObserver = std::function<TraceSink(const RunKey&)>;

/// Every (topology, seed, strategy) run, identical topologies across
/// strategies. Workers only fill their own slot, so output is independent
/// of `jobs`. On failure the completed rows are still written, then the
/// first error is rethrown.
inline BatchOutcome run_batch(const BatchSpec& spec, const RunObserver& observer = {}) {
    spec.validate();
    const auto keys = batch_keys(spec);
    std::vector<std::optional<Topology>> topologies(spec.topologies);
    for (std::size_t t = 0; t < spec.topologies; ++t) topologies[t] = batch_topology(spec, t);

    std::vector<std::optional<RunRecord>> slots(keys.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= keys.size() || failed.load()) return;
            try {
                const auto& key = keys[i];
                const Topology& topo = *topologies[key.topology];
                const auto config = batch_run_config(spec, key, topo);
                const auto result = run_simulation(config, observer ? observer(key) : TraceSink{});
                const auto summary = lifetime_summary(result);
                if (spec.write_run_exports)
                    export_result(result, summary, topo, spec.format, spec.output_dir / run_dir_name(key));
                slots[i] = RunRecord{key, make_summary_row(result, summary), summary,
                                     death_distance_correlation(result, topo)};
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed = true;
            }
        }
    };
    const unsigned jobs = std::max(1u, spec.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }

    BatchOutcome outcome;
    for (auto& s : slots)
        if (s) outcome.runs.push_back(std::move(*s));

    std::error_code ec;
    std::filesystem::create_directories(spec.output_dir, ec);
    if (ec) throw std::runtime_error("cannot create '" + spec.output_dir.string() + "': " + ec.message());
    detail::write_file(spec.output_dir / "batch_summary.csv", batch_summary_csv(outcome.runs, spec.strategies));

    if (first_error) std::rethrow_exception(first_error);
    return outcome;
}

} // namespace wsnsim
