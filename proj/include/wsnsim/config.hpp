#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "wsnsim/engine.hpp"
#include "wsnsim/format.hpp"
#include "wsnsim/metrics.hpp"
#include "wsnsim/strategies.hpp"

namespace wsnsim {

/// Bad flag, bad config value or unknown key. Maps to exit code 1.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Flat key=value text, '#' starts a comment, blank lines ignored.
inline std::map<std::string, std::string> parse_config_text(std::istream& in, const std::string& origin = "config") {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string{};
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(origin + ":" + std::to_string(line_no) + ": expected key=value");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw UsageError(origin + ":" + std::to_string(line_no) + ": empty key");
        kv[key] = value;
    }
    return kv;
}

inline std::map<std::string, std::string> load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    return parse_config_text(in, path);
}

/// "100x80" -> {100, 80}
inline std::pair<double, double> parse_area(std::string_view s) {
    const auto x = s.find_first_of("xX");
    if (x == std::string_view::npos) throw UsageError("malformed area '" + std::string(s) + "', expected WxH");
    double w = 0, h = 0;
    try {
        w = parse_double(s.substr(0, x));
        h = parse_double(s.substr(x + 1));
    } catch (const std::invalid_argument&) {
        throw UsageError("malformed area '" + std::string(s) + "', expected WxH");
    }
    if (!(w > 0) || !(h > 0)) throw UsageError("area dimensions must be positive");
    return {w, h};
}

inline Position parse_point(std::string_view s) {
    const auto c = s.find(',');
    if (c == std::string_view::npos) throw UsageError("malformed point '" + std::string(s) + "', expected X,Y");
    try {
        return {parse_double(s.substr(0, c)), parse_double(s.substr(c + 1))};
    } catch (const std::invalid_argument&) {
        throw UsageError("malformed point '" + std::string(s) + "', expected X,Y");
    }
}

/// Everything a single run needs before the topology is materialized.
struct RunOptions {
    StrategyKind strategy = StrategyKind::Direct;
    std::size_t nodes = 100;
    double width = 100.0;
    double height = 100.0;
    Position base{0.0, 0.0};
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    ExportFormat format = ExportFormat::Csv;
    std::string topology_file;  // when set, replaces nodes/area/base
    std::string trace_file;
    std::size_t max_iterations = 100000;
    EnergyParams energy;
    StrategyKnobs knobs;
};

/// Which strategies a tuning knob applies to.
inline std::set<StrategyKind> knob_applies_to(std::string_view key) {
    using K = StrategyKind;
    if (key == "clusters") return {K::RandomClustering, K::IdealClustering};
    if (key == "round_length") return {K::RandomClustering};
    if (key == "max_neighbors") return {K::BasicDiffusion, K::E3D};
    if (key == "queue_limit" || key == "low_power_threshold" || key == "power_compare_threshold") return {K::E3D};
    return {};
}

inline bool is_strategy_knob(std::string_view key) { return !knob_applies_to(key).empty(); }

namespace detail {
inline std::size_t to_count(const std::string& key, const std::string& v) {
    long long n = 0;
    try {
        n = parse_integer(v);
    } catch (const std::invalid_argument&) {
        throw UsageError(key + ": expected a non-negative integer, got '" + v + "'");
    }
    if (n < 0) throw UsageError(key + ": expected a non-negative integer, got '" + v + "'");
    return static_cast<std::size_t>(n);
}

inline double to_real(const std::string& key, const std::string& v) {
    try {
        return parse_double(v);
    } catch (const std::invalid_argument&) {
        throw UsageError(key + ": expected a number, got '" + v + "'");
    }
}
} // namespace detail

/// Applies one key. Keys use snake_case; flags map onto the same names.
inline void apply_option(RunOptions& o, const std::string& key, const std::string& value) {
    using detail::to_count;
    using detail::to_real;
    if (key == "algo") {
        auto k = parse_strategy(value);
        if (!k) throw UsageError("unknown algorithm '" + value + "'");
        o.strategy = *k;
    } else if (key == "nodes") {
        o.nodes = to_count(key, value);
        if (o.nodes == 0) throw UsageError("nodes must be at least 1");
    } else if (key == "area") {
        std::tie(o.width, o.height) = parse_area(value);
    } else if (key == "base") {
        o.base = parse_point(value);
    } else if (key == "seed") {
        o.seed = to_count(key, value);
    } else if (key == "out") {
        o.out_dir = value;
    } else if (key == "format") {
        auto f = parse_format(value);
        if (!f) throw UsageError("unknown format '" + value + "', expected csv or json");
        o.format = *f;
    } else if (key == "topology") {
        o.topology_file = value;
    } else if (key == "trace") {
        o.trace_file = value;
    } else if (key == "max_iterations") {
        o.max_iterations = to_count(key, value);
    } else if (key == "clusters") {
        o.knobs.clusters = to_count(key, value);
    } else if (key == "round_length") {
        o.knobs.round_length = to_count(key, value);
    } else if (key == "max_neighbors") {
        o.knobs.max_neighbors = to_count(key, value);
    } else if (key == "queue_limit") {
        o.knobs.e3d.queue_limit = to_count(key, value);
    } else if (key == "low_power_threshold") {
        o.knobs.e3d.low_power_threshold = to_real(key, value);
    } else if (key == "power_compare_threshold") {
        o.knobs.e3d.power_compare_threshold = to_real(key, value);
    } else if (key == "elec_per_bit") {
        o.energy.elec_per_bit = to_real(key, value);
    } else if (key == "amp_per_bit_per_m2") {
        o.energy.amp_per_bit_per_m2 = to_real(key, value);
    } else if (key == "data_bits") {
        o.energy.data_bits = to_real(key, value);
    } else if (key == "control_bits") {
        o.energy.control_bits = to_real(key, value);
    } else if (key == "initial_battery") {
        o.energy.initial_battery = to_real(key, value);
    } else {
        throw UsageError("unknown option '" + key + "'");
    }
}

/// File values first, then flags; a flag-level strategy knob must apply to
/// the chosen algorithm. File knobs for other algorithms are ignored.
inline RunOptions resolve_options(const std::map<std::string, std::string>& file,
                                  const std::vector<std::pair<std::string, std::string>>& flags) {
    RunOptions o;
    std::map<std::string, std::string> merged = file;
    for (const auto& [k, v] : flags) merged[k] = v;
    if (auto it = merged.find("algo"); it != merged.end()) apply_option(o, "algo", it->second);
    for (const auto& [k, v] : merged)
        if (k != "algo") apply_option(o, k, v);
    for (const auto& [k, v] : flags) {
        if (!is_strategy_knob(k)) continue;
        if (!knob_applies_to(k).contains(o.strategy))
            throw UsageError("option '" + k + "' does not apply to algorithm '" +
                             std::string(strategy_name(o.strategy)) + "'");
    }
    try {
        o.energy.validate();
        o.knobs.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return o;
}

inline SimConfig make_sim_config(const RunOptions& o) {
    SimConfig c;
    c.topology = o.topology_file.empty() ? generate_topology(o.nodes, o.width, o.height, o.base, o.seed)
                                         : load_topology_csv(o.topology_file);
    c.strategy = o.strategy;
    c.energy = o.energy;
    c.knobs = o.knobs;
    c.max_iterations = o.max_iterations;
    c.seed = o.seed;
    return c;
}

} // namespace wsnsim
