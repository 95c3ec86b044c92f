#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wsnsim/engine.hpp"
#include "wsnsim/format.hpp"
#include "wsnsim/topology.hpp"

namespace wsnsim {

struct CurvePoint {
    std::size_t iteration = 0;
    double percent_alive = 0.0;

    friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// Step series of percent alive, sampled at iteration 0 and at every
/// iteration in which somebody died.
inline std::vector<CurvePoint> utility_curve(const SimulationResult& result) {
    const std::size_t n = result.node_count();
    std::vector<CurvePoint> curve;
    if (n == 0) return curve;
    std::vector<std::size_t> deaths;
    for (const auto& d : result.death_iteration)
        if (d) deaths.push_back(*d);
    std::sort(deaths.begin(), deaths.end());
    curve.push_back({0, 100.0});
    std::size_t alive = n;
    for (std::size_t i = 0; i < deaths.size();) {
        const std::size_t it = deaths[i];
        while (i < deaths.size() && deaths[i] == it) {
            --alive;
            ++i;
        }
        const double pct = 100.0 * static_cast<double>(alive) / static_cast<double>(n);
        if (it == 0)
            curve.front().percent_alive = pct;
        else
            curve.push_back({it, pct});
    }
    return curve;
}

/// 100% utility lasts until the first death; the system dies with its last node.
struct LifetimeSummary {
    std::optional<std::size_t> first_death;
    std::optional<std::size_t> system_lifetime;
    std::optional<double> utility_fraction;  // omitted when censored
    std::optional<double> death_spread;
    bool censored = false;  // some node outlived the iteration limit
};

inline LifetimeSummary lifetime_summary(const SimulationResult& result) {
    LifetimeSummary s;
    for (const auto& d : result.death_iteration) {
        if (!d) {
            s.censored = true;
            continue;
        }
        s.first_death = s.first_death ? std::min(*s.first_death, *d) : *d;
        s.system_lifetime = s.system_lifetime ? std::max(*s.system_lifetime, *d) : *d;
    }
    if (s.censored) {
        s.system_lifetime.reset();
        return s;
    }
    if (!s.first_death) return s;
    if (*s.system_lifetime == 0) {
        s.utility_fraction = 1.0;
        s.death_spread = 0.0;
        return s;
    }
    const double first = static_cast<double>(*s.first_death);
    const double last = static_cast<double>(*s.system_lifetime);
    s.utility_fraction = first / last;
    s.death_spread = (last - first) / last;
    return s;
}

/// Average ranks (1-based); tied values share the mean of their positions.
inline std::vector<double> mid_ranks(const std::vector<double>& values) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> rank(values.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && values[idx[j + 1]] == values[idx[i]]) ++j;
        const double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = r;
        i = j + 1;
    }
    return rank;
}

/// Spearman correlation: Pearson over mid-ranks. A constant series gives 0.
inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("spearman: length mismatch");
    const auto ra = mid_ranks(a);
    const auto rb = mid_ranks(b);
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
    const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        cov += (ra[i] - ma) * (rb[i] - mb);
        va += (ra[i] - ma) * (ra[i] - ma);
        vb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (va == 0.0 || vb == 0.0) return 0.0;
    return cov / std::sqrt(va * vb);
}

/// Rank correlation between distance to base and death iteration over the
/// nodes that died. Negative: far nodes die first. nullopt below 3 deaths.
inline std::optional<double> death_distance_correlation(const SimulationResult& result, const Topology& topo) {
    if (result.node_count() != topo.size()) throw std::invalid_argument("result and topology sizes differ");
    std::vector<double> dist, death;
    for (NodeId i = 0; i < topo.size(); ++i) {
        if (!result.death_iteration[i]) continue;
        dist.push_back(topo.dist_to_base(i));
        death.push_back(static_cast<double>(*result.death_iteration[i]));
    }
    if (death.size() < 3) return std::nullopt;
    return spearman(dist, death);
}

// ---------------------------------------------------------------------------
// Export

enum class ExportFormat { Csv, Json };

inline std::optional<ExportFormat> parse_format(std::string_view s) {
    if (s == "csv") return ExportFormat::Csv;
    if (s == "json") return ExportFormat::Json;
    return std::nullopt;
}

struct SummaryRow {
    std::string strategy;
    std::uint64_t seed = 0;
    std::optional<std::size_t> first_death;
    std::optional<std::size_t> system_lifetime;
    std::optional<double> utility_fraction;
    std::size_t sync_messages = 0;
    std::size_t delivered = 0;
    std::size_t dropped = 0;
};

inline SummaryRow make_summary_row(const SimulationResult& result, const LifetimeSummary& summary) {
    return {std::string(strategy_name(result.strategy)),
            result.seed,
            summary.first_death,
            summary.system_lifetime,
            summary.utility_fraction,
            result.sync_messages,
            result.delivered,
            result.dropped};
}

inline constexpr std::string_view kSummaryHeader =
    "strategy,seed,first_death,system_lifetime,utility_fraction,sync_messages,delivered,dropped";

namespace detail {
template <class T>
std::string opt_field(const std::optional<T>& v) {
    if (!v) return {};
    if constexpr (std::is_floating_point_v<T>)
        return format_number(*v);
    else
        return std::to_string(*v);
}

inline void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

template <class T>
nlohmann::json opt_json(const std::optional<T>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}
} // namespace detail

inline std::string summary_csv_row(const SummaryRow& r) {
    std::ostringstream out;
    out << r.strategy << ',' << r.seed << ',' << detail::opt_field(r.first_death) << ','
        << detail::opt_field(r.system_lifetime) << ',' << detail::opt_field(r.utility_fraction) << ','
        << r.sync_messages << ',' << r.delivered << ',' << r.dropped;
    return out.str();
}

/// Writes nodes/curve/summary as three CSV files, or one result.json with the
/// same fields. Numbers use the shortest round-trip decimal form.
inline void export_result(const SimulationResult& result, const LifetimeSummary& summary, const Topology& topo,
                          ExportFormat format, const std::filesystem::path& dir) {
    if (result.node_count() == 0) throw std::invalid_argument("refusing to export an empty result");
    if (result.node_count() != topo.size()) throw std::invalid_argument("result and topology sizes differ");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create '" + dir.string() + "': " + ec.message());

    const auto curve = utility_curve(result);
    const auto row = make_summary_row(result, summary);

    if (format == ExportFormat::Csv) {
        std::ostringstream nodes;
        nodes << "node_id,x,y,dist_to_base,death_iteration\n";
        for (NodeId i = 0; i < topo.size(); ++i) {
            nodes << i << ',' << format_number(topo.nodes[i].x) << ',' << format_number(topo.nodes[i].y) << ','
                  << format_number(topo.dist_to_base(i)) << ',';
            if (result.death_iteration[i])
                nodes << *result.death_iteration[i];
            else
                nodes << "survived";
            nodes << '\n';
        }
        std::ostringstream cv;
        cv << "iteration,percent_alive\n";
        for (const auto& p : curve) cv << p.iteration << ',' << format_number(p.percent_alive) << '\n';
        std::ostringstream sm;
        sm << kSummaryHeader << '\n' << summary_csv_row(row) << '\n';
        detail::write_file(dir / "nodes.csv", nodes.str());
        detail::write_file(dir / "curve.csv", cv.str());
        detail::write_file(dir / "summary.csv", sm.str());
        return;
    }

    nlohmann::ordered_json j;
    auto& nodes = j["nodes"] = nlohmann::ordered_json::array();
    for (NodeId i = 0; i < topo.size(); ++i) {
        nlohmann::ordered_json n;
        n["node_id"] = i;
        n["x"] = topo.nodes[i].x;
        n["y"] = topo.nodes[i].y;
        n["dist_to_base"] = topo.dist_to_base(i);
        n["death_iteration"] = detail::opt_json(result.death_iteration[i]);
        nodes.push_back(std::move(n));
    }
    auto& cv = j["curve"] = nlohmann::ordered_json::array();
    for (const auto& p : curve) cv.push_back({{"iteration", p.iteration}, {"percent_alive", p.percent_alive}});
    nlohmann::ordered_json s;
    s["strategy"] = row.strategy;
    s["seed"] = row.seed;
    s["first_death"] = detail::opt_json(row.first_death);
    s["system_lifetime"] = detail::opt_json(row.system_lifetime);
    s["utility_fraction"] = detail::opt_json(row.utility_fraction);
    s["sync_messages"] = row.sync_messages;
    s["delivered"] = row.delivered;
    s["dropped"] = row.dropped;
    j["summary"] = std::move(s);
    detail::write_file(dir / "result.json", j.dump(2) + "\n");
}

} // namespace wsnsim
