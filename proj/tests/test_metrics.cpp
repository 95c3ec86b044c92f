#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wsnsim/metrics.hpp"
#include "wsnsim/rng.hpp"

using namespace wsnsim;
namespace fs = std::filesystem;

namespace {
SimulationResult with_deaths(std::vector<std::optional<std::size_t>> deaths) {
    SimulationResult r;
    r.death_iteration = std::move(deaths);
    const auto n = r.death_iteration.size();
    r.initial_battery = 0.5;
    r.energy_charged.assign(n, 0.5);
    r.energy_stranded.assign(n, 0.0);
    r.energy_remaining.assign(n, 0.0);
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& name) {
    auto d = fs::temp_directory_path() / ("wsnsim_test_" + name);
    fs::remove_all(d);
    return d;
}

// Brute-force Spearman: ranks by counting, Pearson from the textbook formula.
double oracle_spearman(const std::vector<double>& a, const std::vector<double>& b) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            double less = 0, equal = 0;
            for (double w : v) {
                less += w < v[i];
                equal += w == v[i];
            }
            r[i] = less + (equal + 1) / 2.0;
        }
        return r;
    };
    const auto ra = ranks(a), rb = ranks(b);
    const double n = static_cast<double>(a.size());
    double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sa += ra[i];
        sb += rb[i];
        sab += ra[i] * rb[i];
        saa += ra[i] * ra[i];
        sbb += rb[i] * rb[i];
    }
    const double cov = sab - sa * sb / n;
    const double va = saa - sa * sa / n, vb = sbb - sb * sb / n;
    return cov / std::sqrt(va * vb);
}
} // namespace

TEST(UtilityCurve, StepsAtDeaths) {
    const auto curve = utility_curve(with_deaths({10, 10, 20, 40}));
    const std::vector<CurvePoint> expected{{0, 100}, {10, 50}, {20, 25}, {40, 0}};
    EXPECT_EQ(curve, expected);
}

TEST(UtilityCurve, NonIncreasingAndSurvivorsKeepItAboveZero) {
    const auto curve = utility_curve(with_deaths({5, std::nullopt, 9, 5}));
    ASSERT_EQ(curve.size(), 3u);
    EXPECT_DOUBLE_EQ(curve.back().percent_alive, 25.0);
    for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_LE(curve[i].percent_alive, curve[i - 1].percent_alive);
}

TEST(LifetimeSummary, Example) {
    const auto s = lifetime_summary(with_deaths({10, 10, 20, 40}));
    EXPECT_EQ(s.first_death, 10u);
    EXPECT_EQ(s.system_lifetime, 40u);
    EXPECT_DOUBLE_EQ(*s.utility_fraction, 0.25);
    EXPECT_DOUBLE_EQ(*s.death_spread, 0.75);
    EXPECT_FALSE(s.censored);
}

TEST(LifetimeSummary, SimultaneousDeathsGiveFullUtility) {
    const auto s = lifetime_summary(with_deaths({7, 7, 7}));
    EXPECT_DOUBLE_EQ(*s.utility_fraction, 1.0);
    EXPECT_DOUBLE_EQ(*s.death_spread, 0.0);
}

TEST(LifetimeSummary, SingleNode) {
    const auto s = lifetime_summary(with_deaths({12}));
    EXPECT_EQ(s.first_death, 12u);
    EXPECT_EQ(s.system_lifetime, 12u);
    EXPECT_DOUBLE_EQ(*s.utility_fraction, 1.0);
}

TEST(LifetimeSummary, CensoredRunHasNoLifetime) {
    const auto s = lifetime_summary(with_deaths({3, std::nullopt}));
    EXPECT_TRUE(s.censored);
    EXPECT_EQ(s.first_death, 3u);
    EXPECT_FALSE(s.system_lifetime.has_value());
    EXPECT_FALSE(s.utility_fraction.has_value());
}

TEST(Spearman, MatchesBruteForceOracle) {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 3 + rng.below(18);
        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = static_cast<double>(rng.below(8));  // plenty of ties
            b[i] = rng.uniform();
        }
        if (std::all_of(a.begin(), a.end(), [&](double v) { return v == a[0]; })) continue;
        EXPECT_NEAR(spearman(a, b), oracle_spearman(a, b), 1e-12);
    }
}

TEST(Spearman, PerfectAndConstant) {
    EXPECT_DOUBLE_EQ(spearman({1, 2, 3, 4}, {10, 20, 30, 40}), 1.0);
    EXPECT_DOUBLE_EQ(spearman({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0);
    EXPECT_EQ(spearman({1, 2, 3}, {5, 5, 5}), 0.0);
    EXPECT_THROW(spearman({1, 2}, {1}), std::invalid_argument);
}

TEST(Spearman, MidRanks) {
    EXPECT_EQ(mid_ranks({10, 20, 20, 30}), (std::vector<double>{1, 2.5, 2.5, 4}));
}

TEST(DeathDistanceCorrelation, NeedsThreeDeaths) {
    Topology t;
    t.nodes = {{1, 0}, {2, 0}, {3, 0}};
    EXPECT_FALSE(death_distance_correlation(with_deaths({1, 2, std::nullopt}), t).has_value());
    EXPECT_DOUBLE_EQ(*death_distance_correlation(with_deaths({9, 5, 1}), t), -1.0);
}

TEST(Export, CsvFiles) {
    Topology t;
    t.nodes = {{3, 4}, {6, 8}};
    auto r = with_deaths({20, std::nullopt});
    r.seed = 4;
    r.delivered = 30;
    const auto dir = scratch_dir("csv");
    export_result(r, lifetime_summary(r), t, ExportFormat::Csv, dir);
    EXPECT_EQ(slurp(dir / "nodes.csv"), "node_id,x,y,dist_to_base,death_iteration\n0,3,4,5,20\n1,6,8,10,survived\n");
    EXPECT_EQ(slurp(dir / "curve.csv"), "iteration,percent_alive\n0,100\n20,50\n");
    EXPECT_EQ(slurp(dir / "summary.csv"),
              std::string(kSummaryHeader) + "\ndirect,4,20,,,0,30,0\n");
    fs::remove_all(dir);
}

TEST(Export, JsonMatchesCsvContent) {
    Topology t;
    t.nodes = {{3, 4}, {0.1, 0.2}, {9, 9}};
    const auto r = with_deaths({5, 9, 11});
    const auto dir = scratch_dir("json");
    export_result(r, lifetime_summary(r), t, ExportFormat::Json, dir);
    const auto j = nlohmann::json::parse(slurp(dir / "result.json"));
    EXPECT_EQ(j["nodes"].size(), 3u);
    EXPECT_EQ(j["nodes"][1]["x"].get<double>(), 0.1);
    EXPECT_EQ(j["curve"].back()["percent_alive"].get<double>(), 0.0);
    EXPECT_EQ(j["summary"]["system_lifetime"].get<int>(), 11);
    EXPECT_DOUBLE_EQ(j["summary"]["utility_fraction"].get<double>(), 5.0 / 11.0);
    fs::remove_all(dir);
}

TEST(Export, ByteIdenticalOnRewrite) {
    Topology t;
    t.nodes = {{1.0 / 3.0, 2.0 / 7.0}, {50, 50}, {80, 10}};
    const auto r = with_deaths({3, 8, 13});
    for (auto f : {ExportFormat::Csv, ExportFormat::Json}) {
        const auto a = scratch_dir("rewrite_a"), b = scratch_dir("rewrite_b");
        export_result(r, lifetime_summary(r), t, f, a);
        export_result(r, lifetime_summary(r), t, f, b);
        for (const auto& entry : fs::directory_iterator(a))
            EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename()));
        fs::remove_all(a);
        fs::remove_all(b);
    }
}

TEST(Export, NumbersRoundTrip) {
    for (double v : {0.1, 1.0 / 3.0, 141.42135623730951, 1e-300, 2.5e-6})
        EXPECT_EQ(parse_double(format_number(v)), v);
}

TEST(Export, RejectsEmptyResult) {
    EXPECT_THROW(export_result(SimulationResult{}, {}, Topology{}, ExportFormat::Csv, scratch_dir("empty")),
                 std::invalid_argument);
}
