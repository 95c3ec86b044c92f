#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wsnsim/network.hpp"
#include "wsnsim/rng.hpp"
#include "wsnsim/topology.hpp"

namespace wsnsim {

enum class StrategyKind { Direct, BasicDiffusion, E3D, IdealDiffusion, RandomClustering, IdealClustering };

inline constexpr std::array<StrategyKind, 6> kAllStrategies{
    StrategyKind::Direct,         StrategyKind::BasicDiffusion,   StrategyKind::E3D,
    StrategyKind::IdealDiffusion, StrategyKind::RandomClustering, StrategyKind::IdealClustering};

inline constexpr std::string_view strategy_name(StrategyKind k) noexcept {
    switch (k) {
    case StrategyKind::Direct: return "direct";
    case StrategyKind::BasicDiffusion: return "diffusion";
    case StrategyKind::E3D: return "e3d";
    case StrategyKind::IdealDiffusion: return "ideal-diffusion";
    case StrategyKind::RandomClustering: return "random-cluster";
    case StrategyKind::IdealClustering: return "ideal-cluster";
    }
    return "unknown";
}

inline std::optional<StrategyKind> parse_strategy(std::string_view name) noexcept {
    for (auto k : kAllStrategies)
        if (strategy_name(k) == name) return k;
    return std::nullopt;
}

/// Position of the strategy in the fixed enumeration order; used for seed
/// derivation so that seeds do not depend on which strategies a batch runs.
inline constexpr std::size_t strategy_index(StrategyKind k) noexcept { return static_cast<std::size_t>(k); }

// Ideal variants get global knowledge for free: no synchronization charges.
inline constexpr bool is_global_knowledge(StrategyKind k) noexcept {
    return k == StrategyKind::IdealDiffusion || k == StrategyKind::IdealClustering;
}

// ---------------------------------------------------------------------------
// Direct and basic diffusion

inline Destination direct_next_hop(NodeId) noexcept { return Destination::base(); }

/// First entry of the ranked table that `usable` accepts; Base when none.
template <class Usable>
Destination diffusion_select(const NeighborTable& table, Usable&& usable) {
    for (const auto& e : table)
        if (usable(e.neighbor)) return Destination::node(e.neighbor);
    return Destination::base();
}

// ---------------------------------------------------------------------------
// e3D

struct E3DParams {
    double low_power_threshold = 0.10;
    double power_compare_threshold = 0.50;
    std::size_t queue_limit = 10;

    void validate() const {
        if (!(0.0 < low_power_threshold && low_power_threshold < power_compare_threshold &&
              power_compare_threshold <= 1.0))
            throw std::invalid_argument("e3d thresholds must satisfy 0 < low < compare <= 1");
    }
};

enum class ExceptionReason { QueueFull, PowerImbalance, NearDeath };

inline constexpr std::string_view reason_name(ExceptionReason r) noexcept {
    switch (r) {
    case ExceptionReason::QueueFull: return "queue-full";
    case ExceptionReason::PowerImbalance: return "power-imbalance";
    case ExceptionReason::NearDeath: return "near-death";
    }
    return "unknown";
}

/// Always travels receiver -> sender.
struct ExceptionMessage {
    NodeId from = 0;  // the receiver that objects
    NodeId to = 0;    // the sender told to stop
    ExceptionReason reason = ExceptionReason::QueueFull;

    friend bool operator==(const ExceptionMessage&, const ExceptionMessage&) = default;
};

struct E3DNodeState {
    NodeId self = 0;
    NeighborTable ranked;
    std::set<NodeId> blacklist;
    Destination current;
    bool ack_pending = false;
    std::size_t ignored_exceptions = 0;
    E3DParams params;

    bool exhausted() const noexcept {
        return std::all_of(ranked.begin(), ranked.end(),
                           [&](const NeighborEntry& e) { return blacklist.contains(e.neighbor); });
    }
};

inline Destination e3d_next_hop(const E3DNodeState& state) {
    return diffusion_select(state.ranked, [&](NodeId id) { return !state.blacklist.contains(id); });
}

namespace detail {
// Switching to a new neighbor arms the ACK for its first data packet.
inline void e3d_reselect(E3DNodeState& state) {
    const Destination next = e3d_next_hop(state);
    if (next != state.current) {
        state.current = next;
        state.ack_pending = !next.is_base();
    }
}
} // namespace detail

inline E3DNodeState e3d_make_state(NodeId self, NeighborTable ranked, const E3DParams& params) {
    E3DNodeState s;
    s.self = self;
    s.ranked = std::move(ranked);
    s.params = params;
    s.current = e3d_next_hop(s);
    s.ack_pending = !s.current.is_base();
    return s;
}

/// Fixed priority: QueueFull, then NearDeath, then PowerImbalance (which
/// only applies once the receiver is under the compare threshold and
/// strictly weaker than the sender).
inline std::optional<ExceptionReason> e3d_receive_check(double receiver_pf, double sender_pf,
                                                        std::size_t receiver_queue_depth,
                                                        const E3DParams& params) noexcept {
    if (receiver_queue_depth > params.queue_limit) return ExceptionReason::QueueFull;
    if (receiver_pf < params.low_power_threshold) return ExceptionReason::NearDeath;
    if (receiver_pf < params.power_compare_threshold && receiver_pf < sender_pf)
        return ExceptionReason::PowerImbalance;
    return std::nullopt;
}

/// Blacklists the objecting neighbor for good and moves on. Exceptions from
/// anyone but the current neighbor are counted and otherwise ignored.
inline E3DNodeState e3d_handle_exception(E3DNodeState state, const ExceptionMessage& ex) {
    if (ex.to != state.self || state.current.is_base() || state.current.id() != ex.from) {
        ++state.ignored_exceptions;
        return state;
    }
    state.blacklist.insert(ex.from);
    detail::e3d_reselect(state);
    return state;
}

/// Timed-out delivery: the neighbor is gone, treat it like an exception.
inline E3DNodeState e3d_drop_neighbor(E3DNodeState state, NodeId dead) {
    state.blacklist.insert(dead);
    detail::e3d_reselect(state);
    return state;
}

// ---------------------------------------------------------------------------
// Ideal diffusion

struct RoutingTree {
    std::vector<std::optional<Destination>> parent;  // nullopt for dead nodes
};

/// Relay cost of `s` sending through candidate `c`: d(s,c)^2 / pf(c) + d(c,Base)^2,
/// and d(s,Base)^2 for the base itself.
inline double ideal_edge_cost(const Topology& topo, NodeId s, Destination c, std::span<const double> pf) {
    if (c.is_base()) return distance_squared(topo.nodes[s], topo.base);
    const double p = pf[c.id()];
    if (!(p > 0.0)) return std::numeric_limits<double>::infinity();
    return distance_squared(topo.nodes[s], topo.nodes[c.id()]) / p +
           distance_squared(topo.nodes[c.id()], topo.base);
}

inline Destination ideal_diffusion_parent(const Topology& topo, NodeId s, std::span<const char> alive,
                                          std::span<const double> pf, std::span<const double> dist_to_base) {
    Destination best = Destination::base();
    double best_cost = ideal_edge_cost(topo, s, best, pf);
    for (NodeId c = 0; c < topo.size(); ++c) {
        if (c == s || !alive[c] || !(dist_to_base[c] < dist_to_base[s])) continue;
        const double cost = ideal_edge_cost(topo, s, Destination::node(c), pf);
        if (cost < best_cost) {
            best_cost = cost;
            best = Destination::node(c);
        }
    }
    return best;
}

inline RoutingTree ideal_diffusion_plan(const Topology& topo, std::span<const char> alive, std::span<const double> pf) {
    std::vector<double> dist_to_base(topo.size());
    for (NodeId i = 0; i < topo.size(); ++i) dist_to_base[i] = topo.dist_to_base(i);
    RoutingTree tree;
    tree.parent.resize(topo.size());
    for (NodeId s = 0; s < topo.size(); ++s)
        if (alive[s]) tree.parent[s] = ideal_diffusion_parent(topo, s, alive, pf, dist_to_base);
    return tree;
}

// ---------------------------------------------------------------------------
// Clustering

struct ClusterAssignment {
    std::vector<NodeId> heads;                   // sorted
    std::vector<std::optional<NodeId>> member_of;  // head of each node; heads map to themselves
    std::size_t round_start = 0;

    bool is_head(NodeId id) const {
        return member_of[id].has_value() && *member_of[id] == id;
    }
    std::vector<NodeId> members(NodeId head) const {
        std::vector<NodeId> out;
        for (NodeId i = 0; i < member_of.size(); ++i)
            if (member_of[i] == head && i != head) out.push_back(i);
        return out;
    }
};

namespace detail {
// k distinct picks from `pool`, uniformly without replacement (partial Fisher-Yates).
inline std::vector<NodeId> draw_distinct(std::vector<NodeId> pool, std::size_t k, SplitMix64& rng) {
    k = std::min(k, pool.size());
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}
} // namespace detail

inline ClusterAssignment random_cluster_elect(const Topology& topo, const std::vector<NodeId>& alive, std::size_t k,
                                              SplitMix64& rng, std::size_t round_start = 0) {
    ClusterAssignment a;
    a.round_start = round_start;
    a.member_of.assign(topo.size(), std::nullopt);
    if (alive.empty()) return a;
    k = std::clamp<std::size_t>(k, 1, alive.size());
    a.heads = detail::draw_distinct(alive, k, rng);
    std::sort(a.heads.begin(), a.heads.end());
    for (NodeId h : a.heads) a.member_of[h] = h;
    for (NodeId m : alive) {
        if (a.member_of[m]) continue;
        NodeId best = a.heads.front();
        double best_d = distance_squared(topo.nodes[m], topo.nodes[best]);
        for (NodeId h : a.heads) {
            const double d = distance_squared(topo.nodes[m], topo.nodes[h]);
            if (d < best_d) {
                best_d = d;
                best = h;
            }
        }
        a.member_of[m] = best;
    }
    return a;
}

/// Sum over the other members of d(m, candidate)^2 / pf(candidate).
/// A candidate with no power left costs +infinity.
inline double clustroid_cost(NodeId candidate, std::span<const NodeId> members, const Topology& topo,
                             std::span<const double> pf) {
    const double p = pf[candidate];
    if (!(p > 0.0)) return std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (NodeId m : members)
        if (m != candidate) sum += distance_squared(topo.nodes[m], topo.nodes[candidate]);
    return sum / p;
}

inline NodeId elect_clustroid(std::span<const NodeId> members, const Topology& topo, std::span<const double> pf) {
    NodeId best = members.front();
    double best_cost = std::numeric_limits<double>::infinity();
    for (NodeId c : members) {
        const double cost = clustroid_cost(c, members, topo, pf);
        if (cost < best_cost || (cost == best_cost && c < best)) {
            best_cost = cost;
            best = c;
        }
    }
    return best;
}

inline constexpr std::size_t kMaxKMeansSweeps = 100;

/// k-means over alive positions (Lloyd iterations, stop on a stable
/// assignment), then each cluster's clustroid becomes its head.
inline ClusterAssignment ideal_cluster_assign(const Topology& topo, const std::vector<NodeId>& alive,
                                              std::span<const double> pf, std::size_t k, SplitMix64& rng) {
    ClusterAssignment a;
    a.member_of.assign(topo.size(), std::nullopt);
    if (alive.empty()) return a;
    const std::size_t m = alive.size();
    k = std::clamp<std::size_t>(k, 1, m);

    // Seeds in id order, so equidistant points go to the lowest-id seed's cluster.
    auto seeds = detail::draw_distinct(alive, k, rng);
    std::sort(seeds.begin(), seeds.end());
    std::vector<Position> centroid;
    for (NodeId id : seeds) centroid.push_back(topo.nodes[id]);

    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> assign(m, kNone);
    std::vector<std::size_t> count(k, 0);
    for (std::size_t sweep = 0; sweep < kMaxKMeansSweeps; ++sweep) {
        bool changed = false;
        for (std::size_t i = 0; i < m; ++i) {
            const Position& p = topo.nodes[alive[i]];
            std::size_t best = 0;
            double best_d = distance_squared(p, centroid[0]);
            for (std::size_t c = 1; c < k; ++c) {
                const double d = distance_squared(p, centroid[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (assign[i] != best) {
                assign[i] = best;
                changed = true;
            }
        }
        if (!changed) break;

        std::fill(count.begin(), count.end(), 0);
        std::vector<Position> sum(k);
        for (std::size_t i = 0; i < m; ++i) {
            ++count[assign[i]];
            sum[assign[i]].x += topo.nodes[alive[i]].x;
            sum[assign[i]].y += topo.nodes[alive[i]].y;
        }
        for (std::size_t c = 0; c < k; ++c)
            if (count[c] > 0) centroid[c] = {sum[c].x / count[c], sum[c].y / count[c]};
        // Empty cluster: take over the point farthest from its own centroid.
        for (std::size_t c = 0; c < k; ++c) {
            if (count[c] > 0) continue;
            std::size_t far = kNone;
            double far_d = -1.0;
            for (std::size_t i = 0; i < m; ++i) {
                if (count[assign[i]] <= 1) continue;
                const double d = distance_squared(topo.nodes[alive[i]], centroid[assign[i]]);
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            if (far == kNone) continue;
            --count[assign[far]];
            assign[far] = c;
            count[c] = 1;
            centroid[c] = topo.nodes[alive[far]];
        }
    }

    std::vector<std::vector<NodeId>> clusters(k);
    for (std::size_t i = 0; i < m; ++i) clusters[assign[i]].push_back(alive[i]);
    for (const auto& members : clusters) {
        if (members.empty()) continue;
        const NodeId head = elect_clustroid(members, topo, pf);
        a.heads.push_back(head);
        for (NodeId id : members) a.member_of[id] = head;
    }
    std::sort(a.heads.begin(), a.heads.end());
    return a;
}

// ---------------------------------------------------------------------------
// Uniform router interface driven by the engine.

enum class ControlKind { Setup, BaseBroadcast, HeadAdvertise, Join, Ack, Exception };

inline constexpr std::string_view control_name(ControlKind k) noexcept {
    switch (k) {
    case ControlKind::Setup: return "setup";
    case ControlKind::BaseBroadcast: return "base-broadcast";
    case ControlKind::HeadAdvertise: return "head-advertise";
    case ControlKind::Join: return "join";
    case ControlKind::Ack: return "ack";
    case ControlKind::Exception: return "exception";
    }
    return "unknown";
}

/// One control transmission: the sender pays tx at `radius`, every receiver
/// pays rx. A base-station sender is never charged.
struct ControlMessage {
    Destination from;
    std::vector<NodeId> to;
    double radius = 0.0;
    ControlKind kind = ControlKind::Setup;
};

struct StrategyKnobs {
    std::size_t clusters = 5;
    std::size_t round_length = 20;
    std::size_t max_neighbors = kDefaultMaxNeighbors;
    E3DParams e3d;

    void validate() const {
        if (clusters == 0) throw std::invalid_argument("clusters must be at least 1");
        if (round_length == 0) throw std::invalid_argument("round_length must be at least 1");
        e3d.validate();
    }
};

class Router {
public:
    virtual ~Router() = default;

    virtual StrategyKind kind() const noexcept = 0;

    // Messages exchanged once before the first iteration.
    virtual std::vector<ControlMessage> setup(const NetworkState&) { return {}; }
    // Start-of-iteration hook; returns the control traffic it costs.
    virtual std::vector<ControlMessage> plan(const NetworkState&, std::size_t /*iteration*/) { return {}; }
    virtual Destination next_hop(NodeId sender, const NetworkState& net) = 0;
    // The sender transmitted to a node that turned out to be dead.
    virtual void on_delivery_failure(NodeId /*sender*/, NodeId /*dead*/) {}
    virtual std::optional<ExceptionMessage> check_receive(NodeId /*receiver*/, NodeId /*sender*/, double /*receiver_pf*/,
                                                          double /*sender_pf*/, std::size_t /*queue_depth*/) {
        return std::nullopt;
    }
    virtual void on_exception(const ExceptionMessage&) {}
    // True once per neighbor change: the next data packet wants an ACK.
    virtual bool consume_ack_request(NodeId /*sender*/) { return false; }

    struct BlacklistStatus {
        std::size_t size = 0;
        bool exhausted = false;
    };
    // Only strategies that keep a blacklist report one.
    virtual std::optional<BlacklistStatus> blacklist_status(NodeId /*node*/) const { return std::nullopt; }
};

class DirectRouter final : public Router {
public:
    StrategyKind kind() const noexcept override { return StrategyKind::Direct; }

    std::vector<ControlMessage> setup(const NetworkState& net) override {
        ControlMessage announce{Destination::base(), {}, 0.0, ControlKind::BaseBroadcast};
        for (NodeId i = 0; i < net.size(); ++i) announce.to.push_back(i);
        return {std::move(announce)};
    }

    Destination next_hop(NodeId sender, const NetworkState&) override { return direct_next_hop(sender); }
};

namespace detail {
// Two messages per (node, table entry) pair: request and reply.
inline std::vector<ControlMessage> neighbor_handshake(const std::vector<NeighborTable>& tables) {
    std::vector<ControlMessage> out;
    for (NodeId s = 0; s < tables.size(); ++s) {
        for (const auto& e : tables[s]) {
            out.push_back({Destination::node(s), {e.neighbor}, e.dist_to_me, ControlKind::Setup});
            out.push_back({Destination::node(e.neighbor), {s}, e.dist_to_me, ControlKind::Setup});
        }
    }
    return out;
}
} // namespace detail

class BasicDiffusionRouter final : public Router {
public:
    BasicDiffusionRouter(const Topology& topo, std::size_t max_neighbors)
        : tables_(build_all_neighbor_tables(topo, max_neighbors)), known_dead_(topo.size()) {}

    StrategyKind kind() const noexcept override { return StrategyKind::BasicDiffusion; }

    std::vector<ControlMessage> setup(const NetworkState&) override { return detail::neighbor_handshake(tables_); }

    Destination next_hop(NodeId sender, const NetworkState&) override {
        const auto& dead = known_dead_[sender];
        return diffusion_select(tables_[sender], [&](NodeId id) { return !dead.contains(id); });
    }

    void on_delivery_failure(NodeId sender, NodeId dead) override { known_dead_[sender].insert(dead); }

    const NeighborTable& table(NodeId id) const { return tables_.at(id); }

private:
    std::vector<NeighborTable> tables_;
    std::vector<std::set<NodeId>> known_dead_;
};

class E3DRouter final : public Router {
public:
    E3DRouter(const Topology& topo, std::size_t max_neighbors, const E3DParams& params) : params_(params) {
        params_.validate();
        const auto tables = build_all_neighbor_tables(topo, max_neighbors);
        states_.reserve(tables.size());
        for (NodeId i = 0; i < tables.size(); ++i) states_.push_back(e3d_make_state(i, tables[i], params_));
    }

    StrategyKind kind() const noexcept override { return StrategyKind::E3D; }

    std::vector<ControlMessage> setup(const NetworkState&) override {
        std::vector<NeighborTable> tables;
        tables.reserve(states_.size());
        for (const auto& s : states_) tables.push_back(s.ranked);
        return detail::neighbor_handshake(tables);
    }

    Destination next_hop(NodeId sender, const NetworkState&) override { return states_[sender].current; }

    void on_delivery_failure(NodeId sender, NodeId dead) override {
        states_[sender] = e3d_drop_neighbor(std::move(states_[sender]), dead);
    }

    std::optional<ExceptionMessage> check_receive(NodeId receiver, NodeId sender, double receiver_pf,
                                                  double sender_pf, std::size_t queue_depth) override {
        if (auto reason = e3d_receive_check(receiver_pf, sender_pf, queue_depth, params_))
            return ExceptionMessage{receiver, sender, *reason};
        return std::nullopt;
    }

    void on_exception(const ExceptionMessage& ex) override {
        states_[ex.to] = e3d_handle_exception(std::move(states_[ex.to]), ex);
    }

    bool consume_ack_request(NodeId sender) override {
        return std::exchange(states_[sender].ack_pending, false);
    }

    std::optional<BlacklistStatus> blacklist_status(NodeId node) const override {
        const auto& s = states_[node];
        return BlacklistStatus{s.blacklist.size(), s.exhausted()};
    }

    const E3DNodeState& state(NodeId id) const { return states_.at(id); }
    const E3DParams& params() const noexcept { return params_; }

private:
    E3DParams params_;
    std::vector<E3DNodeState> states_;
};

class IdealDiffusionRouter final : public Router {
public:
    StrategyKind kind() const noexcept override { return StrategyKind::IdealDiffusion; }

    std::vector<ControlMessage> plan(const NetworkState& net, std::size_t) override {
        pf_ = net.power_fractions();
        tree_ = ideal_diffusion_plan(*net.topo, net.alive, pf_);
        return {};
    }

    // With global knowledge a parent that died mid-iteration is replaced at once.
    Destination next_hop(NodeId sender, const NetworkState& net) override {
        const auto& p = tree_.parent[sender];
        if (p && (p->is_base() || net.is_alive(p->id()))) return *p;
        pf_ = net.power_fractions();
        tree_.parent[sender] = ideal_diffusion_parent(*net.topo, sender, net.alive, pf_, net.dist_to_base);
        return *tree_.parent[sender];
    }

    const RoutingTree& tree() const noexcept { return tree_; }

private:
    RoutingTree tree_;
    std::vector<double> pf_;
};

class RandomClusterRouter final : public Router {
public:
    RandomClusterRouter(std::size_t clusters, std::size_t round_length, std::uint64_t seed)
        : clusters_(clusters), round_length_(round_length), rng_(seed) {}

    StrategyKind kind() const noexcept override { return StrategyKind::RandomClustering; }

    std::vector<ControlMessage> plan(const NetworkState& net, std::size_t iteration) override {
        if (iteration == 0 || (iteration - 1) % round_length_ != 0) return {};
        assignment_ = random_cluster_elect(*net.topo, net.alive_ids(), clusters_, rng_, iteration);
        head_lost_.assign(net.size(), 0);
        std::vector<ControlMessage> out;
        for (NodeId h : assignment_.heads) {
            ControlMessage advert{Destination::node(h), assignment_.members(h), 0.0, ControlKind::HeadAdvertise};
            for (NodeId m : advert.to) advert.radius = std::max(advert.radius, net.topo->dist(h, m));
            out.push_back(std::move(advert));
        }
        for (NodeId h : assignment_.heads)
            for (NodeId m : assignment_.members(h))
                out.push_back({Destination::node(m), {h}, net.topo->dist(m, h), ControlKind::Join});
        return out;
    }

    // No aggregation: heads forward every packet individually. Members of a
    // head that died mid-round fall back to the base until the next election.
    Destination next_hop(NodeId sender, const NetworkState&) override {
        const auto& head = assignment_.member_of[sender];
        if (!head || *head == sender || head_lost_[sender]) return Destination::base();
        return Destination::node(*head);
    }

    void on_delivery_failure(NodeId sender, NodeId) override { head_lost_[sender] = 1; }

    const ClusterAssignment& assignment() const noexcept { return assignment_; }

private:
    std::size_t clusters_;
    std::size_t round_length_;
    SplitMix64 rng_;
    ClusterAssignment assignment_;
    std::vector<char> head_lost_;
};

class IdealClusterRouter final : public Router {
public:
    IdealClusterRouter(std::size_t clusters, std::uint64_t seed) : clusters_(clusters), rng_(seed) {}

    StrategyKind kind() const noexcept override { return StrategyKind::IdealClustering; }

    std::vector<ControlMessage> plan(const NetworkState& net, std::size_t) override {
        const auto pf = net.power_fractions();
        assignment_ = ideal_cluster_assign(*net.topo, net.alive_ids(), pf, clusters_, rng_);
        return {};
    }

    Destination next_hop(NodeId sender, const NetworkState& net) override {
        const auto& head = assignment_.member_of[sender];
        if (!head || *head == sender || !net.is_alive(*head)) return Destination::base();
        return Destination::node(*head);
    }

    const ClusterAssignment& assignment() const noexcept { return assignment_; }

private:
    std::size_t clusters_;
    SplitMix64 rng_;
    ClusterAssignment assignment_;
};

// Salt so the routing stream never coincides with the placement stream of
// a topology generated from the same seed.
inline constexpr std::uint64_t kRoutingStreamSalt = 0xD1B54A32D192ED03ULL;

inline std::unique_ptr<Router> make_router(StrategyKind kind, const Topology& topo, const StrategyKnobs& knobs,
                                           std::uint64_t seed) {
    const std::uint64_t stream = seed ^ kRoutingStreamSalt;
    switch (kind) {
    case StrategyKind::Direct: return std::make_unique<DirectRouter>();
    case StrategyKind::BasicDiffusion: return std::make_unique<BasicDiffusionRouter>(topo, knobs.max_neighbors);
    case StrategyKind::E3D: return std::make_unique<E3DRouter>(topo, knobs.max_neighbors, knobs.e3d);
    case StrategyKind::IdealDiffusion: return std::make_unique<IdealDiffusionRouter>();
    case StrategyKind::RandomClustering:
        return std::make_unique<RandomClusterRouter>(knobs.clusters, knobs.round_length, stream);
    case StrategyKind::IdealClustering: return std::make_unique<IdealClusterRouter>(knobs.clusters, stream);
    }
    throw std::invalid_argument("unknown strategy");
}

} // namespace wsnsim
