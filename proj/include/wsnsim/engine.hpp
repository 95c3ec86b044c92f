#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsnsim/energy.hpp"
#include "wsnsim/format.hpp"
#include "wsnsim/network.hpp"
#include "wsnsim/strategies.hpp"
#include "wsnsim/topology.hpp"

namespace wsnsim {

struct SimConfig {
    Topology topology;
    StrategyKind strategy = StrategyKind::Direct;
    EnergyParams energy;
    StrategyKnobs knobs;
    std::size_t max_iterations = 100000;  // safety bound; 0 is treated as 1
    std::uint64_t seed = 1;

    void validate() const {
        if (topology.nodes.empty()) throw std::invalid_argument("configuration has no nodes");
        energy.validate();
        knobs.validate();
    }
};

struct Packet {
    std::uint64_t id = 0;
    NodeId origin = 0;
    std::size_t born_at = 0;
    std::size_t hops = 0;
    double bits = 0;
    double sender_power = 1.0;  // piggybacked power fraction of the last sender
};

enum class EventKind { Generate, DataTx, DataRx, Deliver, Timeout, Drop, ControlTx, ControlRx, Exception, Blacklist, Death };

inline constexpr std::string_view event_name(EventKind k) noexcept {
    switch (k) {
    case EventKind::Generate: return "generate";
    case EventKind::DataTx: return "data-tx";
    case EventKind::DataRx: return "data-rx";
    case EventKind::Deliver: return "deliver";
    case EventKind::Timeout: return "timeout";
    case EventKind::Drop: return "drop";
    case EventKind::ControlTx: return "control-tx";
    case EventKind::ControlRx: return "control-rx";
    case EventKind::Exception: return "exception";
    case EventKind::Blacklist: return "blacklist";
    case EventKind::Death: return "death";
    }
    return "unknown";
}

/// One line of the simulation trace. Which optional fields are set depends
/// on the kind; see write_trace_line for the text form.
struct TraceEvent {
    std::size_t iteration = 0;
    EventKind kind = EventKind::Generate;
    NodeId node = 0;
    Destination peer;
    std::optional<std::uint64_t> packet;
    double joules = 0.0;
    std::optional<ControlKind> control;
    std::optional<ExceptionReason> reason;
    double receiver_power = 0.0;
    double sender_power = 0.0;
    std::size_t count = 0;  // queue depth (exception) or blacklist size (blacklist)
    bool exhausted = false;
};

using TraceSink = std::function<void(const TraceEvent&)>;

// iteration,kind,node,peer,packet,joules,detail
inline void write_trace_line(std::ostream& out, const TraceEvent& e) {
    out << e.iteration << ',' << event_name(e.kind) << ',' << e.node << ',';
    if (e.kind != EventKind::Generate && e.kind != EventKind::Drop && e.kind != EventKind::Death)
        out << e.peer.to_string();
    out << ',';
    if (e.packet) out << *e.packet;
    out << ',' << format_number(e.joules) << ',';
    if (e.control) out << control_name(*e.control);
    if (e.reason)
        out << reason_name(*e.reason) << ';' << format_number(e.receiver_power) << ';'
            << format_number(e.sender_power) << ';' << e.count;
    if (e.kind == EventKind::Blacklist) out << e.count << ';' << (e.exhausted ? "exhausted" : "open");
    out << '\n';
}

struct IterationReport {
    std::size_t iteration = 0;
    std::size_t generated = 0;
    std::size_t delivered = 0;
    std::size_t dropped = 0;
    std::size_t exceptions = 0;
    std::size_t sync_messages = 0;
    std::vector<NodeId> deaths;
    std::size_t alive_after = 0;
};

struct SimulationResult {
    StrategyKind strategy = StrategyKind::Direct;
    std::uint64_t seed = 0;
    std::size_t iterations_run = 0;
    std::vector<std::optional<std::size_t>> death_iteration;  // nullopt: survived
    std::vector<std::pair<std::size_t, std::size_t>> alive_curve;  // (iteration, alive) at start and each death
    std::size_t generated = 0;
    std::size_t delivered = 0;
    std::size_t dropped = 0;
    std::size_t sync_messages = 0;
    std::size_t exceptions = 0;
    double initial_battery = 0.0;
    std::vector<double> energy_charged;
    std::vector<double> energy_stranded;
    std::vector<double> energy_remaining;

    std::size_t node_count() const noexcept { return death_iteration.size(); }
    bool all_dead() const {
        return std::all_of(death_iteration.begin(), death_iteration.end(), [](const auto& d) { return d.has_value(); });
    }
};

/// One deterministic, single-threaded run. Iteration 0 is the setup phase.
class Simulation {
public:
    explicit Simulation(SimConfig config, TraceSink sink = {})
        : config_(std::move(config)), sink_(std::move(sink)) {
        config_.validate();
        net_ = NetworkState(config_.topology, config_.energy.initial_battery);
        router_ = make_router(config_.strategy, config_.topology, config_.knobs, config_.seed);
        const std::size_t n = net_.size();
        inbox_.resize(n);
        flushed_.assign(n, 0);
        received_.assign(n, 0);
        death_iteration_.assign(n, std::nullopt);
        charged_.assign(n, 0.0);
        stranded_.assign(n, 0.0);
        order_.resize(n);
        for (NodeId i = 0; i < n; ++i) order_[i] = i;
        std::stable_sort(order_.begin(), order_.end(),
                         [&](NodeId a, NodeId b) { return net_.dist_to_base[a] > net_.dist_to_base[b]; });
        alive_count_ = n;
        alive_curve_.emplace_back(0, n);
    }

    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;
    // net_ points into config_.topology, so the object stays put.
    Simulation(Simulation&&) = delete;
    Simulation& operator=(Simulation&&) = delete;

    /// Once, before the first iteration.
    void charge_setup_costs() {
        if (setup_done_) throw std::logic_error("setup costs already charged");
        setup_done_ = true;
        report_ = IterationReport{};
        for (const auto& msg : router_->setup(net_)) send_control(msg);
        sync_total_ += report_.sync_messages;
        close_iteration();
    }

    IterationReport run_iteration() {
        if (!setup_done_) charge_setup_costs();
        report_ = IterationReport{};
        if (alive_count_ == 0) {
            report_.iteration = iteration_;
            return report_;
        }
        ++iteration_;
        report_.iteration = iteration_;

        for (const auto& msg : router_->plan(net_, iteration_)) send_control(msg);

        std::fill(flushed_.begin(), flushed_.end(), 0);
        std::fill(received_.begin(), received_.end(), 0);
        for (NodeId i = 0; i < net_.size(); ++i) {
            if (!net_.is_alive(i)) continue;
            Packet p{next_packet_id_++, i, iteration_, 0, config_.energy.data_bits, 1.0};
            ++report_.generated;
            emit({.iteration = iteration_, .kind = EventKind::Generate, .node = i, .packet = p.id});
            inbox_[i].push_back(p);
        }
        for (NodeId s : order_)
            if (net_.is_alive(s)) flush(s);

        generated_total_ += report_.generated;
        delivered_total_ += report_.delivered;
        dropped_total_ += report_.dropped;
        sync_total_ += report_.sync_messages;
        exceptions_total_ += report_.exceptions;
        close_iteration();
        return report_;
    }

    bool all_dead() const noexcept { return alive_count_ == 0; }
    std::size_t iteration() const noexcept { return iteration_; }
    std::size_t alive_count() const noexcept { return alive_count_; }
    const NetworkState& network() const noexcept { return net_; }
    const Router& router() const noexcept { return *router_; }
    const SimConfig& config() const noexcept { return config_; }

    SimulationResult result() const {
        SimulationResult r;
        r.strategy = config_.strategy;
        r.seed = config_.seed;
        r.iterations_run = iteration_;
        r.death_iteration = death_iteration_;
        r.alive_curve = alive_curve_;
        r.generated = generated_total_;
        r.delivered = delivered_total_;
        r.dropped = dropped_total_;
        r.sync_messages = sync_total_;
        r.exceptions = exceptions_total_;
        r.initial_battery = config_.energy.initial_battery;
        r.energy_charged = charged_;
        r.energy_stranded = stranded_;
        r.energy_remaining.reserve(net_.size());
        for (const auto& b : net_.battery) r.energy_remaining.push_back(b.remaining);
        return r;
    }

private:
    void emit(const TraceEvent& e) {
        if (sink_) sink_(e);
    }

    // Returns false (and kills the node) when the battery cannot cover it.
    // A cost equal to the remaining charge completes, then the node dies.
    bool spend(NodeId n, double joules) {
        const auto r = drain(net_.battery[n], joules);
        net_.battery[n] = r.battery;
        charged_[n] += r.charged;
        stranded_[n] += r.stranded;
        if (r.outcome == DrainOutcome::Died) {
            kill(n);
            return false;
        }
        if (net_.battery[n].empty()) kill(n);
        return true;
    }

    void kill(NodeId n) {
        if (!net_.is_alive(n)) return;
        net_.alive[n] = 0;
        --alive_count_;
        death_iteration_[n] = iteration_;
        report_.deaths.push_back(n);
        emit({.iteration = iteration_, .kind = EventKind::Death, .node = n, .joules = stranded_[n]});
        while (!inbox_[n].empty()) {
            drop(n, inbox_[n].front());
            inbox_[n].pop_front();
        }
    }

    void drop(NodeId holder, const Packet& p) {
        ++report_.dropped;
        emit({.iteration = iteration_, .kind = EventKind::Drop, .node = holder, .packet = p.id});
    }

    // Returns true when the message went out (receivers may still die on rx).
    bool send_control(const ControlMessage& msg) {
        const double ctl = config_.energy.control_bits;
        if (!msg.from.is_base()) {
            const NodeId from = msg.from.id();
            if (!net_.is_alive(from)) return false;
            const double cost = tx_cost(ctl, msg.radius, config_.energy);
            const Destination peer = msg.to.size() == 1 ? Destination::node(msg.to.front()) : Destination::base();
            emit({.iteration = iteration_, .kind = EventKind::ControlTx, .node = from, .peer = peer,
                  .joules = cost, .control = msg.kind});
            if (!spend(from, cost)) return false;
        }
        ++report_.sync_messages;
        const double rx = rx_cost(ctl, config_.energy);
        for (NodeId r : msg.to) {
            if (!net_.is_alive(r)) continue;
            emit({.iteration = iteration_, .kind = EventKind::ControlRx, .node = r, .peer = msg.from,
                  .joules = rx, .control = msg.kind});
            spend(r, rx);
        }
        return true;
    }

    void flush(NodeId s) {
        flushed_[s] = 1;
        while (net_.is_alive(s) && !inbox_[s].empty()) {
            Packet p = inbox_[s].front();
            inbox_[s].pop_front();
            forward(s, p);
        }
    }

    void forward(NodeId s, Packet p) {
        const std::size_t n = net_.size();
        for (;;) {
            if (!net_.is_alive(s)) {
                drop(s, p);
                return;
            }
            const Destination dest = router_->next_hop(s, net_);
            if (!dest.is_base() && dest.id() == s) throw std::logic_error("router chose the sender as next hop");
            const double d = net_.distance(s, dest);
            const double cost = tx_cost(p.bits, d, config_.energy);
            emit({.iteration = iteration_, .kind = EventKind::DataTx, .node = s, .peer = dest, .packet = p.id,
                  .joules = cost});
            if (!spend(s, cost)) {
                drop(s, p);
                return;
            }
            p.sender_power = net_.power_fraction(s);

            if (dest.is_base()) {
                ++report_.delivered;
                emit({.iteration = iteration_, .kind = EventKind::Deliver, .node = s, .peer = dest, .packet = p.id});
                return;
            }

            const NodeId r = dest.id();
            if (!net_.is_alive(r)) {
                // Nobody answers: the transmission is wasted, pick again.
                emit({.iteration = iteration_, .kind = EventKind::Timeout, .node = s, .peer = dest, .packet = p.id});
                router_->on_delivery_failure(s, r);
                note_blacklist(s, r);
                continue;
            }

            const double rx = rx_cost(p.bits, config_.energy);
            emit({.iteration = iteration_, .kind = EventKind::DataRx, .node = r, .peer = Destination::node(s),
                  .packet = p.id, .joules = rx});
            spend(r, rx);
            if (!net_.is_alive(r)) {
                drop(r, p);
                return;
            }
            ++p.hops;
            if (p.hops > n) throw std::logic_error("packet exceeded node count in hops");

            const bool wants_ack = router_->consume_ack_request(s);
            const auto ex = router_->check_receive(r, s, net_.power_fraction(r), p.sender_power, received_[r]);
            if (ex) {
                ++report_.exceptions;
                emit({.iteration = iteration_, .kind = EventKind::Exception, .node = r, .peer = Destination::node(s),
                      .reason = ex->reason, .receiver_power = net_.power_fraction(r),
                      .sender_power = p.sender_power, .count = received_[r]});
                if (send_control({Destination::node(r), {s}, d, ControlKind::Exception}) && net_.is_alive(s)) {
                    router_->on_exception(*ex);
                    note_blacklist(s, r);
                }
            } else if (wants_ack) {
                send_control({Destination::node(r), {s}, d, ControlKind::Ack});
            }
            if (!net_.is_alive(r)) {
                drop(r, p);
                return;
            }
            ++received_[r];
            if (flushed_[r]) {
                s = r;  // already flushed this iteration: relay straight away
                continue;
            }
            inbox_[r].push_back(p);
            return;
        }
    }

    void note_blacklist(NodeId s, NodeId neighbor) {
        if (!sink_) return;
        if (auto st = router_->blacklist_status(s))
            emit({.iteration = iteration_, .kind = EventKind::Blacklist, .node = s,
                  .peer = Destination::node(neighbor), .count = st->size, .exhausted = st->exhausted});
    }

    void close_iteration() {
        report_.alive_after = alive_count_;
        if (!report_.deaths.empty()) alive_curve_.emplace_back(iteration_, alive_count_);
    }

    SimConfig config_;
    TraceSink sink_;
    NetworkState net_;
    std::unique_ptr<Router> router_;
    std::vector<NodeId> order_;  // decreasing distance to base, ties by id
    std::vector<std::deque<Packet>> inbox_;
    std::vector<char> flushed_;
    std::vector<std::size_t> received_;
    std::vector<std::optional<std::size_t>> death_iteration_;
    std::vector<double> charged_;
    std::vector<double> stranded_;
    std::vector<std::pair<std::size_t, std::size_t>> alive_curve_;
    IterationReport report_;
    std::size_t iteration_ = 0;
    std::size_t alive_count_ = 0;
    std::uint64_t next_packet_id_ = 0;
    std::size_t generated_total_ = 0;
    std::size_t delivered_total_ = 0;
    std::size_t dropped_total_ = 0;
    std::size_t sync_total_ = 0;
    std::size_t exceptions_total_ = 0;
    bool setup_done_ = false;
};

inline SimulationResult run_simulation(const SimConfig& config, TraceSink sink = {}) {
    Simulation sim(config, std::move(sink));
    sim.charge_setup_costs();
    const std::size_t limit = std::max<std::size_t>(1, config.max_iterations);
    while (!sim.all_dead() && sim.iteration() < limit) sim.run_iteration();
    return sim.result();
}

} // namespace wsnsim
