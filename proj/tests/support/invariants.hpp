#pragma once

// Trace-replay checks shared by the engine tests and the acceptance suite.
// Everything here re-derives the expected behavior from the trace itself
// and deliberately avoids calling back into the routing code.

#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wsnsim/engine.hpp"
#include "wsnsim/metrics.hpp"

namespace wsnsim::testing {

class InvariantChecker {
public:
    InvariantChecker(const Topology& topo, StrategyKind strategy, E3DParams e3d = {})
        : topo_(&topo), strategy_(strategy), e3d_(e3d), dead_(topo.size(), 0), blacklist_(topo.size()),
          exhausted_(topo.size(), 0), last_blacklist_size_(topo.size(), 0) {}

    TraceSink sink() {
        return [this](const TraceEvent& e) { observe(e); };
    }

    void observe(const TraceEvent& e) {
        if (e.iteration != iteration_) close_iteration();
        iteration_ = e.iteration;
        switch (e.kind) {
        case EventKind::Generate:
            require_alive(e.node, e);
            ++generated_;
            visited_[*e.packet] = {e.node};
            break;
        case EventKind::DataTx:
            require_alive(e.node, e);
            check_route(e);
            if (e.peer.is_base()) break;
            // Diffusion-family hops must make progress toward the base.
            if ((strategy_ == StrategyKind::BasicDiffusion || strategy_ == StrategyKind::E3D ||
                 strategy_ == StrategyKind::IdealDiffusion) &&
                !(topo_->dist_to_base(e.peer.id()) < topo_->dist_to_base(e.node)))
                fail("diffusion hop does not approach the base", e);
            break;
        case EventKind::DataRx: {
            require_alive(e.node, e);
            auto& seen = visited_[*e.packet];
            if (!seen.insert(e.node).second) fail("loop: packet " + std::to_string(*e.packet) + " revisited node " +
                                                  std::to_string(e.node), e);
            break;
        }
        case EventKind::Deliver:
            ++delivered_;
            visited_.erase(*e.packet);
            break;
        case EventKind::Drop:
            ++dropped_;
            visited_.erase(*e.packet);
            break;
        case EventKind::Timeout:
            if (is_global_knowledge(strategy_)) fail("ideal strategy sent to a dead node", e);
            if (!dead_[e.peer.id()]) fail("timeout against a live node", e);
            break;
        case EventKind::ControlTx:
            require_alive(e.node, e);
            break;
        case EventKind::ControlRx:
            require_alive(e.node, e);
            break;
        case EventKind::Exception:
            ++exceptions_;
            check_exception(e);
            break;
        case EventKind::Blacklist: {
            const NodeId s = e.node;
            if (e.count < last_blacklist_size_[s]) fail("blacklist shrank", e);
            last_blacklist_size_[s] = e.count;
            blacklist_[s].insert(e.peer.id());
            if (blacklist_[s].size() != e.count) fail("blacklist size does not match the replayed set", e);
            if (e.exhausted) exhausted_[s] = 1;
            break;
        }
        case EventKind::Death:
            if (dead_[e.node]) fail("node died twice", e);
            dead_[e.node] = 1;
            break;
        }
    }

    /// Call after the run with the final result.
    void finish(const SimulationResult& result) {
        close_iteration();
        if (!visited_.empty()) violations_.push_back("packets still in flight after the run");
        if (result.generated != result.delivered + result.dropped)
            violations_.push_back("result: generated != delivered + dropped");
        if (result.generated != total_generated_ || result.delivered != total_delivered_ ||
            result.dropped != total_dropped_)
            violations_.push_back("result totals disagree with the trace");
        if (std::fabs(ledger_imbalance(result)) > 1e-9)
            violations_.push_back("energy ledger imbalance " + std::to_string(ledger_imbalance(result)));
        for (std::size_t i = 1; i < result.alive_curve.size(); ++i)
            if (result.alive_curve[i].second > result.alive_curve[i - 1].second)
                violations_.push_back("alive curve increased");
        const auto curve = utility_curve(result);
        for (std::size_t i = 1; i < curve.size(); ++i)
            if (curve[i].percent_alive > curve[i - 1].percent_alive) violations_.push_back("utility curve increased");
        for (NodeId i = 0; i < dead_.size(); ++i)
            if (static_cast<bool>(dead_[i]) != result.death_iteration[i].has_value())
                violations_.push_back("death trace disagrees with result for node " + std::to_string(i));
    }

    static double ledger_imbalance(const SimulationResult& r) {
        double total = 0.0;
        for (std::size_t i = 0; i < r.node_count(); ++i)
            total += r.energy_remaining[i] + r.energy_charged[i] + r.energy_stranded[i];
        return r.initial_battery * static_cast<double>(r.node_count()) - total;
    }

    bool ok() const { return violations_.empty(); }
    const std::vector<std::string>& violations() const { return violations_; }
    std::size_t exceptions() const { return exceptions_; }
    std::size_t exception_violations() const { return exception_violations_; }

    std::string report() const {
        std::ostringstream out;
        for (std::size_t i = 0; i < violations_.size() && i < 10; ++i) out << violations_[i] << '\n';
        if (violations_.size() > 10) out << "... " << violations_.size() - 10 << " more\n";
        return out.str();
    }

private:
    void fail(const std::string& what, const TraceEvent& e) {
        violations_.push_back("iteration " + std::to_string(e.iteration) + ": " + what);
    }

    void require_alive(NodeId n, const TraceEvent& e) {
        if (dead_[n]) fail("dead node " + std::to_string(n) + " active in " + std::string(event_name(e.kind)), e);
    }

    void check_route(const TraceEvent& e) {
        if (e.peer.is_base()) return;
        if (blacklist_[e.node].contains(e.peer.id())) fail("sent to a blacklisted neighbor", e);
        if (exhausted_[e.node]) fail("exhausted node did not send to the base", e);
    }

    // The emitted reason must be the first of the three conditions, in
    // priority order, that holds at emission time.
    void check_exception(const TraceEvent& e) {
        const bool queue_full = e.count > e3d_.queue_limit;
        const bool near_death = e.receiver_power < e3d_.low_power_threshold;
        const bool imbalance =
            e.receiver_power < e3d_.power_compare_threshold && e.receiver_power < e.sender_power;
        std::optional<ExceptionReason> expected;
        if (queue_full)
            expected = ExceptionReason::QueueFull;
        else if (near_death)
            expected = ExceptionReason::NearDeath;
        else if (imbalance)
            expected = ExceptionReason::PowerImbalance;
        if (!expected || *expected != *e.reason) {
            ++exception_violations_;
            fail("unsound exception " + std::string(reason_name(*e.reason)), e);
        }
    }

    void close_iteration() {
        if (generated_ != delivered_ + dropped_ && generated_ + delivered_ + dropped_ > 0)
            violations_.push_back("iteration " + std::to_string(iteration_) + ": generated " +
                                  std::to_string(generated_) + " != delivered " + std::to_string(delivered_) +
                                  " + dropped " + std::to_string(dropped_));
        total_generated_ += generated_;
        total_delivered_ += delivered_;
        total_dropped_ += dropped_;
        generated_ = delivered_ = dropped_ = 0;
    }

    const Topology* topo_;
    StrategyKind strategy_;
    E3DParams e3d_;
    std::vector<char> dead_;
    std::vector<std::set<NodeId>> blacklist_;
    std::vector<char> exhausted_;
    std::vector<std::size_t> last_blacklist_size_;
    std::unordered_map<std::uint64_t, std::unordered_set<NodeId>> visited_;
    std::size_t iteration_ = 0;
    std::size_t generated_ = 0, delivered_ = 0, dropped_ = 0;
    std::size_t total_generated_ = 0, total_delivered_ = 0, total_dropped_ = 0;
    std::size_t exceptions_ = 0;
    std::size_t exception_violations_ = 0;
    std::vector<std::string> violations_;
};

} // namespace wsnsim::testing
