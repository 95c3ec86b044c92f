#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "wsnsim/energy.hpp"
#include "wsnsim/topology.hpp"

namespace wsnsim {

/// Next hop of a packet: either a sensor node or the base station.
class Destination {
public:
    static constexpr NodeId kBaseId = std::numeric_limits<NodeId>::max();

    constexpr Destination() noexcept = default;
    static constexpr Destination base() noexcept { return Destination{}; }
    static constexpr Destination node(NodeId id) noexcept { return Destination{id}; }

    constexpr bool is_base() const noexcept { return id_ == kBaseId; }
    constexpr NodeId id() const noexcept { return id_; }

    std::string to_string() const { return is_base() ? std::string("base") : std::to_string(id_); }

    friend constexpr auto operator<=>(Destination, Destination) noexcept = default;

private:
    constexpr explicit Destination(NodeId id) noexcept : id_(id) {}
    NodeId id_ = kBaseId;
};

/// Mutable per-run node state shared read-only with the routers.
struct NetworkState {
    const Topology* topo = nullptr;
    std::vector<Battery> battery;
    std::vector<char> alive;
    std::vector<double> dist_to_base;

    NetworkState() = default;
    NetworkState(const Topology& t, double initial_battery)
        : topo(&t), battery(t.size(), Battery::full(initial_battery)), alive(t.size(), 1) {
        dist_to_base.reserve(t.size());
        for (NodeId i = 0; i < t.size(); ++i) dist_to_base.push_back(t.dist_to_base(i));
    }

    std::size_t size() const noexcept { return alive.size(); }
    bool is_alive(NodeId id) const noexcept { return alive[id] != 0; }
    double power_fraction(NodeId id) const noexcept { return battery[id].power_fraction(); }

    std::vector<NodeId> alive_ids() const {
        std::vector<NodeId> ids;
        for (NodeId i = 0; i < alive.size(); ++i)
            if (alive[i]) ids.push_back(i);
        return ids;
    }

    std::vector<double> power_fractions() const {
        std::vector<double> pf;
        pf.reserve(battery.size());
        for (const auto& b : battery) pf.push_back(b.power_fraction());
        return pf;
    }

    double distance(NodeId a, Destination b) const {
        return b.is_base() ? dist_to_base[a] : wsnsim::distance(topo->nodes[a], topo->nodes[b.id()]);
    }
};

} // namespace wsnsim
