#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsnsim/format.hpp"
#include "wsnsim/rng.hpp"

namespace wsnsim {

using NodeId = std::size_t;

struct Position {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Position&, const Position&) = default;
};

inline double distance(Position a, Position b) noexcept {
    return std::hypot(a.x - b.x, a.y - b.y);
}

inline double distance_squared(Position a, Position b) noexcept {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

/// Node placements plus the base station. Node ids are the indices into
/// `nodes`, so they are dense and unique by construction.
struct Topology {
    std::vector<Position> nodes;
    Position base;
    double width = 0.0;
    double height = 0.0;
    std::uint64_t seed = 0;

    std::size_t size() const noexcept { return nodes.size(); }
    const Position& at(NodeId id) const {
        if (id >= nodes.size()) throw std::out_of_range("unknown node id " + std::to_string(id));
        return nodes[id];
    }
    double dist_to_base(NodeId id) const { return distance(at(id), base); }
    double dist(NodeId a, NodeId b) const { return distance(at(a), at(b)); }

    friend bool operator==(const Topology&, const Topology&) = default;
};

/// Places `n` nodes uniformly in [0,width) x [0,height). Node i takes the
/// (2i)-th draw as x and the (2i+1)-th as y from SplitMix64(seed).
inline Topology generate_topology(std::size_t n, double width, double height, Position base,
                                  std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("topology needs at least one node");
    if (!(width > 0.0) || !(height > 0.0))
        throw std::invalid_argument("topology dimensions must be positive");
    SplitMix64 rng(seed);
    Topology t;
    t.base = base;
    t.width = width;
    t.height = height;
    t.seed = seed;
    t.nodes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = rng.uniform() * width;
        const double y = rng.uniform() * height;
        t.nodes.push_back({x, y});
    }
    return t;
}

struct NeighborEntry {
    NodeId neighbor = 0;
    double dist_to_me = 0.0;
    double dist_to_base = 0.0;

    // d(s,n)^2 + d(n,Base)^2: both hops priced in the energy law's units.
    double cost() const noexcept { return dist_to_me * dist_to_me + dist_to_base * dist_to_base; }

    friend bool operator==(const NeighborEntry&, const NeighborEntry&) = default;
};

using NeighborTable = std::vector<NeighborEntry>;

inline constexpr std::size_t kDefaultMaxNeighbors = 8;

/// Up to `max_neighbors` nodes strictly closer to the base than `id`, ranked
/// by ascending diffusion cost (ties by node id).
inline NeighborTable build_neighbor_table(NodeId id, const Topology& topo,
                                          std::size_t max_neighbors = kDefaultMaxNeighbors) {
    const Position& me = topo.at(id);
    const double my_dist = distance(me, topo.base);
    NeighborTable table;
    for (NodeId other = 0; other < topo.size(); ++other) {
        if (other == id) continue;
        const double to_base = distance(topo.nodes[other], topo.base);
        if (!(to_base < my_dist)) continue;
        table.push_back({other, distance(me, topo.nodes[other]), to_base});
    }
    std::sort(table.begin(), table.end(), [](const NeighborEntry& a, const NeighborEntry& b) {
        const double ca = a.cost();
        const double cb = b.cost();
        if (ca != cb) return ca < cb;
        return a.neighbor < b.neighbor;
    });
    if (table.size() > max_neighbors) table.resize(max_neighbors);
    return table;
}

inline std::vector<NeighborTable> build_all_neighbor_tables(const Topology& topo, std::size_t max_neighbors) {
    std::vector<NeighborTable> tables;
    tables.reserve(topo.size());
    for (NodeId id = 0; id < topo.size(); ++id) tables.push_back(build_neighbor_table(id, topo, max_neighbors));
    return tables;
}

// Topology CSV:
//   # base,<x>,<y>
//   node_id,x,y
//   0,<x>,<y>
//   ...
inline void write_topology_csv(std::ostream& out, const Topology& topo) {
    out << "# base," << format_number(topo.base.x) << ',' << format_number(topo.base.y) << '\n';
    out << "node_id,x,y\n";
    for (NodeId id = 0; id < topo.size(); ++id)
        out << id << ',' << format_number(topo.nodes[id].x) << ',' << format_number(topo.nodes[id].y) << '\n';
}

inline void save_topology_csv(const std::string& path, const Topology& topo) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_topology_csv(out, topo);
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

/// Width and height are taken as the bounding box of the nodes, since the
/// file does not carry the area.
inline Topology read_topology_csv(std::istream& in) {
    Topology topo;
    bool have_base = false;
    bool have_header = false;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& what) {
        throw std::invalid_argument("topology csv line " + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
        if (line.front() == '#') {
            if (fields.size() == 3 && fields[0].find("base") != std::string::npos) {
                topo.base = {parse_double(fields[1]), parse_double(fields[2])};
                have_base = true;
            }
            continue;
        }
        if (!have_header) {
            if (line != "node_id,x,y") fail("expected header 'node_id,x,y'");
            have_header = true;
            continue;
        }
        if (fields.size() != 3) fail("expected 3 fields");
        const auto id = parse_integer(fields[0]);
        if (id != static_cast<long long>(topo.nodes.size())) fail("node ids must be dense and ordered from 0");
        topo.nodes.push_back({parse_double(fields[1]), parse_double(fields[2])});
    }
    if (!have_base) throw std::invalid_argument("topology csv: missing '# base,<x>,<y>' line");
    if (topo.nodes.empty()) throw std::invalid_argument("topology csv: no nodes");
    for (const auto& p : topo.nodes) {
        topo.width = std::max(topo.width, p.x);
        topo.height = std::max(topo.height, p.y);
    }
    return topo;
}

inline Topology load_topology_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_topology_csv(in);
}

} // namespace wsnsim
