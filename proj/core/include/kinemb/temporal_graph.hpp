#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace kinemb {

using NodeId = std::uint32_t;

/// Undirected edge, stored normalized with first() < second().
struct Edge {
    NodeId first;
    NodeId second;

    Edge(NodeId u, NodeId v) : first(u < v ? u : v), second(u < v ? v : u) {}

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Label <-> dense-id bijection shared by all snapshots of a graph.
class NodeRegistry {
public:
    NodeId add(const std::string& label);  // returns existing id if already present
    NodeId id_of(const std::string& label) const;  // throws std::out_of_range
    bool contains(const std::string& label) const;
    const std::string& label_of(NodeId id) const;  // throws std::out_of_range
    std::size_t size() const { return labels_.size(); }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> ids_;
};

/// One graph state s_i: a deduplicated set of undirected edges plus a
/// per-node neighbor index. Immutable once built.
class Snapshot {
public:
    Snapshot(std::size_t index, std::vector<Edge> edges, std::size_t num_nodes);

    std::size_t index() const { return index_; }
    std::size_t num_edges() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    bool has_edge(NodeId u, NodeId v) const;

    /// Sorted neighbor ids of p, excluding p itself.
    std::span<const NodeId> neighbors(NodeId p) const;
    std::size_t degree(NodeId p) const { return neighbors(p).size(); }

private:
    std::size_t index_;
    std::vector<Edge> edges_;       // sorted, unique
    std::vector<NodeId> adjacency_; // CSR payload
    std::vector<std::size_t> offsets_;
};

/// Ordered sequence of snapshots over one shared node registry.
class TemporalGraph {
public:
    TemporalGraph(NodeRegistry registry, std::vector<Snapshot> snapshots);

    const NodeRegistry& registry() const { return registry_; }
    std::size_t num_nodes() const { return registry_.size(); }
    std::size_t num_snapshots() const { return snapshots_.size(); }
    const Snapshot& snapshot(std::size_t i) const;  // throws std::out_of_range
    const std::vector<Snapshot>& snapshots() const { return snapshots_; }

    /// One-hop neighborhood of p in snapshot i.
    std::vector<NodeId> neighbors(std::size_t i, NodeId p) const;

    /// New graph over `nodes` only, ids re-packed to 0..|nodes|-1 in
    /// ascending order of the old ids. Labels carried over.
    TemporalGraph induced_subgraph(const std::set<NodeId>& nodes) const;

    /// (node, degree) for every registry node at snapshot i.
    std::vector<std::pair<NodeId, std::size_t>> degree_sequence(std::size_t i) const;

private:
    NodeRegistry registry_;
    std::vector<Snapshot> snapshots_;
};

/// Incremental construction; nodes may exist without edges.
class TemporalGraphBuilder {
public:
    explicit TemporalGraphBuilder(std::size_t num_snapshots);

    NodeId add_node(const std::string& label) { return registry_.add(label); }
    void add_edge(std::size_t snapshot, const std::string& u, const std::string& v);
    void add_edge(std::size_t snapshot, NodeId u, NodeId v);

    TemporalGraph build();  // consumes the builder state

private:
    NodeRegistry registry_;
    std::vector<std::vector<Edge>> pending_;
};

}  // namespace kinemb
