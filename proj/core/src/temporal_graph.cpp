#include "kinemb/temporal_graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace kinemb {

NodeId NodeRegistry::add(const std::string& label) {
    auto it = ids_.find(label);
    if (it != ids_.end()) return it->second;
    const auto id = static_cast<NodeId>(labels_.size());
    labels_.push_back(label);
    ids_.emplace(label, id);
    return id;
}

NodeId NodeRegistry::id_of(const std::string& label) const {
    auto it = ids_.find(label);
    if (it == ids_.end()) throw std::out_of_range("unknown node label: " + label);
    return it->second;
}

bool NodeRegistry::contains(const std::string& label) const {
    return ids_.find(label) != ids_.end();
}

const std::string& NodeRegistry::label_of(NodeId id) const {
    if (id >= labels_.size()) throw std::out_of_range("node id " + std::to_string(id) + " out of range");
    return labels_[id];
}

Snapshot::Snapshot(std::size_t index, std::vector<Edge> edges, std::size_t num_nodes)
    : index_(index), edges_(std::move(edges)) {
    for (const auto& e : edges_) {
        if (e.first == e.second)
            throw std::invalid_argument("self-loop on node " + std::to_string(e.first));
        if (e.second >= num_nodes)
            throw std::invalid_argument("edge endpoint " + std::to_string(e.second) +
                                        " beyond registry size " + std::to_string(num_nodes));
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

    std::vector<std::size_t> deg(num_nodes, 0);
    for (const auto& e : edges_) {
        ++deg[e.first];
        ++deg[e.second];
    }
    offsets_.assign(num_nodes + 1, 0);
    for (std::size_t p = 0; p < num_nodes; ++p) offsets_[p + 1] = offsets_[p] + deg[p];
    adjacency_.resize(offsets_[num_nodes]);
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges_) {
        adjacency_[cursor[e.first]++] = e.second;
        adjacency_[cursor[e.second]++] = e.first;
    }
    for (std::size_t p = 0; p < num_nodes; ++p)
        std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[p]),
                  adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[p + 1]));
}

bool Snapshot::has_edge(NodeId u, NodeId v) const {
    if (u == v) return false;
    return std::binary_search(edges_.begin(), edges_.end(), Edge(u, v));
}

std::span<const NodeId> Snapshot::neighbors(NodeId p) const {
    if (p + 1 >= offsets_.size())
        throw std::out_of_range("node id " + std::to_string(p) + " out of range");
    return {adjacency_.data() + offsets_[p], offsets_[p + 1] - offsets_[p]};
}

TemporalGraph::TemporalGraph(NodeRegistry registry, std::vector<Snapshot> snapshots)
    : registry_(std::move(registry)), snapshots_(std::move(snapshots)) {
    for (std::size_t i = 0; i < snapshots_.size(); ++i)
        if (snapshots_[i].index() != i)
            throw std::invalid_argument("snapshot indices must be 0..t gap-free");
}

const Snapshot& TemporalGraph::snapshot(std::size_t i) const {
    if (i >= snapshots_.size())
        throw std::out_of_range("timestep " + std::to_string(i) + " out of range (have " +
                                std::to_string(snapshots_.size()) + " snapshots)");
    return snapshots_[i];
}

std::vector<NodeId> TemporalGraph::neighbors(std::size_t i, NodeId p) const {
    const auto& s = snapshot(i);
    if (p >= registry_.size())
        throw std::out_of_range("node id " + std::to_string(p) + " out of range");
    auto span = s.neighbors(p);
    return {span.begin(), span.end()};
}

TemporalGraph TemporalGraph::induced_subgraph(const std::set<NodeId>& nodes) const {
    if (nodes.empty()) throw std::invalid_argument("induced_subgraph: empty node set");
    NodeRegistry sub;
    std::unordered_map<NodeId, NodeId> remap;
    for (NodeId old_id : nodes) {  // std::set iterates ascending -> deterministic repack
        if (old_id >= registry_.size())
            throw std::out_of_range("node id " + std::to_string(old_id) + " out of range");
        remap.emplace(old_id, sub.add(registry_.label_of(old_id)));
    }
    std::vector<Snapshot> subs;
    subs.reserve(snapshots_.size());
    for (const auto& s : snapshots_) {
        std::vector<Edge> kept;
        for (const auto& e : s.edges()) {
            auto a = remap.find(e.first);
            auto b = remap.find(e.second);
            if (a != remap.end() && b != remap.end()) kept.emplace_back(a->second, b->second);
        }
        subs.emplace_back(s.index(), std::move(kept), sub.size());
    }
    return {std::move(sub), std::move(subs)};
}

std::vector<std::pair<NodeId, std::size_t>> TemporalGraph::degree_sequence(std::size_t i) const {
    const auto& s = snapshot(i);
    std::vector<std::pair<NodeId, std::size_t>> out;
    out.reserve(registry_.size());
    for (NodeId p = 0; p < registry_.size(); ++p) out.emplace_back(p, s.degree(p));
    return out;
}

TemporalGraphBuilder::TemporalGraphBuilder(std::size_t num_snapshots) : pending_(num_snapshots) {}

void TemporalGraphBuilder::add_edge(std::size_t snapshot, const std::string& u, const std::string& v) {
    // register u before v: id assignment must not depend on argument evaluation order
    const NodeId uid = registry_.add(u);
    const NodeId vid = registry_.add(v);
    add_edge(snapshot, uid, vid);
}

void TemporalGraphBuilder::add_edge(std::size_t snapshot, NodeId u, NodeId v) {
    if (snapshot >= pending_.size())
        throw std::out_of_range("snapshot " + std::to_string(snapshot) + " out of range");
    if (u == v) throw std::invalid_argument("self-loop on node " + std::to_string(u));
    pending_[snapshot].emplace_back(u, v);
}

TemporalGraph TemporalGraphBuilder::build() {
    std::vector<Snapshot> snaps;
    snaps.reserve(pending_.size());
    for (std::size_t i = 0; i < pending_.size(); ++i)
        snaps.emplace_back(i, std::move(pending_[i]), registry_.size());
    return {std::move(registry_), std::move(snaps)};
}

}  // namespace kinemb
