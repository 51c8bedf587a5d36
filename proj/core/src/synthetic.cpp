#include "kinemb/synthetic.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace kinemb {

namespace {

struct Point {
    double x, y;
};

double dist(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

std::vector<Point> disc_offsets(std::size_t count, double radius, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coord(-radius, radius);
    std::vector<Point> pts;
    pts.reserve(count);
    while (pts.size() < count) {
        const Point p{coord(rng), coord(rng)};
        if (p.x * p.x + p.y * p.y <= radius * radius) pts.push_back(p);
    }
    return pts;
}

struct Layout {
    std::vector<Point> offsets_a, offsets_b;
    std::vector<std::pair<std::size_t, std::size_t>> nn_a, nn_b;  // intra safety edges
};

// Each node also links to its nearest neighbour in its own community, which
// keeps every snapshot free of isolated nodes regardless of the draw.
std::vector<std::pair<std::size_t, std::size_t>> nearest_neighbor_pairs(
    const std::vector<Point>& pts) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::size_t best = i;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (j == i) continue;
            const double d = dist(pts[i], pts[j]);
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        pairs.emplace_back(i, best);
    }
    return pairs;
}

Layout make_layout(const DriftConfig& cfg) {
    if (cfg.nodes_per_community < 2) throw std::invalid_argument("need at least 2 nodes per community");
    if (cfg.num_snapshots < 2) throw std::invalid_argument("need at least 2 snapshots");
    if (!(cfg.connect_radius > 0.0)) throw std::invalid_argument("connect radius must be positive");
    std::mt19937_64 rng(cfg.seed);
    Layout layout;
    layout.offsets_a = disc_offsets(cfg.nodes_per_community, cfg.disc_radius, rng);
    layout.offsets_b = disc_offsets(cfg.nodes_per_community, cfg.disc_radius, rng);
    layout.nn_a = nearest_neighbor_pairs(layout.offsets_a);
    layout.nn_b = nearest_neighbor_pairs(layout.offsets_b);
    return layout;
}

template <typename EmitEdge>
void emit_snapshot(const DriftConfig& cfg, const Layout& layout, std::size_t s, EmitEdge&& emit) {
    const double separation =
        cfg.start_separation - cfg.approach_per_step * static_cast<double>(s);
    const double half = separation / 2.0;
    const std::size_t n = cfg.nodes_per_community;

    auto pos = [&](std::size_t node) -> Point {
        if (node < n) {
            const Point& o = layout.offsets_a[node];
            return {o.x - half, o.y};
        }
        const Point& o = layout.offsets_b[node - n];
        return {o.x + half, o.y};
    };

    for (std::size_t i = 0; i < 2 * n; ++i)
        for (std::size_t j = i + 1; j < 2 * n; ++j)
            if (dist(pos(i), pos(j)) <= cfg.connect_radius) emit(i, j);
    for (const auto& [i, j] : layout.nn_a)
        if (i < j) emit(i, j);
        else emit(j, i);
    for (const auto& [i, j] : layout.nn_b)
        if (i < j) emit(n + i, n + j);
        else emit(n + j, n + i);
}

std::string node_label(std::size_t node, std::size_t per_community) {
    return node < per_community ? "a" + std::to_string(node)
                                : "b" + std::to_string(node - per_community);
}

}  // namespace

TemporalGraph synthetic_drift_graph(const DriftConfig& config) {
    const Layout layout = make_layout(config);
    TemporalGraphBuilder builder(config.num_snapshots);
    for (std::size_t k = 0; k < 2 * config.nodes_per_community; ++k)
        builder.add_node(node_label(k, config.nodes_per_community));
    for (std::size_t s = 0; s < config.num_snapshots; ++s)
        emit_snapshot(config, layout, s, [&](std::size_t i, std::size_t j) {
            builder.add_edge(s, static_cast<NodeId>(i), static_cast<NodeId>(j));
        });
    return builder.build();
}

std::vector<EdgeEvent> synthetic_drift_events(const DriftConfig& config) {
    const Layout layout = make_layout(config);
    std::vector<EdgeEvent> events;
    for (std::size_t s = 0; s < config.num_snapshots; ++s)
        emit_snapshot(config, layout, s, [&](std::size_t i, std::size_t j) {
            events.push_back({static_cast<double>(s),
                              node_label(i, config.nodes_per_community),
                              node_label(j, config.nodes_per_community)});
        });
    return events;
}

}  // namespace kinemb
