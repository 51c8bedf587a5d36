#pragma once

#include <cstdint>
#include <vector>

#include "kinemb/ingest.hpp"
#include "kinemb/temporal_graph.hpp"

namespace kinemb {

/// Two point clouds on a latent plane gliding toward each other at constant
/// speed; nodes connect when their latent distance drops below
/// `connect_radius`, so cross-community links appear in waves as the clouds
/// close in. Node offsets within each cloud are fixed over time.
struct DriftConfig {
    std::size_t nodes_per_community = 30;
    std::size_t num_snapshots = 10;
    double disc_radius = 1.2;        // node offsets are uniform in this disc
    double connect_radius = 0.55;     // edge threshold in the latent plane
    double start_separation = 4.2;   // center-to-center distance at snapshot 0
    double approach_per_step = 0.30; // separation shrinkage per snapshot
    std::uint64_t seed = 7;
};

TemporalGraph synthetic_drift_graph(const DriftConfig& config);

/// Same graph as timestamped interaction events (time = snapshot index),
/// suitable for the triple serializer.
std::vector<EdgeEvent> synthetic_drift_events(const DriftConfig& config);

}  // namespace kinemb
