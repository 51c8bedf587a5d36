#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "kinemb/temporal_graph.hpp"

namespace kinemb {

/// One raw interaction record in dataset time units.
struct EdgeEvent {
    double time;
    std::string u;
    std::string v;
};

enum class EventFormat { triple, coauthorship_csv };

/// "triple" is SocioPatterns-style `t u v` lines (# comments allowed);
/// "coauthorship-csv" expands each paper row into all author pairs.
std::vector<EdgeEvent> parse_edge_events(std::istream& in, EventFormat format,
                                         const std::string& source_name = "<input>");

/// Inverse of the triple reader; labels must be whitespace-free.
void serialize_edge_events(std::ostream& out, const std::vector<EdgeEvent>& events);

EventFormat event_format_from_name(const std::string& name);  // throws std::invalid_argument

/// Equal-width time binning; `overlap` extends every bin rightward by that
/// fraction of the bin width (0 = disjoint bins).
TemporalGraph bin_snapshots(const std::vector<EdgeEvent>& events, std::size_t num_bins,
                            double overlap = 0.0);

struct SplitSpec {
    enum class Mode { ratio_by_time, per_year_holdout };
    Mode mode = Mode::ratio_by_time;
    double train_fraction = 0.75;
    std::size_t test_timestep = 0;

    static SplitSpec ratio(double train_fraction = 0.75);
    static SplitSpec holdout(std::size_t test_timestep);
};

struct TemporalSplit {
    TemporalGraph train;
    Snapshot target;  // keeps its original timestep ordinal
};

TemporalSplit temporal_split(const TemporalGraph& g, const SplitSpec& spec);

struct LabeledPair {
    NodeId u;
    NodeId v;
    int label;  // +1 edge in target snapshot, -1 sampled non-edge
};

struct LabeledPairSet {
    std::vector<LabeledPair> pairs;
    std::size_t timestep = 0;
    std::size_t num_positive() const;
    std::size_t num_negative() const;
};

/// All target edges inside `cohort` as positives plus an equal count of
/// uniformly sampled non-edge pairs; deterministic for a fixed seed.
LabeledPairSet sample_labeled_pairs(const TemporalGraph& g, const Snapshot& target,
                                    const std::set<NodeId>& cohort, std::uint64_t seed);

/// Versioned text container for a TemporalGraph ("KINGRAPH v1").
void save_graph(std::ostream& out, const TemporalGraph& g);
TemporalGraph load_graph(std::istream& in, const std::string& source_name = "<input>");

}  // namespace kinemb
