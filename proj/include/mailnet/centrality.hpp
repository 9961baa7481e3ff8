#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mailnet/tempograph.hpp"

namespace mailnet {

/// Per-node scores of one snapshot, indexed by NodeIndex.
struct CentralityScores {
  std::vector<std::size_t> degree;              // in-arcs + out-arcs
  std::vector<std::size_t> distinct_neighbors;  // |successors ∪ predecessors|
  std::vector<double> closeness;
  std::vector<double> betweenness;
};

/// All four scores for every node in one sweep of single-source BFS runs.
/// Distances are hop counts; arc weights are ignored.
CentralityScores compute_centrality(const GraphSnapshot& snapshot);

/// Number of arcs incident to `actor` (a reciprocated pair counts twice).
/// Throws UnknownActor.
std::size_t degree(const GraphSnapshot& snapshot, const ActorId& actor);

/// Count of distinct actors adjacent to `actor` in either direction.
std::size_t distinct_neighbors(const GraphSnapshot& snapshot, const ActorId& actor);

/// 1 / (sum of directed hop distances to every reachable node); 0 when no
/// other node is reachable.
double closeness(const GraphSnapshot& snapshot, const ActorId& actor);

/// Sum over ordered pairs (s, t) not involving `actor` of the share of
/// shortest s->t paths through it, divided by (n-1)(n-2). 0 when n < 3.
double betweenness(const GraphSnapshot& snapshot, const ActorId& actor);

/// Strict local extrema of a weekly betweenness series. Runs of equal values
/// collapse to one point; runs touching either end never count.
std::size_t betweenness_oscillations(std::span<const double> series);

/// Positions of the extrema counted by betweenness_oscillations, each given
/// as the index of the first point of its run. Ascending.
std::vector<std::size_t> oscillation_positions(std::span<const double> series);

}  // namespace mailnet
