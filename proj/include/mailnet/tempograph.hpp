#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "mailnet/ingest.hpp"
#include "mailnet/time.hpp"

namespace mailnet {

using NodeIndex = std::uint32_t;

struct Arc {
  NodeIndex source = 0;
  NodeIndex target = 0;
  std::uint32_t weight = 0;  // message count x_ij

  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Directed weighted communication graph for one window. Nodes are kept in
/// sorted ActorId order; adjacency is stored in compressed form for both
/// directions. Immutable after construction.
class GraphSnapshot {
 public:
  GraphSnapshot() = default;
  GraphSnapshot(Interval window, std::vector<ActorId> nodes, std::vector<Arc> arcs);

  [[nodiscard]] const Interval& window() const { return window_; }
  [[nodiscard]] std::size_t node_count() const { return nodes_.size(); }
  [[nodiscard]] std::size_t arc_count() const { return arcs_.size(); }
  [[nodiscard]] const std::vector<ActorId>& nodes() const { return nodes_; }
  [[nodiscard]] const ActorId& actor(NodeIndex i) const { return nodes_.at(i); }
  [[nodiscard]] std::optional<NodeIndex> index_of(const ActorId& actor) const;
  /// Arcs sorted by (source, target).
  [[nodiscard]] const std::vector<Arc>& arcs() const { return arcs_; }

  [[nodiscard]] std::span<const NodeIndex> successors(NodeIndex u) const;
  [[nodiscard]] std::span<const NodeIndex> predecessors(NodeIndex u) const;
  /// x_ij, 0 when there is no arc.
  [[nodiscard]] std::uint32_t weight(NodeIndex from, NodeIndex to) const;
  [[nodiscard]] std::uint64_t total_weight() const;

 private:
  Interval window_;
  std::vector<ActorId> nodes_;
  std::vector<Arc> arcs_;
  std::vector<std::size_t> out_offsets_, in_offsets_;
  std::vector<NodeIndex> out_targets_, in_sources_;
};

/// Sociomatrix over `window`: each (sender, recipient) pair of an in-window
/// event adds 1 to x_ij. `extra_nodes` are injected as (possibly isolated)
/// nodes. `events` must be sorted by timestamp.
GraphSnapshot build_snapshot(std::span<const MessageEvent> events, const Interval& window,
                             std::span<const ActorId> extra_nodes = {});

/// Consecutive 7-day snapshots from span.start; the last bin is clipped to
/// span.end. Throws std::invalid_argument for spans shorter than a week.
std::vector<GraphSnapshot> weekly_series(std::span<const MessageEvent> events, const Interval& span);

/// Weekly bin boundaries used by weekly_series.
std::vector<Interval> weekly_bins(const Interval& span);

/// Edge list `source,target,weight`.
void write_edge_list(std::ostream& out, const GraphSnapshot& snapshot);

}  // namespace mailnet
