#include "mailnet/tempograph.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "mailnet/csv.hpp"

namespace mailnet {

namespace {

// Events are sorted by timestamp; returns the sub-range inside `window`.
std::span<const MessageEvent> slice(std::span<const MessageEvent> events, const Interval& window) {
  const auto by_time = [](const MessageEvent& e, Instant t) { return e.timestamp < t; };
  const auto first = std::lower_bound(events.begin(), events.end(), window.start, by_time);
  const auto last = std::lower_bound(first, events.end(), window.end, by_time);
  return {first, last};
}

}  // namespace

GraphSnapshot::GraphSnapshot(Interval window, std::vector<ActorId> nodes, std::vector<Arc> arcs)
    : window_(window), nodes_(std::move(nodes)), arcs_(std::move(arcs)) {
  const std::size_t n = nodes_.size();
  out_offsets_.assign(n + 1, 0);
  in_offsets_.assign(n + 1, 0);
  for (const Arc& a : arcs_) {
    ++out_offsets_[a.source + 1];
    ++in_offsets_[a.target + 1];
  }
  std::partial_sum(out_offsets_.begin(), out_offsets_.end(), out_offsets_.begin());
  std::partial_sum(in_offsets_.begin(), in_offsets_.end(), in_offsets_.begin());

  out_targets_.resize(arcs_.size());
  in_sources_.resize(arcs_.size());
  std::vector<std::size_t> out_fill(out_offsets_.begin(), out_offsets_.end() - 1);
  std::vector<std::size_t> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
  // arcs_ is sorted by (source, target), so both adjacency lists come out sorted.
  for (const Arc& a : arcs_) {
    out_targets_[out_fill[a.source]++] = a.target;
    in_sources_[in_fill[a.target]++] = a.source;
  }
}

std::optional<NodeIndex> GraphSnapshot::index_of(const ActorId& actor) const {
  const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), actor);
  if (it == nodes_.end() || *it != actor) return std::nullopt;
  return static_cast<NodeIndex>(it - nodes_.begin());
}

std::span<const NodeIndex> GraphSnapshot::successors(NodeIndex u) const {
  return {out_targets_.data() + out_offsets_[u], out_targets_.data() + out_offsets_[u + 1]};
}

std::span<const NodeIndex> GraphSnapshot::predecessors(NodeIndex u) const {
  return {in_sources_.data() + in_offsets_[u], in_sources_.data() + in_offsets_[u + 1]};
}

std::uint32_t GraphSnapshot::weight(NodeIndex from, NodeIndex to) const {
  const auto first = arcs_.begin() + static_cast<std::ptrdiff_t>(out_offsets_.at(from));
  const auto last = arcs_.begin() + static_cast<std::ptrdiff_t>(out_offsets_.at(from + 1));
  const auto it = std::lower_bound(first, last, to, [](const Arc& a, NodeIndex t) { return a.target < t; });
  return it != last && it->target == to ? it->weight : 0;
}

std::uint64_t GraphSnapshot::total_weight() const {
  std::uint64_t total = 0;
  for (const Arc& a : arcs_) total += a.weight;
  return total;
}

GraphSnapshot build_snapshot(std::span<const MessageEvent> events, const Interval& window,
                             std::span<const ActorId> extra_nodes) {
  const auto in_window = slice(events, window);

  std::vector<ActorId> nodes(extra_nodes.begin(), extra_nodes.end());
  for (const auto& e : in_window) {
    nodes.push_back(e.sender);
    nodes.insert(nodes.end(), e.recipients.begin(), e.recipients.end());
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  const auto index = [&](const ActorId& a) {
    return static_cast<NodeIndex>(std::lower_bound(nodes.begin(), nodes.end(), a) - nodes.begin());
  };
  std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
  for (const auto& e : in_window) {
    const NodeIndex s = index(e.sender);
    for (const auto& r : e.recipients) {
      const NodeIndex t = index(r);
      if (s != t) pairs.emplace_back(s, t);
    }
  }
  std::sort(pairs.begin(), pairs.end());

  std::vector<Arc> arcs;
  for (const auto& [s, t] : pairs) {
    if (!arcs.empty() && arcs.back().source == s && arcs.back().target == t) {
      ++arcs.back().weight;
    } else {
      arcs.push_back(Arc{s, t, 1});
    }
  }
  return GraphSnapshot(window, std::move(nodes), std::move(arcs));
}

std::vector<Interval> weekly_bins(const Interval& span) {
  if (span.length() < kSecondsPerWeek) {
    throw std::invalid_argument("weekly series needs a span of at least 7 days");
  }
  std::vector<Interval> bins;
  for (Instant start = span.start; start < span.end; start += kSecondsPerWeek) {
    bins.push_back(Interval{start, std::min(start + kSecondsPerWeek, span.end)});
  }
  return bins;
}

std::vector<GraphSnapshot> weekly_series(std::span<const MessageEvent> events, const Interval& span) {
  std::vector<GraphSnapshot> series;
  for (const auto& bin : weekly_bins(span)) series.push_back(build_snapshot(events, bin));
  return series;
}

void write_edge_list(std::ostream& out, const GraphSnapshot& snapshot) {
  out << "source,target,weight\n";
  for (const Arc& a : snapshot.arcs()) {
    out << csv::escape(snapshot.actor(a.source)) << ',' << csv::escape(snapshot.actor(a.target)) << ','
        << a.weight << '\n';
  }
}

}  // namespace mailnet
