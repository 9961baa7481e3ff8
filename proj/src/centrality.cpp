#include "mailnet/centrality.hpp"

#include <algorithm>

#include "mailnet/errors.hpp"

namespace mailnet {

namespace {

NodeIndex require(const GraphSnapshot& g, const ActorId& actor) {
  const auto index = g.index_of(actor);
  if (!index) throw UnknownActor(actor);
  return *index;
}

// Scratch space for one single-source pass, reused across sources.
struct SourcePass {
  explicit SourcePass(std::size_t n) : distance(n, -1), sigma(n, 0.0), delta(n, 0.0) { order.reserve(n); }

  std::vector<long> distance;
  std::vector<double> sigma;
  std::vector<double> delta;
  std::vector<NodeIndex> order;  // BFS visiting order
};

}  // namespace

CentralityScores compute_centrality(const GraphSnapshot& g) {
  const std::size_t n = g.node_count();
  CentralityScores scores;
  scores.degree.resize(n);
  scores.distinct_neighbors.resize(n);
  scores.closeness.assign(n, 0.0);
  scores.betweenness.assign(n, 0.0);

  std::vector<NodeIndex> merged;
  for (NodeIndex u = 0; u < n; ++u) {
    const auto out = g.successors(u);
    const auto in = g.predecessors(u);
    scores.degree[u] = out.size() + in.size();
    merged.clear();
    std::set_union(out.begin(), out.end(), in.begin(), in.end(), std::back_inserter(merged));
    scores.distinct_neighbors[u] = merged.size();
  }

  SourcePass pass(n);
  for (NodeIndex s = 0; s < n; ++s) {
    for (NodeIndex v : pass.order) {
      pass.distance[v] = -1;
      pass.sigma[v] = 0.0;
      pass.delta[v] = 0.0;
    }
    pass.order.clear();

    pass.distance[s] = 0;
    pass.sigma[s] = 1.0;
    pass.order.push_back(s);
    long distance_sum = 0;
    for (std::size_t head = 0; head < pass.order.size(); ++head) {
      const NodeIndex v = pass.order[head];
      for (NodeIndex w : g.successors(v)) {
        if (pass.distance[w] < 0) {
          pass.distance[w] = pass.distance[v] + 1;
          distance_sum += pass.distance[w];
          pass.order.push_back(w);
        }
        if (pass.distance[w] == pass.distance[v] + 1) pass.sigma[w] += pass.sigma[v];
      }
    }
    scores.closeness[s] = distance_sum > 0 ? 1.0 / static_cast<double>(distance_sum) : 0.0;

    // Dependency accumulation in reverse BFS order; predecessors on shortest
    // paths are exactly the in-neighbours one hop closer to s.
    for (auto it = pass.order.rbegin(); it != pass.order.rend(); ++it) {
      const NodeIndex w = *it;
      for (NodeIndex v : g.predecessors(w)) {
        if (pass.distance[v] >= 0 && pass.distance[v] + 1 == pass.distance[w]) {
          pass.delta[v] += pass.sigma[v] / pass.sigma[w] * (1.0 + pass.delta[w]);
        }
      }
      if (w != s) scores.betweenness[w] += pass.delta[w];
    }
  }

  if (n >= 3) {
    const double norm = static_cast<double>(n - 1) * static_cast<double>(n - 2);
    for (double& b : scores.betweenness) b /= norm;
  } else {
    std::fill(scores.betweenness.begin(), scores.betweenness.end(), 0.0);
  }
  return scores;
}

std::size_t degree(const GraphSnapshot& g, const ActorId& actor) {
  const NodeIndex u = require(g, actor);
  return g.successors(u).size() + g.predecessors(u).size();
}

std::size_t distinct_neighbors(const GraphSnapshot& g, const ActorId& actor) {
  const NodeIndex u = require(g, actor);
  std::vector<NodeIndex> merged;
  const auto out = g.successors(u);
  const auto in = g.predecessors(u);
  std::set_union(out.begin(), out.end(), in.begin(), in.end(), std::back_inserter(merged));
  return merged.size();
}

double closeness(const GraphSnapshot& g, const ActorId& actor) {
  const NodeIndex s = require(g, actor);
  std::vector<long> distance(g.node_count(), -1);
  std::vector<NodeIndex> queue{s};
  distance[s] = 0;
  long sum = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeIndex v = queue[head];
    for (NodeIndex w : g.successors(v)) {
      if (distance[w] < 0) {
        distance[w] = distance[v] + 1;
        sum += distance[w];
        queue.push_back(w);
      }
    }
  }
  return sum > 0 ? 1.0 / static_cast<double>(sum) : 0.0;
}

double betweenness(const GraphSnapshot& g, const ActorId& actor) {
  const NodeIndex u = require(g, actor);
  return compute_centrality(g).betweenness[u];
}

std::vector<std::size_t> oscillation_positions(std::span<const double> series) {
  std::vector<double> runs;
  std::vector<std::size_t> run_start;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (runs.empty() || runs.back() != series[i]) {
      runs.push_back(series[i]);
      run_start.push_back(i);
    }
  }
  std::vector<std::size_t> positions;
  for (std::size_t k = 1; k + 1 < runs.size(); ++k) {
    const bool peak = runs[k] > runs[k - 1] && runs[k] > runs[k + 1];
    const bool trough = runs[k] < runs[k - 1] && runs[k] < runs[k + 1];
    if (peak || trough) positions.push_back(run_start[k]);
  }
  return positions;
}

std::size_t betweenness_oscillations(std::span<const double> series) { return oscillation_positions(series).size(); }

}  // namespace mailnet
