#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "salami/graph.hpp"

namespace salami {

struct BallResult {
  std::vector<int> members;  // sorted by index
  bool reliable = true;      // false when the set may be truncated by the window
};

/// Path metric over a graph window: combinatorial hop distance or summed
/// positive edge lengths, evaluated exactly (rational Dijkstra/BFS).
///
/// Window honesty: distance(u,v) is the in-window value. certified(u,v) says
/// whether that value is provably the distance in any extension of the window:
/// either the generator certified the window geodesically complete, or the
/// value beats the cheapest conceivable escape route
/// d(u,rim) + d(v,rim) + 2*min_edge_length.
class Metric {
 public:
  static Metric build(const WeightedGraph& g, MetricMode mode,
                      const std::map<std::pair<int, int>, Rat>* lengths = nullptr);

  MetricMode mode() const { return mode_; }
  const WeightedGraph& graph() const { return *g_; }

  bool reachable(int u, int v) const;
  Rat distance(int u, int v) const;  // throws DisconnectedQuery
  double distance_d(int u, int v) const { return to_double(distance(u, v)); }
  bool certified(int u, int v) const;

  /// Length assigned to an edge: 1 in combinatorial mode.
  Rat edge_length(int u, int v) const;
  const Rat& min_edge_length() const { return min_len_; }

  /// B_R(W) = {x : d(x, W) <= R}.
  BallResult ball(const std::vector<int>& centers, const Rat& R) const;
  BallResult ball(int x, const Rat& R) const { return ball(std::vector<int>{x}, R); }
  /// S_R(x) = {y : d(x,y) = R}.
  BallResult sphere(int x, const Rat& R) const;

  Rat dist_to_set(int v, const std::vector<int>& set) const;
  bool rim_reachable(int v) const { return !rim_dist_.empty() && rim_reach_[v]; }
  const Rat& rim_distance(int v) const { return rim_dist_[v]; }

 private:
  struct Row {
    std::vector<Rat> d;
    std::vector<char> reach;
  };
  struct Cache {
    std::mutex mu;
    std::vector<std::unique_ptr<Row>> rows;
  };
  const Row& row(int src) const;
  Row run_from(const std::vector<int>& sources) const;

  const WeightedGraph* g_ = nullptr;
  MetricMode mode_ = MetricMode::Combinatorial;
  std::vector<std::vector<Rat>> arc_len_;  // parallel to g.neighbors(v)
  Rat min_len_ = 1;
  mutable std::unique_ptr<Cache> cache_;  // concurrent read queries share it
  std::vector<Rat> rim_dist_;
  std::vector<char> rim_reach_;
};

/// Convenience: metric in the graph's default mode.
Metric path_metric(const WeightedGraph& g);
Metric path_metric(const WeightedGraph& g, MetricMode mode,
                   const std::map<std::pair<int, int>, Rat>* lengths = nullptr);

}  // namespace salami
