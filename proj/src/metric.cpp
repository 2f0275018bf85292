#include "salami/metric.hpp"

#include <algorithm>

namespace salami {

Metric Metric::build(const WeightedGraph& g, MetricMode mode,
                     const std::map<std::pair<int, int>, Rat>* lengths) {
  Metric m;
  m.g_ = &g;
  m.mode_ = mode;
  m.arc_len_.assign(g.n(), {});
  bool first = true;
  for (int v = 0; v < g.n(); ++v) {
    for (const auto& a : g.neighbors(v)) {
      Rat len(1);
      if (mode == MetricMode::EdgeLengths) {
        auto key = std::minmax(v, a.to);
        if (lengths) {
          auto it = lengths->find({key.first, key.second});
          if (it == lengths->end())
            fail(ErrorCode::MissingLength, "no length for edge (" + g.id(v) + "," + g.id(a.to) + ")");
          len = it->second;
        } else if (a.len) {
          len = *a.len;
        } else {
          fail(ErrorCode::MissingLength, "no length for edge (" + g.id(v) + "," + g.id(a.to) + ")");
        }
        if (len <= 0)
          fail(ErrorCode::MissingLength, "nonpositive length on edge (" + g.id(v) + "," + g.id(a.to) + ")");
      }
      m.arc_len_[v].push_back(len);
      if (first || len < m.min_len_) {
        m.min_len_ = len;
        first = false;
      }
    }
  }
  m.cache_ = std::make_unique<Cache>();
  m.cache_->rows.resize(g.n());
  auto rim = g.boundary_vertices();
  if (!rim.empty()) {
    Row r = m.run_from(rim);
    m.rim_dist_ = std::move(r.d);
    m.rim_reach_ = std::move(r.reach);
  }
  return m;
}

Metric::Row Metric::run_from(const std::vector<int>& sources) const {
  const WeightedGraph& g = *g_;
  Row r;
  r.d.assign(g.n(), Rat(0));
  r.reach.assign(g.n(), 0);
  std::vector<char> done(g.n(), 0);
  for (int s : sources) {
    r.reach[s] = 1;
    r.d[s] = 0;
  }
  // Dense Dijkstra; windows are small and comparisons must stay exact.
  while (true) {
    int best = -1;
    for (int v = 0; v < g.n(); ++v) {
      if (done[v] || !r.reach[v]) continue;
      if (best < 0 || r.d[v] < r.d[best]) best = v;
    }
    if (best < 0) break;
    done[best] = 1;
    const auto& arcs = g.neighbors(best);
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      int to = arcs[i].to;
      Rat nd = r.d[best] + arc_len_[best][i];
      if (!r.reach[to] || nd < r.d[to]) {
        r.reach[to] = 1;
        r.d[to] = nd;
      }
    }
  }
  return r;
}

const Metric::Row& Metric::row(int src) const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  if (!cache_->rows[src]) cache_->rows[src] = std::make_unique<Row>(run_from(std::vector<int>{src}));
  return *cache_->rows[src];
}

bool Metric::reachable(int u, int v) const { return row(u).reach[v] != 0; }

Rat Metric::distance(int u, int v) const {
  const Row& r = row(u);
  if (!r.reach[v])
    fail(ErrorCode::DisconnectedQuery, "no path " + g_->id(u) + " -> " + g_->id(v) + " in window");
  return r.d[v];
}

bool Metric::certified(int u, int v) const {
  if (!row(u).reach[v]) return false;
  if (g_->geodesically_complete() || rim_dist_.empty()) return true;
  if (!rim_reach_[u] || !rim_reach_[v]) return true;  // rim unreachable from here
  return distance(u, v) <= rim_dist_[u] + rim_dist_[v] + 2 * min_len_;
}

Rat Metric::edge_length(int u, int v) const {
  const auto& arcs = g_->neighbors(u);
  for (std::size_t i = 0; i < arcs.size(); ++i)
    if (arcs[i].to == v) return arc_len_[u][i];
  fail(ErrorCode::NotAdjacent, g_->id(u) + " and " + g_->id(v) + " are not adjacent");
}

BallResult Metric::ball(const std::vector<int>& centers, const Rat& R) const {
  if (R < 0) fail(ErrorCode::BadSpec, "negative ball radius");
  Row r = run_from(centers);
  BallResult out;
  // Set completeness: if every rim vertex sits strictly beyond R, no vertex of
  // any window extension can enter the ball (a path out of the window pays at
  // least the in-window distance to the rim first). Geodesic completeness
  // certifies distance values, not set completeness, so it does not help here.
  for (int v = 0; v < g_->n(); ++v) {
    if (!r.reach[v] || r.d[v] > R) continue;
    out.members.push_back(v);
    if (g_->is_boundary(v)) out.reliable = false;
  }
  return out;
}

BallResult Metric::sphere(int x, const Rat& R) const {
  const Row& r = row(x);
  BallResult out;
  for (int v = 0; v < g_->n(); ++v) {
    if (!r.reach[v] || r.d[v] != R) continue;
    out.members.push_back(v);
  }
  if (!rim_dist_.empty() && rim_reach_[x] && rim_dist_[x] <= R) out.reliable = false;
  return out;
}

Rat Metric::dist_to_set(int v, const std::vector<int>& set) const {
  bool found = false;
  Rat best(0);
  for (int s : set) {
    if (!reachable(v, s)) continue;
    Rat d = distance(v, s);
    if (!found || d < best) {
      best = d;
      found = true;
    }
  }
  if (!found) fail(ErrorCode::DisconnectedQuery, "set unreachable from " + g_->id(v));
  return best;
}

Metric path_metric(const WeightedGraph& g) { return Metric::build(g, g.default_metric_mode()); }

Metric path_metric(const WeightedGraph& g, MetricMode mode,
                   const std::map<std::pair<int, int>, Rat>* lengths) {
  return Metric::build(g, mode, lengths);
}

}  // namespace salami
