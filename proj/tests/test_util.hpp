#pragma once

#include <set>
#include <string>
#include <vector>

#include "salami/graph.hpp"
#include "salami/metric.hpp"
#include "salami/rng.hpp"

namespace salami::testutil {

inline std::string num_id(int n) {
  // zero-padded signed ids so lexicographic order equals numeric order
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%c%04d", n < 0 ? 'm' : 'p', std::abs(n));
  return buf;
}

/// Uniform chain on [-r, r]: w = m = 1, rim at the two endpoints.
inline WeightedGraph chain(int r, bool boundary = true) {
  GraphSpec spec;
  for (int i = -r; i <= r; ++i)
    spec.vertices.push_back({num_id(i), Rat(1), boundary && std::abs(i) == r});
  for (int i = -r; i < r; ++i) spec.edges.push_back({num_id(i), num_id(i + 1), Rat(1), {}});
  spec.geodesically_complete = true;
  return build_graph(spec);
}

/// Jump line on [-r, r]: unit weight for 1 <= |x - y| <= 2.
inline WeightedGraph two_jump(int r) {
  GraphSpec spec;
  for (int i = -r; i <= r; ++i)
    spec.vertices.push_back({num_id(i), Rat(1), std::abs(i) >= r - 1});
  for (int i = -r; i <= r; ++i)
    for (int step = 1; step <= 2; ++step)
      if (i + step <= r) spec.edges.push_back({num_id(i), num_id(i + step), Rat(1), {}});
  spec.geodesically_complete = true;
  return build_graph(spec);
}

/// Star with `leaves` unit-weight edges around center "c".
inline WeightedGraph star(int leaves) {
  GraphSpec spec;
  spec.vertices.push_back({"c", Rat(1), false});
  for (int i = 0; i < leaves; ++i) spec.vertices.push_back({"l" + std::to_string(i), Rat(1), false});
  for (int i = 0; i < leaves; ++i) spec.edges.push_back({"c", "l" + std::to_string(i), Rat(1), {}});
  return build_graph(spec);
}

/// Connected random graph with rational data: spanning tree plus extras,
/// degrees kept small so curvature neighborhoods stay tractable.
inline WeightedGraph random_graph(Rng& rng, int max_vertices = 30, int max_degree = 4) {
  int n = static_cast<int>(rng.uniform_int(4, max_vertices));
  GraphSpec spec;
  for (int i = 0; i < n; ++i)
    spec.vertices.push_back({num_id(i), Rat(rng.uniform_int(1, 6), rng.uniform_int(1, 4)), false});
  std::vector<int> deg(n, 0);
  std::set<std::pair<int, int>> used;
  auto rand_w = [&] { return Rat(rng.uniform_int(1, 8), rng.uniform_int(1, 4)); };
  auto add_edge = [&](int u, int v) {
    auto key = std::minmax(u, v);
    if (u == v || !used.insert(key).second) return false;
    spec.edges.push_back({num_id(u), num_id(v), rand_w(), {}});
    ++deg[u];
    ++deg[v];
    return true;
  };
  for (int i = 1; i < n; ++i) {
    int j = static_cast<int>(rng.uniform_int(0, i - 1));
    for (int tries = 0; tries < 8 && deg[j] >= max_degree; ++tries)
      j = static_cast<int>(rng.uniform_int(0, i - 1));
    add_edge(i, j);
  }
  int extras = static_cast<int>(rng.uniform_int(0, n / 2));
  for (int e = 0; e < extras; ++e) {
    int u = static_cast<int>(rng.uniform_int(0, n - 1));
    int v = static_cast<int>(rng.uniform_int(0, n - 1));
    if (u == v || deg[u] >= max_degree || deg[v] >= max_degree) continue;
    add_edge(u, v);
  }
  return build_graph(spec);
}

/// Random weighted tree.
inline WeightedGraph random_tree(Rng& rng, int max_vertices = 50) {
  int n = static_cast<int>(rng.uniform_int(2, max_vertices));
  GraphSpec spec;
  for (int i = 0; i < n; ++i)
    spec.vertices.push_back({num_id(i), Rat(rng.uniform_int(1, 5), rng.uniform_int(1, 3)), false});
  for (int i = 1; i < n; ++i) {
    int j = static_cast<int>(rng.uniform_int(0, i - 1));
    spec.edges.push_back({num_id(i), num_id(j), Rat(rng.uniform_int(1, 6), rng.uniform_int(1, 3)), {}});
  }
  return build_graph(spec);
}

/// Integer lattice window: square [-r, r]^2 (or half-plane x >= 0 when
/// half is set), unit weights and measures, ids "x,y".
inline WeightedGraph lattice_window(int r, bool half = false) {
  GraphSpec spec;
  auto cid = [](int x, int y) { return std::to_string(x) + "," + std::to_string(y); };
  auto inside = [&](int x, int y) { return std::abs(x) <= r && std::abs(y) <= r && (!half || x >= 0); };
  for (int x = -r; x <= r; ++x)
    for (int y = -r; y <= r; ++y) {
      if (!inside(x, y)) continue;
      bool rim = std::abs(x) == r || std::abs(y) == r;
      spec.vertices.push_back({cid(x, y), Rat(1), rim});
      if (inside(x + 1, y)) spec.edges.push_back({cid(x, y), cid(x + 1, y), Rat(1), {}});
      if (inside(x, y + 1)) spec.edges.push_back({cid(x, y), cid(x, y + 1), Rat(1), {}});
    }
  spec.geodesically_complete = true;
  return build_graph(spec);
}

/// Random 1-Lipschitz field: McShane envelope of random anchor values.
inline ScalarField random_lip1(Rng& rng, const WeightedGraph& g, const Metric& metric,
                               double amplitude = 5.0) {
  int n = g.n();
  int anchors = static_cast<int>(rng.uniform_int(1, std::max(1, n / 3)));
  std::vector<std::pair<int, double>> pins;
  for (int a = 0; a < anchors; ++a)
    pins.push_back({static_cast<int>(rng.uniform_int(0, n - 1)), rng.uniform(-amplitude, amplitude)});
  ScalarField f(n, 0.0);
  for (int v = 0; v < n; ++v) {
    double best = std::numeric_limits<double>::infinity();
    for (auto [a, val] : pins)
      if (metric.reachable(v, a)) best = std::min(best, val + metric.distance_d(v, a));
    f[v] = std::isfinite(best) ? best : 0.0;
  }
  return f;
}

}  // namespace salami::testutil
