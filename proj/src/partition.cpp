#include "salami/partition.hpp"

#include <algorithm>
#include <queue>

namespace salami {

namespace {

std::vector<std::vector<int>> components_of(const WeightedGraph& g, const std::vector<char>& allowed) {
  std::vector<std::vector<int>> comps;
  std::vector<char> seen(g.n(), 0);
  for (int s = 0; s < g.n(); ++s) {
    if (!allowed[s] || seen[s]) continue;
    std::vector<int> comp;
    std::queue<int> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      comp.push_back(x);
      for (const auto& a : g.neighbors(x)) {
        if (!allowed[a.to] || seen[a.to]) continue;
        seen[a.to] = 1;
        q.push(a.to);
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

}  // namespace

bool set_connected(const WeightedGraph& g, const std::vector<int>& set) {
  if (set.empty()) return true;
  std::vector<char> allowed(g.n(), 0);
  for (int v : set) allowed[v] = 1;
  return components_of(g, allowed).size() == 1;
}

SalamiPartition make_partition(const WeightedGraph& g, std::vector<int> K, std::vector<int> X,
                               std::vector<int> Y) {
  if (K.empty()) fail(ErrorCode::InvalidPartition, "K must be nonempty");
  std::sort(K.begin(), K.end());
  K.erase(std::unique(K.begin(), K.end()), K.end());
  for (int v : K)
    if (v < 0 || v >= g.n()) fail(ErrorCode::UnknownVertex, "K vertex index out of range");

  SalamiPartition p;
  p.side.assign(g.n(), 255);
  for (int v : K) p.side[v] = 0;
  p.K = std::move(K);

  if (X.empty() && Y.empty()) {
    std::vector<char> rest(g.n(), 1);
    for (int v : p.K) rest[v] = 0;
    auto comps = components_of(g, rest);
    if (comps.size() != 2)
      fail(ErrorCode::InvalidPartition,
           "V \\ K has " + std::to_string(comps.size()) + " components; X and Y must be explicit");
    p.X = std::move(comps[0]);
    p.Y = std::move(comps[1]);
  } else {
    std::sort(X.begin(), X.end());
    std::sort(Y.begin(), Y.end());
    p.X = std::move(X);
    p.Y = std::move(Y);
  }
  for (int v : p.X) {
    if (p.side[v] != 255) fail(ErrorCode::InvalidPartition, "overlapping sets at '" + g.id(v) + "'");
    p.side[v] = 1;
  }
  for (int v : p.Y) {
    if (p.side[v] != 255) fail(ErrorCode::InvalidPartition, "overlapping sets at '" + g.id(v) + "'");
    p.side[v] = 2;
  }
  for (int v = 0; v < g.n(); ++v)
    if (p.side[v] == 255) fail(ErrorCode::InvalidPartition, "vertex '" + g.id(v) + "' not covered");

  for (auto [u, v] : g.edge_list()) {
    if ((p.side[u] == 1 && p.side[v] == 2) || (p.side[u] == 2 && p.side[v] == 1))
      fail(ErrorCode::InvalidPartition, "edge between X and Y: (" + g.id(u) + "," + g.id(v) + ")");
  }

  p.k_connected = set_connected(g, p.K);
  for (int v : p.X)
    if (g.is_boundary(v)) p.x_reaches_rim = true;
  for (int v : p.Y)
    if (g.is_boundary(v)) p.y_reaches_rim = true;
  return p;
}

EndsReport count_ends(const WeightedGraph& g, const std::vector<int>& K) {
  for (int v : K) {
    if (v < 0 || v >= g.n()) fail(ErrorCode::UnknownVertex, "K vertex index out of range");
    if (g.is_boundary(v)) fail(ErrorCode::KTouchesBoundary, "K contains rim vertex '" + g.id(v) + "'");
  }
  std::vector<char> rest(g.n(), 1);
  for (int v : K) rest[v] = 0;
  EndsReport rep;
  rep.components = components_of(g, rest);

  // hop distance to the rim, for the depth classification
  std::vector<int> rim_hops(g.n(), -1);
  {
    std::queue<int> q;
    for (int v = 0; v < g.n(); ++v)
      if (g.is_boundary(v)) {
        rim_hops[v] = 0;
        q.push(v);
      }
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (const auto& a : g.neighbors(x))
        if (rim_hops[a.to] < 0) {
          rim_hops[a.to] = rim_hops[x] + 1;
          q.push(a.to);
        }
    }
  }

  for (const auto& comp : rep.components) {
    bool touches_rim = false, has_depth = false;
    Rat measure(0);
    for (int v : comp) {
      if (g.is_boundary(v)) touches_rim = true;
      if (rim_hops[v] < 0 || rim_hops[v] >= 2) has_depth = true;
      measure += g.measure(v);
    }
    bool infinite = touches_rim && has_depth;
    bool indeterminate = touches_rim && !has_depth;
    rep.component_infinite.push_back(infinite ? 1 : 0);
    rep.component_indeterminate.push_back(indeterminate ? 1 : 0);
    rep.component_measure.push_back(measure);
    if (infinite)
      ++rep.infinite_ends;
    else if (indeterminate)
      ++rep.indeterminate_shells;
    else
      ++rep.finite_components;
  }
  return rep;
}

SalamiPartition connect_partition(const WeightedGraph& g, const Metric& metric,
                                  const SalamiPartition& p) {
  if (p.k_connected) return p;
  Rat R(0);
  for (std::size_t i = 0; i < p.K.size(); ++i)
    for (std::size_t j = i + 1; j < p.K.size(); ++j) {
      Rat d = metric.distance(p.K[i], p.K[j]);
      if (d > R) R = d;
    }
  BallResult enlarged = metric.ball(p.K, R);
  if (!enlarged.reliable)
    fail(ErrorCode::WindowTooSmall, "B_R(K) reaches the window rim (R = " + rat_to_string(R) + ")");
  std::vector<char> in_k = membership_mask(g, enlarged.members);
  std::vector<int> X, Y;
  for (int v : p.X)
    if (!in_k[v]) X.push_back(v);
  for (int v : p.Y)
    if (!in_k[v]) Y.push_back(v);
  if (X.empty() || Y.empty())
    fail(ErrorCode::WindowTooSmall, "enlarged K swallowed a whole side of the partition");
  return make_partition(g, enlarged.members, X, Y);
}

}  // namespace salami
