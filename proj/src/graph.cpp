#include "salami/graph.hpp"

#include <algorithm>
#include <map>
#include <queue>

namespace salami {

int WeightedGraph::vertex(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) fail(ErrorCode::UnknownVertex, "no vertex '" + id + "'");
  return it->second;
}

int WeightedGraph::find_vertex(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

bool WeightedGraph::adjacent(int u, int v) const {
  for (const Arc& a : adj_[u])
    if (a.to == v) return true;
  return false;
}

Rat WeightedGraph::weight(int u, int v) const {
  for (const Arc& a : adj_[u])
    if (a.to == v) return a.w;
  return Rat(0);
}

bool WeightedGraph::is_tree() const {
  return connected_ && edges_.size() + 1 == ids_.size();
}

std::vector<int> WeightedGraph::interior_vertices() const {
  std::vector<int> out;
  for (int v = 0; v < n(); ++v)
    if (!boundary_[v]) out.push_back(v);
  return out;
}

std::vector<int> WeightedGraph::boundary_vertices() const {
  std::vector<int> out;
  for (int v = 0; v < n(); ++v)
    if (boundary_[v]) out.push_back(v);
  return out;
}

namespace {

bool component_reaches_all(const std::vector<std::vector<WeightedGraph::Arc>>& adj,
                           const std::vector<char>& allowed, int start, int expected) {
  std::vector<char> seen(adj.size(), 0);
  std::queue<int> q;
  q.push(start);
  seen[start] = 1;
  int count = 1;
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    for (const auto& a : adj[x]) {
      if (!allowed[a.to] || seen[a.to]) continue;
      seen[a.to] = 1;
      ++count;
      q.push(a.to);
    }
  }
  return count == expected;
}

}  // namespace

WeightedGraph build_graph(const GraphSpec& spec) {
  WeightedGraph g;
  std::vector<int> order(spec.vertices.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return spec.vertices[a].id < spec.vertices[b].id; });

  for (int i : order) {
    const VertexSpec& vs = spec.vertices[i];
    if (g.index_.count(vs.id)) fail(ErrorCode::DuplicateVertex, "vertex '" + vs.id + "' listed twice");
    if (vs.m <= 0) fail(ErrorCode::NonpositiveMeasure, "m(" + vs.id + ") = " + rat_to_string(vs.m));
    g.index_[vs.id] = static_cast<int>(g.ids_.size());
    g.ids_.push_back(vs.id);
    g.measure_.push_back(vs.m);
    g.boundary_.push_back(vs.boundary ? 1 : 0);
    if (vs.boundary) g.has_boundary_ = true;
  }

  struct EdgeData {
    Rat w;
    std::optional<Rat> len;
  };
  std::map<std::pair<int, int>, EdgeData> emap;
  for (const EdgeSpec& es : spec.edges) {
    int u = g.vertex(es.u);
    int v = g.vertex(es.v);
    if (es.w < 0) fail(ErrorCode::NegativeWeight, "w(" + es.u + "," + es.v + ") < 0");
    if (u == v) {
      if (es.w > 0) fail(ErrorCode::SelfLoopWeight, "positive self-loop at '" + es.u + "'");
      continue;
    }
    if (es.w == 0) continue;
    auto key = std::minmax(u, v);
    auto [it, inserted] = emap.emplace(std::pair<int, int>(key.first, key.second), EdgeData{es.w, es.len});
    if (!inserted) {
      if (it->second.w != es.w)
        fail(ErrorCode::AsymmetricWeight,
             "edge (" + es.u + "," + es.v + ") listed with conflicting weights");
      if (es.len && it->second.len && *es.len != *it->second.len)
        fail(ErrorCode::AsymmetricWeight,
             "edge (" + es.u + "," + es.v + ") listed with conflicting lengths");
      if (es.len && !it->second.len) it->second.len = es.len;
    }
  }

  g.adj_.assign(g.n(), {});
  for (const auto& [key, data] : emap) {
    auto [u, v] = key;
    g.edges_.push_back({u, v});
    g.adj_[u].push_back({v, data.w, data.len});
    g.adj_[v].push_back({u, data.w, data.len});
  }
  for (auto& arcs : g.adj_)
    std::sort(arcs.begin(), arcs.end(), [](const auto& a, const auto& b) { return a.to < b.to; });

  g.degree_.resize(g.n());
  g.degree_d_.resize(g.n());
  for (int v = 0; v < g.n(); ++v) {
    Rat s(0);
    for (const auto& a : g.adj_[v]) s += a.w;
    g.degree_[v] = s / g.measure_[v];
    g.degree_d_[v] = to_double(g.degree_[v]);
  }

  if (g.n() > 0) {
    std::vector<char> all(g.n(), 1);
    g.connected_ = component_reaches_all(g.adj_, all, 0, g.n());
    std::vector<char> interior(g.n(), 0);
    int interior_count = 0, first_interior = -1;
    for (int v = 0; v < g.n(); ++v) {
      if (!g.boundary_[v]) {
        interior[v] = 1;
        ++interior_count;
        if (first_interior < 0) first_interior = v;
      }
    }
    g.interior_connected_ =
        interior_count == 0 || component_reaches_all(g.adj_, interior, first_interior, interior_count);
  }

  g.geodesically_complete_ = spec.geodesically_complete;
  g.metric_mode_ = spec.metric;
  return g;
}

Rat laplacian_at_exact(const WeightedGraph& g, const ExactField& f, int x) {
  Rat acc(0);
  for (const auto& a : g.neighbors(x)) acc += a.w * (f[a.to] - f[x]);
  return acc / g.measure(x);
}

double laplacian_at(const WeightedGraph& g, const ScalarField& f, int x) {
  double acc = 0;
  for (const auto& a : g.neighbors(x)) acc += to_double(a.w) * (f[a.to] - f[x]);
  return acc / to_double(g.measure(x));
}

double laplacian_at_checked(const WeightedGraph& g, const PartialField& f, int x) {
  if (!f.defined[x]) fail(ErrorCode::MissingValue, "field undefined at '" + g.id(x) + "'");
  for (const auto& a : g.neighbors(x))
    if (!f.defined[a.to]) fail(ErrorCode::MissingValue, "field undefined at '" + g.id(a.to) + "'");
  return laplacian_at(g, f.values, x);
}

double inner_product(const WeightedGraph& g, const ScalarField& f, const ScalarField& h,
                     const std::vector<int>& support_of_f) {
  double acc = 0;
  for (int v : support_of_f) {
    if (g.is_boundary(v))
      fail(ErrorCode::SupportTouchesBoundary, "support reaches rim vertex '" + g.id(v) + "'");
    acc += f[v] * h[v] * to_double(g.measure(v));
  }
  return acc;
}

double boundary_form(const WeightedGraph& g, const std::vector<char>& in_A, const ScalarField& u) {
  double acc = 0;
  for (auto [x, y] : g.edge_list()) {
    if (in_A[x] == in_A[y]) continue;
    int a = in_A[x] ? x : y;
    int b = in_A[x] ? y : x;
    acc += to_double(g.weight(a, b)) * (u[b] - u[a]);
  }
  return acc;
}

Rat boundary_form_exact(const WeightedGraph& g, const std::vector<char>& in_A, const ExactField& u) {
  Rat acc(0);
  for (auto [x, y] : g.edge_list()) {
    if (in_A[x] == in_A[y]) continue;
    int a = in_A[x] ? x : y;
    int b = in_A[x] ? y : x;
    acc += g.weight(a, b) * (u[b] - u[a]);
  }
  return acc;
}

std::vector<char> membership_mask(const WeightedGraph& g, const std::vector<int>& set) {
  std::vector<char> mask(g.n(), 0);
  for (int v : set) mask[v] = 1;
  return mask;
}

}  // namespace salami
