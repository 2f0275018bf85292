#include "salami/lipschitz.hpp"

#include <algorithm>
#include <cmath>

namespace salami {

LipschitzVerdict is_lipschitz(const WeightedGraph& g, const Metric& metric, const ScalarField& f,
                              const std::vector<int>& subset, double tol) {
  std::vector<int> verts = subset;
  if (verts.empty()) {
    verts.resize(g.n());
    for (int v = 0; v < g.n(); ++v) verts[v] = v;
  }
  LipschitzVerdict out;
  const std::size_t pair_budget = 250000;
  auto check_pair = [&](int a, int b) {
    if (!metric.reachable(a, b)) return true;
    double d = metric.distance_d(a, b);
    double diff = std::abs(f[b] - f[a]);
    if (diff > d + tol) {
      out.ok = false;
      out.u = a;
      out.v = b;
      out.excess = diff - d;
      return false;
    }
    return true;
  };
  std::size_t n = verts.size();
  if (n * (n - 1) / 2 <= pair_budget) {
    for (std::size_t i = 0; i < n && out.ok; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (!check_pair(verts[i], verts[j])) break;
  } else {
    out.exhaustive = false;
    std::vector<char> in_set = membership_mask(g, verts);
    for (auto [u, v] : g.edge_list()) {
      if (!in_set[u] || !in_set[v]) continue;
      if (!check_pair(u, v)) return out;
    }
    std::size_t stride = n * n / pair_budget + 1;
    for (std::size_t k = 0; k < n * n && out.ok; k += stride) check_pair(verts[k / n], verts[k % n]);
  }
  return out;
}

namespace {

template <class T>
struct Side;

template <>
struct Side<double> {
  static double dist(const Metric& m, int a, int b) { return m.distance_d(a, b); }
  static bool lip_ok(double diff, double d) { return diff <= d + 1e-9; }
};

template <>
struct Side<Rat> {
  static Rat dist(const Metric& m, int a, int b) { return m.distance(a, b); }
  static bool lip_ok(const Rat& diff, const Rat& d) { return diff <= d; }
};

template <class T>
Extension<T> extend_impl(const WeightedGraph& g, const Metric& metric, const SalamiPartition& p,
                         const std::vector<T>& f_on_K) {
  if (f_on_K.size() != p.K.size())
    fail(ErrorCode::MissingValue, "need one value per K vertex");
  const int nk = static_cast<int>(p.K.size());
  for (int i = 0; i < nk; ++i)
    for (int j = i + 1; j < nk; ++j) {
      T diff = f_on_K[j] >= f_on_K[i] ? T(f_on_K[j] - f_on_K[i]) : T(f_on_K[i] - f_on_K[j]);
      if (!Side<T>::lip_ok(diff, Side<T>::dist(metric, p.K[i], p.K[j])))
        fail(ErrorCode::NotLipschitzOnK,
             "K values violate the Lipschitz bound between '" + g.id(p.K[i]) + "' and '" +
                 g.id(p.K[j]) + "'");
    }

  Extension<T> out;
  out.field.assign(g.n(), T{});
  out.witness.assign(g.n(), -1);
  out.reliable.assign(g.n(), 1);
  for (int i = 0; i < nk; ++i) out.field[p.K[i]] = f_on_K[i];

  for (int v = 0; v < g.n(); ++v) {
    if (p.side[v] == 0) continue;
    bool lower = p.side[v] == 1;  // X: max f(w) - d; Y: min f(w) + d
    bool first = true;
    T best{};
    int arg = -1;
    for (int i = 0; i < nk; ++i) {
      int w = p.K[i];
      if (!metric.reachable(v, w)) continue;
      if (!metric.certified(v, w)) out.reliable[v] = 0;
      T d = Side<T>::dist(metric, v, w);
      T cand = lower ? T(f_on_K[i] - d) : T(f_on_K[i] + d);
      bool better = first || (lower ? cand > best : cand < best);
      if (better) {
        best = cand;
        arg = w;
        first = false;
      }
    }
    if (first)
      fail(ErrorCode::DisconnectedQuery, "K unreachable from '" + g.id(v) + "'");
    out.field[v] = best;
    out.witness[v] = arg;
    if (!out.reliable[v]) out.all_reliable = false;
  }
  return out;
}

}  // namespace

Extension<double> extend(const WeightedGraph& g, const Metric& metric, const SalamiPartition& p,
                         const std::vector<double>& f_on_K) {
  return extend_impl<double>(g, metric, p, f_on_K);
}

Extension<Rat> extend_exact(const WeightedGraph& g, const Metric& metric, const SalamiPartition& p,
                            const std::vector<Rat>& f_on_K) {
  return extend_impl<Rat>(g, metric, p, f_on_K);
}

Gradients<double> gradients(const WeightedGraph& g, const Metric& metric, const ScalarField& f,
                            int x) {
  const auto& arcs = g.neighbors(x);
  if (arcs.empty()) fail(ErrorCode::NotAdjacent, "no neighbors at '" + g.id(x) + "'");
  Gradients<double> out;
  bool first = true;
  for (const auto& a : arcs) {
    double d = to_double(metric.edge_length(x, a.to));
    double slope = (f[a.to] - f[x]) / d;
    if (first) {
      out.up = slope;
      out.down = -slope;
      first = false;
    } else {
      out.up = std::max(out.up, slope);
      out.down = std::max(out.down, -slope);
    }
  }
  out.abs = std::max(out.up, out.down);
  return out;
}

Gradients<Rat> gradients_exact(const WeightedGraph& g, const Metric& metric, const ExactField& f,
                               int x) {
  const auto& arcs = g.neighbors(x);
  if (arcs.empty()) fail(ErrorCode::NotAdjacent, "no neighbors at '" + g.id(x) + "'");
  Gradients<Rat> out;
  bool first = true;
  for (const auto& a : arcs) {
    Rat slope = (f[a.to] - f[x]) / metric.edge_length(x, a.to);
    if (first) {
      out.up = slope;
      out.down = -slope;
      first = false;
    } else {
      out.up = std::max(out.up, slope);
      out.down = std::max(out.down, Rat(-slope));
    }
  }
  out.abs = std::max(out.up, out.down);
  return out;
}

InFVerdict in_F(const WeightedGraph& g, const Metric& metric, const SalamiPartition& p,
                const ScalarField& f, double tol) {
  std::vector<double> on_k(p.K.size());
  for (std::size_t i = 0; i < p.K.size(); ++i) on_k[i] = f[p.K[i]];
  InFVerdict out;
  Extension<double> sf;
  try {
    sf = extend(g, metric, p, on_k);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotLipschitzOnK) return out;  // not even Lip(1,K)
    throw;
  }
  for (int v = 0; v < g.n(); ++v) {
    if (!sf.reliable[v]) continue;
    if (std::abs(sf.field[v] - f[v]) > tol) {
      out.first_mismatch = v;
      return out;
    }
  }
  // Window stand-in for the decay at infinity: the field must fall below
  // min_K f - radius/2 on X (rise above max_K f + radius/2 on Y), where
  // radius is the deepest certified distance to K inside the window.
  double min_k = on_k[0], max_k = on_k[0];
  for (double v : on_k) {
    min_k = std::min(min_k, v);
    max_k = std::max(max_k, v);
  }
  double radius = 0;
  for (int v = 0; v < g.n(); ++v)
    if (sf.reliable[v]) radius = std::max(radius, to_double(metric.dist_to_set(v, p.K)));
  double min_x = 0, max_y = 0;
  bool has_x = false, has_y = false;
  for (int v : p.X)
    if (sf.reliable[v]) {
      min_x = has_x ? std::min(min_x, f[v]) : f[v];
      has_x = true;
    }
  for (int v : p.Y)
    if (sf.reliable[v]) {
      max_y = has_y ? std::max(max_y, f[v]) : f[v];
      has_y = true;
    }
  out.x_decay_proxy = has_x && min_x <= min_k - radius / 2;
  out.y_growth_proxy = has_y && max_y >= max_k + radius / 2;
  out.member = out.x_decay_proxy && out.y_growth_proxy;
  return out;
}

MonotonicityVerdict monotonicity_check(const WeightedGraph& g, const Metric& metric,
                                       const SalamiPartition& p, const std::vector<double>& f_on_K,
                                       const std::vector<double>& g_on_K) {
  if (f_on_K.size() != g_on_K.size() || f_on_K.size() != p.K.size())
    fail(ErrorCode::MissingValue, "need one value per K vertex");
  for (std::size_t i = 0; i < p.K.size(); ++i)
    if (f_on_K[i] > g_on_K[i] + 1e-12)
      fail(ErrorCode::HypothesisFails, "f exceeds g on K at '" + g.id(p.K[i]) + "'");
  auto sf = extend(g, metric, p, f_on_K);
  auto sg = extend(g, metric, p, g_on_K);
  MonotonicityVerdict out;
  for (int v = 0; v < g.n(); ++v) {
    double gap = sf.field[v] - sg.field[v];
    if (gap > out.worst_gap) {
      out.worst_gap = gap;
      out.worst_vertex = v;
    }
  }
  out.holds = out.worst_gap <= 1e-9;
  return out;
}

}  // namespace salami
