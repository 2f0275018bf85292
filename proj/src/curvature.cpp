#include "salami/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "salami/lipschitz.hpp"
#include "salami/simplex.hpp"

namespace salami {

namespace {

std::vector<int> closed_neighborhood(const WeightedGraph& g, int v) {
  std::vector<int> out{v};
  for (const auto& a : g.neighbors(v)) out.push_back(a.to);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> sorted_union(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

void require_distinct_reachable(const Metric& metric, int x, int y) {
  if (x == y) fail(ErrorCode::NotAdjacent, "curvature needs two distinct vertices");
  if (!metric.reachable(x, y))
    fail(ErrorCode::NotAdjacentMetric, "d(x,y) is infinite inside the window");
}

}  // namespace

CurvatureResult curvature_dual(const WeightedGraph& g, const Metric& metric, int x, int y) {
  require_distinct_reachable(metric, x, y);
  const Rat R = metric.distance(x, y);

  std::vector<int> S = sorted_union(closed_neighborhood(g, x), closed_neighborhood(g, y));
  const int k = static_cast<int>(S.size());
  std::vector<int> pos(g.n(), -1);
  for (int i = 0; i < k; ++i) pos[S[i]] = i;

  CurvatureResult res;
  res.reliable = metric.certified(x, y);
  for (int v : S)
    if (g.is_boundary(v)) res.reliable = false;

  std::vector<std::vector<Rat>> d(k, std::vector<Rat>(k, Rat(0)));
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      d[i][j] = d[j][i] = metric.distance(S[i], S[j]);
      if (!metric.certified(S[i], S[j])) res.reliable = false;
    }

  const int ix = pos[x], iy = pos[y];

  // Pin f(x) = 0, f(y) = R; substitute z(v) = f(v) + d(v,x) >= 0.
  LpProblem<Rat> lp;
  std::vector<int> var(k, -1);
  // Objective: Delta f(x) - Delta f(y) = sum_v coef(v) f(v) + Deg(y) R.
  std::vector<Rat> coef(k, Rat(0));
  for (const auto& a : g.neighbors(x)) coef[pos[a.to]] += a.w / g.measure(x);
  for (const auto& a : g.neighbors(y)) coef[pos[a.to]] -= a.w / g.measure(y);
  Rat constant = g.degree(y) * R + coef[iy] * R;  // f(y) = R contribution
  for (int i = 0; i < k; ++i) {
    if (i == ix || i == iy) continue;
    var[i] = lp.add_var(coef[i]);
    constant -= coef[i] * d[i][ix];
  }

  // 1-Lipschitz pair constraints on S, pruned when a third S-vertex splits the
  // distance (the two pieces imply the whole).
  auto pruned = [&](int i, int j) {
    for (int w = 0; w < k; ++w) {
      if (w == i || w == j) continue;
      if (d[i][w] + d[w][j] == d[i][j]) return true;
    }
    return false;
  };
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      if ((i == ix && j == iy) || (i == iy && j == ix)) continue;
      if (pruned(i, j)) continue;
      // constraint: f(j) - f(i) <= d(i,j)
      if (i == ix && var[j] >= 0) {
        lp.add_le({{var[j], Rat(1)}}, d[ix][j] + d[j][ix]);
      } else if (i == iy && var[j] >= 0) {
        lp.add_le({{var[j], Rat(1)}}, d[iy][j] + R + d[j][ix]);
      } else if (j == ix && var[i] >= 0) {
        // -f(i) <= d(i,x): implied by z(i) >= 0
      } else if (j == iy && var[i] >= 0) {
        lp.add_le({{var[i], Rat(-1)}}, d[i][iy] - R - d[i][ix]);
      } else if (var[i] >= 0 && var[j] >= 0) {
        lp.add_le({{var[j], Rat(1)}, {var[i], Rat(-1)}}, d[i][j] + d[j][ix] - d[i][ix]);
      }
    }
  }

  auto sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal)
    fail(ErrorCode::InfeasibleMarginals, "potential LP did not solve; graph data is inconsistent");

  res.kappa = (sol.objective + constant) / R;
  res.potential.reserve(k);
  for (int i = 0; i < k; ++i) {
    Rat f;
    if (i == ix)
      f = 0;
    else if (i == iy)
      f = R;
    else
      f = sol.x[var[i]] - d[i][ix];
    res.potential.push_back({S[i], f});
  }
  return res;
}

CurvatureResult curvature_primal(const WeightedGraph& g, const Metric& metric, int x, int y) {
  require_distinct_reachable(metric, x, y);
  const Rat R = metric.distance(x, y);

  std::vector<int> A = closed_neighborhood(g, x);
  std::vector<int> B = closed_neighborhood(g, y);
  const int na = static_cast<int>(A.size()), nb = static_cast<int>(B.size());

  CurvatureResult res;
  res.reliable = metric.certified(x, y);
  for (int v : A)
    if (g.is_boundary(v)) res.reliable = false;
  for (int v : B)
    if (g.is_boundary(v)) res.reliable = false;

  LpProblem<Rat> lp;
  lp.maximize = true;
  std::vector<std::vector<int>> var(na, std::vector<int>(nb));
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) {
      Rat dist = (A[i] == B[j]) ? Rat(0) : metric.distance(A[i], B[j]);
      if (A[i] != B[j] && !metric.certified(A[i], B[j])) res.reliable = false;
      var[i][j] = lp.add_var(Rat(1) - dist / R);
    }
  for (int j = 0; j < nb; ++j) {
    if (B[j] == y) continue;
    std::vector<std::pair<int, Rat>> row;
    for (int i = 0; i < na; ++i) row.push_back({var[i][j], Rat(1)});
    lp.add_eq(std::move(row), g.transition_rate(y, B[j]));
  }
  for (int i = 0; i < na; ++i) {
    if (A[i] == x) continue;
    std::vector<std::pair<int, Rat>> row;
    for (int j = 0; j < nb; ++j) row.push_back({var[i][j], Rat(1)});
    lp.add_eq(std::move(row), g.transition_rate(x, A[i]));
  }

  auto sol = solve_lp(lp);
  if (sol.status == LpStatus::Infeasible)
    fail(ErrorCode::InfeasibleMarginals, "transport marginals are infeasible");
  if (sol.status != LpStatus::Optimal)
    fail(ErrorCode::InfeasibleMarginals, "transport LP unbounded; graph data is inconsistent");

  res.kappa = sol.objective;
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j)
      if (sol.x[var[i][j]] != 0) res.plan.push_back({A[i], B[j], sol.x[var[i][j]]});
  return res;
}

Rat curvature_tree(const WeightedGraph& g, int x, int y) {
  if (!g.is_tree()) fail(ErrorCode::NotATree, "graph is not a tree");
  if (!g.adjacent(x, y)) fail(ErrorCode::NotAdjacent, g.id(x) + " and " + g.id(y) + " not adjacent");
  return 2 * (g.transition_rate(x, y) + g.transition_rate(y, x)) - g.degree(x) - g.degree(y);
}

std::optional<std::pair<long long, long long>> lattice_coords(const std::string& id) {
  auto colon = id.rfind(':');
  std::string body = colon == std::string::npos ? id : id.substr(colon + 1);
  auto comma = body.find(',');
  if (comma == std::string::npos) return std::nullopt;
  try {
    std::size_t used = 0;
    long long cx = std::stoll(body.substr(0, comma), &used);
    if (used != comma) return std::nullopt;
    std::string rest = body.substr(comma + 1);
    long long cy = std::stoll(rest, &used);
    if (used != rest.size()) return std::nullopt;
    return std::make_pair(cx, cy);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

Rat curvature_lattice(const WeightedGraph& g, const Metric& metric, int x, int y) {
  require_distinct_reachable(metric, x, y);
  if (metric.mode() != MetricMode::Combinatorial)
    fail(ErrorCode::NotLatticeLike, "lattice closed form needs the combinatorial distance");

  auto cx = lattice_coords(g.id(x)), cy = lattice_coords(g.id(y));
  if (!cx || !cy) fail(ErrorCode::NotLatticeLike, "vertex ids carry no lattice coordinates");
  auto prefix = [&](int v) {
    auto colon = g.id(v).rfind(':');
    return colon == std::string::npos ? std::string() : g.id(v).substr(0, colon);
  };
  if (prefix(x) != prefix(y)) fail(ErrorCode::NotLatticeLike, "vertices in different charts");

  long long ex = cy->first - cx->first, ey = cy->second - cx->second;
  if (std::llabs(ex) + std::llabs(ey) != 1)
    fail(ErrorCode::NotLatticeLike, "y is not a unit lattice step from x");

  // Verify d0 = l1 on B2(x) u B2(y) and collect the local chart.
  auto bx = metric.ball(x, Rat(2)).members;
  auto by = metric.ball(y, Rat(2)).members;
  std::vector<int> local = sorted_union(bx, by);
  std::map<std::pair<long long, long long>, int> chart;
  for (int v : local) {
    if (prefix(v) != prefix(x)) fail(ErrorCode::NotLatticeLike, "mixed charts near the edge");
    auto c = lattice_coords(g.id(v));
    if (!c) fail(ErrorCode::NotLatticeLike, "vertex '" + g.id(v) + "' has no coordinates");
    if (!chart.emplace(*c, v).second)
      fail(ErrorCode::NotLatticeLike, "duplicate coordinates near the edge");
  }
  for (std::size_t i = 0; i < local.size(); ++i)
    for (std::size_t j = i + 1; j < local.size(); ++j) {
      auto a = *lattice_coords(g.id(local[i]));
      auto b = *lattice_coords(g.id(local[j]));
      Rat l1 = Rat(std::llabs(a.first - b.first) + std::llabs(a.second - b.second));
      if (!metric.reachable(local[i], local[j]) || metric.distance(local[i], local[j]) != l1)
        fail(ErrorCode::NotLatticeLike, "combinatorial distance differs from l1 near the edge");
    }

  // Orient the frame so y = x + right; up is the left turn of right.
  std::pair<long long, long long> right{ex, ey}, up{-ey, ex};
  auto rate_to = [&](int from, std::pair<long long, long long> at,
                     std::pair<long long, long long> dir) -> Rat {
    auto it = chart.find({at.first + dir.first, at.second + dir.second});
    if (it == chart.end()) return Rat(0);
    return g.transition_rate(from, it->second);
  };
  std::pair<long long, long long> back{-right.first, -right.second};
  std::pair<long long, long long> down{-up.first, -up.second};
  Rat qxy = g.transition_rate(x, y), qyx = g.transition_rate(y, x);
  Rat qx_back = rate_to(x, *cx, back);
  Rat qy_fwd = rate_to(y, *cy, right);
  Rat tu = rat_abs(rate_to(x, *cx, up) - rate_to(y, *cy, up));
  Rat td = rat_abs(rate_to(x, *cx, down) - rate_to(y, *cy, down));
  return qxy + qyx - qx_back - qy_fwd - tu - td;
}

VertexCurvature vertex_curvature(const WeightedGraph& g, const Metric& metric, int x) {
  const auto& arcs = g.neighbors(x);
  if (arcs.empty()) fail(ErrorCode::NotAdjacent, "vertex '" + g.id(x) + "' has no neighbors");
  VertexCurvature out;
  out.reliable = metric.ball(x, Rat(2)).reliable;
  bool first = true;
  for (const auto& a : arcs) {
    auto r = curvature_dual(g, metric, x, a.to);
    if (!r.reliable) out.reliable = false;
    if (first || r.kappa < out.kappa) {
      out.kappa = r.kappa;
      out.argmin_neighbor = a.to;
      first = false;
    }
  }
  return out;
}

FlatnessReport flatness_report(const WeightedGraph& g, const Metric& metric,
                               const std::vector<int>& region) {
  FlatnessReport rep;
  std::vector<char> in_region(g.n(), 0);
  for (int v : region) in_region[v] = 1;

  std::vector<std::pair<int, int>> edges;
  for (int v : region)
    for (const auto& a : g.neighbors(v)) {
      auto key = std::minmax(v, a.to);
      edges.push_back({key.first, key.second});
    }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::map<std::pair<int, int>, std::pair<Rat, bool>> kappa;
  for (auto [u, v] : edges) {
    auto r = curvature_dual(g, metric, u, v);
    rep.rows.push_back({u, v, r.kappa, r.reliable});
    kappa[{u, v}] = {r.kappa, r.reliable};
    if (!r.reliable) rep.all_reliable = false;
  }

  for (int v : region) {
    bool vertex_reliable = metric.ball(v, Rat(2)).reliable;
    Rat best;
    bool first = true;
    for (const auto& a : g.neighbors(v)) {
      auto key = std::minmax(v, a.to);
      auto [kap, rel] = kappa.at({key.first, key.second});
      if (!rel) vertex_reliable = false;
      if (first || kap < best) {
        best = kap;
        first = false;
      }
    }
    if (first) continue;  // isolated vertex
    if (!vertex_reliable) {
      rep.all_reliable = false;
      continue;  // unreliable vertices do not decide flatness
    }
    if (rat_abs(best) > Rat(1, 1000000000)) rep.flat = false;
  }
  return rep;
}

ScalarField heat_step(const WeightedGraph& g, const ScalarField& f, double eps) {
  ScalarField out = f;
  for (int v = 0; v < g.n(); ++v)
    if (g.is_interior(v)) out[v] = f[v] + eps * laplacian_at(g, f, v);
  return out;
}

ContractionCheck contraction_check(const WeightedGraph& g, const Metric& metric,
                                   const ScalarField& f, double eps, int x, int y) {
  require_distinct_reachable(metric, x, y);
  if (eps <= 0) fail(ErrorCode::EpsilonTooLarge, "eps must be positive");
  Rat eps_rat = rat_from_double(eps);
  if (eps_rat * (g.degree(x) + g.degree(y)) > 1)
    fail(ErrorCode::EpsilonTooLarge, "eps exceeds 1/(Deg(x)+Deg(y))");
  auto lip = is_lipschitz(g, metric, f, {});
  if (!lip.ok) fail(ErrorCode::NotLipschitz, "field is not 1-Lipschitz on the window");
  if (!g.is_interior(x) || !g.is_interior(y))
    fail(ErrorCode::BallTouchesBoundary, "heat step undefined on the rim");

  ContractionCheck chk;
  auto kr = curvature_dual(g, metric, x, y);
  chk.kappa = kr.kappa;
  chk.reliable = kr.reliable;
  ScalarField hf = heat_step(g, f, eps);
  chk.lhs = std::abs(hf[y] - hf[x]);
  chk.rhs = metric.distance_d(x, y) * (1.0 - eps * to_double(kr.kappa));
  chk.holds = chk.lhs <= chk.rhs + 1e-9;
  return chk;
}

namespace {

/// |grad u|(v) = max over neighbors of |u(y)-u(v)| / d(v,y).
double abs_gradient(const WeightedGraph& g, const Metric& metric, const ScalarField& u, int v) {
  double best = 0;
  for (const auto& a : g.neighbors(v))
    best = std::max(best, std::abs(u[a.to] - u[v]) / to_double(metric.edge_length(v, a.to)));
  return best;
}

}  // namespace

MaxPrincipleReport gradient_max_principle_check(const WeightedGraph& g, const Metric& metric,
                                                const ScalarField& u, const std::vector<int>& W) {
  MaxPrincipleReport rep;
  auto b2 = metric.ball(W, Rat(2));
  rep.reliable = b2.reliable;
  std::vector<char> in_w = membership_mask(g, W);

  for (int v : W)
    for (const auto& a : g.neighbors(v)) {
      if (!in_w[a.to] || a.to < v) continue;
      auto r = curvature_dual(g, metric, v, a.to);
      if (r.kappa < 0) rep.curvature_ok = false;
      if (!r.reliable) rep.reliable = false;
    }
  for (int v : W)
    for (const auto& a : g.neighbors(v)) {
      if (!in_w[a.to]) continue;
      if (u[a.to] >= u[v] &&
          laplacian_at(g, u, a.to) < laplacian_at(g, u, v) - 1e-9)
        rep.monotonicity_ok = false;
    }

  auto b1 = metric.ball(W, Rat(1));
  for (int v : W) rep.max_inner = std::max(rep.max_inner, abs_gradient(g, metric, u, v));
  for (int v : b1.members)
    if (!in_w[v]) rep.max_outer = std::max(rep.max_outer, abs_gradient(g, metric, u, v));
  rep.holds = rep.max_inner <= rep.max_outer + 1e-9;
  return rep;
}

MaxPrincipleReport gradient_max_principle_ball(const WeightedGraph& g, const Metric& metric,
                                               const ScalarField& u, int x, const Rat& R) {
  MaxPrincipleReport rep;
  auto br = metric.ball(x, R);
  auto br1 = metric.ball(x, R + 1);
  rep.reliable = br1.reliable;

  if (R >= 1) {
    auto inner = metric.ball(x, R - 1);
    for (int v : inner.members)
      if (std::abs(laplacian_at(g, u, v)) > 1e-9) rep.monotonicity_ok = false;
  }
  double max_ball = 0, max_sphere = 0;
  for (int v : br.members) {
    double grad = abs_gradient(g, metric, u, v);
    max_ball = std::max(max_ball, grad);
    if (metric.distance(x, v) == R) max_sphere = std::max(max_sphere, grad);
  }
  rep.max_inner = max_ball;
  rep.max_outer = max_sphere;
  rep.holds = max_ball <= max_sphere + 1e-9;
  return rep;
}

}  // namespace salami
