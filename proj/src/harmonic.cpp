#include "salami/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "salami/rng.hpp"

namespace salami {

namespace {

/// max over distinct pairs in K u B1(K) of Deg(u) + Deg(v): the admissible
/// step size for the smoothing update is 1 over this.
double max_pair_degree_sum(const WeightedGraph& g, const std::vector<int>& K) {
  std::vector<char> in_set(g.n(), 0);
  for (int v : K) {
    in_set[v] = 1;
    for (const auto& a : g.neighbors(v)) in_set[a.to] = 1;
  }
  double top1 = 0, top2 = 0;
  for (int v = 0; v < g.n(); ++v) {
    if (!in_set[v]) continue;
    double d = g.degree_d(v);
    if (d > top1) {
      top2 = top1;
      top1 = d;
    } else if (d > top2) {
      top2 = d;
    }
  }
  return top1 + top2;
}

double zero_crossing_flux(const WeightedGraph& g, const ScalarField& f) {
  double s0 = 0;
  for (auto [u, v] : g.edge_list()) {
    double fu = f[u], fv = f[v];
    if (fu < 0 && fv >= 0) s0 += to_double(g.weight(u, v)) * (fv - fu);
    if (fv < 0 && fu >= 0) s0 += to_double(g.weight(u, v)) * (fu - fv);
  }
  return s0;
}

}  // namespace

SynthesisResult synthesize(const WeightedGraph& g, const Metric& metric, const SalamiPartition& p,
                           const SynthesisOptions& opts) {
  if (!p.k_connected) fail(ErrorCode::InvalidPartition, "synthesis needs a connected K");
  const int nk = static_cast<int>(p.K.size());

  SynthesisResult res;
  double pair_sum = max_pair_degree_sum(g, p.K);
  double eps = opts.epsilon;
  if (eps <= 0)
    eps = pair_sum > 0 ? 0.9 / pair_sum : 0.5;
  else if (pair_sum > 0 && eps > 1.0 / pair_sum)
    fail(ErrorCode::EpsilonTooLarge, "epsilon exceeds 1/max pair degree sum");
  res.epsilon = eps;

  for (int v : p.K)
    if (!g.is_interior(v)) res.reliable = false;

  std::vector<double> fk(nk, 0.0);
  Extension<double> ext = extend(g, metric, p, fk);
  if (!ext.all_reliable) res.reliable = false;

  auto laplacian_on_k = [&](const ScalarField& f) {
    std::vector<double> lap(nk);
    for (int i = 0; i < nk; ++i) lap[i] = laplacian_at(g, f, p.K[i]);
    return lap;
  };

  std::vector<double> lap = laplacian_on_k(ext.field);
  auto spread_of = [](const std::vector<double>& v) {
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
  };

  res.residual = spread_of(lap);
  res.residual_history.push_back(res.residual);
  res.max_history.push_back(*std::max_element(lap.begin(), lap.end()));

  int it = 0;
  while (res.residual > opts.tol && it < opts.max_iter) {
    ++it;
    for (int i = 0; i < nk; ++i) fk[i] = ext.field[p.K[i]] + eps * lap[i];
    double base = fk[0];  // normalize f(x0) = 0 at the least K vertex
    for (auto& v : fk) v -= base;
    ext = extend(g, metric, p, fk);
    if (!ext.all_reliable) res.reliable = false;
    lap = laplacian_on_k(ext.field);
    res.residual = spread_of(lap);
    res.residual_history.push_back(res.residual);
    res.max_history.push_back(*std::max_element(lap.begin(), lap.end()));
  }

  res.iterations = it;
  res.converged = res.residual <= opts.tol;
  res.field = ext.field;
  res.lap_on_K = lap;
  res.c = 0;
  for (double v : lap) res.c += v;
  res.c /= nk;

  if (res.converged && opts.refine) {
    // Snap the K values to small rationals and certify the exact extension:
    // accepted only if its Laplacian vanishes identically on the interior.
    std::vector<Rat> k_exact(nk);
    bool snapped = true;
    for (int i = 0; i < nk; ++i) {
      k_exact[i] = rat_approximate(ext.field[p.K[i]], 1 << 12);
      if (std::abs(to_double(k_exact[i]) - ext.field[p.K[i]]) > 1e-6) {
        snapped = false;
        break;
      }
    }
    if (snapped) {
      try {
        Extension<Rat> exact = extend_exact(g, metric, p, k_exact);
        bool harmonic = true;
        for (int v = 0; v < g.n() && harmonic; ++v)
          if (g.is_interior(v) && laplacian_at_exact(g, exact.field, v) != 0) harmonic = false;
        if (harmonic) res.exact_field = std::move(exact.field);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotLipschitzOnK) throw;
      }
    }
  }
  return res;
}

HarmonicVerdict verify_harmonic_everywhere(const WeightedGraph& g, const ScalarField& f,
                                           double tol) {
  HarmonicVerdict out;
  for (int v = 0; v < g.n(); ++v) {
    if (!g.is_interior(v)) continue;
    double lap = std::abs(laplacian_at(g, f, v));
    if (lap > std::abs(out.worst_value)) {
      out.worst_value = lap;
      out.worst_vertex = v;
    }
  }
  out.ok = std::abs(out.worst_value) <= tol;
  return out;
}

bool h0_certificate(const WeightedGraph& g, const Metric& metric, const ScalarField& f,
                    double tol) {
  for (int v = 0; v < g.n(); ++v) {
    if (!g.is_interior(v)) continue;
    if (std::abs(laplacian_at(g, f, v)) > tol) return false;
    auto gr = gradients(g, metric, f, v);
    if (std::abs(gr.up - 1.0) > tol || std::abs(gr.down - 1.0) > tol) return false;
  }
  return true;
}

UniquenessVerdict h_uniqueness_check(const WeightedGraph& g, const Metric& metric,
                                     const ScalarField& f, const ScalarField& h, double tol) {
  if (!h0_certificate(g, metric, f, tol) || !h0_certificate(g, metric, h, tol))
    fail(ErrorCode::NotInH0, "gradient certificate failed");
  double lo_d = 0, hi_d = 0, lo_s = 0, hi_s = 0;
  bool first = true;
  for (int v = 0; v < g.n(); ++v) {
    if (!g.is_interior(v)) continue;
    double d = f[v] - h[v], s = f[v] + h[v];
    if (first) {
      lo_d = hi_d = d;
      lo_s = hi_s = s;
      first = false;
    } else {
      lo_d = std::min(lo_d, d);
      hi_d = std::max(hi_d, d);
      lo_s = std::min(lo_s, s);
      hi_s = std::max(hi_s, s);
    }
  }
  if (hi_d - lo_d <= tol) return UniquenessVerdict::SameUpToConstant;
  if (hi_s - lo_s <= tol) return UniquenessVerdict::MirrorUpToConstant;
  return UniquenessVerdict::Distinct;
}

LevelSetReport level_sets(const WeightedGraph& g, const ScalarField& f, double a, double b) {
  LevelSetReport rep;
  rep.a = a;
  rep.b = b;
  for (int v = 0; v < g.n(); ++v)
    if (f[v] >= a && f[v] < b) {
      if (g.is_boundary(v))
        fail(ErrorCode::BandTouchesBoundary, "band member '" + g.id(v) + "' sits on the rim");
      rep.members.push_back(v);
    }
  rep.size = static_cast<int>(rep.members.size());
  rep.connected = set_connected(g, rep.members);
  return rep;
}

double level_set_size_bound(const WeightedGraph& g, const ScalarField& f, double eps_w) {
  if (eps_w <= 0) fail(ErrorCode::WeightBelowEpsilon, "eps_w must be positive");
  for (auto [u, v] : g.edge_list())
    if (to_double(g.weight(u, v)) < eps_w - 1e-12)
      fail(ErrorCode::WeightBelowEpsilon,
           "edge (" + g.id(u) + "," + g.id(v) + ") is lighter than eps_w");
  return zero_crossing_flux(g, f) / eps_w;
}

QuasiIsometryReport quasi_isometry_check(const WeightedGraph& g, const Metric& metric,
                                         const ScalarField& f, double eps_w) {
  QuasiIsometryReport rep;
  rep.C = 2.0 * level_set_size_bound(g, f, eps_w);
  const int n = g.n();
  long long pair_count = static_cast<long long>(n) * (n - 1) / 2;
  long long budget = 2000LL * 1999 / 2;
  long long stride = pair_count <= budget ? 1 : pair_count / budget + 1;
  rep.exhaustive = stride == 1;
  long long index = 0;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (index++ % stride != 0) continue;
      if (!metric.reachable(u, v) || !metric.certified(u, v)) continue;
      double d = metric.distance_d(u, v);
      double jump = std::abs(f[u] - f[v]);
      double excess = std::max(jump - d, d - jump - rep.C);
      if (excess > 1e-9 && excess > rep.worst_excess) {
        rep.holds = false;
        rep.worst_excess = excess;
        rep.worst_u = u;
        rep.worst_v = v;
      }
    }
  }
  return rep;
}

namespace {

struct TentQuotient {
  double quotient = 0;
  bool touches_rim = false;
};

TentQuotient tent_quotient(const WeightedGraph& g, const ScalarField& f, double R) {
  if (R <= 0) fail(ErrorCode::DegenerateTestFunction, "tent radius must be positive");
  // shift so that f vanishes somewhere (the vertex with least |f|, lowest index wins)
  int x0 = 0;
  for (int v = 1; v < g.n(); ++v)
    if (std::abs(f[v]) < std::abs(f[x0])) x0 = v;
  double shift = f[x0];
  TentQuotient out;
  ScalarField tent(g.n());
  for (int v = 0; v < g.n(); ++v) {
    tent[v] = std::max(0.0, R - std::abs(f[v] - shift));
    if (tent[v] > 0 && g.is_boundary(v)) out.touches_rim = true;
  }
  double energy = 0;
  for (auto [u, v] : g.edge_list()) {
    double diff = tent[u] - tent[v];
    if (diff != 0) energy += to_double(g.weight(u, v)) * diff * diff;
  }
  out.quotient = energy / (R * R);
  return out;
}

}  // namespace

double recurrence_quotient(const WeightedGraph& g, const ScalarField& f, double R) {
  auto t = tent_quotient(g, f, R);
  if (t.touches_rim)
    fail(ErrorCode::SupportTouchesBoundary, "tent support reaches the window rim");
  return t.quotient;
}

std::vector<RecurrenceRow> recurrence_series(const WeightedGraph& g, const ScalarField& f,
                                             int R_max) {
  std::vector<RecurrenceRow> rows;
  for (int R = 1; R <= R_max; ++R) {
    auto t = tent_quotient(g, f, R);
    rows.push_back({static_cast<double>(R), t.quotient, !t.touches_rim});
  }
  return rows;
}

PowerFit fit_power(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ys[i] <= 0 || xs[i] <= 0) continue;
    double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  PowerFit fit;
  if (n < 2) return fit;
  fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.log_c = (sy - fit.exponent * sx) / n;
  return fit;
}

double dim_bound(const WeightedGraph& g, const ScalarField& f, double eps_w) {
  return 2.0 * level_set_size_bound(g, f, eps_w);
}

EdgeWeightBound edge_weight_upper_bound(const WeightedGraph& g, const SalamiPartition& p,
                                        const ScalarField& f) {
  EdgeWeightBound out;
  std::vector<char> in_x = membership_mask(g, p.X);
  double form = std::abs(boundary_form(g, in_x, f));
  bool has_jump = false;
  for (auto [u, v] : g.edge_list()) {
    double jump = std::abs(f[u] - f[v]);
    if (jump <= 1e-12) continue;
    if (!has_jump || jump < out.eps_gap) out.eps_gap = jump;
    has_jump = true;
  }
  if (!has_jump) fail(ErrorCode::NoJumpEdges, "f is constant on every edge");
  out.bound = form / out.eps_gap;
  for (auto [u, v] : g.edge_list()) {
    double jump = std::abs(f[u] - f[v]);
    if (jump <= 1e-12) continue;
    if (to_double(g.weight(u, v)) > out.bound + 1e-9) {
      out.all_within = false;
      out.worst_u = u;
      out.worst_v = v;
    }
  }
  return out;
}

DirichletResult solve_dirichlet(const WeightedGraph& g, const std::vector<int>& interior,
                                const std::vector<std::pair<int, double>>& boundary_values) {
  const int n = static_cast<int>(interior.size());
  std::vector<int> pos(g.n(), -1);
  for (int i = 0; i < n; ++i) pos[interior[i]] = i;
  std::map<int, double> bnd(boundary_values.begin(), boundary_values.end());

  std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
  std::vector<double> b(n, 0.0);
  for (int i = 0; i < n; ++i) {
    int v = interior[i];
    double wsum = 0;
    for (const auto& arc : g.neighbors(v)) {
      double w = to_double(arc.w);
      wsum += w;
      if (pos[arc.to] >= 0) {
        A[i][pos[arc.to]] += w;
      } else {
        auto it = bnd.find(arc.to);
        if (it == bnd.end())
          fail(ErrorCode::MissingValue, "no boundary value at '" + g.id(arc.to) + "'");
        b[i] -= w * it->second;
      }
    }
    A[i][i] -= wsum;
  }

  // Gaussian elimination with partial pivoting.
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (std::abs(A[piv][col]) < 1e-13)
      fail(ErrorCode::DisconnectedGraph, "Dirichlet system is singular (region without boundary?)");
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < n; ++r) {
      double factor = A[r][col] / A[col][col];
      if (factor == 0) continue;
      for (int c = col; c < n; ++c) A[r][c] -= factor * A[col][c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<double> u(n);
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= A[r][c] * u[c];
    u[r] = acc / A[r][r];
  }

  DirichletResult out;
  out.field.assign(g.n(), 0.0);
  out.solved.assign(g.n(), 0);
  for (int i = 0; i < n; ++i) {
    out.field[interior[i]] = u[i];
    out.solved[interior[i]] = 1;
  }
  for (const auto& [v, val] : boundary_values) {
    out.field[v] = val;
    out.solved[v] = 1;
  }
  return out;
}

AnalysisRatios analysis_ratios(const WeightedGraph& g, const Metric& metric, int x, int R,
                               std::uint64_t seed, int samples) {
  AnalysisRatios out;
  {
    double wlo = 0, whi = 0, mlo = 0, mhi = 0, dhi = 0;
    bool first = true;
    for (auto [u, v] : g.edge_list()) {
      double w = to_double(g.weight(u, v));
      if (first) {
        wlo = whi = w;
        first = false;
      }
      wlo = std::min(wlo, w);
      whi = std::max(whi, w);
    }
    for (int v = 0; v < g.n(); ++v) {
      double m = to_double(g.measure(v));
      mlo = v == 0 ? m : std::min(mlo, m);
      mhi = v == 0 ? m : std::max(mhi, m);
      dhi = std::max(dhi, g.degree_d(v));
    }
    if (wlo <= 0 || whi / wlo > 1e3 || mhi / mlo > 1e3 || dhi > 1e3)
      fail(ErrorCode::NotBoundedGeometry,
           "weight/measure/degree spread on the window exceeds the bounded-geometry gate");
  }

  auto b_r = metric.ball(x, Rat(R));
  auto b_2r = metric.ball(x, Rat(2 * R));
  out.reliable = b_2r.reliable;
  out.doubling = static_cast<double>(b_2r.members.size()) / static_cast<double>(b_r.members.size());

  Rng rng(seed);
  std::vector<char> in_2r = membership_mask(g, b_2r.members);

  // Poincare ratio maximized over sampled fields.
  for (int s = 0; s < samples; ++s) {
    ScalarField f(g.n(), 0.0);
    for (int v : b_2r.members) f[v] = rng.uniform(-1, 1);
    double mean = 0;
    for (int v : b_r.members) mean += f[v];
    mean /= static_cast<double>(b_r.members.size());
    double num = 0;
    for (int v : b_r.members) num += (f[v] - mean) * (f[v] - mean);
    double den = 0;
    for (auto [u, v] : g.edge_list())
      if (in_2r[u] && in_2r[v]) den += (f[u] - f[v]) * (f[u] - f[v]);
    if (den > 0) out.poincare = std::max(out.poincare, num / (static_cast<double>(R) * R * den));
  }

  // Positive Dirichlet harmonics for Harnack (on B_2R) and Cheng-Yau (on B_R).
  auto solve_positive = [&](const std::vector<int>& ball_members) {
    std::vector<char> in_ball = membership_mask(g, ball_members);
    std::vector<int> inner;
    std::vector<std::pair<int, double>> data;
    for (int v : ball_members) {
      bool closed = true;
      for (const auto& a : g.neighbors(v))
        if (!in_ball[a.to]) closed = false;
      if (closed && g.is_interior(v))
        inner.push_back(v);
      else
        data.push_back({v, rng.uniform(0.1, 1.0)});
    }
    return solve_dirichlet(g, inner, data);
  };
  for (int s = 0; s < samples; ++s) {
    auto uh = solve_positive(b_2r.members);
    double lo = 0, hi = 0;
    bool first = true;
    for (int v : b_r.members) {
      if (first) {
        lo = hi = uh.field[v];
        first = false;
      }
      lo = std::min(lo, uh.field[v]);
      hi = std::max(hi, uh.field[v]);
    }
    if (lo <= 0) fail(ErrorCode::NonpositiveHarmonic, "Dirichlet harmonic lost positivity");
    out.harnack = std::max(out.harnack, hi / lo);

    auto uc = solve_positive(b_r.members);
    if (uc.field[x] <= 0) fail(ErrorCode::NonpositiveHarmonic, "Dirichlet harmonic lost positivity");
    double grad = 0;
    for (const auto& a : g.neighbors(x))
      grad = std::max(grad,
                      std::abs(uc.field[a.to] - uc.field[x]) / to_double(metric.edge_length(x, a.to)));
    out.chengyau = std::max(out.chengyau, grad * R / uc.field[x]);
  }
  return out;
}

RigidityReport subexp_rigidity_probe(const WeightedGraph& g, const SalamiPartition& p,
                                     const ScalarField& f, ScalarField u) {
  RigidityReport rep;
  std::vector<char> in_x = membership_mask(g, p.X);
  double form_f = boundary_form(g, in_x, f);
  if (std::abs(form_f) < 1e-12)
    fail(ErrorCode::NormalizationFailed, "<f, Delta 1_X> vanishes; cannot normalize against f");
  rep.beta = boundary_form(g, in_x, u) / form_f;
  for (int v = 0; v < g.n(); ++v) u[v] -= rep.beta * f[v];

  // Center u so the band probe admits a sign change (subtract the band level).
  auto probe = sign_change_probe(g, p, f, u, 1e-7);
  for (auto& val : u) val -= probe.c;

  double eps_min = 0;
  bool first = true;
  for (auto [a, b] : g.edge_list()) {
    double w = to_double(g.weight(a, b));
    eps_min = first ? w : std::min(eps_min, w);
    first = false;
  }
  auto wb = edge_weight_upper_bound(g, p, f);
  double c_band = 2.0 * level_set_size_bound(g, f, eps_min);
  rep.required_factor = eps_min / (wb.bound * c_band * c_band * c_band * c_band);

  // usable r range: crossing edges of C_r and the band D_r stay off the rim
  auto crossing_interior = [&](int r) {
    for (auto [a, b] : g.edge_list()) {
      bool ina = f[a] <= 2.0 * r, inb = f[b] <= 2.0 * r;
      if (ina != inb && (!g.is_interior(a) || !g.is_interior(b))) return false;
    }
    return true;
  };
  double flo = f[0], fhi = f[0];
  for (int v = 0; v < g.n(); ++v) {
    flo = std::min(flo, f[v]);
    fhi = std::max(fhi, f[v]);
  }
  int r_lo = static_cast<int>(std::floor(flo / 2.0)) - 1;
  int r_hi = static_cast<int>(std::ceil(fhi / 2.0)) + 1;
  std::map<int, double> alphas;
  for (int r = r_lo; r <= r_hi; ++r) {
    if (!crossing_interior(r)) continue;
    std::vector<char> in_cr(g.n(), 0);
    for (int v = 0; v < g.n(); ++v)
      if (f[v] <= 2.0 * r) in_cr[v] = 1;
    ScalarField u2(g.n());
    for (int v = 0; v < g.n(); ++v) u2[v] = u[v] * u[v];
    alphas[r] = boundary_form(g, in_cr, u2);
  }
  // The recursion only speaks about bands that live strictly inside the
  // window: D_r = f^-1((2r, 2r+2]) must be nonempty interior, and interior
  // vertices beyond C_{r+1} must exist (else alpha_{r+1} = 0 is truncation).
  auto band_usable = [&](int r) {
    bool has_band = false, beyond = false;
    for (int v = 0; v < g.n(); ++v) {
      if (f[v] > 2.0 * r && f[v] <= 2.0 * (r + 1)) {
        if (!g.is_interior(v)) return false;
        has_band = true;
      }
      if (f[v] > 2.0 * (r + 1) && g.is_interior(v)) beyond = true;
    }
    return has_band && beyond;
  };
  for (auto [r, alpha] : alphas) {
    RigidityRow row;
    row.r = r;
    row.alpha = alpha;
    auto next = alphas.find(r + 1);
    if (next != alphas.end() && alpha > 1e-9 && band_usable(r)) {
      row.growth = (next->second - alpha) / alpha;
      row.checked = true;
      if (row.growth < rep.required_factor - 1e-9) rep.holds = false;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

SignChangeReport sign_change_probe(const WeightedGraph& g, const SalamiPartition& p,
                                   const ScalarField& f, const ScalarField& u, double tol) {
  std::vector<char> in_x = membership_mask(g, p.X);
  double scale = 1.0;
  for (int v = 0; v < g.n(); ++v) scale = std::max(scale, std::abs(u[v]));
  if (std::abs(boundary_form(g, in_x, u)) > tol * scale * 10)
    fail(ErrorCode::NormalizationFailed, "<u, Delta 1_X> is not zero");

  SignChangeReport rep;
  double flo = f[0], fhi = f[0];
  for (int v = 0; v < g.n(); ++v) {
    flo = std::min(flo, f[v]);
    fhi = std::max(fhi, f[v]);
  }
  double best_lo = 0, best_hi = 0;
  int lo_band = 0, hi_band = 0;
  bool first = true;
  for (int r = static_cast<int>(std::floor(flo)); r <= static_cast<int>(std::ceil(fhi)) + 1; ++r) {
    double band_min = 0, band_max = 0;
    bool has = false, on_rim = false;
    for (int v = 0; v < g.n(); ++v) {
      if (f[v] <= r - 1 || f[v] > r) continue;
      if (g.is_boundary(v)) on_rim = true;
      if (!has) {
        band_min = band_max = u[v];
        has = true;
      } else {
        band_min = std::min(band_min, u[v]);
        band_max = std::max(band_max, u[v]);
      }
    }
    if (!has || on_rim) continue;
    if (first || band_min > best_lo) {
      best_lo = band_min;
      lo_band = r;
    }
    if (first || band_max < best_hi) {
      best_hi = band_max;
      hi_band = r;
    }
    first = false;
  }
  if (first) return rep;  // no usable bands
  rep.ok = best_lo <= best_hi + tol;
  rep.c = (best_lo + best_hi) / 2;
  rep.violating_band = rep.ok ? 0 : (lo_band != hi_band ? lo_band : hi_band);
  return rep;
}

}  // namespace salami
