#pragma once

#include <optional>

#include "salami/lipschitz.hpp"

namespace salami {

struct SynthesisOptions {
  double epsilon = 0;  // 0: use 0.9 / max pair degree sum over B1(K)
  double tol = 1e-9;
  int max_iter = 500;
  bool refine = true;  // attempt exact rational certification on convergence
};

/// Output of the variational iteration f <- S((f + eps*Delta f)|K): a field in
/// the extension image whose Laplacian is constant on K up to `residual`.
struct SynthesisResult {
  ScalarField field;                      // normalized: f(x0) = 0, x0 = least K vertex
  std::optional<ExactField> exact_field;  // set when rational refinement verified Delta f = 0
  std::vector<double> lap_on_K;
  double c = 0;         // mean of Delta f over K
  double residual = 0;  // spread of Delta f over K
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;
  std::vector<double> max_history;  // max_K Delta f per iteration
  double epsilon = 0;
  bool reliable = true;
};

SynthesisResult synthesize(const WeightedGraph& g, const Metric& metric, const SalamiPartition& p,
                           const SynthesisOptions& opts = {});

struct HarmonicVerdict {
  bool ok = true;
  int worst_vertex = -1;
  double worst_value = 0;
};

/// max |Delta f| over interior vertices against tol.
HarmonicVerdict verify_harmonic_everywhere(const WeightedGraph& g, const ScalarField& f,
                                           double tol = 1e-9);

enum class UniquenessVerdict { SameUpToConstant, MirrorUpToConstant, Distinct };

/// Compares two gradient-sharp harmonic fields: f - g or f + g constant.
/// NotInH0 when either field fails the certificate (Delta = 0, grad+ = grad- = 1).
UniquenessVerdict h_uniqueness_check(const WeightedGraph& g, const Metric& metric,
                                     const ScalarField& f, const ScalarField& h, double tol = 1e-9);

/// Delta f == 0 and both one-sided gradients == 1 on every interior vertex.
bool h0_certificate(const WeightedGraph& g, const Metric& metric, const ScalarField& f,
                    double tol = 1e-9);

struct LevelSetReport {
  double a = 0, b = 0;  // band [a, b)
  std::vector<int> members;
  bool connected = false;
  int size = 0;
  double size_bound = 0;  // filled when a bound has been computed
};

/// Exact member set of f^-1([a,b)) with BFS connectivity inside the band.
/// Bands reaching the rim are refused (their true extent is unknowable).
LevelSetReport level_sets(const WeightedGraph& g, const ScalarField& f, double a, double b);

/// s0 / eps_w with s0 the zero-crossing flux of f; every width-1 band inside
/// the window must respect it. All edge weights must be >= eps_w.
double level_set_size_bound(const WeightedGraph& g, const ScalarField& f, double eps_w);

struct QuasiIsometryReport {
  double C = 0;
  bool holds = true;
  int worst_u = -1, worst_v = -1;
  double worst_excess = 0;
  bool exhaustive = true;
};

/// |f(x) - f(y)| <= d(x,y) <= |f(x) - f(y)| + C with C = 2 s0 / eps_w,
/// verified over certified pairs (exhaustive up to 2000 vertices).
QuasiIsometryReport quasi_isometry_check(const WeightedGraph& g, const Metric& metric,
                                         const ScalarField& f, double eps_w);

/// -<g, Delta g> / R^2 for the tent g = (R - |f|)+ (f shifted to vanish
/// somewhere). The tent's support must stay off the rim.
double recurrence_quotient(const WeightedGraph& g, const ScalarField& f, double R);

struct RecurrenceRow {
  double R = 0;
  double quotient = 0;
  bool reliable = true;
};
std::vector<RecurrenceRow> recurrence_series(const WeightedGraph& g, const ScalarField& f, int R_max);

struct PowerFit {
  double log_c = 0;
  double exponent = 0;
};
/// Least-squares fit log y = log_c + exponent * log x.
PowerFit fit_power(const std::vector<double>& xs, const std::vector<double>& ys);

double dim_bound(const WeightedGraph& g, const ScalarField& f, double eps_w);

struct EdgeWeightBound {
  double bound = 0;
  double eps_gap = 0;
  bool all_within = true;
  int worst_u = -1, worst_v = -1;
};

/// w(x,y) <= <Delta 1_X, f> / eps_gap on every f-nonconstant edge.
EdgeWeightBound edge_weight_upper_bound(const WeightedGraph& g, const SalamiPartition& p,
                                        const ScalarField& f);

struct DirichletResult {
  ScalarField field;
  std::vector<char> solved;  // interior + boundary of the solve
};

/// Exact linear solve of Delta u = 0 on `interior` with the given boundary
/// values on B1(interior) \ interior.
DirichletResult solve_dirichlet(const WeightedGraph& g, const std::vector<int>& interior,
                                const std::vector<std::pair<int, double>>& boundary_values);

struct AnalysisRatios {
  double doubling = 0;
  double poincare = 0;
  double harnack = 0;
  double chengyau = 0;
  bool reliable = true;
};

/// The four dimensionless ratios at (x, R): ball doubling, Poincare constant
/// over sampled fields, Harnack sup/inf and Cheng-Yau |grad u| R / u for
/// positive Dirichlet harmonics with seeded random data.
AnalysisRatios analysis_ratios(const WeightedGraph& g, const Metric& metric, int x, int R,
                               std::uint64_t seed = 0, int samples = 20);

struct RigidityRow {
  int r = 0;
  double alpha = 0;
  double growth = 0;  // (alpha_{r+1} - alpha_r) / alpha_r where defined
  bool checked = false;
};

struct RigidityReport {
  std::vector<RigidityRow> rows;
  double required_factor = 0;  // eps / (C c^4)
  bool holds = true;
  double beta = 0;  // multiple of f removed by the normalization
};

/// Growth recursion for the boundary energy alpha_r = <Delta 1_{C_r}, u^2>,
/// C_r = f^-1((-inf, 2r]), after normalizing <u, Delta 1_X> = 0. Bands and
/// gradients are taken in hop units.
RigidityReport subexp_rigidity_probe(const WeightedGraph& g, const SalamiPartition& p,
                                     const ScalarField& f, ScalarField u);

struct SignChangeReport {
  bool ok = false;
  double c = 0;
  int violating_band = 0;  // meaningful when !ok
};

/// A single level c with max_{A_r} u >= c >= min_{A_r} u across the bands
/// A_r = f^-1((r-1, r]); requires <u, Delta 1_X> = 0.
SignChangeReport sign_change_probe(const WeightedGraph& g, const SalamiPartition& p,
                                   const ScalarField& f, const ScalarField& u, double tol = 1e-9);

}  // namespace salami
