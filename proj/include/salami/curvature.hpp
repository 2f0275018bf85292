#pragma once

#include <optional>
#include <tuple>

#include "salami/metric.hpp"

namespace salami {

/// Curvature of a pair, with the optimizer's certificate. `kappa` is exact
/// (rational solver); `reliable` is false when the window rim intrudes on the
/// neighborhoods or on any distance the optimization used.
struct CurvatureResult {
  Rat kappa;
  bool reliable = true;
  /// Dual witness: optimal 1-Lipschitz potential on B1(x) u B1(y), f(x)=0.
  std::vector<std::pair<int, Rat>> potential;
  /// Primal witness: optimal transport plan entries (from, to, mass).
  std::vector<std::tuple<int, int, Rat>> plan;
};

/// kappa(x,y) by the potential LP: minimize (Delta f(x) - Delta f(y)) / d(x,y)
/// over 1-Lipschitz f with f(y) - f(x) = d(x,y). The LP lives on
/// S = B1(x) u B1(y); any feasible potential on S extends 1-Lipschitz to the
/// whole graph by the inf-convolution envelope, so the restriction is lossless.
CurvatureResult curvature_dual(const WeightedGraph& g, const Metric& metric, int x, int y);

/// kappa(x,y) by the transport LP: maximize sum rho(a,b) (1 - d(a,b)/d(x,y))
/// over nonnegative plans with row marginals q(y,.) off y and column marginals
/// q(x,.) off x. Must agree exactly with curvature_dual.
CurvatureResult curvature_primal(const WeightedGraph& g, const Metric& metric, int x, int y);

/// Closed form on trees under the combinatorial distance:
/// 2(q(x,y) + q(y,x)) - Deg(x) - Deg(y).
Rat curvature_tree(const WeightedGraph& g, int x, int y);

/// Closed form on Z^2-embedded graphs whose combinatorial distance is the
/// l1 distance near the edge (checked on B2(x) u B2(y)); y must be a unit
/// step from x. Missing neighbors enter with rate zero.
Rat curvature_lattice(const WeightedGraph& g, const Metric& metric, int x, int y);

/// Parses ids of the form "x,y" or "prefix:x,y".
std::optional<std::pair<long long, long long>> lattice_coords(const std::string& id);

struct VertexCurvature {
  Rat kappa;
  bool reliable = true;
  int argmin_neighbor = -1;
};

/// kappa(x) = min over neighbors y of kappa(x,y); needs B2(x) inside the interior.
VertexCurvature vertex_curvature(const WeightedGraph& g, const Metric& metric, int x);

struct FlatnessReport {
  struct Row {
    int x, y;
    Rat kappa;
    bool reliable;
  };
  std::vector<Row> rows;  // one per edge incident to the region, x < y
  bool flat = true;       // every reliable vertex curvature in the region is zero
  bool all_reliable = true;
};

FlatnessReport flatness_report(const WeightedGraph& g, const Metric& metric,
                               const std::vector<int>& region);

/// One step of the discrete heat propagator H = id + eps*Delta, evaluated on
/// interior vertices (rim values pass through unchanged).
ScalarField heat_step(const WeightedGraph& g, const ScalarField& f, double eps);

struct ContractionCheck {
  bool holds = false;
  double lhs = 0;  // |Hf(y) - Hf(x)|
  double rhs = 0;  // d(x,y) (1 - eps kappa(x,y))
  Rat kappa;
  bool reliable = true;
};

/// Verifies |Hf(y) - Hf(x)| <= d(x,y)(1 - eps kappa(x,y)) for f in Lip(1)
/// and 0 < eps <= 1/(Deg(x) + Deg(y)).
ContractionCheck contraction_check(const WeightedGraph& g, const Metric& metric,
                                   const ScalarField& f, double eps, int x, int y);

struct MaxPrincipleReport {
  bool curvature_ok = true;     // kappa >= 0 on adjacent pairs inside the region
  bool monotonicity_ok = true;  // Delta u nondecreasing along u-increasing edges
  double max_inner = 0;
  double max_outer = 0;
  bool holds = false;
  bool reliable = true;
};

/// max_W |grad u| <= max_{S1(W)} |grad u| under nonnegative curvature on W.
MaxPrincipleReport gradient_max_principle_check(const WeightedGraph& g, const Metric& metric,
                                                const ScalarField& u, const std::vector<int>& W);

/// Ball version: max over B_R(x) equals max over S_R(x) for u harmonic on B_{R-1}(x).
MaxPrincipleReport gradient_max_principle_ball(const WeightedGraph& g, const Metric& metric,
                                               const ScalarField& u, int x, const Rat& R);

}  // namespace salami
