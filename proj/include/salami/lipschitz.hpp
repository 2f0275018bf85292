#pragma once

#include "salami/metric.hpp"
#include "salami/partition.hpp"

namespace salami {

struct LipschitzVerdict {
  bool ok = true;
  int u = -1, v = -1;   // first violating pair when !ok
  double excess = 0;    // f(v) - f(u) - d(u,v) at the violation
  bool exhaustive = true;  // false when only edges + samples were checked
};

/// Checks f(v) - f(u) <= d(u,v) over `subset` (whole window when empty).
/// All pairs are checked while the pair count stays modest; beyond that,
/// edges plus a deterministic sample, reported via `exhaustive`.
LipschitzVerdict is_lipschitz(const WeightedGraph& g, const Metric& metric, const ScalarField& f,
                              const std::vector<int>& subset, double tol = 1e-9);

/// Extremal Lipschitz extension of f|K: the value on K, the lower envelope
/// max_w f(w) - d(v,w) on X, the upper envelope min_w f(w) + d(v,w) on Y.
template <class T>
struct Extension {
  std::vector<T> field;       // total on the window
  std::vector<int> witness;   // K vertex attaining the envelope; -1 on K
  std::vector<char> reliable; // per vertex: every distance to K is certified
  bool all_reliable = true;
};

Extension<double> extend(const WeightedGraph& g, const Metric& metric, const SalamiPartition& p,
                         const std::vector<double>& f_on_K);
Extension<Rat> extend_exact(const WeightedGraph& g, const Metric& metric, const SalamiPartition& p,
                            const std::vector<Rat>& f_on_K);

template <class T>
struct Gradients {
  T up{};    // max (f(y)-f(x))/d(x,y) over neighbors, unclamped
  T down{};  // max (f(x)-f(y))/d(x,y)
  T abs{};   // max |f(y)-f(x)|/d(x,y)
};

Gradients<double> gradients(const WeightedGraph& g, const Metric& metric, const ScalarField& f, int x);
Gradients<Rat> gradients_exact(const WeightedGraph& g, const Metric& metric, const ExactField& f, int x);

struct InFVerdict {
  bool member = false;
  bool window_approximate = true;  // at-infinity conditions replaced by window proxies
  int first_mismatch = -1;
  bool x_decay_proxy = false;  // f drops below min_K f - radius/2 somewhere on X
  bool y_growth_proxy = false;
};

/// Is f the extremal extension of its own K-values (up to tol, on the
/// reliable region), with the window stand-ins for the decay conditions?
InFVerdict in_F(const WeightedGraph& g, const Metric& metric, const SalamiPartition& p,
                const ScalarField& f, double tol = 1e-9);

struct MonotonicityVerdict {
  bool holds = true;
  int worst_vertex = -1;
  double worst_gap = 0;  // max of Sf - Sg (positive means violation)
};

/// Sf <= Sg whenever f <= g on K; HypothesisFails if the premise is violated.
MonotonicityVerdict monotonicity_check(const WeightedGraph& g, const Metric& metric,
                                       const SalamiPartition& p, const std::vector<double>& f_on_K,
                                       const std::vector<double>& g_on_K);

}  // namespace salami
