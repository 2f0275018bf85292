#pragma once

#include <vector>

#include "salami/metric.hpp"

namespace salami {

/// Validated (X, Y, K) triple: disjoint cover, K nonempty and finite, no edge
/// between X and Y. On windows of infinite families the infinite-measure
/// requirement on X and Y is proxied by "reaches the truncation rim".
struct SalamiPartition {
  std::vector<int> K, X, Y;       // sorted by vertex index
  std::vector<std::uint8_t> side;  // per vertex: 0 = K, 1 = X, 2 = Y
  bool k_connected = false;
  bool x_reaches_rim = false;
  bool y_reaches_rim = false;
};

/// Builds and validates a partition. When X and Y are omitted they are
/// inferred as the two connected components of V \ K (an error if the count
/// differs from two).
SalamiPartition make_partition(const WeightedGraph& g, std::vector<int> K,
                               std::vector<int> X = {}, std::vector<int> Y = {});

struct EndsReport {
  int infinite_ends = 0;        // components with a rim vertex and real in-window depth
  int finite_components = 0;    // components with no rim vertex: certified finite
  int indeterminate_shells = 0;  // rim-hugging shards; they may merge outside the window
  std::vector<std::vector<int>> components;
  std::vector<char> component_infinite;
  std::vector<char> component_indeterminate;
  std::vector<Rat> component_measure;  // window measure per component
};

/// Counts ends at desk scale. A component of V \ K counts as infinite iff it
/// contains a rim vertex together with a vertex at hop distance >= 2 from the
/// rim; rim-only shells are truncation artifacts and are reported as
/// indeterminate instead. K must avoid the rim.
EndsReport count_ends(const WeightedGraph& g, const std::vector<int>& K);

/// Enlarges K to B_R(K) with R the max pairwise distance in K, yielding a
/// connected K while (X, Y) shrink accordingly.
SalamiPartition connect_partition(const WeightedGraph& g, const Metric& metric,
                                  const SalamiPartition& p);

bool set_connected(const WeightedGraph& g, const std::vector<int>& set);

}  // namespace salami
