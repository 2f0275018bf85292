#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "salami/numeric.hpp"

namespace salami {

enum class MetricMode { Combinatorial, EdgeLengths };

struct VertexSpec {
  std::string id;
  Rat m = 1;
  bool boundary = false;
};

struct EdgeSpec {
  std::string u, v;
  Rat w = 1;
  std::optional<Rat> len;
};

struct GraphSpec {
  std::vector<VertexSpec> vertices;
  std::vector<EdgeSpec> edges;
  MetricMode metric = MetricMode::Combinatorial;
  bool geodesically_complete = false;
};

/// Total real-valued assignment on a window's vertices, indexed by vertex index.
using ScalarField = std::vector<double>;
using ExactField = std::vector<Rat>;

/// Possibly-partial field as it arrives from files; ops that require totality
/// on some set check the mask and raise MissingValue.
struct PartialField {
  std::vector<double> values;
  std::vector<char> defined;
};

/// Finite weighted graph window: vertex measure m > 0, symmetric edge weight
/// w >= 0, and a boundary flag marking the truncation rim of a window cut from
/// an infinite family (false everywhere for genuinely finite graphs).
///
/// Vertices are addressed by dense index; ids are opaque strings ordered
/// lexicographically, which fixes every iteration order in the library.
class WeightedGraph {
 public:
  struct Arc {
    int to;
    Rat w;
    std::optional<Rat> len;
  };

  int n() const { return static_cast<int>(ids_.size()); }
  const std::string& id(int v) const { return ids_[v]; }
  int vertex(const std::string& id) const;       // throws UnknownVertex
  int find_vertex(const std::string& id) const;  // -1 when absent

  const Rat& measure(int v) const { return measure_[v]; }
  bool is_boundary(int v) const { return boundary_[v] != 0; }
  bool is_interior(int v) const { return boundary_[v] == 0; }
  bool has_boundary() const { return has_boundary_; }

  const std::vector<Arc>& neighbors(int v) const { return adj_[v]; }
  bool adjacent(int u, int v) const;
  Rat weight(int u, int v) const;  // 0 when non-adjacent

  /// q(x,y) = w(x,y)/m(x); zero for non-adjacent pairs.
  Rat transition_rate(int x, int y) const { return weight(x, y) / measure_[x]; }

  /// Deg(x) = sum_y w(x,y)/m(x).
  const Rat& degree(int x) const { return degree_[x]; }
  double degree_d(int x) const { return degree_d_[x]; }

  const std::vector<std::pair<int, int>>& edge_list() const { return edges_; }

  bool connected() const { return connected_; }
  bool interior_connected() const { return interior_connected_; }
  bool geodesically_complete() const { return geodesically_complete_; }
  MetricMode default_metric_mode() const { return metric_mode_; }

  /// Tree test used by the closed-form curvature: connected with |E| = |V|-1.
  bool is_tree() const;

  std::vector<int> interior_vertices() const;
  std::vector<int> boundary_vertices() const;

  friend WeightedGraph build_graph(const GraphSpec& spec);

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, int> index_;
  std::vector<Rat> measure_;
  std::vector<char> boundary_;
  std::vector<std::vector<Arc>> adj_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<Rat> degree_;
  std::vector<double> degree_d_;
  bool connected_ = false;
  bool interior_connected_ = false;
  bool has_boundary_ = false;
  bool geodesically_complete_ = false;
  MetricMode metric_mode_ = MetricMode::Combinatorial;
};

/// Validates and builds a graph window from its description.
WeightedGraph build_graph(const GraphSpec& spec);

inline double arc_weight_d(const WeightedGraph::Arc& a) { return to_double(a.w); }

Rat laplacian_at_exact(const WeightedGraph& g, const ExactField& f, int x);
double laplacian_at(const WeightedGraph& g, const ScalarField& f, int x);

/// Checked variant for fields loaded from files: requires f defined on B1(x).
double laplacian_at_checked(const WeightedGraph& g, const PartialField& f, int x);

/// <f, g> = sum f(x) g(x) m(x) over the given support of f; the support must
/// avoid the truncation rim (SupportTouchesBoundary otherwise).
double inner_product(const WeightedGraph& g, const ScalarField& f, const ScalarField& h,
                     const std::vector<int>& support_of_f);

/// <Delta 1_A, u> = sum_{x in A, y not in A} w(x,y) (u(y) - u(x)).
double boundary_form(const WeightedGraph& g, const std::vector<char>& in_A, const ScalarField& u);
Rat boundary_form_exact(const WeightedGraph& g, const std::vector<char>& in_A, const ExactField& u);

std::vector<char> membership_mask(const WeightedGraph& g, const std::vector<int>& set);

}  // namespace salami
