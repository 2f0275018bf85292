#pragma once

#include <map>
#include <optional>
#include <string>

#include "salami/graph.hpp"

namespace salami {

/// Parameter block for the window generators.
struct FamilySpec {
  std::string family;  // uniform_chain | glued_chains | folded_product |
                       // diagonal_strip | two_jump_line | birth_death
  int radius = 0;  // 0: family default (12 for chain windows, 10 for planar ones)
  int k = 3;                     // glued_chains: number of branches
  int copies = 2;                // folded_product: 1 = a single unglued copy
  std::string w_seq = "const:1";  // birth_death weights / diagonal_strip chords
  std::string m_seq = "const:1";  // birth_death measures
  std::string metric = "d0";      // d0 | reciprocal (birth_death only)
};

struct GoldenKappa {
  enum class Kind { Zero, Value, NonNegative };
  std::string x, y;
  Kind kind = Kind::Zero;
  Rat value;
};

struct FamilyFixtures {
  bool salami = false;  // certified by the construction
  std::string note;
  std::vector<GoldenKappa> golden_kappa;
  std::optional<std::map<std::string, Rat>> h0_field;  // a known gradient-sharp harmonic
  std::vector<std::string> default_K;
  std::optional<std::vector<std::string>> explicit_X, explicit_Y;
  int expected_ends = 2;
  int infinite_measure_ends = 2;
  std::optional<Rat> eps_w;       // global edge-weight lower bound, when one exists
  bool bounded_geometry = false;  // m, w, Deg uniformly bounded along the family
};

struct FamilyOutput {
  WeightedGraph graph;
  FamilyFixtures fixtures;
  FamilySpec spec;
};

/// Deterministic: the same spec yields byte-identical serialized output.
FamilyOutput generate_family(const FamilySpec& spec);

/// Signed zero-padded id, lexicographic order == numeric order within a sign.
std::string family_vertex_id(long long n);
std::string family_vertex_id(long long x, long long y);

/// Sequence patterns: "const:<r>", "alt:<a>,<b>", "abs", "zero".
Rat eval_sequence(const std::string& pattern, long long n);

}  // namespace salami
