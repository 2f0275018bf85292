#include "salami/families.hpp"

#include <algorithm>
#include <cstdio>

namespace salami {

std::string family_vertex_id(long long n) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%c%04lld", n < 0 ? '-' : '+', n < 0 ? -n : n);
  return buf;
}

std::string family_vertex_id(long long x, long long y) {
  return family_vertex_id(x) + "," + family_vertex_id(y);
}

Rat eval_sequence(const std::string& pattern, long long n) {
  if (pattern == "abs") return Rat(n < 0 ? -n : n);
  if (pattern == "zero") return Rat(0);
  auto colon = pattern.find(':');
  if (colon == std::string::npos)
    fail(ErrorCode::BadSpec, "unknown sequence pattern '" + pattern + "'");
  std::string head = pattern.substr(0, colon), body = pattern.substr(colon + 1);
  if (head == "const") return rat_from_string(body);
  if (head == "alt") {
    auto comma = body.find(',');
    if (comma == std::string::npos) fail(ErrorCode::BadSpec, "alt pattern needs two values");
    bool even = ((n % 2) + 2) % 2 == 0;
    return rat_from_string(even ? body.substr(0, comma) : body.substr(comma + 1));
  }
  fail(ErrorCode::BadSpec, "unknown sequence pattern '" + pattern + "'");
}

namespace {

Rat pow2(long long e) {
  Rat r(1);
  for (long long i = 0; i < (e < 0 ? -e : e); ++i) r *= 2;
  return e < 0 ? Rat(1) / r : r;
}

Rat pow3(long long e) {
  Rat r(1);
  for (long long i = 0; i < (e < 0 ? -e : e); ++i) r *= 3;
  return e < 0 ? Rat(1) / r : r;
}

FamilyOutput gen_uniform_chain(const FamilySpec& fs) {
  GraphSpec gs;
  for (int i = -fs.radius; i <= fs.radius; ++i)
    gs.vertices.push_back({family_vertex_id(i), Rat(1), std::abs(i) == fs.radius});
  for (int i = -fs.radius; i < fs.radius; ++i)
    gs.edges.push_back({family_vertex_id(i), family_vertex_id(i + 1), Rat(1), {}});
  gs.geodesically_complete = true;

  FamilyOutput out{build_graph(gs), {}, fs};
  auto& fx = out.fixtures;
  fx.salami = true;
  fx.note = "uniform chain window";
  fx.eps_w = Rat(1);
  fx.bounded_geometry = true;
  fx.default_K = {family_vertex_id(0)};
  for (int i = -(fs.radius - 2); i < fs.radius - 2; ++i)
    fx.golden_kappa.push_back(
        {family_vertex_id(i), family_vertex_id(i + 1), GoldenKappa::Kind::Zero, Rat(0)});
  std::map<std::string, Rat> h0;
  for (int i = -fs.radius; i <= fs.radius; ++i) h0[family_vertex_id(i)] = Rat(i);
  fx.h0_field = std::move(h0);
  return out;
}

FamilyOutput gen_two_jump_line(const FamilySpec& fs) {
  GraphSpec gs;
  for (int i = -fs.radius; i <= fs.radius; ++i)
    gs.vertices.push_back({family_vertex_id(i), Rat(1), std::abs(i) >= fs.radius - 1});
  for (int i = -fs.radius; i <= fs.radius; ++i)
    for (int step = 1; step <= 2; ++step)
      if (i + step <= fs.radius)
        gs.edges.push_back({family_vertex_id(i), family_vertex_id(i + step), Rat(1), {}});
  gs.geodesically_complete = true;

  FamilyOutput out{build_graph(gs), {}, fs};
  auto& fx = out.fixtures;
  fx.salami = true;
  fx.note = "line with unit and double jumps";
  fx.eps_w = Rat(1);
  fx.bounded_geometry = true;
  fx.default_K = {family_vertex_id(0), family_vertex_id(1)};
  fx.golden_kappa.push_back({family_vertex_id(0), family_vertex_id(1), GoldenKappa::Kind::Value, Rat(2)});
  fx.golden_kappa.push_back({family_vertex_id(0), family_vertex_id(2), GoldenKappa::Kind::Value, Rat(0)});
  for (int i = -(fs.radius - 4); i < fs.radius - 4; ++i) {
    fx.golden_kappa.push_back(
        {family_vertex_id(i), family_vertex_id(i + 1), GoldenKappa::Kind::NonNegative, Rat(0)});
    fx.golden_kappa.push_back(
        {family_vertex_id(i), family_vertex_id(i + 2), GoldenKappa::Kind::NonNegative, Rat(0)});
  }
  std::map<std::string, Rat> h0;
  for (int i = -fs.radius; i <= fs.radius; ++i) h0[family_vertex_id(i)] = Rat(i, 2);
  fx.h0_field = std::move(h0);
  return out;
}

FamilyOutput gen_glued_chains(const FamilySpec& fs) {
  if (fs.k < 2) fail(ErrorCode::BadSpec, "glued_chains needs k >= 2");
  GraphSpec gs;
  gs.vertices.push_back({"o", Rat(1), false});
  auto bid = [](int branch, int j) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "b%d:%04d", branch, j);
    return std::string(buf);
  };
  for (int b = 1; b <= fs.k; ++b) {
    bool uniform = b == 1;
    for (int j = 1; j <= fs.radius; ++j)
      gs.vertices.push_back({bid(b, j), uniform ? Rat(1) : pow3(-j), j == fs.radius});
    gs.edges.push_back({"o", bid(b, 1), uniform ? Rat(1) : Rat(1, 2), {}});
    for (int j = 1; j < fs.radius; ++j)
      gs.edges.push_back({bid(b, j), bid(b, j + 1), uniform ? Rat(1) : Rat(1, 2) * pow3(-j), {}});
  }
  gs.geodesically_complete = true;

  FamilyOutput out{build_graph(gs), {}, fs};
  auto& fx = out.fixtures;
  fx.salami = false;
  fx.note = "k chains glued at the root; only the uniform branch has infinite measure";
  fx.expected_ends = fs.k;
  fx.infinite_measure_ends = 1;
  fx.default_K = {"o"};
  std::vector<std::string> X, Y;
  for (int j = 1; j <= fs.radius; ++j) X.push_back(bid(1, j));
  for (int b = 2; b <= fs.k; ++b)
    for (int j = 1; j <= fs.radius; ++j) Y.push_back(bid(b, j));
  fx.explicit_X = std::move(X);
  fx.explicit_Y = std::move(Y);
  for (int b = 1; b <= fs.k; ++b) {
    fx.golden_kappa.push_back({"o", bid(b, 1), GoldenKappa::Kind::Zero, Rat(0)});
    for (int j = 1; j < fs.radius - 1; ++j)
      fx.golden_kappa.push_back({bid(b, j), bid(b, j + 1), GoldenKappa::Kind::Zero, Rat(0)});
  }
  return out;
}

FamilyOutput gen_folded_product(const FamilySpec& fs) {
  if (fs.copies != 1 && fs.copies != 2) fail(ErrorCode::BadSpec, "folded_product copies must be 1 or 2");
  const int r = fs.radius;
  auto m_x = [](long long n) { return n <= 0 ? Rat(1) : pow2(n - 1); };
  auto m_y = [](long long n) { return pow2(-n); };
  auto w_x = [](long long n) { return pow2(n); };      // weight of (n, n+1)
  auto w_y = [](long long n) { return pow2(-n); };

  auto fold_w = [&](long long x1, long long y1, long long x2, long long y2) -> Rat {
    long long s1 = x1 - y1, s2 = x2 - y2;
    if (s1 * s2 < 0) return Rat(0);
    long long a1 = std::min(x1, y1), b1 = std::max(x1, y1);
    long long a2 = std::min(x2, y2), b2 = std::max(x2, y2);
    if (a1 == a2 && b1 == b2) return Rat(0);
    if (std::llabs(a1 - a2) + std::llabs(b1 - b2) != 1) return Rat(0);
    if (b1 == b2) return w_x(std::min(a1, a2)) * m_y(b1);
    return w_y(std::min(b1, b2)) * m_x(a1);
  };

  GraphSpec gs;
  const bool glued = fs.copies == 2;
  auto vid = [&](int page, long long x, long long y) -> std::string {
    if (glued && x == 0 && y == 0) return "o";
    return (page == 0 ? "l:" : "r:") + family_vertex_id(x, y);
  };
  for (int page = 0; page < fs.copies; ++page)
    for (long long x = 0; x <= r; ++x)
      for (long long y = 0; x + y <= r; ++y) {
        if (glued && page == 1 && x == 0 && y == 0) continue;  // shared root
        Rat m = m_x(std::min(x, y)) * m_y(std::max(x, y));
        gs.vertices.push_back({vid(page, x, y), m, x + y == r});
      }
  for (int page = 0; page < fs.copies; ++page)
    for (long long x = 0; x <= r; ++x)
      for (long long y = 0; x + y <= r; ++y) {
        if (x + 1 + y <= r) {
          Rat w = fold_w(x, y, x + 1, y);
          if (w > 0) gs.edges.push_back({vid(page, x, y), vid(page, x + 1, y), w, {}});
        }
        if (x + y + 1 <= r) {
          Rat w = fold_w(x, y, x, y + 1);
          if (w > 0) gs.edges.push_back({vid(page, x, y), vid(page, x, y + 1), w, {}});
        }
      }
  gs.geodesically_complete = true;

  FamilyOutput out{build_graph(gs), {}, fs};
  auto& fx = out.fixtures;
  fx.salami = glued;
  fx.note = glued ? "two folded quadrant products glued at the origin"
                  : "a single folded quadrant product";
  fx.expected_ends = glued ? 2 : 1;
  fx.infinite_measure_ends = glued ? 2 : 1;
  fx.default_K = {glued ? "o" : "l:" + family_vertex_id(0, 0)};
  if (!glued) {
    fx.golden_kappa.push_back({"l:" + family_vertex_id(0, 0), "l:" + family_vertex_id(0, 1),
                               GoldenKappa::Kind::Value, Rat(2)});
  }
  for (int page = 0; page < fs.copies; ++page)
    for (long long x = 0; x + 2 <= r - 2; ++x)
      for (long long y = 0; x + y + 2 <= r - 2; ++y) {
        if (fold_w(x, y, x + 1, y) > 0 && !(x == 0 && y == 0))
          fx.golden_kappa.push_back(
              {vid(page, x, y), vid(page, x + 1, y), GoldenKappa::Kind::NonNegative, Rat(0)});
        if (fold_w(x, y, x, y + 1) > 0 && !(x == 0 && y == 0))
          fx.golden_kappa.push_back(
              {vid(page, x, y), vid(page, x, y + 1), GoldenKappa::Kind::NonNegative, Rat(0)});
      }
  if (glued) {
    std::map<std::string, Rat> h0;
    for (int page = 0; page < 2; ++page)
      for (long long x = 0; x <= r; ++x)
        for (long long y = 0; x + y <= r; ++y)
          h0[vid(page, x, y)] = page == 0 ? Rat(x + y) : Rat(-(x + y));
    fx.h0_field = std::move(h0);
  }
  return out;
}

FamilyOutput gen_diagonal_strip(const FamilySpec& fs) {
  const int r = fs.radius;
  GraphSpec gs;
  auto in_v = [&](long long x, long long y) {
    return std::llabs(x - y) <= 1 && std::llabs(x) <= r && std::llabs(y) <= r;
  };
  for (long long x = -r; x <= r; ++x)
    for (long long y = x - 1; y <= x + 1; ++y) {
      if (!in_v(x, y)) continue;
      gs.vertices.push_back({family_vertex_id(x, y), Rat(1),
                             std::llabs(x) == r || std::llabs(y) == r});
      if (in_v(x + 1, y))
        gs.edges.push_back({family_vertex_id(x, y), family_vertex_id(x + 1, y), Rat(1), {}});
      if (in_v(x, y + 1))
        gs.edges.push_back({family_vertex_id(x, y), family_vertex_id(x, y + 1), Rat(1), {}});
    }
  for (long long n = -r; n < r; ++n) {
    if (!in_v(n, n + 1) || !in_v(n + 1, n)) continue;
    Rat w = eval_sequence(fs.w_seq, n);
    if (w < 0) fail(ErrorCode::BadSpec, "negative chord weight");
    if (w > 0)
      gs.edges.push_back({family_vertex_id(n, n + 1), family_vertex_id(n + 1, n), w, {}});
  }
  gs.geodesically_complete = true;

  FamilyOutput out{build_graph(gs), {}, fs};
  if (!out.graph.connected()) fail(ErrorCode::DisconnectedGraph, "strip window is disconnected");
  auto& fx = out.fixtures;
  fx.salami = true;
  fx.note = "diagonal strip with chord weights " + fs.w_seq;
  {
    Rat lo(1);
    for (auto [u, v] : out.graph.edge_list()) lo = std::min(lo, out.graph.weight(u, v));
    fx.eps_w = lo;
  }
  fx.bounded_geometry = fs.w_seq != "abs";
  fx.default_K = {family_vertex_id(0, 0), family_vertex_id(0, 1), family_vertex_id(1, 0)};
  for (long long n = -(r - 2); n + 1 <= r - 2; ++n) {
    fx.golden_kappa.push_back({family_vertex_id(n, n), family_vertex_id(n + 1, n),
                               GoldenKappa::Kind::NonNegative, Rat(0)});
    fx.golden_kappa.push_back({family_vertex_id(n, n), family_vertex_id(n, n + 1),
                               GoldenKappa::Kind::NonNegative, Rat(0)});
  }
  std::map<std::string, Rat> h0;
  for (const auto& vs : gs.vertices) {
    auto comma = vs.id.find(',');
    long long x = std::stoll(vs.id.substr(0, comma)), y = std::stoll(vs.id.substr(comma + 1));
    h0[vs.id] = Rat(x + y);
  }
  fx.h0_field = std::move(h0);
  return out;
}

FamilyOutput gen_birth_death(const FamilySpec& fs) {
  const int r = fs.radius;
  const bool reciprocal = fs.metric == "reciprocal";
  if (!reciprocal && fs.metric != "d0")
    fail(ErrorCode::BadSpec, "metric must be d0 or reciprocal");
  GraphSpec gs;
  gs.metric = reciprocal ? MetricMode::EdgeLengths : MetricMode::Combinatorial;
  for (int i = -r; i <= r; ++i) {
    Rat m = eval_sequence(fs.m_seq, i);
    if (m <= 0) fail(ErrorCode::BadSpec, "measures must be positive");
    gs.vertices.push_back({family_vertex_id(i), m, std::abs(i) == r});
  }
  for (int i = -r; i < r; ++i) {
    Rat w = eval_sequence(fs.w_seq, i);
    if (w <= 0) fail(ErrorCode::BadSpec, "birth-death weights must be positive");
    std::optional<Rat> len;
    if (reciprocal) len = Rat(1) / w;
    gs.edges.push_back({family_vertex_id(i), family_vertex_id(i + 1), w, len});
  }
  gs.geodesically_complete = true;

  FamilyOutput out{build_graph(gs), {}, fs};
  auto& fx = out.fixtures;
  fx.salami = reciprocal;
  fx.note = reciprocal ? "birth-death chain with reciprocal edge lengths"
                       : "birth-death chain with the hop metric";
  {
    Rat lo = eval_sequence(fs.w_seq, 0);
    for (int i = -r; i < r; ++i) lo = std::min(lo, eval_sequence(fs.w_seq, i));
    fx.eps_w = lo;
  }
  fx.bounded_geometry = !reciprocal;
  fx.default_K = {family_vertex_id(0)};
  if (reciprocal) {
    for (int i = -(r - 2); i < r - 2; ++i)
      fx.golden_kappa.push_back(
          {family_vertex_id(i), family_vertex_id(i + 1), GoldenKappa::Kind::NonNegative, Rat(0)});
    std::map<std::string, Rat> h0;
    Rat acc(0);
    h0[family_vertex_id(0)] = Rat(0);
    for (int i = 0; i < r; ++i) {
      acc += Rat(1) / eval_sequence(fs.w_seq, i);
      h0[family_vertex_id(i + 1)] = acc;
    }
    acc = 0;
    for (int i = 0; i > -r; --i) {
      acc -= Rat(1) / eval_sequence(fs.w_seq, i - 1);
      h0[family_vertex_id(i - 1)] = acc;
    }
    fx.h0_field = std::move(h0);
  }
  return out;
}

}  // namespace

FamilyOutput generate_family(const FamilySpec& spec) {
  FamilySpec fs = spec;
  if (fs.radius == 0)
    fs.radius = (fs.family == "folded_product" || fs.family == "diagonal_strip") ? 10 : 12;
  if (fs.radius < 3) fail(ErrorCode::RadiusTooSmall, "window radius must be at least 3");
  if (fs.family == "uniform_chain") return gen_uniform_chain(fs);
  if (fs.family == "two_jump_line") return gen_two_jump_line(fs);
  if (fs.family == "glued_chains") return gen_glued_chains(fs);
  if (fs.family == "folded_product") return gen_folded_product(fs);
  if (fs.family == "diagonal_strip") return gen_diagonal_strip(fs);
  if (fs.family == "birth_death") return gen_birth_death(fs);
  fail(ErrorCode::BadSpec, "unknown family '" + fs.family + "'");
}

}  // namespace salami
