#include "salami/io.hpp"


#include <cstdio>
#include <limits>
#include <fstream>
#include <sstream>

namespace salami {

using nlohmann::json;

Rat rat_from_json(const json& v) {
  if (v.is_string()) return rat_from_string(v.get<std::string>());
  if (v.is_number_integer()) return Rat(v.get<long long>());
  if (v.is_number_unsigned()) return Rat(static_cast<long long>(v.get<unsigned long long>()));
  if (v.is_number_float()) return rat_from_double(v.get<double>());
  fail(ErrorCode::ParseError, "expected a number or \"p/q\" string, got " + v.dump());
}

json rat_to_json(const Rat& q) {
  if (denominator(q) == 1 && rat_abs(q) <= Rat(std::numeric_limits<long long>::max()))
    return json(numerator(q).convert_to<long long>());
  return json(rat_to_string(q));
}

json graph_to_json(const WeightedGraph& g) {
  json jv = json::array();
  for (int v = 0; v < g.n(); ++v) {
    json row;
    row["id"] = g.id(v);
    row["m"] = rat_to_json(g.measure(v));
    row["boundary"] = g.is_boundary(v);
    jv.push_back(std::move(row));
  }
  json je = json::array();
  for (auto [u, v] : g.edge_list()) {
    json row;
    row["u"] = g.id(u);
    row["v"] = g.id(v);
    row["w"] = rat_to_json(g.weight(u, v));
    for (const auto& a : g.neighbors(u))
      if (a.to == v && a.len) row["len"] = rat_to_json(*a.len);
    je.push_back(std::move(row));
  }
  json out;
  out["vertices"] = std::move(jv);
  out["edges"] = std::move(je);
  out["metric"] = g.default_metric_mode() == MetricMode::Combinatorial ? "combinatorial" : "edge-lengths";
  out["geodesically_complete"] = g.geodesically_complete();
  return out;
}

WeightedGraph graph_from_json(const json& j) {
  GraphSpec spec;
  try {
    if (!j.contains("vertices") || !j.contains("edges"))
      fail(ErrorCode::ParseError, "graph JSON needs 'vertices' and 'edges'");
    for (const auto& row : j.at("vertices")) {
      VertexSpec vs;
      vs.id = row.at("id").get<std::string>();
      vs.m = row.contains("m") ? rat_from_json(row.at("m")) : Rat(1);
      vs.boundary = row.value("boundary", false);
      spec.vertices.push_back(std::move(vs));
    }
    for (const auto& row : j.at("edges")) {
      EdgeSpec es;
      es.u = row.at("u").get<std::string>();
      es.v = row.at("v").get<std::string>();
      es.w = row.contains("w") ? rat_from_json(row.at("w")) : Rat(1);
      if (row.contains("len")) es.len = rat_from_json(row.at("len"));
      spec.edges.push_back(std::move(es));
    }
    std::string metric = j.value("metric", "combinatorial");
    if (metric == "combinatorial")
      spec.metric = MetricMode::Combinatorial;
    else if (metric == "edge-lengths")
      spec.metric = MetricMode::EdgeLengths;
    else
      fail(ErrorCode::ParseError, "metric must be 'combinatorial' or 'edge-lengths'");
    spec.geodesically_complete = j.value("geodesically_complete", false);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("bad graph JSON: ") + e.what());
  }
  return build_graph(spec);
}

json field_to_json(const WeightedGraph& g, const ScalarField& f) {
  json values;
  for (int v = 0; v < g.n(); ++v) values[g.id(v)] = f[v];
  json out;
  out["values"] = std::move(values);
  return out;
}

PartialField field_from_json(const WeightedGraph& g, const json& j) {
  PartialField f;
  f.values.assign(g.n(), 0.0);
  f.defined.assign(g.n(), 0);
  try {
    for (const auto& [id, value] : j.at("values").items()) {
      int v = g.vertex(id);
      f.values[v] = value.is_string() ? to_double(rat_from_string(value.get<std::string>()))
                                      : value.get<double>();
      f.defined[v] = 1;
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("bad field JSON: ") + e.what());
  }
  return f;
}

SalamiPartition partition_from_json(const WeightedGraph& g, const json& j) {
  auto ids_to_indices = [&](const json& arr) {
    std::vector<int> out;
    for (const auto& id : arr) out.push_back(g.vertex(id.get<std::string>()));
    return out;
  };
  try {
    std::vector<int> K = ids_to_indices(j.at("K"));
    std::vector<int> X, Y;
    if (j.contains("X")) X = ids_to_indices(j.at("X"));
    if (j.contains("Y")) Y = ids_to_indices(j.at("Y"));
    return make_partition(g, std::move(K), std::move(X), std::move(Y));
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("bad partition JSON: ") + e.what());
  }
}

json fixtures_to_json(const FamilyFixtures& fx) {
  json out;
  out["salami"] = fx.salami;
  out["note"] = fx.note;
  out["expected_ends"] = fx.expected_ends;
  out["infinite_measure_ends"] = fx.infinite_measure_ends;
  out["eps_w"] = fx.eps_w ? json(rat_to_string(*fx.eps_w)) : json(nullptr);
  out["bounded_geometry"] = fx.bounded_geometry;
  json golden = json::array();
  for (const auto& gk : fx.golden_kappa) {
    json row;
    row["x"] = gk.x;
    row["y"] = gk.y;
    switch (gk.kind) {
      case GoldenKappa::Kind::Zero:
        row["kappa"] = "0";
        break;
      case GoldenKappa::Kind::Value:
        row["kappa"] = rat_to_string(gk.value);
        break;
      case GoldenKappa::Kind::NonNegative:
        row["kappa"] = ">=0";
        break;
    }
    golden.push_back(std::move(row));
  }
  out["golden_kappa"] = std::move(golden);
  if (fx.h0_field) {
    json h0;
    for (const auto& [id, val] : *fx.h0_field) h0[id] = rat_to_string(val);
    out["h0_field"] = std::move(h0);
  } else {
    out["h0_field"] = nullptr;
  }
  out["partition"] = json::object();
  out["partition"]["K"] = fx.default_K;
  if (fx.explicit_X) out["partition"]["X"] = *fx.explicit_X;
  if (fx.explicit_Y) out["partition"]["Y"] = *fx.explicit_Y;
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  out << content;
  if (!out) fail(ErrorCode::IoError, "short write to '" + path + "'");
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string extension_to_csv(const WeightedGraph& g, const Extension<double>& ext) {
  std::ostringstream ss;
  ss << "id,value,witness,reliable\n";
  for (int v = 0; v < g.n(); ++v) {
    ss << g.id(v) << "," << format_number(ext.field[v]) << ","
       << (ext.witness[v] >= 0 ? g.id(ext.witness[v]) : "") << ","
       << (ext.reliable[v] ? "true" : "false") << "\n";
  }
  return ss.str();
}

std::string digest_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace salami
