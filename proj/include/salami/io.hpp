#pragma once

#include <string>

#include <json.hpp>

#include "salami/families.hpp"
#include "salami/graph.hpp"
#include "salami/lipschitz.hpp"
#include "salami/partition.hpp"

namespace salami {

/// Graph JSON: { "vertices": [{"id", "m", "boundary"}], "edges": [{"u","v","w","len"?}],
///   "metric": "combinatorial"|"edge-lengths", "geodesically_complete": bool }.
/// Numbers are emitted as JSON integers when integral and as exact "p/q"
/// strings otherwise; the reader also accepts plain JSON numbers.
nlohmann::json graph_to_json(const WeightedGraph& g);
WeightedGraph graph_from_json(const nlohmann::json& j);

nlohmann::json field_to_json(const WeightedGraph& g, const ScalarField& f);
PartialField field_from_json(const WeightedGraph& g, const nlohmann::json& j);

/// Partition JSON: { "K": [ids], "X"?: [ids], "Y"?: [ids] }.
SalamiPartition partition_from_json(const WeightedGraph& g, const nlohmann::json& j);

nlohmann::json fixtures_to_json(const FamilyFixtures& fx);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// 12 significant digits, '.' decimal separator, no locale surprises.
std::string format_number(double v);

/// FNV-1a 64-bit hex digest (deterministic input fingerprint for reports).
std::string digest_hex(const std::string& bytes);

Rat rat_from_json(const nlohmann::json& v);
nlohmann::json rat_to_json(const Rat& q);

/// Extension report: id,value,witness,reliable per vertex.
std::string extension_to_csv(const WeightedGraph& g, const Extension<double>& ext);

}  // namespace salami
