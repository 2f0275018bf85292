#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "salami/families.hpp"

namespace salami {

struct CheckRow {
  std::string id;      // stable catalog id, e.g. "lemma-3.3.1"
  std::string label;   // what behavior the check exercises
  std::string status;  // "pass" | "fail" | "skip"
  double measured = 0;
  double tolerance = 0;
  bool reliable = true;
  std::string note;
};

struct RunReport {
  std::string command;
  std::string inputs_digest;
  std::vector<CheckRow> rows;
  int exit_code = 0;  // 0: all reliable checks pass; 1: some reliable check failed
};

/// Catalog ids in their fixed execution order.
std::vector<std::string> verify_catalog();

/// Runs the selected suites against a generated family window. Suite tokens
/// are catalog-id prefixes ("lemma-3.3" selects all nine items) or the
/// aliases "all", "ends", "golden", "recurrence", "flat".
RunReport run_verify(const FamilyOutput& fam, const std::vector<std::string>& suites,
                     std::uint64_t seed);

std::string report_to_json(const RunReport& rep);
std::string report_to_text(const RunReport& rep);
std::string report_to_csv(const RunReport& rep);

}  // namespace salami
