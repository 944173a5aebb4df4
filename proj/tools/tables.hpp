#pragma once

// Published reference values for the two binding-energy tables and the
// computation of the matching entries.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fewbody::cli {

/// How a computed entry is judged against its reference.
enum class Rule {
  kAbsolute,    ///< |computed - reference| <= tolerance
  kUpperBound,  ///< computed <= reference + tolerance and computed >= floor
  kEcho,        ///< not judged; `computed` may carry an informational value
};

struct Cell {
  std::string column;
  std::optional<double> reference;
  std::optional<double> computed;
  Rule rule = Rule::kEcho;
  double tolerance = 0.0;
  std::optional<double> floor;  ///< variational lower bound for kUpperBound
  std::function<double(std::uint64_t seed)> evaluate;  ///< empty for reference-only cells

  bool checked() const { return rule != Rule::kEcho; }
  bool passed() const;
};

struct Row {
  std::string label;
  std::vector<Cell> cells;
};

/// Rows of table 1 (central charge series) or 2 (basis-size series) whose
/// label matches `filter` (substring or glob; all when empty). Reference
/// values are filled in but nothing is computed yet.
std::vector<Row> table_rows(int table, const std::string& filter = "");

/// Fills `computed` for every cell that has an evaluator, in parallel.
void compute_rows(std::vector<Row>& rows, std::uint64_t seed = 1);

bool label_matches(const std::string& label, const std::string& filter);

}  // namespace fewbody::cli
