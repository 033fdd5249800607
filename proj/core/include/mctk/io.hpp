#pragma once
// Input/output: chain description files, result documents, and their three
// renderings (human table, CSV, JSON). JSON output round-trips through
// parse_result_json byte-for-byte, which the tests rely on.

#include <string>
#include <utility>
#include <vector>

#include "mctk/chain.hpp"
#include "mctk/report.hpp"

namespace mctk {

// Error in a chain description file; the message carries
// "path:line:column: ..." when the position is known.
class ChainFileError : public ChainError {
 public:
  using ChainError::ChainError;
};

// Loads a chain from a JSON file with fields
//   states    (required) array of unique state names
//   kernel    n x n row-stochastic matrix            } exactly one
//   edges     array of [from, to, weight] by name    } of these two
//   metric    optional n x n distance matrix (defaults to graph distance)
//   laziness  optional holding probability in [0, 1)
// Unknown fields are rejected. Self-loops in `edges` are allowed and add
// holding mass.
FiniteChain load_chain_file(const std::string& path);

// Comma-separated doubles ("0.25, 0.5,0.25"); throws std::invalid_argument
// on malformed input.
std::vector<double> parse_number_list(const std::string& text);

// A titled numeric table (per-horizon grids, per-step divergences, ...).
struct TableData {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Everything a command run produces: the configuration that produced it,
// named scalar results, inequality checks, and numeric tables. Order is
// preserved in every rendering.
struct ResultDocument {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::pair<std::string, double>> scalars;
  std::vector<InequalityReport> checks;
  std::vector<TableData> tables;
};

enum class OutputFormat { table, csv, json };

// "table" | "csv" | "json"; throws std::invalid_argument otherwise.
OutputFormat parse_format(const std::string& name);

// Shortest representation at 12 significant digits (printf %.12g), the
// precision every rendering uses for display numbers.
std::string format_double(double value);

// Renders the document. CSV puts config and scalars in '#' comment lines,
// then the checks under a fixed header, then each table after a
// "# table: <title>" marker. JSON is indented, key-ordered, and stable.
std::string render(const ResultDocument& document, OutputFormat format);

// Inverse of render(document, OutputFormat::json).
ResultDocument parse_result_json(const std::string& text);

}  // namespace mctk
