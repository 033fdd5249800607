#include "mctk/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "mctk/matrix.hpp"

namespace mctk {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ChainFileError(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Translate a byte offset from nlohmann's parse_error into line:column.
std::pair<std::size_t, std::size_t> line_column(const std::string& text,
                                                std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

Matrix parse_matrix(const ordered_json& j, const std::string& path,
                    const char* field, std::size_t n) {
  if (!j.is_array() || j.size() != n)
    throw ChainFileError(path + ": '" + field + "' must be an array of " +
                         std::to_string(n) + " rows");
  Matrix m(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || row.size() != n)
      throw ChainFileError(path + ": '" + field + "' row " +
                           std::to_string(i) + " must hold " +
                           std::to_string(n) + " numbers");
    for (std::size_t k = 0; k < n; ++k) {
      if (!row[k].is_number())
        throw ChainFileError(path + ": '" + field + "' entry (" +
                             std::to_string(i) + ", " + std::to_string(k) +
                             ") is not a number");
      m(i, k) = row[k].get<double>();
    }
  }
  return m;
}

// Writes doubles into JSON so that output is byte-stable and non-finite
// values survive the trip (JSON itself has no inf/nan literals).
ordered_json json_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return std::strtod(buf, nullptr);
}

double number_from_json(const ordered_json& j, const char* where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw std::invalid_argument(std::string("result JSON: bad number in ") +
                              where);
}

std::string csv_quote(const std::string& text) {
  std::string out = "\"";
  for (const char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

ReportStatus status_from_string(const std::string& name) {
  if (name == "asserted_pass") return ReportStatus::asserted_pass;
  if (name == "asserted_fail") return ReportStatus::asserted_fail;
  if (name == "report_only") return ReportStatus::report_only;
  throw std::invalid_argument("result JSON: unknown status '" + name + "'");
}

std::string render_table_format(const ResultDocument& doc) {
  std::ostringstream out;
  if (!doc.config.empty()) {
    out << "== run ==\n";
    std::size_t width = 0;
    for (const auto& [k, v] : doc.config) width = std::max(width, k.size());
    for (const auto& [k, v] : doc.config)
      out << "  " << k << std::string(width - k.size(), ' ') << " = " << v
          << "\n";
  }
  if (!doc.scalars.empty()) {
    out << "== results ==\n";
    std::size_t width = 0;
    for (const auto& [k, v] : doc.scalars) width = std::max(width, k.size());
    for (const auto& [k, v] : doc.scalars)
      out << "  " << k << std::string(width - k.size(), ' ') << " = "
          << format_double(v) << "\n";
  }
  if (!doc.checks.empty()) {
    out << "== checks ==\n";
    for (const auto& check : doc.checks) {
      out << "  [" << to_string(check.status) << "] " << check.name
          << ": worst = " << format_double(check.worst_ratio)
          << ", bound = " << format_double(check.constant)
          << ", trials = " << check.trials << "\n";
      if (!check.notes.empty()) out << "      " << check.notes << "\n";
    }
  }
  for (const auto& table : doc.tables) {
    out << "== " << table.title << " ==\n";
    std::vector<std::size_t> widths(table.columns.size());
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : table.rows) {
      std::vector<std::string> line;
      for (const double v : row) line.push_back(format_double(v));
      cells.push_back(std::move(line));
    }
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      widths[c] = table.columns[c].size();
      for (const auto& line : cells)
        if (c < line.size()) widths[c] = std::max(widths[c], line[c].size());
    }
    out << " ";
    for (std::size_t c = 0; c < table.columns.size(); ++c)
      out << " " << std::string(widths[c] - table.columns[c].size(), ' ')
          << table.columns[c];
    out << "\n";
    for (const auto& line : cells) {
      out << " ";
      for (std::size_t c = 0; c < line.size(); ++c)
        out << " " << std::string(widths[c] - line[c].size(), ' ') << line[c];
      out << "\n";
    }
  }
  return out.str();
}

std::string render_csv(const ResultDocument& doc) {
  std::ostringstream out;
  for (const auto& [k, v] : doc.config) out << "# " << k << "=" << v << "\n";
  for (const auto& [k, v] : doc.scalars)
    out << "# scalar " << k << "=" << format_double(v) << "\n";
  if (!doc.checks.empty()) {
    out << "name,constant,worst_ratio,trials,status,witness,notes\n";
    for (const auto& check : doc.checks)
      out << csv_quote(check.name) << "," << format_double(check.constant)
          << "," << format_double(check.worst_ratio) << "," << check.trials
          << "," << to_string(check.status) << "," << csv_quote(check.witness)
          << "," << csv_quote(check.notes) << "\n";
  }
  for (const auto& table : doc.tables) {
    out << "# table: " << table.title << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c)
      out << (c ? "," : "") << csv_quote(table.columns[c]);
    out << "\n";
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c)
        out << (c ? "," : "") << format_double(row[c]);
      out << "\n";
    }
  }
  return out.str();
}

std::string render_json(const ResultDocument& doc) {
  ordered_json j;
  j["config"] = ordered_json::object();
  for (const auto& [k, v] : doc.config) j["config"][k] = v;
  j["scalars"] = ordered_json::object();
  for (const auto& [k, v] : doc.scalars) j["scalars"][k] = json_number(v);
  j["checks"] = ordered_json::array();
  for (const auto& check : doc.checks) {
    ordered_json c;
    c["name"] = check.name;
    c["constant"] = json_number(check.constant);
    c["worst_ratio"] = json_number(check.worst_ratio);
    c["witness"] = check.witness;
    c["trials"] = check.trials;
    c["status"] = to_string(check.status);
    c["notes"] = check.notes;
    j["checks"].push_back(std::move(c));
  }
  j["tables"] = ordered_json::array();
  for (const auto& table : doc.tables) {
    ordered_json t;
    t["title"] = table.title;
    t["columns"] = table.columns;
    t["rows"] = ordered_json::array();
    for (const auto& row : table.rows) {
      ordered_json r = ordered_json::array();
      for (const double v : row) r.push_back(json_number(v));
      t["rows"].push_back(std::move(r));
    }
    j["tables"].push_back(std::move(t));
  }
  return j.dump(2) + "\n";
}

}  // namespace

FiniteChain load_chain_file(const std::string& path) {
  const std::string text = read_file(path);
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    std::string msg = e.what();
    // Strip nlohmann's bracketed prefix; the location is clearer our way.
    const auto pos = msg.find("] ");
    if (pos != std::string::npos) msg = msg.substr(pos + 2);
    throw ChainFileError(path + ":" + std::to_string(line) + ":" +
                         std::to_string(column) + ": " + msg);
  }
  if (!j.is_object())
    throw ChainFileError(path + ": top level must be a JSON object");

  static const char* kKnown[] = {"states", "kernel", "edges", "metric",
                                 "laziness"};
  for (const auto& item : j.items()) {
    if (std::find_if(std::begin(kKnown), std::end(kKnown),
                     [&](const char* k) { return item.key() == k; }) ==
        std::end(kKnown))
      throw ChainFileError(path + ": unknown field '" + item.key() + "'");
  }

  if (!j.contains("states") || !j["states"].is_array() || j["states"].empty())
    throw ChainFileError(path +
                         ": 'states' must be a nonempty array of names");
  ChainSpec spec;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& s : j["states"]) {
    if (!s.is_string())
      throw ChainFileError(path + ": 'states' entries must be strings");
    const std::string name = s.get<std::string>();
    if (name.empty())
      throw ChainFileError(path + ": state names must be nonempty");
    if (!index.emplace(name, spec.states.size()).second)
      throw ChainFileError(path + ": duplicate state name '" + name + "'");
    spec.states.push_back(name);
  }
  const std::size_t n = spec.states.size();

  const bool has_kernel = j.contains("kernel");
  const bool has_edges = j.contains("edges");
  if (has_kernel == has_edges)
    throw ChainFileError(path +
                         ": provide exactly one of 'kernel' and 'edges'");
  if (has_kernel) spec.kernel = parse_matrix(j["kernel"], path, "kernel", n);
  if (has_edges) {
    if (!j["edges"].is_array())
      throw ChainFileError(path + ": 'edges' must be an array");
    Matrix c(n, n, 0.0);
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 3 || !e[0].is_string() ||
          !e[1].is_string() || !e[2].is_number())
        throw ChainFileError(
            path + ": each edge must be [from, to, weight] with names");
      const auto u = index.find(e[0].get<std::string>());
      const auto v = index.find(e[1].get<std::string>());
      if (u == index.end() || v == index.end())
        throw ChainFileError(path + ": edge references unknown state '" +
                             (u == index.end() ? e[0] : e[1])
                                 .get<std::string>() +
                             "'");
      const double w = e[2].get<double>();
      if (!(w >= 0.0) || !std::isfinite(w))
        throw ChainFileError(path + ": edge weights must be finite and >= 0");
      if (u->second == v->second) {
        c(u->second, u->second) += w;
      } else {
        c(u->second, v->second) += w;
        c(v->second, u->second) += w;
      }
    }
    spec.conductances = c;
  }
  if (j.contains("metric"))
    spec.metric = parse_matrix(j["metric"], path, "metric", n);
  if (j.contains("laziness")) {
    if (!j["laziness"].is_number())
      throw ChainFileError(path + ": 'laziness' must be a number");
    const double lz = j["laziness"].get<double>();
    if (!(lz >= 0.0 && lz < 1.0))
      throw ChainFileError(path + ": 'laziness' must lie in [0, 1)");
    spec.laziness = lz;
  }

  try {
    return build_chain(spec);
  } catch (const ChainError& e) {
    throw ChainFileError(path + ": " + e.what());
  }
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    std::string token = text.substr(pos, next - pos);
    const auto first = token.find_first_not_of(" \t");
    if (first == std::string::npos)
      throw std::invalid_argument("empty entry in number list '" + text + "'");
    const auto last = token.find_last_not_of(" \t");
    token = token.substr(first, last - first + 1);
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0')
      throw std::invalid_argument("bad number '" + token + "' in list");
    values.push_back(v);
    pos = next + 1;
    if (next == text.size()) break;
  }
  if (values.empty())
    throw std::invalid_argument("empty number list");
  return values;
}

OutputFormat parse_format(const std::string& name) {
  if (name == "table") return OutputFormat::table;
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown output format '" + name +
                              "' (expected table, csv, or json)");
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string render(const ResultDocument& document, OutputFormat format) {
  switch (format) {
    case OutputFormat::table:
      return render_table_format(document);
    case OutputFormat::csv:
      return render_csv(document);
    case OutputFormat::json:
      return render_json(document);
  }
  throw std::logic_error("unreachable output format");
}

ResultDocument parse_result_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  ResultDocument doc;
  for (const auto& item : j.at("config").items())
    doc.config.emplace_back(item.key(), item.value().get<std::string>());
  for (const auto& item : j.at("scalars").items())
    doc.scalars.emplace_back(item.key(),
                             number_from_json(item.value(), "scalars"));
  for (const auto& c : j.at("checks")) {
    InequalityReport check;
    check.name = c.at("name").get<std::string>();
    check.constant = number_from_json(c.at("constant"), "checks.constant");
    check.worst_ratio =
        number_from_json(c.at("worst_ratio"), "checks.worst_ratio");
    check.witness = c.at("witness").get<std::string>();
    check.trials = c.at("trials").get<std::size_t>();
    check.status = status_from_string(c.at("status").get<std::string>());
    check.notes = c.at("notes").get<std::string>();
    doc.checks.push_back(std::move(check));
  }
  for (const auto& t : j.at("tables")) {
    TableData table;
    table.title = t.at("title").get<std::string>();
    for (const auto& c : t.at("columns"))
      table.columns.push_back(c.get<std::string>());
    for (const auto& r : t.at("rows")) {
      std::vector<double> row;
      for (const auto& v : r) row.push_back(number_from_json(v, "tables.rows"));
      table.rows.push_back(std::move(row));
    }
    doc.tables.push_back(std::move(table));
  }
  return doc;
}

}  // namespace mctk
