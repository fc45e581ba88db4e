#include "rioc/io/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rioc::io {

int CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ValidationError("csv: missing column '" + name + "'");
  return static_cast<int>(it - header.begin());
}

bool CsvTable::has_column(const std::string& name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const CsvTable& table) {
  for (std::size_t c = 0; c < table.header.size(); ++c)
    os << (c ? "," : "") << table.header[c];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      os << (c ? "," : "") << format_double(row[c]);
    os << '\n';
  }
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot write " + path);
  write_csv(os, table);
  if (!os) throw ValidationError("error while writing " + path);
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, int line) {
  double x = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, x);
  if (res.ec != std::errc() || res.ptr != last)
    throw ValidationError("csv: line " + std::to_string(line) + ": bad number '" + s + "'");
  return x;
}

}  // namespace

CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (table.header.empty()) {
      table.header = split(line);
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != table.header.size())
      throw ValidationError("csv: line " + std::to_string(lineno) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(table.header.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_double(c, lineno));
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw ValidationError("csv: empty input");
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot read " + path);
  return read_csv(is);
}

namespace {

void add_columns(std::vector<std::string>& header, const std::string& prefix, int n) {
  for (int i = 1; i <= n; ++i) header.push_back(prefix + "_" + std::to_string(i));
}

}  // namespace

CsvTable solution_table(const ForwardSolution& sol, const AdjointSolution* adj) {
  const int n = sol.q.dim();
  const TimeGrid& grid = sol.q.grid();
  CsvTable table;
  table.header.push_back("t");
  add_columns(table.header, "q", n);
  add_columns(table.header, "z", n);
  add_columns(table.header, "H", n);
  if (adj) {
    add_columns(table.header, "xi", n);
    add_columns(table.header, "lam", n);
  }
  for (int k = 0; k <= grid.intervals(); ++k) {
    std::vector<double> row{grid.t(k)};
    for (const Trajectory* tr : {&sol.q, &sol.z, &sol.history})
      for (int i = 0; i < n; ++i) row.push_back((*tr)(k, i));
    if (adj) {
      for (int i = 0; i < n; ++i) row.push_back(adj->xi(k, i));
      for (int i = 0; i < n; ++i) row.push_back(k == 0 ? 0.0 : adj->lam(k - 1, i));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable control_table(const Trajectory& ell) {
  CsvTable table;
  table.header.push_back("t");
  add_columns(table.header, "ell", ell.dim());
  for (int k = 0; k < ell.samples(); ++k) {
    std::vector<double> row{ell.grid().t(k)};
    for (int i = 0; i < ell.dim(); ++i) row.push_back(ell(k, i));
    table.rows.push_back(std::move(row));
  }
  return table;
}

TimeGrid grid_from_table(const CsvTable& table) {
  const int tc = table.column("t");
  const int N = static_cast<int>(table.rows.size()) - 1;
  if (N < 2) throw ValidationError("csv: need at least three time nodes");
  const double T = table.rows.back()[tc];
  const TimeGrid grid(T, N);
  const double tol = 1e-9 * grid.dt();
  for (int k = 0; k <= N; ++k)
    if (std::abs(table.rows[k][tc] - grid.t(k)) > tol)
      throw ValidationError("csv: t column is not a uniform grid starting at 0 (row " +
                            std::to_string(k + 1) + ")");
  return grid;
}

namespace {

int count_components(const CsvTable& table, const std::string& prefix) {
  int n = 0;
  while (table.has_column(prefix + "_" + std::to_string(n + 1))) ++n;
  if (n == 0) throw ValidationError("csv: no columns named " + prefix + "_1, ...");
  return n;
}

}  // namespace

Trajectory nodal_columns(const CsvTable& table, const std::string& prefix) {
  const TimeGrid grid = grid_from_table(table);
  const int n = count_components(table, prefix);
  Trajectory out(grid, n);
  for (int i = 0; i < n; ++i) {
    const int c = table.column(prefix + "_" + std::to_string(i + 1));
    for (int k = 0; k <= grid.intervals(); ++k) out(k, i) = table.rows[k][c];
  }
  return out;
}

Trajectory interval_columns(const CsvTable& table, const std::string& prefix) {
  const TimeGrid grid = grid_from_table(table);
  const int n = count_components(table, prefix);
  Trajectory out(grid, n, Sampling::interval);
  for (int i = 0; i < n; ++i) {
    const int c = table.column(prefix + "_" + std::to_string(i + 1));
    for (int k = 0; k < grid.intervals(); ++k) out(k, i) = table.rows[k + 1][c];
  }
  return out;
}

}  // namespace rioc::io
