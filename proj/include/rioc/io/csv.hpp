#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rioc/adjoint.hpp"

namespace rioc::io {

/// Header plus numeric rows. Cells are written in shortest round-trip form.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a column; throws ValidationError if absent.
  int column(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double x);

void write_csv(std::ostream& os, const CsvTable& table);
void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(std::istream& is);
CsvTable read_csv(const std::string& path);

/// t, q_1..q_n, z_1..z_n, H_1..H_n, then xi_1..xi_n and lam_1..lam_n if an
/// adjoint is given. lam_k of interval k is written on row k+1; row 0 gets 0.
CsvTable solution_table(const ForwardSolution& sol, const AdjointSolution* adj = nullptr);

/// t, ell_1..ell_n.
CsvTable control_table(const Trajectory& ell);

/// Rebuilds the uniform grid from the t column. Throws ValidationError if
/// the times are not a uniform partition starting at 0.
TimeGrid grid_from_table(const CsvTable& table);

/// Nodal trajectory from columns prefix_1..prefix_n (n detected).
Trajectory nodal_columns(const CsvTable& table, const std::string& prefix);

/// Interval trajectory from columns prefix_1..prefix_n, inverse of the
/// row k+1 convention used by solution_table.
Trajectory interval_columns(const CsvTable& table, const std::string& prefix);

}  // namespace rioc::io
