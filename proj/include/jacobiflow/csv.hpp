#pragma once

/// @file csv.hpp
/// @brief Tabular output of trajectories (CSV and JSON).
///
/// Floats are written as the shortest decimal that round-trips, so parsing an
/// emitted file reproduces the in-memory values exactly.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "jacobiflow/spray_flow.hpp"

namespace jacobiflow {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  bool operator==(const Table &) const = default;
};

/// Shortest round-trip decimal (at most 17 significant digits).
std::string format_double(double x);

/// Columns t, x1..xm, v1..vm.
Table geodesic_table(const Trajectory<TangentVector<double>> &traj);

/// Columns t, x*, v*, J*, Jdot*, nablaJ*.
Table jacobi_table(const ManifoldModel &model, const Trajectory<JacobiState> &traj);

void write_csv(std::ostream &out, const Table &table);
Table read_csv(std::istream &in);

nlohmann::json table_to_json(const Table &table);

} // namespace jacobiflow
