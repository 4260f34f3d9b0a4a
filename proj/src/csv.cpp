#include "jacobiflow/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace jacobiflow {
namespace {

void indexed_columns(std::vector<std::string> &cols, const std::string &prefix, int m) {
  for (int i = 1; i <= m; ++i)
    cols.push_back(prefix + std::to_string(i));
}

void append(std::vector<double> &row, const Vec<double> &v) {
  row.insert(row.end(), v.begin(), v.end());
}

double parse_double(const std::string &field, std::size_t line) {
  double value = 0.0;
  const char *first = field.data();
  const char *last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw std::runtime_error("read_csv: bad number '" + field + "' on line " +
                             std::to_string(line));
  return value;
}

std::vector<std::string> split(const std::string &line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ','))
    fields.push_back(field);
  if (!line.empty() && line.back() == ',')
    fields.emplace_back();
  return fields;
}

} // namespace

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc())
    throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

Table geodesic_table(const Trajectory<TangentVector<double>> &traj) {
  Table table;
  const int m = traj.states.empty() ? 0 : static_cast<int>(traj.states.front().dim());
  table.columns.push_back("t");
  indexed_columns(table.columns, "x", m);
  indexed_columns(table.columns, "v", m);
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    std::vector<double> row{traj.times[k]};
    append(row, traj.states[k].base);
    append(row, traj.states[k].vec);
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table jacobi_table(const ManifoldModel &model, const Trajectory<JacobiState> &traj) {
  Table table;
  const int m = model.dim;
  table.columns.push_back("t");
  indexed_columns(table.columns, "x", m);
  indexed_columns(table.columns, "v", m);
  indexed_columns(table.columns, "J", m);
  indexed_columns(table.columns, "Jdot", m);
  indexed_columns(table.columns, "nablaJ", m);
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const auto &s = traj.states[k];
    std::vector<double> row{traj.times[k]};
    append(row, s.x);
    append(row, s.xi);
    append(row, s.J);
    append(row, s.Jdot);
    append(row, covariant_velocity(model, s));
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_csv(std::ostream &out, const Table &table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto &row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

Table read_csv(std::istream &in) {
  Table table;
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("read_csv: missing header");
  table.columns = split(line);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty())
      continue;
    const auto fields = split(line);
    if (fields.size() != table.columns.size())
      throw std::runtime_error("read_csv: line " + std::to_string(lineno) + " has " +
                               std::to_string(fields.size()) + " fields, expected " +
                               std::to_string(table.columns.size()));
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto &f : fields)
      row.push_back(parse_double(f, lineno));
    table.rows.push_back(std::move(row));
  }
  return table;
}

nlohmann::json table_to_json(const Table &table) {
  return {{"columns", table.columns}, {"rows", table.rows}};
}

} // namespace jacobiflow
