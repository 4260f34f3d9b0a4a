#include <doctest.h>

#include <sstream>

#include "jacobiflow/csv.hpp"
#include "jacobiflow/model_zoo.hpp"

using namespace jacobiflow;

TEST_CASE("shortest round-trip formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5e-300) == "-2.5e-300");
  CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
}

TEST_CASE("geodesic table columns and round-trip") {
  ModelSpec s;
  s.kind = ModelKind::sphere;
  const auto sphere = build(s);
  const auto traj = integrate_geodesic(sphere, {{0.1, 0.2}, {0.3, -0.7}}, 0.5, 0.01);
  const Table table = geodesic_table(traj);
  CHECK(table.columns == std::vector<std::string>{"t", "x1", "x2", "v1", "v2"});
  CHECK(table.rows.size() == traj.states.size());

  std::stringstream buf;
  write_csv(buf, table);
  const Table parsed = read_csv(buf);
  CHECK(parsed == table);
  CHECK(parsed.rows.back()[1] == traj.states.back().base[0]);
}

TEST_CASE("jacobi table carries covariant derivatives") {
  ModelSpec s;
  s.kind = ModelKind::half_plane;
  const auto hp = build(s);
  const auto Y0 = jacobi_state_from_covariant(hp, {{0.0, 1.0}, {1.0, 0.0}}, {0, 0}, {0, 1});
  const auto traj = integrate_jacobi_flow(hp, Y0, 0.1, 0.01);
  const Table table = jacobi_table(hp, traj);
  CHECK(table.columns == std::vector<std::string>{"t", "x1", "x2", "v1", "v2", "J1", "J2", "Jdot1",
                                                  "Jdot2", "nablaJ1", "nablaJ2"});
  CHECK(table.rows.front()[9] == 0.0);
  CHECK(table.rows.front()[10] == 1.0);
  std::stringstream buf;
  write_csv(buf, table);
  CHECK(read_csv(buf) == table);

  const auto j = table_to_json(table);
  CHECK(j["columns"].size() == 11);
  CHECK(j["rows"][0][0] == 0.0);
}

TEST_CASE("malformed CSV") {
  std::stringstream empty;
  CHECK_THROWS(read_csv(empty));
  std::stringstream ragged("t,x1\n0,1,2\n");
  CHECK_THROWS(read_csv(ragged));
  std::stringstream junk("t,x1\n0,abc\n");
  CHECK_THROWS(read_csv(junk));
}
