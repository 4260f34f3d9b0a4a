#include <doctest.h>

#include <cmath>

#include "jacobiflow/model_zoo.hpp"
#include "jacobiflow/random.hpp"
#include "jacobiflow/spray_flow.hpp"
#include "oracles.hpp"

using namespace jacobiflow;
using nlohmann::json;

TEST_CASE("model kinds parse in both spellings") {
  CHECK(parse_model_kind("half-plane") == ModelKind::half_plane);
  CHECK(parse_model_kind("half_plane") == ModelKind::half_plane);
  CHECK(parse_model_kind("torsion-demo") == ModelKind::torsion_demo);
  CHECK(parse_model_kind("custom") == ModelKind::custom_metric);
  CHECK_THROWS_AS(parse_model_kind("torus"), InvalidModel);
}

TEST_CASE("ModelSpec validation") {
  ModelSpec s;
  s.kind = ModelKind::euclidean;
  s.dim = 5;
  CHECK_THROWS_AS(build(s), InvalidModel);
  s.dim = 0;
  CHECK_THROWS_AS(build(s), InvalidModel);
  s.kind = ModelKind::sphere;
  s.dim = 2;
  s.radius = -1.0;
  CHECK_THROWS_AS(build(s), InvalidModel);
  s.kind = ModelKind::half_plane;
  s.dim = 1;
  CHECK_THROWS_AS(build(s), InvalidModel);
  s.kind = ModelKind::torsion_demo;
  s.dim = 3;
  CHECK_THROWS_AS(build(s), InvalidModel);
  CHECK_THROWS_AS(model_spec_from_json(json{{"dim", 2}}), InvalidModel);
  CHECK_THROWS_AS(model_spec_from_json(json{{"kind", 3}}), InvalidModel);
}

TEST_CASE("JSON config round-trip") {
  const auto cfg = json::parse(R"({"kind": "sphere", "dim": 3, "params": {"radius": 2.5}})");
  const ModelSpec s = model_spec_from_json(cfg);
  CHECK(s.kind == ModelKind::sphere);
  CHECK(s.dim == 3);
  CHECK(s.radius == 2.5);
  const ModelSpec back = model_spec_from_json(to_json(s));
  CHECK(back.radius == 2.5);
  CHECK(back.pole_guard == s.pole_guard);
  CHECK(to_json(back) == to_json(s));
}

TEST_CASE("euclidean and torsion demo") {
  ModelSpec s;
  s.kind = ModelKind::euclidean;
  s.dim = 3;
  const auto flat = build(s);
  SplitMix64 rng(4);
  for (int k = 0; k < 20; ++k) {
    const auto x = rng.vec(3, -2, 2), u = rng.vec(3, -1, 1), v = rng.vec(3, -1, 1);
    CHECK(norm_inf(torsion(flat, x, u, v)) == 0.0);
    CHECK(norm_inf(curvature_operator(flat, x, u, v, u)) == 0.0);
  }
  s.kind = ModelKind::torsion_demo;
  s.dim = 2;
  s.beta = 1.0;
  const auto demo = build(s);
  CHECK(torsion(demo, {0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}) == Vec<double>{0.0, 2.0});
  // Constant coefficients, so only the quadratic term survives:
  // R(e1, e2)(e1 + e2) = Gamma(Gamma(w, e2), e1) - Gamma(Gamma(w, e1), e2) = -beta^2 e2.
  CHECK(curvature_operator(demo, {0.2, 0.1}, {1, 0}, {0, 1}, {1, 1}) == Vec<double>{0.0, -1.0});
}

TEST_CASE("sphere domain guard") {
  ModelSpec s;
  s.kind = ModelKind::sphere;
  const auto sphere = build(s);
  CHECK(sphere.contains({9.9, 0.0}));
  CHECK_FALSE(sphere.contains({10.1, 0.0}));
  CHECK_FALSE(sphere.contains({std::nan(""), 0.0}));
  CHECK_FALSE(sphere.contains({0.0}));
}

TEST_CASE("sectional curvature of the sphere at random points") {
  ModelSpec s;
  s.kind = ModelKind::sphere;
  const auto sphere = build(s);
  SplitMix64 rng(8);
  for (int k = 0; k < 5; ++k) {
    const auto x = rng.vec(2, -1.5, 1.5), u = rng.vec(2, -1, 1), v = rng.vec(2, -1, 1);
    CHECK(std::fabs(sectional_curvature(sphere, x, u, v) - 1.0) <= 1e-8);
  }
}

TEST_CASE("half-plane geodesic through (0, 1) is the unit semicircle") {
  ModelSpec s;
  s.kind = ModelKind::half_plane;
  const auto hp = build(s);
  const auto traj = integrate_geodesic(hp, {{0.0, 1.0}, {1.0, 0.0}}, 1.0, 1e-3);
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const auto &p = traj.states[k].base;
    CHECK(std::fabs(p[0] * p[0] + p[1] * p[1] - 1.0) <= 1e-6);
    CHECK(max_abs_diff(p, oracles::semicircle(traj.times[k])) <= 1e-10);
  }
}

TEST_CASE("custom conformal_rational reproduces the unit sphere") {
  // 4 / (1 + r)^2 with r = |x|^2.
  const auto cfg = json::parse(R"({"kind": "custom", "dim": 2, "params": {
      "family": "conformal_rational", "numerator": [4], "denominator": [1, 2, 1]}})");
  const auto custom = build(model_spec_from_json(cfg));
  ModelSpec s;
  s.kind = ModelKind::sphere;
  const auto sphere = build(s);
  SplitMix64 rng(12);
  for (int k = 0; k < 50; ++k) {
    const auto x = rng.vec(2, -1, 1), v = rng.vec(2, -1, 1), w = rng.vec(2, -1, 1);
    CHECK(max_abs_diff(custom.gamma(x, v, w), sphere.gamma(x, v, w)) < 1e-14);
  }
}

TEST_CASE("custom conformal metric has the analytic Gaussian curvature") {
  // g = (1 + r) delta: K = -exp(-2 phi) laplace(phi) = -2 / (1 + r)^3.
  const auto cfg = json::parse(R"({"kind": "custom_metric", "dim": 2, "params": {
      "family": "conformal_rational", "numerator": [1, 1]}})");
  const auto model = build(model_spec_from_json(cfg));
  SplitMix64 rng(13);
  for (int k = 0; k < 10; ++k) {
    const auto x = rng.vec(2, -1, 1);
    const double r = x[0] * x[0] + x[1] * x[1];
    CHECK(sectional_curvature(model, x, {1, 0}, {0, 1}) ==
          doctest::Approx(-2.0 / std::pow(1.0 + r, 3)).epsilon(1e-12));
  }
}

TEST_CASE("custom polynomial metric") {
  // Constant metric: flat.
  const auto flat = json::parse(R"({"kind": "custom", "dim": 2, "params": {"family": "polynomial",
      "entries": [{"i": 0, "j": 0, "terms": [{"c": 2}]},
                  {"i": 0, "j": 1, "terms": [{"c": 0.5}]},
                  {"i": 1, "j": 1, "terms": [{"c": 1}]}]}})");
  const auto model = build(model_spec_from_json(flat));
  CHECK(norm_inf(model.gamma(Vec<double>{0.3, 0.4}, Vec<double>{1, 2}, Vec<double>{3, 4})) == 0.0);
  CHECK(model.inner({0.0, 0.0}, {1, 0}, {0, 1}) == 0.5);

  // Surface of revolution dr^2 + (1 + r^2)^2 dtheta^2 over a box r > 0:
  // K = -f''/f with f = 1 + r^2, so K = -2 / (1 + r^2).
  const auto rev = json::parse(R"({"kind": "custom", "dim": 2, "params": {"family": "polynomial",
      "entries": [{"i": 0, "j": 0, "terms": [{"c": 1}]},
                  {"i": 1, "j": 1, "terms": [{"c": 1}, {"c": 2, "p": [2, 0]}, {"c": 1, "p": [4, 0]}]}],
      "box": {"lo": [0.1, -3], "hi": [3, 3]}}})");
  const auto surf = build(model_spec_from_json(rev));
  for (double r : {0.3, 0.8, 1.7}) {
    CHECK(sectional_curvature(surf, {r, 0.2}, {1, 0}, {0, 1}) ==
          doctest::Approx(-2.0 / (1.0 + r * r)).epsilon(1e-12));
  }
  CHECK_FALSE(surf.contains({0.0, 0.0}));

  const auto bad = json::parse(R"({"kind": "custom", "dim": 2, "params": {"family": "polynomial",
      "entries": [{"i": 0, "j": 0, "terms": [{"c": 1}]}, {"i": 1, "j": 1, "terms": [{"c": -1}]}]}})");
  CHECK_THROWS_AS(build(model_spec_from_json(bad)), InvalidModel);
  const auto unknown = json::parse(R"({"kind": "custom", "params": {"family": "spline"}})");
  CHECK_THROWS_AS(build(model_spec_from_json(unknown)), InvalidModel);
  const auto malformed = json::parse(R"({"kind": "custom", "params": {"family": "polynomial",
      "entries": [{"i": 0, "terms": []}]}})");
  CHECK_THROWS_AS(build(model_spec_from_json(malformed)), InvalidModel);
}
