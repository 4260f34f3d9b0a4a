#pragma once

/// @file model_zoo.hpp
/// @brief Single-chart manifolds with known geometry.

#include <string>
#include <vector>

#include <json.hpp>

#include "jacobiflow/connection.hpp"

namespace jacobiflow {

enum class ModelKind { euclidean, sphere, half_plane, torsion_demo, custom_metric };

std::string to_string(ModelKind kind);

/// Accepts both the CLI spelling ("half-plane") and the JSON one ("half_plane").
ModelKind parse_model_kind(const std::string &name);

struct ModelSpec {
  ModelKind kind = ModelKind::euclidean;
  int dim = 2;
  double radius = 1.0;     // sphere
  double pole_guard = 10.0; // sphere chart domain |x| < pole_guard * radius
  double beta = 1.0;       // torsion demo
  nlohmann::json metric;   // custom_metric params: family + coefficients
};

/// Reads `{ "kind": ..., "dim": m, "params": {...} }`.
ModelSpec model_spec_from_json(const nlohmann::json &config);
nlohmann::json to_json(const ModelSpec &spec);

/// Instantiates the model. Throws InvalidModel on a bad spec or a custom
/// metric that is not positive-definite at a sample point.
///
///   euclidean     Gamma = 0 on R^m
///   sphere        stereographic chart, g = 4 R^4 / (R^2 + |x|^2)^2 delta
///   half_plane    upper half-space, g = delta / x_m^2 (m >= 2)
///   torsion_demo  R^2, Gamma_y(v, xi) = beta (v1 xi2 - v2 xi1) e2
///   custom_metric metric from a named expression family
ManifoldModel build(const ModelSpec &spec);

} // namespace jacobiflow
