#pragma once

/// @file connection.hpp
/// @brief Linear connections on TM: connector, horizontal lift, covariant
/// derivatives, curvature, torsion and the Levi-Civita construction.
///
/// In chart blocks (x, xi; eta, zeta) the connector is
///
///     K(x, xi; eta, zeta) = (x, zeta - Gamma_x(xi, eta))
///
/// and the horizontal lift is C((y, xi), (y, v)) = (y, v; xi, Gamma_y(v, xi)).
/// Everything else is composed from K, C, the flips and tangent maps
/// evaluated over tangent scalars.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jacobiflow/double_tangent.hpp"
#include "jacobiflow/fields.hpp"
#include "jacobiflow/tangent.hpp"
#include "jacobiflow/vec.hpp"

namespace jacobiflow {

/// A chart point fell outside the model's domain.
class DomainError : public std::domain_error {
public:
  DomainError(const std::string &op, Vec<double> point)
      : std::domain_error(op + ": point outside the chart domain"),
        point_(std::move(point)) {}

  const Vec<double> &point() const noexcept { return point_; }

private:
  Vec<double> point_;
};

/// Invalid model construction (bad parameters, degenerate metric).
class InvalidModel : public std::invalid_argument {
public:
  explicit InvalidModel(const std::string &what) : std::invalid_argument(what) {}
};

/// A manifold in a single chart together with a linear connection on TM.
struct ManifoldModel {
  std::string name;
  int dim = 0;
  std::function<bool(const Vec<double> &)> domain;
  ChristoffelMap christoffel;
  /// Present for metric models; used for norms and sectional curvature.
  std::optional<MetricField> metric;

  bool contains(const Vec<double> &y) const {
    return static_cast<int>(y.size()) == dim && all_finite(y) &&
           (!domain || domain(y));
  }

  void require_domain(const Vec<double> &y, const char *op) const {
    if (!contains(y))
      throw DomainError(op, y);
  }

  template <class S>
  Vec<S> gamma(const Vec<S> &y, const Vec<S> &v, const Vec<S> &xi) const {
    return christoffel(y, v, xi);
  }

  /// g_x(u, v); throws std::logic_error for models without a metric.
  double inner(const Vec<double> &x, const Vec<double> &u, const Vec<double> &v) const;
  double norm(const Vec<double> &x, const Vec<double> &u) const;
};

// ---------------------------------------------------------------------------
// Connector and horizontal lift (generic over scalars so that TK is K
// evaluated at depth 1)

template <class S>
TangentVector<S> connector(const ManifoldModel &model, const TTVector<S> &t) {
  model.require_domain(base_values(t.x), "connector");
  return {t.x, sub(t.zeta, model.gamma(t.x, t.xi, t.eta))};
}

/// C(xi, (y, v)) = (y, v; xi, Gamma_y(v, xi)).
template <class S>
TTVector<S> horizontal_lift(const ManifoldModel &model, const Vec<S> &xi,
                            const TangentVector<S> &at) {
  model.require_domain(base_values(at.base), "horizontal_lift");
  return {at.base, at.vec, xi, model.gamma(at.base, at.vec, xi)};
}

/// TK on a TTTM point: K evaluated over depth-1 scalars, returned in TTM blocks.
template <class S>
TTVector<S> tangent_connector(const ManifoldModel &model, const TTTVector<S> &z) {
  return from_tangent(connector(model, seed_tt(z)));
}

// ---------------------------------------------------------------------------
// Tangent maps of vector fields

/// TX applied to (y; dir): (y, X(y); dir, DX(y) dir).
template <class S, class XF>
TTVector<S> tangent_of_field(const XF &X, const Vec<S> &y, const Vec<S> &dir) {
  auto out = X(seed(y, dir));
  return {y, values(out), dir, derivs(out)};
}

/// [X, Y] = DY X - DX Y by direct tangent evaluation.
template <class S, class XF, class YF>
Vec<S> lie_bracket(const XF &X, const YF &Y, const Vec<S> &y) {
  auto dy_x = derivs(Y(seed(y, X(y))));
  auto dx_y = derivs(X(seed(y, Y(y))));
  return sub(dy_x, dx_y);
}

/// nabla_X s = K o Ts o X at y, for generic callables X and s.
template <class S, class XF, class SF>
Vec<S> covariant_derivative(const ManifoldModel &model, const XF &X, const SF &s,
                            const Vec<S> &y) {
  model.require_domain(base_values(y), "covariant_derivative");
  const Vec<S> dir = X(y);
  auto ts = s(seed(y, dir));
  return connector(model, TTVector<S>{y, values(ts), dir, derivs(ts)}).vec;
}

/// Tor(u, v) = Gamma(u, v) - Gamma(v, u), generic over scalars.
template <class S>
Vec<S> torsion(const ManifoldModel &model, const Vec<S> &x, const Vec<S> &u,
               const Vec<S> &v) {
  model.require_domain(base_values(x), "torsion");
  return sub(model.gamma(x, u, v), model.gamma(x, v, u));
}

// ---------------------------------------------------------------------------
// Public double-precision operations

TangentVector<double> connector(const ManifoldModel &model, const TTVector<double> &t);

TTVector<double> horizontal_lift(const ManifoldModel &model, const Vec<double> &xi,
                                 const TangentVector<double> &at);

Vec<double> covariant_derivative_field(const ManifoldModel &model, const VectorField &X,
                                       const VectorField &s, const Vec<double> &at);

/// K(x, J; c_dot, J_dot) = J_dot - Gamma_x(J, c_dot).
Vec<double> covariant_derivative_along_curve(const ManifoldModel &model,
                                             const Vec<double> &x,
                                             const Vec<double> &c_dot,
                                             const Vec<double> &J,
                                             const Vec<double> &J_dot);

/// (K o TK o kappa_E - K o TK) o TTs o TX o Y at `at`.
Vec<double> curvature_operator_route(const ManifoldModel &model, const VectorField &X,
                                     const VectorField &Y, const VectorField &s,
                                     const Vec<double> &at);

/// R(u, v) w at x through the operator route with constant extensions.
Vec<double> curvature_operator(const ManifoldModel &model, const Vec<double> &x,
                               const Vec<double> &u, const Vec<double> &v,
                               const Vec<double> &w);

/// nabla_X nabla_Y s - nabla_Y nabla_X s - nabla_[X,Y] s at `at`.
Vec<double> curvature_commutator_oracle(const ManifoldModel &model, const VectorField &X,
                                        const VectorField &Y, const VectorField &s,
                                        const Vec<double> &at);

Vec<double> torsion(const ManifoldModel &model, const Vec<double> &x,
                    const Vec<double> &u, const Vec<double> &v);

/// (K o kappa_M - K) o TX o Y at `at`.
Vec<double> torsion_operator_route(const ManifoldModel &model, const VectorField &X,
                                   const VectorField &Y, const Vec<double> &at);

/// [X, Y] = vpr(TY o X -_{pi_TM} kappa o TX o Y).
Vec<double> lie_bracket_via_flip(const VectorField &X, const VectorField &Y,
                                 const Vec<double> &at);

/// <R(u, v) v, u>_g / (|u|^2 |v|^2 - <u, v>^2); requires a metric model.
double sectional_curvature(const ManifoldModel &model, const Vec<double> &x,
                           const Vec<double> &u, const Vec<double> &v);

// ---------------------------------------------------------------------------
// Levi-Civita connection of a metric

/// Gamma_y(v, xi)^i = -1/2 g^{il} (d_j g_lk + d_k g_lj - d_l g_jk) v^j xi^k,
/// metric derivatives from one extra tangent level.
template <class S>
Vec<S> levi_civita_gamma(const MetricField &metric, const Vec<S> &y, const Vec<S> &v,
                         const Vec<S> &xi) {
  const int m = static_cast<int>(y.size());
  const auto um = static_cast<std::size_t>(m);
  const Matrix<S> g = metric(y);

  std::vector<Matrix<S>> dg;
  dg.reserve(um);
  for (int a = 0; a < m; ++a) {
    Vec<S> e = zeros<S>(um);
    e[static_cast<std::size_t>(a)] = constant<S>(1.0);
    const Matrix<Tangent<S>> ga = metric(seed(y, e));
    Matrix<S> d(m);
    for (std::size_t k = 0; k < ga.data.size(); ++k)
      d.data[k] = ga.data[k].deriv;
    dg.push_back(std::move(d));
  }

  Vec<S> rhs(um);
  for (int l = 0; l < m; ++l) {
    S acc = constant<S>(0.0);
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < m; ++k) {
        S c = dg[static_cast<std::size_t>(j)](l, k) +
              dg[static_cast<std::size_t>(k)](l, j) -
              dg[static_cast<std::size_t>(l)](j, k);
        acc = acc + c * (v[static_cast<std::size_t>(j)] * xi[static_cast<std::size_t>(k)]);
      }
    }
    rhs[static_cast<std::size_t>(l)] = -0.5 * acc;
  }
  return solve_spd(g, std::move(rhs));
}

/// Builds the Levi-Civita Christoffel map of `metric`. The metric is checked
/// for symmetry and positive definiteness at every sample point.
ChristoffelMap levi_civita_from_metric(const MetricField &metric, int dim,
                                       const std::vector<Vec<double>> &samples);

} // namespace jacobiflow
