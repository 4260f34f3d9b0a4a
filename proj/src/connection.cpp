#include "jacobiflow/connection.hpp"

#include <cmath>
#include <stdexcept>

namespace jacobiflow {

double ManifoldModel::inner(const Vec<double> &x, const Vec<double> &u,
                            const Vec<double> &v) const {
  if (!metric)
    throw std::logic_error(name + ": model has no metric");
  const Matrix<double> g = (*metric)(x);
  double s = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      s += g(i, j) * u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
  return s;
}

double ManifoldModel::norm(const Vec<double> &x, const Vec<double> &u) const {
  return std::sqrt(inner(x, u, u));
}

TangentVector<double> connector(const ManifoldModel &model, const TTVector<double> &t) {
  return connector<double>(model, t);
}

TTVector<double> horizontal_lift(const ManifoldModel &model, const Vec<double> &xi,
                                 const TangentVector<double> &at) {
  return horizontal_lift<double>(model, xi, at);
}

Vec<double> covariant_derivative_field(const ManifoldModel &model, const VectorField &X,
                                       const VectorField &s, const Vec<double> &at) {
  return covariant_derivative(model, X, s, at);
}

Vec<double> covariant_derivative_along_curve(const ManifoldModel &model,
                                             const Vec<double> &x,
                                             const Vec<double> &c_dot,
                                             const Vec<double> &J,
                                             const Vec<double> &J_dot) {
  return connector(model, TTVector<double>{x, J, c_dot, J_dot}).vec;
}

Vec<double> curvature_operator_route(const ManifoldModel &model, const VectorField &X,
                                     const VectorField &Y, const VectorField &s,
                                     const Vec<double> &at) {
  model.require_domain(at, "curvature_operator");
  const TTVector<double> tx_y = tangent_of_field(X, at, Y(at));
  // s as a map into E = TM: y -> (y, s(y)).
  auto section = [&s](const auto &y) { return concat(y, s(y)); };
  const TTTVector<double> z{tt_map(section, tx_y)};
  auto k_tk = [&model](const TTTVector<double> &w) {
    return connector(model, tangent_connector(model, w)).vec;
  };
  return sub(k_tk(flip_level2(z)), k_tk(z));
}

Vec<double> curvature_operator(const ManifoldModel &model, const Vec<double> &x,
                               const Vec<double> &u, const Vec<double> &v,
                               const Vec<double> &w) {
  return curvature_operator_route(model, constant_field(u), constant_field(v),
                                  constant_field(w), x);
}

Vec<double> curvature_commutator_oracle(const ManifoldModel &model, const VectorField &X,
                                        const VectorField &Y, const VectorField &s,
                                        const Vec<double> &at) {
  auto nabla_y_s = [&](const auto &y) { return covariant_derivative(model, Y, s, y); };
  auto nabla_x_s = [&](const auto &y) { return covariant_derivative(model, X, s, y); };
  const Vec<double> xy = covariant_derivative(model, X, nabla_y_s, at);
  const Vec<double> yx = covariant_derivative(model, Y, nabla_x_s, at);
  const Vec<double> bracket = lie_bracket(X, Y, at);
  const Vec<double> b =
      covariant_derivative(model, constant_field(bracket), s, at);
  return sub(sub(xy, yx), b);
}

Vec<double> torsion(const ManifoldModel &model, const Vec<double> &x,
                    const Vec<double> &u, const Vec<double> &v) {
  return torsion<double>(model, x, u, v);
}

Vec<double> torsion_operator_route(const ManifoldModel &model, const VectorField &X,
                                   const VectorField &Y, const Vec<double> &at) {
  const TTVector<double> tx_y = tangent_of_field(X, at, Y(at));
  return sub(connector(model, flip(tx_y)).vec, connector(model, tx_y).vec);
}

Vec<double> lie_bracket_via_flip(const VectorField &X, const VectorField &Y,
                                 const Vec<double> &at) {
  const TTVector<double> ty_x = tangent_of_field(Y, at, X(at));
  const TTVector<double> k_tx_y = flip(tangent_of_field(X, at, Y(at)));
  return vertical_projection(sub_over_E(ty_x, k_tx_y)).vec;
}

double sectional_curvature(const ManifoldModel &model, const Vec<double> &x,
                           const Vec<double> &u, const Vec<double> &v) {
  const Vec<double> r = curvature_operator(model, x, u, v, v);
  const double area2 =
      model.inner(x, u, u) * model.inner(x, v, v) - std::pow(model.inner(x, u, v), 2);
  if (!(area2 > 0.0))
    throw std::invalid_argument("sectional_curvature: u and v are linearly dependent");
  return model.inner(x, r, u) / area2;
}

ChristoffelMap levi_civita_from_metric(const MetricField &metric, int dim,
                                       const std::vector<Vec<double>> &samples) {
  if (!metric)
    throw InvalidModel("levi_civita_from_metric: empty metric");
  for (const auto &y : samples) {
    require_length(y, static_cast<std::size_t>(dim), "levi_civita_from_metric sample");
    const Matrix<double> g = metric(y);
    if (g.dim != dim || !is_positive_definite(g))
      throw InvalidModel("levi_civita_from_metric: metric is not symmetric "
                         "positive-definite at a sample point");
  }
  return ChristoffelMap::from_generic(
      [metric](const auto &y, const auto &v, const auto &xi) {
        return levi_civita_gamma(metric, y, v, xi);
      });
}

} // namespace jacobiflow
