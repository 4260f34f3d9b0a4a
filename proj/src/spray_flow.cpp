#include "jacobiflow/spray_flow.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>

namespace jacobiflow {
namespace {

using Rhs = std::function<Vec<double>(const Vec<double> &)>;

struct TimeGrid {
  std::vector<double> times;
};

TimeGrid make_grid(double t_max, double h) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw std::invalid_argument("step h must be positive and finite");
  if (!(t_max >= 0.0) || !std::isfinite(t_max))
    throw std::invalid_argument("t_max must be non-negative and finite");
  TimeGrid g;
  const auto n = static_cast<long long>(std::floor(t_max / h + 1e-9));
  g.times.reserve(static_cast<std::size_t>(n + 2));
  for (long long k = 0; k <= n; ++k)
    g.times.push_back(static_cast<double>(k) * h);
  if (t_max - g.times.back() > 1e-9 * h)
    g.times.push_back(t_max);
  return g;
}

Vec<double> rk4_step(const Rhs &f, const Vec<double> &y, double dt) {
  const std::size_t n = y.size();
  const double half = 0.5 * dt;
  const double sixth = dt / 6.0;
  Vec<double> stage(n);

  const Vec<double> k1 = f(y);
  for (std::size_t i = 0; i < n; ++i)
    stage[i] = y[i] + half * k1[i];
  const Vec<double> k2 = f(stage);
  for (std::size_t i = 0; i < n; ++i)
    stage[i] = y[i] + half * k2[i];
  const Vec<double> k3 = f(stage);
  for (std::size_t i = 0; i < n; ++i)
    stage[i] = y[i] + dt * k3[i];
  const Vec<double> k4 = f(stage);

  Vec<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = y[i] + sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

/// Fixed-step RK4 on the flat state vector. The first `m` components are the
/// base point, checked against the chart domain after every step.
std::vector<Vec<double>> rk4_integrate(const ManifoldModel &model, const Rhs &f,
                                       const Vec<double> &y0, const TimeGrid &grid) {
  const auto m = static_cast<std::size_t>(model.dim);
  auto base = [m](const Vec<double> &y) { return slice(y, 0, m); };
  if (!model.contains(base(y0)))
    throw LeftDomain(0.0, base(y0));

  std::vector<Vec<double>> states;
  states.reserve(grid.times.size());
  states.push_back(y0);
  for (std::size_t k = 1; k < grid.times.size(); ++k) {
    const double t = grid.times[k];
    const double dt = grid.times[k] - grid.times[k - 1];
    Vec<double> next;
    try {
      next = rk4_step(f, states.back(), dt);
    } catch (const DomainError &e) {
      throw LeftDomain(t, e.point());
    } catch (const EvaluationError &e) {
      throw StepRejected(t, e.what());
    }
    if (!all_finite(next))
      throw StepRejected(t);
    if (!model.contains(base(next)))
      throw LeftDomain(t, base(next));
    states.push_back(std::move(next));
  }
  return states;
}

Vec<double> pack(const TangentVector<double> &X) { return concat(X.base, X.vec); }

TangentVector<double> unpack_tm(const Vec<double> &y, std::size_t m) {
  return {slice(y, 0, m), slice(y, m, m)};
}

Vec<double> pack(const JacobiState &Y) {
  return concat(concat(Y.x, Y.xi), concat(Y.J, Y.Jdot));
}

JacobiState unpack_jacobi(const Vec<double> &y, std::size_t m) {
  return {slice(y, 0, m), slice(y, m, m), slice(y, 2 * m, m), slice(y, 3 * m, m)};
}

void check_tm(const ManifoldModel &model, const TangentVector<double> &X, const char *op) {
  const auto m = static_cast<std::size_t>(model.dim);
  require_length(X.base, m, op);
  require_length(X.vec, m, op);
}

void check_jacobi(const ManifoldModel &model, const JacobiState &Y, const char *op) {
  const auto m = static_cast<std::size_t>(model.dim);
  require_length(Y.x, m, op);
  require_length(Y.xi, m, op);
  require_length(Y.J, m, op);
  require_length(Y.Jdot, m, op);
}

} // namespace

TTVector<double> spray(const ManifoldModel &model, const TangentVector<double> &X) {
  return spray<double>(model, X);
}

TTTVector<double> tangent_spray(const ManifoldModel &model, const JacobiState &Y) {
  return lift_tt(spray(model, to_tangent(Y.as_tt())));
}

JacobiState jacobi_field_vector(const ManifoldModel &model, const JacobiState &Y) {
  check_jacobi(model, Y, "jacobi_field_vector");
  const auto m = static_cast<std::size_t>(model.dim);
  // After the flip the base point is (A; C) = Y and the vector is (B; D).
  const TTTVector<double> z = flip_level2(tangent_spray(model, Y));
  return {slice(z.blocks.eta, 0, m), slice(z.blocks.eta, m, m),
          slice(z.blocks.zeta, 0, m), slice(z.blocks.zeta, m, m)};
}

Vec<double> jacobi_residual(const ManifoldModel &model, const JacobiState &Y) {
  check_jacobi(model, Y, "jacobi_residual");
  return connector(model, tangent_connector(model, tangent_spray(model, Y))).vec;
}

Vec<double> covariant_velocity(const ManifoldModel &model, const JacobiState &Y) {
  return connector(model, flip(Y.as_tt())).vec;
}

Vec<double> jacobi_equation_defect(const ManifoldModel &model, const JacobiState &Y) {
  const JacobiState d = jacobi_field_vector(model, Y);
  const auto x = seed(Y.x, d.x);
  const auto xi = seed(Y.xi, d.xi);
  const auto J = seed(Y.J, d.J);
  const auto Jdot = seed(Y.Jdot, d.Jdot);

  // P = nabla_t J as a function of t, then nabla_t P.
  const Vec<T1> P = sub(Jdot, model.gamma(x, J, xi));
  const Vec<double> nabla_p =
      covariant_derivative_along_curve(model, Y.x, Y.xi, values(P), derivs(P));
  const Vec<double> r = curvature_operator(model, Y.x, Y.J, Y.xi, Y.xi);
  const Vec<T1> tor = torsion(model, x, J, xi);
  const Vec<double> nabla_tor =
      covariant_derivative_along_curve(model, Y.x, Y.xi, values(tor), derivs(tor));
  return add(add(nabla_p, r), nabla_tor);
}

JacobiState jacobi_state_from_covariant(const ManifoldModel &model,
                                        const TangentVector<double> &X0,
                                        const Vec<double> &J0, const Vec<double> &nablaJ0) {
  check_tm(model, X0, "jacobi_state_from_covariant");
  const auto m = static_cast<std::size_t>(model.dim);
  require_length(J0, m, "J0");
  require_length(nablaJ0, m, "nablaJ0");
  model.require_domain(X0.base, "jacobi_state_from_covariant");
  return {X0.base, X0.vec, J0, add(nablaJ0, model.gamma(X0.base, J0, X0.vec))};
}

Trajectory<TangentVector<double>> integrate_geodesic(const ManifoldModel &model,
                                                     const TangentVector<double> &X0,
                                                     double t_max, double h) {
  check_tm(model, X0, "integrate_geodesic");
  const auto m = static_cast<std::size_t>(model.dim);
  const TimeGrid grid = make_grid(t_max, h);
  const Rhs f = [&model, m](const Vec<double> &y) {
    const TTVector<double> s = spray(model, unpack_tm(y, m));
    return concat(s.eta, s.zeta);
  };
  Trajectory<TangentVector<double>> traj;
  traj.step = h;
  traj.times = grid.times;
  for (const auto &y : rk4_integrate(model, f, pack(X0), grid))
    traj.states.push_back(unpack_tm(y, m));
  return traj;
}

TangentVector<double> geodesic_flow(const ManifoldModel &model, const TangentVector<double> &X,
                                    double t, double h) {
  if (t < 0.0) {
    TangentVector<double> reversed{X.base, negate(X.vec)};
    TangentVector<double> end = integrate_geodesic(model, reversed, -t, h).states.back();
    return {end.base, negate(end.vec)};
  }
  return integrate_geodesic(model, X, t, h).states.back();
}

Vec<double> geo(const ManifoldModel &model, const TangentVector<double> &X, double t,
                double h) {
  return geodesic_flow(model, X, t, h).base;
}

Trajectory<JacobiState> integrate_jacobi_flow(const ManifoldModel &model,
                                              const JacobiState &Y0, double t_max, double h) {
  check_jacobi(model, Y0, "integrate_jacobi_flow");
  const auto m = static_cast<std::size_t>(model.dim);
  const TimeGrid grid = make_grid(t_max, h);
  const Rhs f = [&model, m](const Vec<double> &y) {
    return pack(jacobi_field_vector(model, unpack_jacobi(y, m)));
  };
  Trajectory<JacobiState> traj;
  traj.step = h;
  traj.times = grid.times;
  for (const auto &y : rk4_integrate(model, f, pack(Y0), grid))
    traj.states.push_back(unpack_jacobi(y, m));
  return traj;
}

Trajectory<Vec<double>> variation_oracle(
    const ManifoldModel &model, const std::function<TangentVector<double>(double)> &X_of_s,
    double t_max, double h, double s_eps) {
  if (!(s_eps > 0.0))
    throw std::invalid_argument("variation_oracle: s_eps must be positive");
  const auto plus = integrate_geodesic(model, X_of_s(s_eps), t_max, h);
  const auto minus = integrate_geodesic(model, X_of_s(-s_eps), t_max, h);
  Trajectory<Vec<double>> traj;
  traj.step = h;
  traj.times = plus.times;
  traj.method = "rk4-central-difference";
  const double inv = 1.0 / (2.0 * s_eps);
  for (std::size_t k = 0; k < plus.states.size(); ++k)
    traj.states.push_back(scale(inv, sub(plus.states[k].base, minus.states[k].base)));
  return traj;
}

Trajectory<CovariantJacobiState> classical_jacobi_oracle(const ManifoldModel &model,
                                                         const TangentVector<double> &X0,
                                                         const Vec<double> &J0,
                                                         const Vec<double> &nablaJ0,
                                                         double t_max, double h) {
  check_tm(model, X0, "classical_jacobi_oracle");
  const auto m = static_cast<std::size_t>(model.dim);
  require_length(J0, m, "J0");
  require_length(nablaJ0, m, "nablaJ0");
  const TimeGrid grid = make_grid(t_max, h);

  const Rhs f = [&model, m](const Vec<double> &y) {
    const Vec<double> c = slice(y, 0, m);
    const Vec<double> cd = slice(y, m, m);
    const Vec<double> J = slice(y, 2 * m, m);
    const Vec<double> P = slice(y, 3 * m, m);

    const Vec<double> cdd = model.gamma(c, cd, cd);
    const Vec<double> Jd = add(P, model.gamma(c, J, cd));
    const Vec<double> r = curvature_operator(model, c, J, cd, cd);
    // d/dt Tor_c(J, c') by one tangent level along the current state.
    const Vec<T1> tor = torsion(model, seed(c, cd), seed(J, Jd), seed(cd, cdd));
    const Vec<double> nabla_tor =
        covariant_derivative_along_curve(model, c, cd, values(tor), derivs(tor));
    const Vec<double> Pd = sub(sub(model.gamma(c, P, cd), r), nabla_tor);
    return concat(concat(cd, cdd), concat(Jd, Pd));
  };

  const Vec<double> y0 = concat(concat(X0.base, X0.vec), concat(J0, nablaJ0));
  Trajectory<CovariantJacobiState> traj;
  traj.step = h;
  traj.times = grid.times;
  traj.method = "rk4-classical-jacobi";
  for (const auto &y : rk4_integrate(model, f, y0, grid))
    traj.states.push_back({slice(y, 0, m), slice(y, m, m), slice(y, 2 * m, m), slice(y, 3 * m, m)});
  return traj;
}

} // namespace jacobiflow
