#pragma once

/// @file spray_flow.hpp
/// @brief Spray, geodesic flow and the Jacobi flow on TTM.
///
/// The spray is S = C o diag: (y, xi) -> (y, xi; xi, Gamma_y(xi, xi)). Its
/// flow projects to geodesics. The field kappa_TM o TS on TTM has flow lines
/// (c, c'; J, J') carrying a geodesic together with a Jacobi field along it;
/// integrate_jacobi_flow follows those lines, and the two oracles below
/// reconstruct J independently (geodesic variations, classical Jacobi ODE).

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jacobiflow/connection.hpp"
#include "jacobiflow/double_tangent.hpp"

namespace jacobiflow {

/// The integrator left the chart domain at time t.
class LeftDomain : public std::runtime_error {
public:
  LeftDomain(double t, Vec<double> point)
      : std::runtime_error("integration left the chart domain at t = " + std::to_string(t)),
        t_(t), point_(std::move(point)) {}
  double time() const noexcept { return t_; }
  const Vec<double> &point() const noexcept { return point_; }

private:
  double t_;
  Vec<double> point_;
};

/// The state became non-finite (or an arithmetic kernel failed) at time t.
class StepRejected : public std::runtime_error {
public:
  explicit StepRejected(double t, const std::string &why = "non-finite state")
      : std::runtime_error("integration step rejected at t = " + std::to_string(t) + ": " + why),
        t_(t) {}
  double time() const noexcept { return t_; }

private:
  double t_;
};

/// A point (c, c'; J, J') of TTM on a Jacobi flow line.
struct JacobiState {
  Vec<double> x;
  Vec<double> xi;
  Vec<double> J;
  Vec<double> Jdot;

  TTVector<double> as_tt() const { return {x, xi, J, Jdot}; }
  static JacobiState from_tt(const TTVector<double> &t) { return {t.x, t.xi, t.eta, t.zeta}; }
  bool operator==(const JacobiState &) const = default;
};

/// State of the classical Jacobi system: J together with P = nabla_t J.
struct CovariantJacobiState {
  Vec<double> x;
  Vec<double> xi;
  Vec<double> J;
  Vec<double> P;
};

inline constexpr double kDefaultStep = 1e-3;

/// Fixed-step samples. Times are k * step; when t_max is not a multiple of
/// the step, one shorter final step lands exactly on t_max.
template <class State> struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  double step = kDefaultStep;
  std::string method = "rk4";
};

/// S(y, xi) = C(xi, (y, xi)), generic so that TS is S at depth 1.
template <class S>
TTVector<S> spray(const ManifoldModel &model, const TangentVector<S> &X) {
  return horizontal_lift(model, X.vec, X);
}

TTVector<double> spray(const ManifoldModel &model, const TangentVector<double> &X);

/// TS(Y) in TT(TM) blocks, before the flip.
TTTVector<double> tangent_spray(const ManifoldModel &model, const JacobiState &Y);

/// (kappa_TM o TS)(Y), read back as d/dt of (x, xi, J, Jdot).
JacobiState jacobi_field_vector(const ManifoldModel &model, const JacobiState &Y);

/// K o TK o TS o Y.
Vec<double> jacobi_residual(const ManifoldModel &model, const JacobiState &Y);

/// nabla_t nabla_t J + R(J, c') c' + nabla_t Tor(J, c') evaluated with the
/// time derivatives supplied by the Jacobi flow field at Y.
Vec<double> jacobi_equation_defect(const ManifoldModel &model, const JacobiState &Y);

/// nabla_t J = K o kappa_M o Y.
Vec<double> covariant_velocity(const ManifoldModel &model, const JacobiState &Y);

/// Chart initial data from covariant data: Jdot0 = nablaJ0 + Gamma_x(J0, xi0).
JacobiState jacobi_state_from_covariant(const ManifoldModel &model,
                                        const TangentVector<double> &X0,
                                        const Vec<double> &J0, const Vec<double> &nablaJ0);

Trajectory<TangentVector<double>> integrate_geodesic(const ManifoldModel &model,
                                                     const TangentVector<double> &X0,
                                                     double t_max, double h = kDefaultStep);

/// Fl_t^S(X); negative t follows the reversed geodesic.
TangentVector<double> geodesic_flow(const ManifoldModel &model, const TangentVector<double> &X,
                                    double t, double h = kDefaultStep);

/// geo(X)(t) = pi_M(Fl_t^S(X)).
Vec<double> geo(const ManifoldModel &model, const TangentVector<double> &X, double t,
                double h = kDefaultStep);

Trajectory<JacobiState> integrate_jacobi_flow(const ManifoldModel &model,
                                              const JacobiState &Y0, double t_max,
                                              double h = kDefaultStep);

/// J(t) = (geo(X(s_eps))(t) - geo(X(-s_eps))(t)) / (2 s_eps) on the grid.
Trajectory<Vec<double>> variation_oracle(const ManifoldModel &model,
                                         const std::function<TangentVector<double>(double)> &X_of_s,
                                         double t_max, double h, double s_eps);

/// Integrates J' = P + Gamma(J, c'), P' = Gamma(P, c') - R(J, c')c' - nabla_t Tor(J, c')
/// alongside the geodesic.
Trajectory<CovariantJacobiState> classical_jacobi_oracle(const ManifoldModel &model,
                                                         const TangentVector<double> &X0,
                                                         const Vec<double> &J0,
                                                         const Vec<double> &nablaJ0,
                                                         double t_max, double h = kDefaultStep);

} // namespace jacobiflow
