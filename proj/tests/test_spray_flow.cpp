#include <doctest.h>

#include <cmath>

#include "jacobiflow/model_zoo.hpp"
#include "jacobiflow/random.hpp"
#include "jacobiflow/spray_flow.hpp"
#include "oracles.hpp"

using namespace jacobiflow;

namespace {

ManifoldModel model_of(ModelKind kind, int dim = 2, double beta = 1.0) {
  ModelSpec s;
  s.kind = kind;
  s.dim = dim;
  s.beta = beta;
  return build(s);
}

} // namespace

TEST_CASE("flat spray and Jacobi field vector") {
  const auto flat = model_of(ModelKind::euclidean, 2);
  CHECK(spray(flat, {{1, 2}, {3, 4}}) == TTVector<double>{{1, 2}, {3, 4}, {3, 4}, {0, 0}});
  const JacobiState Y{{1, 2}, {3, 4}, {5, 6}, {7, 8}};
  const JacobiState d = jacobi_field_vector(flat, Y);
  CHECK(d == JacobiState{{3, 4}, {0, 0}, {7, 8}, {0, 0}});
  CHECK(norm_inf(jacobi_residual(flat, Y)) == 0.0);
}

TEST_CASE("Jacobi field vector extends the spray") {
  const auto sphere = model_of(ModelKind::sphere);
  SplitMix64 rng(6);
  for (int k = 0; k < 100; ++k) {
    const JacobiState Y{rng.vec(2, -1, 1), rng.vec(2, -1, 1), rng.vec(2, -1, 1),
                        rng.vec(2, -1, 1)};
    const JacobiState d = jacobi_field_vector(sphere, Y);
    const auto s = spray(sphere, {Y.x, Y.xi});
    CHECK(d.x == s.eta);
    CHECK(d.xi == s.zeta);
    CHECK(d.J == Y.Jdot);
    CHECK(norm_inf(jacobi_residual(sphere, Y)) <= 1e-12);

    // Reparametrization: (J, Jdot) = (xi, Gamma(xi, xi)) copies the base derivatives.
    const JacobiState R{Y.x, Y.xi, Y.xi, s.zeta};
    const JacobiState dr = jacobi_field_vector(sphere, R);
    CHECK(dr.J == d.xi);
    CHECK(max_abs_diff(dr.Jdot, tangent_map([&](const auto &z) {
                                   using S = typename std::decay_t<decltype(z)>::value_type;
                                   const Vec<S> x = slice(z, 0, 2), xi = slice(z, 2, 2);
                                   return sphere.gamma(x, xi, xi);
                                 },
                                 TangentVector<double>{concat(Y.x, Y.xi), concat(Y.xi, s.zeta)})
                                 .vec) <= 1e-12);
  }
}

TEST_CASE("geodesics against closed forms") {
  const auto flat = model_of(ModelKind::euclidean, 1);
  const auto line = integrate_geodesic(flat, {{0.0}, {1.0}}, 1.0, 0.1);
  CHECK(line.states.back().base == Vec<double>{1.0});
  CHECK(line.times.size() == 11);

  const auto sphere = model_of(ModelKind::sphere);
  const auto meridian = integrate_geodesic(sphere, {{0.0, 0.0}, {1.0, 0.0}}, 1.0, 1e-3);
  CHECK(max_abs_diff(meridian.states.back().base, oracles::sphere_meridian(1.0)) <= 1e-10);
  const double e0 = sphere.inner({0, 0}, {0.5, 0}, {0.5, 0});
  for (const auto &s : meridian.states)
    CHECK(std::fabs(sphere.inner(s.base, s.vec, s.vec) - 4.0 * 1.0) <= 1e-8);
  CHECK(e0 == 1.0);

  const auto hp = model_of(ModelKind::half_plane);
  const auto semi = integrate_geodesic(hp, {{0.0, 1.0}, {1.0, 0.0}}, 2.0, 1e-3);
  CHECK(max_abs_diff(semi.states.back().base, oracles::semicircle(2.0)) <= 1e-11);
}

TEST_CASE("independent RK4 on the classical geodesic equation") {
  // Hand-written classical half-plane symbols, integrated with a separate RK4.
  auto rhs = [](const oracles::V &y) {
    const double h = y[1], u = y[2], v = y[3];
    return oracles::V{u, v, 2.0 * u * v / h, (v * v - u * u) / h};
  };
  const auto ref = oracles::rk4(rhs, {0.2, 1.1, 0.7, -0.3}, 1.5, 20000);
  const auto hp = model_of(ModelKind::half_plane);
  const auto traj = integrate_geodesic(hp, {{0.2, 1.1}, {0.7, -0.3}}, 1.5, 1e-3);
  const auto &end = traj.states.back();
  CHECK(max_abs_diff(end.base, {ref[0], ref[1]}) <= 1e-11);
  CHECK(max_abs_diff(end.vec, {ref[2], ref[3]}) <= 1e-11);
}

TEST_CASE("time grid") {
  const auto flat = model_of(ModelKind::euclidean, 1);
  const auto t = integrate_geodesic(flat, {{0.0}, {1.0}}, 0.25, 0.1);
  CHECK(t.times == std::vector<double>{0.0, 0.1, 0.2, 0.25});
  const auto z = integrate_geodesic(flat, {{0.0}, {1.0}}, 0.0, 0.1);
  CHECK(z.times == std::vector<double>{0.0});
  CHECK_THROWS_AS(integrate_geodesic(flat, {{0.0}, {1.0}}, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate_geodesic(flat, {{0.0}, {1.0}}, -1.0, 0.1), std::invalid_argument);
}

TEST_CASE("leaving the chart is an error") {
  const auto hp = model_of(ModelKind::half_plane);
  // Heading for the boundary never reaches it: y(t) = 0.1 exp(-10 t).
  const auto down = integrate_geodesic(hp, {{0.0, 0.1}, {0.0, -1.0}}, 1.0, 0.01);
  CHECK(down.states.back().base[1] == doctest::Approx(0.1 * std::exp(-10.0)).epsilon(1e-5));
  const auto sphere = model_of(ModelKind::sphere);
  try {
    integrate_geodesic(sphere, {{0.0, 0.0}, {1.0, 0.0}}, 3.14159, 1e-3);
    FAIL("expected LeftDomain");
  } catch (const LeftDomain &e) {
    // x(t) = tan t crosses the guard |x| = 10 at t = atan 10.
    CHECK(e.time() == doctest::Approx(std::atan(10.0)).epsilon(2e-3));
    CHECK(norm2(e.point()) >= 10.0);
  }
  CHECK_THROWS_AS(integrate_geodesic(hp, {{0.0, -1.0}, {1.0, 0.0}}, 1.0), LeftDomain);
}

TEST_CASE("flow property and reversal") {
  const auto sphere = model_of(ModelKind::sphere);
  const TangentVector<double> X{{0.2, -0.1}, {0.3, 0.4}};
  const auto mid = geodesic_flow(sphere, X, 0.3);
  CHECK(max_abs_diff(geo(sphere, mid, 0.4), geo(sphere, X, 0.7)) <= 1e-7);
  CHECK(max_abs_diff(geo(sphere, {X.base, scale(2.0, X.vec)}, 0.5), geo(sphere, X, 1.0)) <= 1e-7);
  CHECK(max_abs_diff(geo(sphere, mid, -0.3), X.base) <= 1e-12);
}

TEST_CASE("flat Jacobi fields are straight") {
  const auto flat = model_of(ModelKind::euclidean, 1);
  const auto traj = integrate_jacobi_flow(flat, {{0.0}, {1.0}, {0.0}, {1.0}}, 1.0, 0.01);
  for (std::size_t k = 0; k < traj.states.size(); ++k)
    CHECK(traj.states[k].J[0] == doctest::Approx(traj.times[k]).epsilon(1e-14));

  const auto flat2 = model_of(ModelKind::euclidean, 2);
  const auto c = classical_jacobi_oracle(flat2, {{0, 0}, {1, 0}}, {1, 2}, {0.5, -1}, 1.0, 0.1);
  CHECK(max_abs_diff(c.states.back().J, {1.5, 1.0}) <= 1e-14);

  const auto v = variation_oracle(
      flat, [](double s) { return TangentVector<double>{{s}, {1.0}}; }, 1.0, 0.01, 1e-4);
  for (const auto &J : v.states)
    CHECK(std::fabs(J[0] - 1.0) <= 1e-10);
  CHECK(v.method == "rk4-central-difference");
}

TEST_CASE("normal Jacobi fields on constant curvature") {
  const auto sphere = model_of(ModelKind::sphere);
  // At the origin the conformal factor is 2: unit vectors have chart length 1/2.
  const auto Ys = jacobi_state_from_covariant(sphere, {{0.3, 0.0}, {0.0, 0.0}}, {0, 0}, {0, 0});
  CHECK(Ys.Jdot == Vec<double>{0, 0});
  const double lambda = 2.0 / (1.0 + 0.09);
  const auto traj = integrate_jacobi_flow(
      sphere,
      jacobi_state_from_covariant(sphere, {{0.3, 0.0}, {0.0, 1.0 / lambda}}, {0, 0},
                                  {1.0 / lambda, 0.0}),
      3.14159, 1e-3);
  for (std::size_t k = 0; k < traj.states.size(); k += 100)
    CHECK(std::fabs(sphere.norm(traj.states[k].x, traj.states[k].J) - std::sin(traj.times[k])) <=
          1e-6);

  const auto hp = model_of(ModelKind::half_plane);
  const auto h = integrate_jacobi_flow(
      hp, jacobi_state_from_covariant(hp, {{0.0, 1.0}, {1.0, 0.0}}, {0, 0}, {0, 1}), 2.0, 1e-3);
  for (std::size_t k = 0; k < h.states.size(); k += 100)
    CHECK(std::fabs(hp.norm(h.states[k].x, h.states[k].J) - std::sinh(h.times[k])) <= 1e-5);
}

TEST_CASE("flow agrees with both oracles on the torsion demo") {
  const auto demo = model_of(ModelKind::torsion_demo, 2, 0.5);
  const TangentVector<double> X0{{0.1, -0.2}, {0.6, 0.3}};
  const Vec<double> J0{0.2, 0.1}, nJ0{-0.3, 0.4};
  const auto Y0 = jacobi_state_from_covariant(demo, X0, J0, nJ0);
  const auto flow = integrate_jacobi_flow(demo, Y0, 2.0, 1e-3);
  const auto classical = classical_jacobi_oracle(demo, X0, J0, nJ0, 2.0, 1e-3);
  const auto variation = variation_oracle(
      demo,
      [&](double s) {
        return TangentVector<double>{add(Y0.x, scale(s, Y0.J)), add(Y0.xi, scale(s, Y0.Jdot))};
      },
      2.0, 1e-3, 1e-4);
  for (std::size_t k = 0; k < flow.states.size(); ++k) {
    CHECK(max_abs_diff(flow.states[k].J, classical.states[k].J) <= 1e-6);
    CHECK(max_abs_diff(covariant_velocity(demo, flow.states[k]), classical.states[k].P) <= 1e-6);
    CHECK(max_abs_diff(flow.states[k].J, variation.states[k]) <= 1e-5);
    CHECK(norm_inf(jacobi_residual(demo, flow.states[k])) <= 1e-12);
  }
  CHECK(norm_inf(jacobi_equation_defect(demo, Y0)) <= 1e-12);
}

TEST_CASE("input validation") {
  const auto flat = model_of(ModelKind::euclidean, 2);
  CHECK_THROWS(integrate_geodesic(flat, {{0.0}, {1.0, 0.0}}, 1.0));
  CHECK_THROWS(jacobi_state_from_covariant(flat, {{0, 0}, {1, 0}}, {0}, {0, 1}));
  CHECK_THROWS_AS(variation_oracle(
                      flat, [](double s) { return TangentVector<double>{{s, 0}, {1, 0}}; }, 1.0,
                      0.1, 0.0),
                  std::invalid_argument);
}
