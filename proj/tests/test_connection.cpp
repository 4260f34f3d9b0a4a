#include <doctest.h>

#include <cmath>

#include "jacobiflow/connection.hpp"
#include "jacobiflow/model_zoo.hpp"
#include "jacobiflow/random.hpp"
#include "oracles.hpp"

using namespace jacobiflow;

namespace {

ManifoldModel model_of(ModelKind kind, int dim = 2, double radius = 1.0, double beta = 1.0) {
  ModelSpec s;
  s.kind = kind;
  s.dim = dim;
  s.radius = radius;
  s.beta = beta;
  return build(s);
}

/// m = 1 with Gamma_y(v, xi) = y v xi.
ManifoldModel cubic_line() {
  ManifoldModel m;
  m.name = "cubic_line";
  m.dim = 1;
  m.christoffel = ChristoffelMap::from_generic([](const auto &y, const auto &v, const auto &xi) {
    using S = typename std::decay_t<decltype(y)>::value_type;
    return Vec<S>{y[0] * v[0] * xi[0]};
  });
  return m;
}

template <class F> VectorField field(F f) { return VectorField::from_generic(f); }

} // namespace

TEST_CASE("connector in flat space and by hand") {
  const auto flat = model_of(ModelKind::euclidean, 2);
  const auto k = connector(flat, TTVector<double>{{1, 2}, {3, 4}, {5, 6}, {7, 8}});
  CHECK(k.base == Vec<double>{1, 2});
  CHECK(k.vec == Vec<double>{7, 8});

  const auto line = cubic_line();
  CHECK(connector(line, TTVector<double>{{2.0}, {3.0}, {5.0}, {7.0}}).vec == Vec<double>{-23.0});
  CHECK(covariant_derivative_along_curve(line, {2.0}, {5.0}, {3.0}, {7.0}) == Vec<double>{-23.0});
  CHECK(covariant_derivative_along_curve(flat, {0, 0}, {1, 2}, {3, 4}, {5, 6}) == Vec<double>{5, 6});
}

TEST_CASE("horizontal lift") {
  const auto flat = model_of(ModelKind::euclidean, 2);
  const auto c = horizontal_lift(flat, {5, 6}, TangentVector<double>{{1, 2}, {3, 4}});
  CHECK(c == TTVector<double>{{1, 2}, {3, 4}, {5, 6}, {0, 0}});

  const auto sphere = model_of(ModelKind::sphere);
  SplitMix64 rng(2);
  for (int k = 0; k < 200; ++k) {
    const TangentVector<double> at{rng.vec(2, -1, 1), rng.vec(2, -1, 1)};
    const auto h = horizontal_lift(sphere, rng.vec(2, -1, 1), at);
    CHECK(norm_inf(connector(sphere, h).vec) == 0.0);
  }
}

TEST_CASE("domain checks") {
  const auto hp = model_of(ModelKind::half_plane);
  CHECK_THROWS_AS(connector(hp, TTVector<double>{{0, -1}, {1, 0}, {1, 0}, {0, 0}}), DomainError);
  CHECK_THROWS_AS(torsion(hp, {0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}), DomainError);
}

TEST_CASE("covariant derivative of fields") {
  const auto flat = model_of(ModelKind::euclidean, 2);
  const Vec<double> v0{0.3, -2.0};
  const auto X = constant_field(v0);
  CHECK(norm_inf(covariant_derivative_field(flat, X, constant_field({4, 5}), {1, 1})) == 0.0);
  const auto identity = field([](const auto &y) { return y; });
  CHECK(covariant_derivative_field(flat, X, identity, {1, 1}) == v0);
}

TEST_CASE("Lie bracket") {
  const auto X = field([](const auto &y) { return y; });
  const auto Y = field([](const auto &y) {
    using S = typename std::decay_t<decltype(y)>::value_type;
    return Vec<S>{y[0] * y[0]};
  });
  CHECK(lie_bracket(X, Y, Vec<double>{2.0}) == Vec<double>{4.0});
  CHECK(lie_bracket_via_flip(X, Y, {2.0}) == Vec<double>{4.0});
  const auto A = constant_field({1, 2}), B = constant_field({-3, 1});
  CHECK(norm_inf(lie_bracket_via_flip(A, B, {0.5, 0.5})) == 0.0);
}

TEST_CASE("Levi-Civita symbols match the conformal formula") {
  SplitMix64 rng(17);
  const auto sphere = model_of(ModelKind::sphere, 3, 2.0);
  const auto hp = model_of(ModelKind::half_plane, 3);
  for (int k = 0; k < 100; ++k) {
    const Vec<double> x = rng.vec(3, -1, 1), v = rng.vec(3, -1, 1), w = rng.vec(3, -1, 1);
    const auto classical = oracles::conformal_christoffel(oracles::sphere_dphi(2.0, x), v, w);
    CHECK(max_abs_diff(sphere.gamma(x, v, w), negate(classical)) < 1e-13);
    Vec<double> y = x;
    y[2] = 0.5 + std::fabs(y[2]);
    const auto hc = oracles::conformal_christoffel(oracles::half_space_dphi(y), v, w);
    CHECK(max_abs_diff(hp.gamma(y, v, w), negate(hc)) < 1e-12);
  }
}

TEST_CASE("curvature agrees with the classical tensor formula") {
  SplitMix64 rng(23);
  for (double R : {1.0, 2.0}) {
    const auto sphere = model_of(ModelKind::sphere, 3, R);
    const oracles::Christoffel classical = [R](const auto &x, const auto &v, const auto &w) {
      return oracles::conformal_christoffel(oracles::sphere_dphi(R, x), v, w);
    };
    for (int k = 0; k < 20; ++k) {
      const Vec<double> x = rng.vec(3, -1, 1), u = rng.vec(3, -1, 1), v = rng.vec(3, -1, 1),
                        w = rng.vec(3, -1, 1);
      const auto ref = oracles::classical_curvature(classical, x, u, v, w);
      CHECK(max_abs_diff(curvature_operator(sphere, x, u, v, w), ref) < 1e-8);
    }
  }
}

TEST_CASE("curvature routes and sectional curvature") {
  const auto sphere = model_of(ModelKind::sphere);
  const auto hp = model_of(ModelKind::half_plane);
  SplitMix64 rng(31);
  for (int k = 0; k < 5; ++k) {
    const Vec<double> x = rng.vec(2, -1, 1), u = rng.vec(2, -1, 1), v = rng.vec(2, -1, 1);
    CHECK(sectional_curvature(sphere, x, u, v) == doctest::Approx(1.0).epsilon(1e-8));
    const Vec<double> y{x[0], 0.5 + std::fabs(x[1])};
    CHECK(sectional_curvature(hp, y, u, v) == doctest::Approx(-1.0).epsilon(1e-8));
  }
  const auto sphere_r2 = model_of(ModelKind::sphere, 2, 2.0);
  CHECK(sectional_curvature(sphere_r2, {0.4, 0.1}, {1, 0}, {0, 1}) ==
        doctest::Approx(0.25).epsilon(1e-10));

  const auto flat = model_of(ModelKind::euclidean, 3);
  CHECK(norm_inf(curvature_operator(flat, {1, 2, 3}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1})) == 0.0);
  CHECK_THROWS_AS(sectional_curvature(cubic_line(), {2.0}, {1.0}, {1.0}), std::logic_error);

  const auto X = field([](const auto &y) {
    using S = typename std::decay_t<decltype(y)>::value_type;
    return Vec<S>{y[1] * y[1], 1.0 + y[0] * y[1]};
  });
  const auto Y = field([](const auto &y) {
    using S = typename std::decay_t<decltype(y)>::value_type;
    return Vec<S>{0.5 * y[0], y[0] - y[1]};
  });
  const auto s = field([](const auto &y) {
    using S = typename std::decay_t<decltype(y)>::value_type;
    return Vec<S>{y[0] * y[0] - y[1], constant<S>(2.0)};
  });
  for (const auto *m : {&sphere, &hp}) {
    const Vec<double> at{0.2, 0.8};
    const auto a = curvature_operator_route(*m, X, Y, s, at);
    const auto b = curvature_commutator_oracle(*m, X, Y, s, at);
    CHECK(max_abs_diff(a, b) < 1e-12);
    // Tensorial: only the values of X, Y, s at the point matter.
    CHECK(max_abs_diff(a, curvature_operator(*m, at, X(at), Y(at), s(at))) < 1e-12);
  }
}

TEST_CASE("torsion") {
  const auto demo = model_of(ModelKind::torsion_demo, 2, 1.0, 1.0);
  CHECK(torsion(demo, {0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}) == Vec<double>{0.0, 2.0});
  const auto half = model_of(ModelKind::torsion_demo, 2, 1.0, 0.5);
  CHECK(torsion(half, {3.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}) == Vec<double>{0.0, 1.0});
  CHECK(demo.gamma(Vec<double>{0, 0}, Vec<double>{1, 0}, Vec<double>{0, 1}) == Vec<double>{0, 1});

  const auto X = field([](const auto &y) {
    using S = typename std::decay_t<decltype(y)>::value_type;
    return Vec<S>{y[0] * y[1], constant<S>(1.0)};
  });
  const auto Y = field([](const auto &y) {
    using S = typename std::decay_t<decltype(y)>::value_type;
    return Vec<S>{y[1] - 1.0, y[0] * y[0]};
  });
  const Vec<double> at{0.3, -0.6};
  CHECK(max_abs_diff(torsion_operator_route(half, X, Y, at), torsion(half, at, X(at), Y(at))) <
        1e-14);
  const auto sphere = model_of(ModelKind::sphere);
  CHECK(norm_inf(torsion(sphere, at, {1.0, 2.0}, {-0.5, 0.25})) < 1e-15);
}

TEST_CASE("Levi-Civita builder rejects indefinite metrics") {
  const auto indefinite = MetricField::from_generic([](const auto &y) {
    using S = typename std::decay_t<decltype(y)>::value_type;
    Matrix<S> g(2);
    g(0, 0) = constant<S>(1.0);
    g(1, 1) = constant<S>(-1.0);
    return g;
  });
  CHECK_THROWS_AS(levi_civita_from_metric(indefinite, 2, {{0.0, 0.0}}), InvalidModel);
  const auto euclid = MetricField::from_generic([](const auto &y) {
    using S = typename std::decay_t<decltype(y)>::value_type;
    Matrix<S> g(2);
    g(0, 0) = constant<S>(1.0);
    g(1, 1) = constant<S>(1.0);
    return g;
  });
  const auto gamma = levi_civita_from_metric(euclid, 2, {{0.0, 0.0}, {1.0, -1.0}});
  CHECK(norm_inf(gamma(Vec<double>{0.3, 0.2}, Vec<double>{1, 2}, Vec<double>{3, 4})) == 0.0);
}
