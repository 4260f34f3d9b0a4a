#include <doctest.h>

#include "jacobiflow/double_tangent.hpp"
#include "jacobiflow/random.hpp"

using namespace jacobiflow;

namespace {

TTVector<double> random_tt(SplitMix64 &rng, std::size_t m) {
  return {rng.vec(m, -2, 2), rng.vec(m, -2, 2), rng.vec(m, -2, 2), rng.vec(m, -2, 2)};
}

} // namespace

TEST_CASE("flip swaps the middle blocks") {
  const TTVector<double> t{{1.0}, {2.0}, {3.0}, {4.0}};
  CHECK(flip(t) == TTVector<double>{{1.0}, {3.0}, {2.0}, {4.0}});
  const TTVector<double> sym{{1.0, 2.0}, {5.0, 6.0}, {5.0, 6.0}, {7.0, 8.0}};
  CHECK(flip(sym) == sym);

  SplitMix64 rng(1);
  for (int k = 0; k < 500; ++k) {
    const auto a = random_tt(rng, 3);
    CHECK(flip(flip(a)) == a);
    CHECK(project_tm(flip(a)) == tangent_project_m(a));
  }
}

TEST_CASE("flip_level2 swaps B and C") {
  const TTTVector<double> z{{{1, 2}, {3, 4}, {5, 6}, {7, 8}}};
  CHECK(flip_level2(z).blocks == TTVector<double>{{1, 2}, {5, 6}, {3, 4}, {7, 8}});
  const TTTVector<double> fixed{{{1, 2}, {3, 4}, {3, 4}, {7, 8}}};
  CHECK(flip_level2(fixed) == fixed);
}

TEST_CASE("vertical lifts") {
  const TangentVector<double> zero{{0.5, -1.0}, {0.0, 0.0}};
  const auto vz = vertical_lift(zero);
  CHECK(vz.xi == Vec<double>{0.0, 0.0});
  CHECK(vz.eta == Vec<double>{0.0, 0.0});
  CHECK(vz.zeta == Vec<double>{0.0, 0.0});

  const TangentVector<double> u{{1.0}, {2.0}}, v{{1.0}, {5.0}};
  CHECK(vertical_lift_big(u, v) == TTVector<double>{{1.0}, {2.0}, {0.0}, {5.0}});
  CHECK_THROWS_AS(vertical_lift_big(u, TangentVector<double>{{1.5}, {5.0}}), BaseMismatch);

  CHECK(vertical_projection({{1.0}, {0.0}, {0.0}, {7.0}}) == TangentVector<double>{{1.0}, {7.0}});
  CHECK(vertical_projection({{1.0}, {3.0}, {0.0}, {5.0}}) == TangentVector<double>{{1.0}, {5.0}});
  CHECK_THROWS_AS(vertical_projection({{1.0}, {0.0}, {2.0}, {5.0}}, 1e-9), NotVertical);
  // Roundoff-sized eta is accepted.
  CHECK(vertical_projection({{1.0}, {0.0}, {1e-14}, {5.0}}).vec == Vec<double>{5.0});
}

TEST_CASE("fiber additions") {
  const TTVector<double> a{{1.0}, {2.0}, {3.0}, {4.0}}, b{{1.0}, {2.0}, {10.0}, {20.0}};
  CHECK(add_over_E(a, b) == TTVector<double>{{1.0}, {2.0}, {13.0}, {24.0}});
  const auto z = scale_over_E(0.0, a);
  CHECK(z.eta == Vec<double>{0.0});
  CHECK(z.zeta == Vec<double>{0.0});
  CHECK_THROWS_AS(add_over_E(a, TTVector<double>{{1.0}, {2.5}, {0.0}, {0.0}}), BaseMismatch);

  const TTVector<double> c{{1.0}, {7.0}, {3.0}, {-1.0}};
  CHECK(add_over_TM(a, c) == TTVector<double>{{1.0}, {9.0}, {3.0}, {3.0}});
  CHECK(flip(add_over_TM(a, c)) == add_over_E(flip(a), flip(c)));
  CHECK(sub_over_E(add_over_E(a, b), b) == a);
  CHECK(scale_over_TM(2.0, a) == TTVector<double>{{1.0}, {4.0}, {3.0}, {8.0}});
}

TEST_CASE("nested and tangent views round-trip") {
  SplitMix64 rng(5);
  for (int k = 0; k < 200; ++k) {
    const auto t = random_tt(rng, 1 + k % 4);
    CHECK(from_nested(to_nested(t)) == t);
    CHECK(from_tangent(to_tangent(t)) == t);
    const TTTVector<double> z{random_tt(rng, 2 * (1 + k % 4))};
    CHECK(lift_tt(seed_tt(z)) == z);
  }
  const auto n = to_nested(TTVector<double>{{1.0}, {2.0}, {3.0}, {4.0}});
  // Outer level is the xi direction, inner level eta.
  CHECK(n[0] == T2{{1.0, 3.0}, {2.0, 4.0}});
}

TEST_CASE("mixed partials of a surface are exchanged by the flip") {
  auto c = [](const T2 &t, const T2 &s) {
    return Vec<T2>{t * s * s, sin(t) + s * t * t};
  };
  const double t0 = 0.7, s0 = -0.4;
  const auto dt_ds = from_nested(c(T2{{t0, 1.0}, {0.0, 0.0}}, T2{{s0, 0.0}, {1.0, 0.0}}));
  const auto ds_dt = from_nested(c(T2{{t0, 0.0}, {1.0, 0.0}}, T2{{s0, 1.0}, {0.0, 0.0}}));
  CHECK(dt_ds == flip(ds_dt));
  // d^2/dsdt of (t s^2, sin t + s t^2) = (2 s, 2 t).
  CHECK(dt_ds.zeta[0] == doctest::Approx(2 * s0));
  CHECK(dt_ds.zeta[1] == doctest::Approx(2 * t0));
}

TEST_CASE("TTf commutes with flip and vertical lift") {
  auto f = [](const auto &y) {
    using S = typename std::decay_t<decltype(y)>::value_type;
    return Vec<S>{y[0] * y[1] + sin(y[0]), exp(y[1]) / (1.0 + y[0] * y[0])};
  };
  SplitMix64 rng(9);
  for (int k = 0; k < 200; ++k) {
    const auto t = random_tt(rng, 2);
    const auto lhs = tt_map(f, flip(t)), rhs = flip(tt_map(f, t));
    CHECK(max_abs_diff(lhs.zeta, rhs.zeta) < 1e-12);
    CHECK(lhs.xi == rhs.xi);
    const TangentVector<double> v{rng.vec(2, -1, 1), rng.vec(2, -1, 1)};
    const auto a = tt_map(f, vertical_lift(v)), b = vertical_lift(tangent_map(f, v));
    CHECK(max_abs_diff(a.zeta, b.zeta) < 1e-12);
    CHECK(norm_inf(a.xi) == 0.0);
    CHECK(norm_inf(a.eta) == 0.0);
  }
}
