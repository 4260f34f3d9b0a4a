#include "jacobiflow/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "jacobiflow/connection.hpp"
#include "jacobiflow/csv.hpp"
#include "jacobiflow/double_tangent.hpp"
#include "jacobiflow/model_zoo.hpp"
#include "jacobiflow/spray_flow.hpp"

namespace jacobiflow {
namespace {

constexpr int kStructuralProbes = 10000;
constexpr int kBracketPairs = 100;
constexpr int kCurvatureProbes = 50;
constexpr int kLinearityProbes = 1000;

// ---------------------------------------------------------------------------
// Error bookkeeping

/// Absolute below 1, relative above.
double scaled_err(const Vec<double> &a, const Vec<double> &b) {
  return max_abs_diff(a, b) / (1.0 + std::fmax(norm_inf(a), norm_inf(b)));
}

double scaled_err(double a, double b) {
  return std::fabs(a - b) / (1.0 + std::fmax(std::fabs(a), std::fabs(b)));
}

double tt_diff(const TTVector<double> &a, const TTVector<double> &b) {
  return std::fmax(std::fmax(max_abs_diff(a.x, b.x), max_abs_diff(a.xi, b.xi)),
                   std::fmax(max_abs_diff(a.eta, b.eta), max_abs_diff(a.zeta, b.zeta)));
}

double tt_scaled_err(const TTVector<double> &a, const TTVector<double> &b) {
  return tt_diff(a, b) / (1.0 + std::fmax(detail::sup_norm(a), detail::sup_norm(b)));
}

std::string fmt(const Vec<double> &v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? ", " : "") + format_double(v[i]);
  return s + "]";
}

std::string fmt(const TTVector<double> &t) {
  return "(" + fmt(t.x) + ", " + fmt(t.xi) + "; " + fmt(t.eta) + ", " + fmt(t.zeta) + ")";
}

class Worst {
public:
  template <class F> void update(double err, F &&detail) {
    if (std::isnan(err))
      err = std::numeric_limits<double>::infinity();
    if (first_ || err > m_.observed) {
      m_.observed = err;
      m_.detail = detail();
      first_ = false;
    }
  }
  Measurement result() const { return m_; }

private:
  Measurement m_;
  bool first_ = true;
};

// ---------------------------------------------------------------------------
// Models and probe generators

struct ZooEntry {
  std::string label;
  ManifoldModel model;
  std::function<Vec<double>(SplitMix64 &)> point;
  bool metric_connection = false;
};

Vec<double> ball_point(SplitMix64 &rng, int m, double radius) {
  Vec<double> p = rng.vec(static_cast<std::size_t>(m), -radius, radius);
  const double n = norm2(p);
  if (n > radius)
    p = scale(radius / n, p);
  return p;
}

const std::vector<ZooEntry> &zoo() {
  static const std::vector<ZooEntry> entries = [] {
    std::vector<ZooEntry> z;
    {
      ModelSpec s;
      s.kind = ModelKind::euclidean;
      s.dim = 3;
      z.push_back({"euclidean3", build(s),
                   [](SplitMix64 &r) { return r.vec(3, -1.0, 1.0); }, true});
    }
    {
      ModelSpec s;
      s.kind = ModelKind::sphere;
      s.dim = 2;
      s.radius = 1.0;
      z.push_back({"sphere", build(s), [](SplitMix64 &r) { return ball_point(r, 2, 1.5); },
                   true});
    }
    {
      ModelSpec s;
      s.kind = ModelKind::sphere;
      s.dim = 3;
      s.radius = 2.0;
      z.push_back({"sphere3_r2", build(s),
                   [](SplitMix64 &r) { return ball_point(r, 3, 3.0); }, true});
    }
    {
      ModelSpec s;
      s.kind = ModelKind::half_plane;
      s.dim = 2;
      z.push_back({"half_plane", build(s),
                   [](SplitMix64 &r) {
                     return Vec<double>{r.uniform(-1.0, 1.0), r.uniform(0.5, 2.0)};
                   },
                   true});
    }
    {
      ModelSpec s;
      s.kind = ModelKind::torsion_demo;
      s.beta = 0.5;
      z.push_back({"torsion_demo", build(s),
                   [](SplitMix64 &r) { return r.vec(2, -1.0, 1.0); }, false});
    }
    return z;
  }();
  return entries;
}

const ZooEntry &zoo_entry(const std::string &label) {
  for (const auto &e : zoo())
    if (e.label == label)
      return e;
  throw std::out_of_range("unknown zoo model " + label);
}

Vec<double> rvec(SplitMix64 &rng, const ManifoldModel &model, double span = 1.0) {
  return rng.vec(static_cast<std::size_t>(model.dim), -span, span);
}

TTVector<double> random_tt(SplitMix64 &rng, std::size_t m, double span = 1.0) {
  return {rng.vec(m, -span, span), rng.vec(m, -span, span), rng.vec(m, -span, span),
          rng.vec(m, -span, span)};
}

TTVector<double> random_tt_at(SplitMix64 &rng, const ZooEntry &e) {
  const auto m = static_cast<std::size_t>(e.model.dim);
  TTVector<double> t = random_tt(rng, m);
  t.x = e.point(rng);
  return t;
}

/// Smooth test maps R^m -> R^m, written against generic scalars.
std::vector<std::pair<std::string, VectorField>> zoo_maps(SplitMix64 &rng, int m) {
  std::vector<std::pair<std::string, VectorField>> maps;
  maps.emplace_back("polynomial",
                    VectorField::from_generic(random_polynomial_field(rng, m, 1.0)));
  maps.emplace_back("trig_exp", VectorField::from_generic([](const auto &y) {
                      using S = typename std::decay_t<decltype(y)>::value_type;
                      const std::size_t n = y.size();
                      Vec<S> r(n);
                      for (std::size_t i = 0; i < n; ++i) {
                        const S &a = y[i];
                        const S &b = y[(i + 1) % n];
                        r[i] = sin(a) * exp(0.5 * b) + cos(a * b);
                      }
                      return r;
                    }));
  maps.emplace_back("rational_sqrt", VectorField::from_generic([](const auto &y) {
                      using S = typename std::decay_t<decltype(y)>::value_type;
                      const std::size_t n = y.size();
                      Vec<S> r(n);
                      for (std::size_t i = 0; i < n; ++i) {
                        const S &a = y[i];
                        const S &b = y[(i + 1) % n];
                        r[i] = a / (1.0 + b * b) + sqrt(1.0 + a * a);
                      }
                      return r;
                    }));
  return maps;
}

// ---------------------------------------------------------------------------
// tangent_numbers

/// f(s, t) built from every kernel primitive.
template <class S> S kernel_probe(const S &s, const S &t) {
  return sin(s * t) * exp(s) / (1.0 + t * t) + sqrt(2.0 + s * s * t) - powi(cos(t - s), 3);
}

Measurement check_leibniz(SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kStructuralProbes; ++k) {
    const T2 a{{rng.uniform(-2, 2), rng.uniform(-2, 2)}, {rng.uniform(-2, 2), rng.uniform(-2, 2)}};
    const T2 b{{rng.uniform(-2, 2), rng.uniform(-2, 2)}, {rng.uniform(-2, 2), rng.uniform(-2, 2)}};
    const T2 p = a * b;
    const T1 expected = a.deriv * b.value + a.value * b.deriv;
    const double err = max_abs_diff(slots(p.deriv), slots(expected));
    w.update(err, [&] { return "a=" + fmt(slots(a)) + " b=" + fmt(slots(b)); });
  }
  return w.result();
}

Measurement check_mixed_partials_symmetric(SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kStructuralProbes; ++k) {
    const double s = rng.uniform(-1, 1), t = rng.uniform(-1, 1);
    // s differentiated at the outer level, t at the inner one, and swapped.
    const T2 st = kernel_probe(T2{{s, 0.0}, {1.0, 0.0}}, T2{{t, 1.0}, {0.0, 0.0}});
    const T2 ts = kernel_probe(T2{{s, 1.0}, {0.0, 0.0}}, T2{{t, 0.0}, {1.0, 0.0}});
    const double err = scaled_err(st.deriv.deriv, ts.deriv.deriv);
    w.update(err, [&] { return "s=" + format_double(s) + " t=" + format_double(t); });
  }
  return w.result();
}

Measurement check_pushforward_linearity(SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kStructuralProbes; ++k) {
    const double s = rng.uniform(-1, 1), t = rng.uniform(-1, 1);
    const Vec<double> d1 = rng.vec(2, -1, 1), d2 = rng.vec(2, -1, 1);
    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
    auto push = [&](const Vec<double> &d) {
      return kernel_probe(T1{s, d[0]}, T1{t, d[1]}).deriv;
    };
    const double lhs = push(add(scale(a, d1), scale(b, d2)));
    const double rhs = a * push(d1) + b * push(d2);
    w.update(scaled_err(lhs, rhs), [&] {
      return "s=" + format_double(s) + " t=" + format_double(t) + " d1=" + fmt(d1) +
             " d2=" + fmt(d2);
    });
  }
  return w.result();
}

Measurement check_finite_differences(SplitMix64 &rng) {
  Worst w;
  const double h = 1e-5;
  for (int k = 0; k < kStructuralProbes; ++k) {
    const double s = rng.uniform(-1, 1), t = rng.uniform(-1, 1);
    const Vec<double> d = rng.vec(2, -1, 1);
    const double ad = kernel_probe(T1{s, d[0]}, T1{t, d[1]}).deriv;
    const double fd = (kernel_probe(s + h * d[0], t + h * d[1]) -
                       kernel_probe(s - h * d[0], t - h * d[1])) /
                      (2.0 * h);
    w.update(std::fabs(ad - fd) / std::fmax(1.0, std::fabs(fd)), [&] {
      return "s=" + format_double(s) + " t=" + format_double(t) + " d=" + fmt(d);
    });
  }
  return w.result();
}

// ---------------------------------------------------------------------------
// double_tangent

Measurement check_flip_involution(SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kStructuralProbes; ++k) {
    const auto t = random_tt(rng, 1 + k % 4, 3.0);
    w.update(tt_diff(flip(flip(t)), t), [&] { return fmt(t); });
    const TTTVector<double> z{random_tt(rng, 2 * (1 + k % 4), 3.0)};
    w.update(tt_diff(flip_level2(flip_level2(z)).blocks, z.blocks),
             [&] { return fmt(z.blocks); });
  }
  return w.result();
}

Measurement check_projection_exchange(SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kStructuralProbes; ++k) {
    const auto t = random_tt(rng, 1 + k % 4, 3.0);
    const auto a = project_tm(flip(t)), b = tangent_project_m(t);
    const auto c = tangent_project_m(flip(t)), d = project_tm(t);
    const double err = std::fmax(std::fmax(max_abs_diff(a.base, b.base), max_abs_diff(a.vec, b.vec)),
                                 std::fmax(max_abs_diff(c.base, d.base), max_abs_diff(c.vec, d.vec)));
    w.update(err, [&] { return fmt(t); });
  }
  return w.result();
}

Measurement check_flip_exchanges_additions(SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kStructuralProbes; ++k) {
    const std::size_t m = 1 + static_cast<std::size_t>(k % 4);
    auto a = random_tt(rng, m, 3.0);
    auto b = random_tt(rng, m, 3.0);
    b.x = a.x;
    b.eta = a.eta; // common Tpi_M base
    const double c = rng.uniform(-3, 3);
    double err = tt_diff(flip(add_over_TM(a, b)), add_over_E(flip(a), flip(b)));
    err = std::fmax(err, tt_diff(flip(scale_over_TM(c, a)), scale_over_E(c, flip(a))));
    w.update(err, [&] { return "a=" + fmt(a) + " b=" + fmt(b); });
  }
  return w.result();
}

Measurement check_vertical_lifts(SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kStructuralProbes; ++k) {
    const std::size_t m = 1 + static_cast<std::size_t>(k % 4);
    const Vec<double> y = rng.vec(m, -3, 3);
    const TangentVector<double> u{y, rng.vec(m, -3, 3)}, v{y, rng.vec(m, -3, 3)};
    double err = max_abs_diff(vertical_projection(vertical_lift_big(u, v)).vec, v.vec);
    const TangentVector<double> zero{y, zeros<double>(m)};
    err = std::fmax(err, tt_diff(vertical_lift_big(zero, v), vertical_lift(v)));
    w.update(err, [&] { return "u=" + fmt(u.vec) + " v=" + fmt(v.vec); });
  }
  return w.result();
}

Measurement check_flip_naturality(SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kStructuralProbes / 10; ++k) {
    const int m = 1 + k % 4;
    for (const auto &[name, f] : zoo_maps(rng, m)) {
      const auto t = random_tt(rng, static_cast<std::size_t>(m));
      const double err = tt_scaled_err(tt_map(f, flip(t)), flip(tt_map(f, t)));
      w.update(err, [&, n = name] { return n + " at " + fmt(t); });
    }
  }
  return w.result();
}

Measurement check_mixed_partial_flip(SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kStructuralProbes; ++k) {
    const std::size_t m = 1 + static_cast<std::size_t>(k % 4);
    const Vec<double> a = rng.vec(m, -2, 2), b = rng.vec(m, -2, 2), c = rng.vec(m, -1, 1),
                      d = rng.vec(m, -1, 1);
    auto curve = [&](const T2 &t, const T2 &s) {
      Vec<T2> out(m);
      for (std::size_t i = 0; i < m; ++i)
        out[i] = sin(a[i] * t + b[i] * s) * exp(c[i] * (t * s)) + d[i] * (t * t * s);
      return out;
    };
    const double t0 = rng.uniform(-1, 1), s0 = rng.uniform(-1, 1);
    // d_t d_s c: s along xi (outer), t along eta (inner).
    const TTVector<double> dt_ds =
        from_nested(curve(T2{{t0, 1.0}, {0.0, 0.0}}, T2{{s0, 0.0}, {1.0, 0.0}}));
    const TTVector<double> ds_dt =
        from_nested(curve(T2{{t0, 0.0}, {1.0, 0.0}}, T2{{s0, 1.0}, {0.0, 0.0}}));
    w.update(tt_scaled_err(dt_ds, flip(ds_dt)),
             [&] { return "t=" + format_double(t0) + " s=" + format_double(s0); });
  }
  return w.result();
}

Measurement check_vertical_lift_naturality(SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kStructuralProbes / 10; ++k) {
    const int m = 1 + k % 4;
    const auto um = static_cast<std::size_t>(m);
    for (const auto &[name, f] : zoo_maps(rng, m)) {
      const TangentVector<double> v{rng.vec(um, -1, 1), rng.vec(um, -1, 1)};
      const double err = tt_scaled_err(tt_map(f, vertical_lift(v)), vertical_lift(tangent_map(f, v)));
      w.update(err, [&, n = name] { return n + " at " + fmt(v.base) + " v=" + fmt(v.vec); });
    }
  }
  return w.result();
}

// ---------------------------------------------------------------------------
// connection

using ModelCheck = Measurement (*)(const ZooEntry &, SplitMix64 &);

Measurement check_christoffel_bilinear(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  const auto &g = e.model;
  for (int k = 0; k < kLinearityProbes; ++k) {
    const Vec<double> y = e.point(rng);
    const Vec<double> v1 = rvec(rng, g), v2 = rvec(rng, g), xi = rvec(rng, g);
    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
    const Vec<double> mix = add(scale(a, v1), scale(b, v2));
    double err = scaled_err(g.gamma(y, mix, xi),
                            add(scale(a, g.gamma(y, v1, xi)), scale(b, g.gamma(y, v2, xi))));
    err = std::fmax(err, scaled_err(g.gamma(y, xi, mix),
                                    add(scale(a, g.gamma(y, xi, v1)), scale(b, g.gamma(y, xi, v2)))));
    w.update(err, [&] { return "y=" + fmt(y) + " v1=" + fmt(v1) + " v2=" + fmt(v2); });
  }
  return w.result();
}

Measurement check_connector_vertical_lift(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kStructuralProbes; ++k) {
    const TangentVector<double> v{e.point(rng), rvec(rng, e.model, 3.0)};
    const auto kv = connector(e.model, vertical_lift(v));
    w.update(std::fmax(max_abs_diff(kv.vec, v.vec), max_abs_diff(kv.base, v.base)),
             [&] { return "y=" + fmt(v.base) + " v=" + fmt(v.vec); });
  }
  return w.result();
}

Measurement check_horizontal_lift_projections(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kStructuralProbes; ++k) {
    const TangentVector<double> at{e.point(rng), rvec(rng, e.model, 3.0)};
    const Vec<double> xi = rvec(rng, e.model, 3.0);
    const auto c = horizontal_lift(e.model, xi, at);
    const auto tp = tangent_project_m(c);
    const auto pe = project_tm(c);
    double err = std::fmax(max_abs_diff(tp.base, at.base), max_abs_diff(tp.vec, xi));
    err = std::fmax(err, std::fmax(max_abs_diff(pe.base, at.base), max_abs_diff(pe.vec, at.vec)));
    w.update(err, [&] { return "at=" + fmt(at.base) + " xi=" + fmt(xi); });
  }
  return w.result();
}

Measurement check_connector_horizontal_lift(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kStructuralProbes; ++k) {
    const TangentVector<double> at{e.point(rng), rvec(rng, e.model, 3.0)};
    const Vec<double> xi = rvec(rng, e.model, 3.0);
    const auto kc = connector(e.model, horizontal_lift(e.model, xi, at));
    w.update(norm_inf(kc.vec), [&] { return "at=" + fmt(at.base) + " xi=" + fmt(xi); });
  }
  return w.result();
}

Measurement check_vl_connector_naturality(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kStructuralProbes; ++k) {
    const auto t = random_tt_at(rng, e);
    const auto lhs = vertical_lift(connector(e.model, t));
    const auto rhs = tangent_connector(e.model, vertical_lift_tt(t));
    w.update(tt_scaled_err(lhs, rhs), [&] { return fmt(t); });
  }
  return w.result();
}

Measurement check_connector_fiber_linear(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kStructuralProbes; ++k) {
    auto a = random_tt_at(rng, e);
    auto b = random_tt_at(rng, e);
    b.x = a.x;
    b.xi = a.xi;
    const double c = rng.uniform(-2, 2);
    const auto ka = connector(e.model, a).vec, kb = connector(e.model, b).vec;
    double err = scaled_err(connector(e.model, add_over_E(a, b)).vec, add(ka, kb));
    err = std::fmax(err, scaled_err(connector(e.model, scale_over_E(c, a)).vec, scale(c, ka)));
    auto d = random_tt_at(rng, e);
    d.x = a.x;
    d.eta = a.eta;
    const auto kd = connector(e.model, d).vec;
    err = std::fmax(err, scaled_err(connector(e.model, add_over_TM(a, d)).vec, add(ka, kd)));
    err = std::fmax(err, scaled_err(connector(e.model, scale_over_TM(c, a)).vec, scale(c, ka)));
    w.update(err, [&] { return "a=" + fmt(a) + " b=" + fmt(b) + " d=" + fmt(d); });
  }
  return w.result();
}

Measurement check_lie_bracket_via_flip(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kBracketPairs; ++k) {
    const auto X = VectorField::from_generic(random_polynomial_field(rng, e.model.dim));
    const auto Y = VectorField::from_generic(random_polynomial_field(rng, e.model.dim));
    const Vec<double> at = e.point(rng);
    const double err = scaled_err(lie_bracket_via_flip(X, Y, at), lie_bracket(X, Y, at));
    w.update(err, [&] { return "at=" + fmt(at) + " probe=" + std::to_string(k); });
  }
  return w.result();
}

Measurement check_covariant_leibniz(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kLinearityProbes; ++k) {
    const auto X = random_polynomial_field(rng, e.model.dim);
    const auto s = random_polynomial_field(rng, e.model.dim);
    const auto h = random_polynomial_function(rng, e.model.dim);
    const Vec<double> at = e.point(rng);
    auto hs = [&](const auto &y) { return scale(h(y), s(y)); };
    auto hX = [&](const auto &y) { return scale(h(y), X(y)); };
    const double dh_x = h(seed(at, X(at))).deriv;
    const Vec<double> nabla_s = covariant_derivative(e.model, X, s, at);
    double err = scaled_err(covariant_derivative(e.model, X, hs, at),
                            add(scale(dh_x, s(at)), scale(h(at), nabla_s)));
    err = std::fmax(err, scaled_err(covariant_derivative(e.model, hX, s, at), scale(h(at), nabla_s)));
    w.update(err, [&] { return "at=" + fmt(at) + " probe=" + std::to_string(k); });
  }
  return w.result();
}

Measurement check_along_curve_matches_field(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kCurvatureProbes; ++k) {
    const auto X = random_polynomial_field(rng, e.model.dim, 0.5);
    const auto s = random_polynomial_field(rng, e.model.dim, 0.5);
    const Vec<double> at = e.point(rng);
    const Vec<double> c_dot = X(at);
    // J(t) = s(at + t c_dot); five-point central difference for J'(0).
    const double h = 1e-3;
    auto J = [&](double t) { return s(add(at, scale(t, c_dot))); };
    const Vec<double> jd =
        scale(1.0 / (12.0 * h), add(sub(J(-2 * h), J(2 * h)), scale(8.0, sub(J(h), J(-h)))));
    const double err =
        scaled_err(covariant_derivative_along_curve(e.model, at, c_dot, s(at), jd),
                   covariant_derivative(e.model, X, s, at));
    w.update(err, [&] { return "at=" + fmt(at); });
  }
  return w.result();
}

Measurement check_curvature_two_routes(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kCurvatureProbes; ++k) {
    const auto X = VectorField::from_generic(random_polynomial_field(rng, e.model.dim, 0.5));
    const auto Y = VectorField::from_generic(random_polynomial_field(rng, e.model.dim, 0.5));
    const auto s = VectorField::from_generic(random_polynomial_field(rng, e.model.dim, 0.5));
    const Vec<double> at = e.point(rng);
    const Vec<double> oracle = curvature_commutator_oracle(e.model, X, Y, s, at);
    double err = scaled_err(curvature_operator_route(e.model, X, Y, s, at), oracle);
    err = std::fmax(err, scaled_err(curvature_operator(e.model, at, X(at), Y(at), s(at)), oracle));
    w.update(err, [&] { return "at=" + fmt(at) + " probe=" + std::to_string(k); });
  }
  return w.result();
}

Measurement check_curvature_antisymmetry(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kLinearityProbes; ++k) {
    const Vec<double> at = e.point(rng);
    const Vec<double> u = rvec(rng, e.model), v = rvec(rng, e.model), z = rvec(rng, e.model);
    const double err = scaled_err(curvature_operator(e.model, at, u, v, z),
                                  negate(curvature_operator(e.model, at, v, u, z)));
    w.update(err, [&] { return "at=" + fmt(at) + " u=" + fmt(u) + " v=" + fmt(v); });
  }
  return w.result();
}

Measurement check_curvature_linear_in_section(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kCurvatureProbes; ++k) {
    const auto X = VectorField::from_generic(random_polynomial_field(rng, e.model.dim, 0.5));
    const auto Y = VectorField::from_generic(random_polynomial_field(rng, e.model.dim, 0.5));
    const auto sp = random_polynomial_field(rng, e.model.dim, 0.5);
    const double lambda = rng.uniform(-3, 3);
    const auto s = VectorField::from_generic(sp);
    const auto ls = VectorField::from_generic([sp, lambda](const auto &y) { return scale(lambda, sp(y)); });
    const Vec<double> at = e.point(rng);
    const double err = scaled_err(curvature_commutator_oracle(e.model, X, Y, ls, at),
                                  scale(lambda, curvature_commutator_oracle(e.model, X, Y, s, at)));
    w.update(err, [&] { return "at=" + fmt(at) + " lambda=" + format_double(lambda); });
  }
  return w.result();
}

Measurement check_torsion_two_routes(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kLinearityProbes; ++k) {
    const auto X = VectorField::from_generic(random_polynomial_field(rng, e.model.dim));
    const auto Y = VectorField::from_generic(random_polynomial_field(rng, e.model.dim));
    const Vec<double> at = e.point(rng);
    const double err = scaled_err(torsion_operator_route(e.model, X, Y, at),
                                  torsion(e.model, at, X(at), Y(at)));
    w.update(err, [&] { return "at=" + fmt(at) + " probe=" + std::to_string(k); });
  }
  return w.result();
}

Measurement check_torsion_antisymmetry(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kLinearityProbes; ++k) {
    const Vec<double> at = e.point(rng);
    const Vec<double> u = rvec(rng, e.model), v = rvec(rng, e.model);
    const double err =
        max_abs_diff(torsion(e.model, at, u, v), negate(torsion(e.model, at, v, u)));
    w.update(err, [&] { return "at=" + fmt(at) + " u=" + fmt(u) + " v=" + fmt(v); });
  }
  return w.result();
}

Measurement check_levi_civita_torsion_free(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kLinearityProbes; ++k) {
    const Vec<double> at = e.point(rng);
    const Vec<double> u = rvec(rng, e.model), v = rvec(rng, e.model);
    const Vec<double> tor = torsion(e.model, at, u, v);
    w.update(norm_inf(tor) / (1.0 + norm_inf(e.model.gamma(at, u, v))),
             [&] { return "at=" + fmt(at) + " u=" + fmt(u) + " v=" + fmt(v); });
  }
  return w.result();
}

/// Constant-curvature models: sectional curvature equals 1/R^2, -1 or 0.
Measurement check_sectional_curvature(const ZooEntry &e, double expected, SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kCurvatureProbes; ++k) {
    const Vec<double> at = e.point(rng);
    Vec<double> u = rvec(rng, e.model), v = rvec(rng, e.model);
    const double kappa = sectional_curvature(e.model, at, u, v);
    w.update(std::fabs(kappa - expected),
             [&] { return "at=" + fmt(at) + " u=" + fmt(u) + " v=" + fmt(v); });
  }
  return w.result();
}

Measurement check_flat_vanishing(SplitMix64 &rng) {
  Worst w;
  ModelSpec s;
  s.kind = ModelKind::torsion_demo;
  s.beta = 0.0;
  const ManifoldModel flat_torsion = build(s);
  const ManifoldModel &euclid = zoo_entry("euclidean3").model;
  for (int k = 0; k < kLinearityProbes; ++k) {
    for (const ManifoldModel *model : {&euclid, &flat_torsion}) {
      const Vec<double> at = rvec(rng, *model, 2.0);
      const Vec<double> u = rvec(rng, *model), v = rvec(rng, *model), z = rvec(rng, *model);
      const double err = std::fmax(norm_inf(curvature_operator(*model, at, u, v, z)),
                                   norm_inf(torsion(*model, at, u, v)));
      w.update(err, [&] { return model->name + " at=" + fmt(at); });
    }
  }
  return w.result();
}

// ---------------------------------------------------------------------------
// spray_flow

struct FlowCase {
  TangentVector<double> X0;
  Vec<double> J0;
  Vec<double> nablaJ0;
};

std::string fmt(const FlowCase &c) {
  return "x0=" + fmt(c.X0.base) + " v0=" + fmt(c.X0.vec) + " J0=" + fmt(c.J0) +
         " nablaJ0=" + fmt(c.nablaJ0);
}

/// Initial data whose geodesic stays well inside the chart over [0, 2].
FlowCase random_flow_case(const ZooEntry &e, SplitMix64 &rng) {
  const auto m = static_cast<std::size_t>(e.model.dim);
  FlowCase c;
  if (e.label == "half_plane") {
    c.X0.base = {rng.uniform(-0.5, 0.5), rng.uniform(0.8, 1.5)};
  } else {
    c.X0.base = rng.vec(m, -0.5, 0.5);
  }
  c.X0.vec = rng.vec(m, -0.5, 0.5);
  c.J0 = rng.vec(m, -0.5, 0.5);
  c.nablaJ0 = rng.vec(m, -0.5, 0.5);
  return c;
}

constexpr double kJacobiHorizon = 2.0;
constexpr double kJacobiStep = 1e-3;
constexpr double kVariationEps = 1e-4;

Measurement check_spray_projections(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kStructuralProbes; ++k) {
    const TangentVector<double> X{e.point(rng), rvec(rng, e.model, 3.0)};
    const auto s = spray(e.model, X);
    const auto a = project_tm(s), b = tangent_project_m(s);
    const double err = std::fmax(std::fmax(max_abs_diff(a.base, X.base), max_abs_diff(a.vec, X.vec)),
                                 std::fmax(max_abs_diff(b.base, X.base), max_abs_diff(b.vec, X.vec)));
    w.update(err, [&] { return "X=" + fmt(X.base) + " " + fmt(X.vec); });
  }
  return w.result();
}

Measurement check_connector_spray(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kStructuralProbes; ++k) {
    const TangentVector<double> X{e.point(rng), rvec(rng, e.model, 3.0)};
    w.update(norm_inf(connector(e.model, spray(e.model, X)).vec),
             [&] { return "X=" + fmt(X.base) + " " + fmt(X.vec); });
  }
  return w.result();
}

Measurement check_spray_quadratic(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kStructuralProbes; ++k) {
    const TangentVector<double> X{e.point(rng), rvec(rng, e.model, 2.0)};
    const double t = rng.uniform(-3, 3);
    const auto lhs = spray(e.model, TangentVector<double>{X.base, scale(t, X.vec)});
    // T(m_t) o m_t^{TTM} o S: scale (eta, zeta), then (xi, zeta).
    const auto rhs = scale_over_TM(t, scale_over_E(t, spray(e.model, X)));
    w.update(tt_scaled_err(lhs, rhs), [&] { return "X=" + fmt(X.vec) + " t=" + format_double(t); });
  }
  return w.result();
}

Measurement check_geodesic_homogeneity(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < 5; ++k) {
    const auto c = random_flow_case(e, rng);
    const double err = max_abs_diff(geo(e.model, {c.X0.base, scale(2.0, c.X0.vec)}, 0.5),
                                    geo(e.model, c.X0, 1.0));
    const double err0 = max_abs_diff(geo(e.model, c.X0, 0.0), c.X0.base);
    w.update(std::fmax(err, err0), [&] { return fmt(c); });
  }
  return w.result();
}

Measurement check_geodesic_flow_property(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < 5; ++k) {
    const auto c = random_flow_case(e, rng);
    const auto mid = geodesic_flow(e.model, c.X0, 0.3);
    double err = max_abs_diff(geo(e.model, mid, 0.4), geo(e.model, c.X0, 0.7));
    // Reversal: flowing back from the midpoint returns to the start.
    err = std::fmax(err, max_abs_diff(geo(e.model, mid, -0.3), c.X0.base));
    w.update(err, [&] { return fmt(c); });
  }
  return w.result();
}

Measurement check_geodesic_energy(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < 3; ++k) {
    const auto c = random_flow_case(e, rng);
    const auto traj = integrate_geodesic(e.model, c.X0, 3.0, kJacobiStep);
    const double e0 = e.model.inner(c.X0.base, c.X0.vec, c.X0.vec);
    for (const auto &s : traj.states)
      w.update(std::fabs(e.model.inner(s.base, s.vec, s.vec) - e0), [&] { return fmt(c); });
  }
  return w.result();
}

Measurement check_jacobi_subsystem_bitwise(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  const auto c = random_flow_case(e, rng);
  const auto Y0 = jacobi_state_from_covariant(e.model, c.X0, c.J0, c.nablaJ0);
  const auto flow = integrate_jacobi_flow(e.model, Y0, kJacobiHorizon, kJacobiStep);
  const auto geod = integrate_geodesic(e.model, c.X0, kJacobiHorizon, kJacobiStep);
  for (std::size_t k = 0; k < flow.states.size(); ++k) {
    const bool same = flow.states[k].x == geod.states[k].base && flow.states[k].xi == geod.states[k].vec;
    w.update(same ? 0.0 : std::fmax(max_abs_diff(flow.states[k].x, geod.states[k].base), 1e-300),
             [&] { return fmt(c) + " t=" + format_double(flow.times[k]); });
  }
  return w.result();
}

Measurement check_jacobi_field_blocks(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kStructuralProbes / 10; ++k) {
    const JacobiState Y{e.point(rng), rvec(rng, e.model), rvec(rng, e.model), rvec(rng, e.model)};
    const JacobiState d = jacobi_field_vector(e.model, Y);
    const auto s = spray(e.model, TangentVector<double>{Y.x, Y.xi});
    double err = std::fmax(max_abs_diff(d.x, s.eta), max_abs_diff(d.xi, s.zeta));
    err = std::fmax(err, max_abs_diff(d.J, Y.Jdot));
    // Reparametrization variation: (J, Jdot) = (xi, Gamma(xi, xi)) reproduces
    // the base derivatives one level up.
    const JacobiState R{Y.x, Y.xi, Y.xi, s.zeta};
    const JacobiState dr = jacobi_field_vector(e.model, R);
    const auto s_dot = tangent_map([&](const auto &z) {
      using S = typename std::decay_t<decltype(z)>::value_type;
      const std::size_t m = z.size() / 2;
      const Vec<S> x = slice(z, 0, m), xi = slice(z, m, m);
      return e.model.gamma(x, xi, xi);
    }, TangentVector<double>{concat(Y.x, Y.xi), concat(Y.xi, s.zeta)});
    err = std::fmax(err, scaled_err(dr.Jdot, s_dot.vec));
    w.update(err, [&] { return fmt(Y.as_tt()); });
  }
  return w.result();
}

Measurement check_jacobi_residual(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kStructuralProbes / 10; ++k) {
    const JacobiState Y{e.point(rng), rvec(rng, e.model), rvec(rng, e.model), rvec(rng, e.model)};
    w.update(norm_inf(jacobi_residual(e.model, Y)), [&] { return fmt(Y.as_tt()); });
  }
  const auto c = random_flow_case(e, rng);
  const auto flow = integrate_jacobi_flow(
      e.model, jacobi_state_from_covariant(e.model, c.X0, c.J0, c.nablaJ0), kJacobiHorizon,
      kJacobiStep);
  for (std::size_t k = 0; k < flow.states.size(); ++k)
    w.update(norm_inf(jacobi_residual(e.model, flow.states[k])),
             [&] { return fmt(c) + " t=" + format_double(flow.times[k]); });
  return w.result();
}

Measurement check_jacobi_equation_defect(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  for (int k = 0; k < kStructuralProbes / 10; ++k) {
    const JacobiState Y{e.point(rng), rvec(rng, e.model), rvec(rng, e.model), rvec(rng, e.model)};
    const Vec<double> d = jacobi_equation_defect(e.model, Y);
    const double scale_ref = 1.0 + norm_inf(jacobi_field_vector(e.model, Y).Jdot);
    w.update(norm_inf(d) / scale_ref, [&] { return fmt(Y.as_tt()); });
  }
  return w.result();
}

Measurement check_jacobi_vs_classical(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  const auto c = random_flow_case(e, rng);
  const auto flow = integrate_jacobi_flow(
      e.model, jacobi_state_from_covariant(e.model, c.X0, c.J0, c.nablaJ0), kJacobiHorizon,
      kJacobiStep);
  const auto oracle =
      classical_jacobi_oracle(e.model, c.X0, c.J0, c.nablaJ0, kJacobiHorizon, kJacobiStep);
  for (std::size_t k = 0; k < flow.states.size(); ++k)
    w.update(max_abs_diff(flow.states[k].J, oracle.states[k].J),
             [&] { return fmt(c) + " t=" + format_double(flow.times[k]); });
  return w.result();
}

Measurement check_covariant_velocity_vs_classical(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  const auto c = random_flow_case(e, rng);
  const auto flow = integrate_jacobi_flow(
      e.model, jacobi_state_from_covariant(e.model, c.X0, c.J0, c.nablaJ0), kJacobiHorizon,
      kJacobiStep);
  const auto oracle =
      classical_jacobi_oracle(e.model, c.X0, c.J0, c.nablaJ0, kJacobiHorizon, kJacobiStep);
  for (std::size_t k = 0; k < flow.states.size(); ++k) {
    const auto &s = flow.states[k];
    // Projections of the flow line: pi_TM Y = (c, c'), T pi_M Y = (c, J).
    double err = std::fmax(max_abs_diff(project_tm(s.as_tt()).vec, oracle.states[k].xi),
                           max_abs_diff(tangent_project_m(s.as_tt()).vec, oracle.states[k].J));
    err = std::fmax(err, max_abs_diff(covariant_velocity(e.model, s), oracle.states[k].P));
    w.update(err, [&] { return fmt(c) + " t=" + format_double(flow.times[k]); });
  }
  return w.result();
}

Measurement check_jacobi_vs_variation(const ZooEntry &e, SplitMix64 &rng) {
  Worst w;
  const auto c = random_flow_case(e, rng);
  const JacobiState Y0 = jacobi_state_from_covariant(e.model, c.X0, c.J0, c.nablaJ0);
  const auto flow = integrate_jacobi_flow(e.model, Y0, kJacobiHorizon, kJacobiStep);
  auto X_of_s = [&Y0](double s) {
    return TangentVector<double>{add(Y0.x, scale(s, Y0.J)), add(Y0.xi, scale(s, Y0.Jdot))};
  };
  const auto oracle = variation_oracle(e.model, X_of_s, kJacobiHorizon, kJacobiStep, kVariationEps);
  for (std::size_t k = 0; k < flow.states.size(); ++k)
    w.update(max_abs_diff(flow.states[k].J, oracle.states[k]),
             [&] { return fmt(c) + " t=" + format_double(flow.times[k]); });
  return w.result();
}

/// |J(t)|_g against a closed form for a unit-speed geodesic and a unit
/// normal initial covariant derivative, J(0) = 0.
Measurement closed_form_norm(const ManifoldModel &model, const Vec<double> &x0, double angle,
                             double t_max, double (*closed)(double)) {
  Worst w;
  const double lambda = std::sqrt((*model.metric)(x0)(0, 0)); // conformal factor sqrt
  const Vec<double> u{std::cos(angle) / lambda, std::sin(angle) / lambda};
  const Vec<double> n{-std::sin(angle) / lambda, std::cos(angle) / lambda};
  const auto Y0 = jacobi_state_from_covariant(model, {x0, u}, {0.0, 0.0}, n);
  const auto flow = integrate_jacobi_flow(model, Y0, t_max, kJacobiStep);
  for (std::size_t k = 0; k < flow.states.size(); ++k) {
    const auto &s = flow.states[k];
    w.update(std::fabs(model.norm(s.x, s.J) - closed(flow.times[k])), [&] {
      return "x0=" + fmt(x0) + " angle=" + format_double(angle) +
             " t=" + format_double(flow.times[k]);
    });
  }
  return w.result();
}

double sine(double t) { return std::sin(t); }
double hyperbolic_sine(double t) { return std::sinh(t); }

Measurement check_sphere_sine(SplitMix64 &rng) {
  const auto &e = zoo_entry("sphere");
  Worst w;
  for (int k = 0; k < 3; ++k) {
    // Half a great circle ends at the antipode -x0 / |x0|^2. Starting tangent
    // to |x| = |x0| with |x0| >= 0.3 keeps the whole arc within |x| <= 1 / 0.3.
    const double rho = rng.uniform(0.3, 0.6), phi = rng.uniform(0.0, 6.283185307179586);
    const Vec<double> x0{rho * std::cos(phi), rho * std::sin(phi)};
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    const double angle = phi + sign * 1.5707963267948966;
    const auto r = closed_form_norm(e.model, x0, angle, 3.141592653589793, sine);
    w.update(r.observed, [&] { return r.detail; });
  }
  return w.result();
}

Measurement check_half_plane_sinh(SplitMix64 &rng) {
  const auto &e = zoo_entry("half_plane");
  Worst w;
  for (int k = 0; k < 3; ++k) {
    const Vec<double> x0 = k == 0 ? Vec<double>{0.0, 1.0}
                                  : Vec<double>{rng.uniform(-0.5, 0.5), rng.uniform(0.8, 1.5)};
    const double angle = k == 0 ? 0.0 : rng.uniform(0.0, 6.283185307179586);
    const auto r = closed_form_norm(e.model, x0, angle, 2.0, hyperbolic_sine);
    w.update(r.observed, [&] { return r.detail; });
  }
  return w.result();
}

Measurement check_flat_jacobi_exact(SplitMix64 &rng) {
  const auto &e = zoo_entry("euclidean3");
  Worst w;
  for (int k = 0; k < 5; ++k) {
    const auto c = random_flow_case(e, rng);
    const auto flow = integrate_jacobi_flow(
        e.model, jacobi_state_from_covariant(e.model, c.X0, c.J0, c.nablaJ0), 1.0, 0.01);
    for (std::size_t i = 0; i < flow.states.size(); ++i) {
      const Vec<double> exact = add(c.J0, scale(flow.times[i], c.nablaJ0));
      w.update(scaled_err(flow.states[i].J, exact), [&] { return fmt(c); });
    }
  }
  return w.result();
}

/// Endpoint error of the unit-speed half-plane geodesic through (0, 1),
/// x(t) = tanh t, y(t) = sech t.
double semicircle_endpoint_error(double h) {
  const auto &e = zoo_entry("half_plane");
  const double T = 2.0;
  const auto traj = integrate_geodesic(e.model, {{0.0, 1.0}, {1.0, 0.0}}, T, h);
  return max_abs_diff(traj.states.back().base, {std::tanh(T), 1.0 / std::cosh(T)});
}

Measurement check_rk4_convergence(SplitMix64 &) {
  Measurement m;
  m.observed = std::numeric_limits<double>::infinity();
  double prev = semicircle_endpoint_error(0.1);
  std::string trail = "h=0.1 err=" + format_double(prev);
  for (double h : {0.05, 0.025, 0.0125}) {
    const double err = semicircle_endpoint_error(h);
    m.observed = std::fmin(m.observed, prev / err);
    trail += "; h=" + format_double(h) + " err=" + format_double(err);
    prev = err;
  }
  m.detail = trail;
  return m;
}

Measurement check_variation_convergence(SplitMix64 &rng) {
  const auto &e = zoo_entry("sphere");
  const auto c = random_flow_case(e, rng);
  const JacobiState Y0 = jacobi_state_from_covariant(e.model, c.X0, c.J0, c.nablaJ0);
  const auto flow = integrate_jacobi_flow(e.model, Y0, kJacobiHorizon, kJacobiStep);
  auto X_of_s = [&Y0](double s) {
    return TangentVector<double>{add(Y0.x, scale(s, Y0.J)), add(Y0.xi, scale(s, Y0.Jdot))};
  };
  auto mismatch = [&](double eps) {
    const auto oracle = variation_oracle(e.model, X_of_s, kJacobiHorizon, kJacobiStep, eps);
    double err = 0.0;
    for (std::size_t k = 0; k < flow.states.size(); ++k)
      err = std::fmax(err, max_abs_diff(flow.states[k].J, oracle.states[k]));
    return err;
  };
  Measurement m;
  double prev = mismatch(0.04);
  m.detail = fmt(c) + " eps=0.04 err=" + format_double(prev);
  for (double eps : {0.02, 0.01, 0.005}) {
    const double err = mismatch(eps);
    m.detail += "; eps=" + format_double(eps) + " err=" + format_double(err);
    if (err > 1e-9)
      m.observed = std::fmax(m.observed, std::fabs(prev / err - 4.0));
    prev = err;
  }
  return m;
}

// ---------------------------------------------------------------------------
// model_zoo

Measurement check_sphere_conformal_oracle(SplitMix64 &rng) {
  // Gaussian curvature of g = exp(2 phi) delta in 2D: K = -exp(-2 phi) laplace(phi),
  // with the Laplacian by central differences of phi = log(sqrt(g11)).
  Worst w;
  for (const char *label : {"sphere", "half_plane"}) {
    const auto &e = zoo_entry(label);
    for (int k = 0; k < 5; ++k) {
      const Vec<double> at = e.point(rng);
      auto phi = [&](double x, double y) {
        return 0.5 * std::log((*e.model.metric)(Vec<double>{x, y})(0, 0));
      };
      const double h = 1e-4;
      const double lap = (phi(at[0] + h, at[1]) + phi(at[0] - h, at[1]) + phi(at[0], at[1] + h) +
                          phi(at[0], at[1] - h) - 4.0 * phi(at[0], at[1])) /
                         (h * h);
      const double k_oracle = -std::exp(-2.0 * phi(at[0], at[1])) * lap;
      const double k_model = sectional_curvature(e.model, at, {1.0, 0.0}, {0.0, 1.0});
      w.update(std::fabs(k_model - k_oracle),
               [&] { return std::string(label) + " at=" + fmt(at); });
    }
  }
  return w.result();
}

Measurement check_torsion_demo_value(SplitMix64 &) {
  ModelSpec s;
  s.kind = ModelKind::torsion_demo;
  s.beta = 1.0;
  const auto model = build(s);
  Measurement m;
  const Vec<double> tor = torsion(model, {0.3, -0.7}, {1.0, 0.0}, {0.0, 1.0});
  m.observed = max_abs_diff(tor, {0.0, 2.0});
  m.detail = "Tor(e1, e2) = " + fmt(tor);
  return m;
}

Measurement check_half_plane_unit_circle(SplitMix64 &) {
  const auto &e = zoo_entry("half_plane");
  const auto traj = integrate_geodesic(e.model, {{0.0, 1.0}, {1.0, 0.0}}, 1.0, kJacobiStep);
  Worst w;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const auto &p = traj.states[k].base;
    w.update(std::fabs(std::hypot(p[0], p[1]) - 1.0),
             [&] { return "t=" + format_double(traj.times[k]) + " x=" + fmt(p); });
  }
  return w.result();
}

// ---------------------------------------------------------------------------
// Registry

std::vector<Check> build_registry() {
  std::vector<Check> r;
  auto add_check = [&r](std::string suite, std::string name, double tol,
                        std::function<Measurement(SplitMix64 &)> fn,
                        Bound bound = Bound::at_most) {
    r.push_back({std::move(suite), std::move(name), tol, bound, std::move(fn)});
  };
  auto per_model = [&](const std::string &suite, const std::string &name, double tol,
                       ModelCheck fn, const std::vector<std::string> &labels) {
    for (const auto &label : labels)
      add_check(suite, name + "[" + label + "]", tol,
                [fn, label](SplitMix64 &rng) { return fn(zoo_entry(label), rng); });
  };
  const std::vector<std::string> all_models{"euclidean3", "sphere", "sphere3_r2", "half_plane",
                                            "torsion_demo"};
  const std::vector<std::string> metric_models{"euclidean3", "sphere", "sphere3_r2",
                                               "half_plane"};
  const std::vector<std::string> curved{"sphere", "half_plane", "torsion_demo"};

  add_check("tangent_numbers", "leibniz_rule", 0.0, check_leibniz);
  add_check("tangent_numbers", "mixed_partials_symmetric", 1e-13, check_mixed_partials_symmetric);
  add_check("tangent_numbers", "pushforward_linearity", 1e-13, check_pushforward_linearity);
  add_check("tangent_numbers", "finite_difference_agreement", 1e-8, check_finite_differences);

  add_check("double_tangent", "flip_involution", 0.0, check_flip_involution);
  add_check("double_tangent", "projection_exchange", 0.0, check_projection_exchange);
  add_check("double_tangent", "flip_exchanges_additions", 0.0, check_flip_exchanges_additions);
  add_check("double_tangent", "vertical_lifts", 0.0, check_vertical_lifts);
  add_check("double_tangent", "flip_naturality", 1e-12, check_flip_naturality);
  add_check("double_tangent", "mixed_partial_flip", 1e-12, check_mixed_partial_flip);
  add_check("double_tangent", "vertical_lift_naturality", 1e-12, check_vertical_lift_naturality);

  per_model("connection", "christoffel_bilinear", 1e-12, check_christoffel_bilinear, all_models);
  per_model("connection", "connector_vertical_lift", 1e-13, check_connector_vertical_lift, all_models);
  per_model("connection", "horizontal_lift_projections", 0.0, check_horizontal_lift_projections,
            all_models);
  per_model("connection", "connector_horizontal_lift", 1e-12, check_connector_horizontal_lift,
            all_models);
  per_model("connection", "vl_connector_naturality", 1e-12, check_vl_connector_naturality,
            all_models);
  per_model("connection", "connector_fiber_linear", 1e-12, check_connector_fiber_linear, all_models);
  per_model("connection", "lie_bracket_via_flip", 1e-12, check_lie_bracket_via_flip, all_models);
  per_model("connection", "covariant_derivative_linearity", 1e-12, check_covariant_leibniz,
            all_models);
  per_model("connection", "along_curve_matches_field", 1e-10, check_along_curve_matches_field,
            all_models);
  per_model("connection", "curvature_two_routes", 1e-9, check_curvature_two_routes, all_models);
  per_model("connection", "curvature_antisymmetry", 1e-10, check_curvature_antisymmetry, all_models);
  per_model("connection", "curvature_linear_in_section", 1e-11,
            check_curvature_linear_in_section, curved);
  per_model("connection", "torsion_two_routes", 1e-12, check_torsion_two_routes, all_models);
  per_model("connection", "torsion_antisymmetry", 0.0, check_torsion_antisymmetry, all_models);
  per_model("connection", "levi_civita_torsion_free", 1e-12, check_levi_civita_torsion_free,
            metric_models);
  add_check("connection", "flat_models_vanish", 0.0, check_flat_vanishing);
  add_check("connection", "sectional_curvature[sphere]", 1e-8, [](SplitMix64 &rng) {
    return check_sectional_curvature(zoo_entry("sphere"), 1.0, rng);
  });
  add_check("connection", "sectional_curvature[sphere3_r2]", 1e-8, [](SplitMix64 &rng) {
    return check_sectional_curvature(zoo_entry("sphere3_r2"), 0.25, rng);
  });
  add_check("connection", "sectional_curvature[half_plane]", 1e-8, [](SplitMix64 &rng) {
    return check_sectional_curvature(zoo_entry("half_plane"), -1.0, rng);
  });

  per_model("spray_flow", "spray_projections", 0.0, check_spray_projections, all_models);
  per_model("spray_flow", "connector_spray", 1e-12, check_connector_spray, all_models);
  per_model("spray_flow", "spray_quadratic", 1e-12, check_spray_quadratic, all_models);
  per_model("spray_flow", "geodesic_homogeneity", 1e-7, check_geodesic_homogeneity, all_models);
  per_model("spray_flow", "geodesic_flow_property", 1e-7, check_geodesic_flow_property, all_models);
  per_model("spray_flow", "geodesic_energy", 1e-8, check_geodesic_energy, metric_models);
  per_model("spray_flow", "jacobi_field_blocks", 1e-12, check_jacobi_field_blocks, all_models);
  per_model("spray_flow", "jacobi_subsystem_bitwise", 0.0, check_jacobi_subsystem_bitwise, curved);
  per_model("spray_flow", "jacobi_residual", 1e-12, check_jacobi_residual, all_models);
  per_model("spray_flow", "jacobi_equation_defect", 1e-10, check_jacobi_equation_defect, all_models);
  per_model("spray_flow", "jacobi_vs_variation", 1e-5, check_jacobi_vs_variation, curved);
  per_model("spray_flow", "jacobi_vs_classical", 1e-6, check_jacobi_vs_classical, curved);
  per_model("spray_flow", "covariant_velocity_vs_classical", 1e-6,
            check_covariant_velocity_vs_classical, curved);
  add_check("spray_flow", "jacobi_sphere_sine", 1e-6, check_sphere_sine);
  add_check("spray_flow", "jacobi_half_plane_sinh", 1e-5, check_half_plane_sinh);
  add_check("spray_flow", "jacobi_flat_exact", 1e-12, check_flat_jacobi_exact);
  add_check("spray_flow", "rk4_convergence", 14.0, check_rk4_convergence, Bound::at_least);
  add_check("spray_flow", "variation_convergence", 0.5, check_variation_convergence);

  add_check("model_zoo", "conformal_curvature_oracle", 1e-5, check_sphere_conformal_oracle);
  add_check("model_zoo", "torsion_demo_value", 0.0, check_torsion_demo_value);
  add_check("model_zoo", "half_plane_unit_circle", 1e-6, check_half_plane_unit_circle);
  return r;
}

CheckResult execute(const Check &check, std::size_t index, const VerifyOptions &options) {
  CheckResult res;
  res.suite = check.suite;
  res.name = check.name;
  res.bound = check.bound;
  res.tolerance = check.tolerance;
  const auto bracket = check.name.find('[');
  if (bracket != std::string::npos) {
    if (auto it = options.tolerance_overrides.find(check.name.substr(0, bracket));
        it != options.tolerance_overrides.end())
      res.tolerance = it->second;
  }
  if (auto it = options.tolerance_overrides.find(check.name);
      it != options.tolerance_overrides.end())
    res.tolerance = it->second;
  if (auto it = options.tolerance_overrides.find(check.id());
      it != options.tolerance_overrides.end())
    res.tolerance = it->second;

  SplitMix64 rng = SplitMix64(options.seed).fork(index);
  try {
    const Measurement m = check.run(rng);
    res.observed = m.observed;
    res.detail = m.detail;
    res.passed = check.bound == Bound::at_most ? m.observed <= res.tolerance
                                               : m.observed >= res.tolerance;
  } catch (const std::exception &ex) {
    res.error = ex.what();
    res.passed = false;
  }
  return res;
}

VerifyReport run_indices(const std::vector<std::size_t> &indices, const VerifyOptions &options) {
  const auto &reg = check_registry();
  VerifyReport report;
  report.seed = options.seed;
  report.results.resize(indices.size());
  const int workers = std::max(1, std::min<int>(options.parallel, static_cast<int>(indices.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < indices.size(); i = next++)
      report.results[i] = execute(reg[indices[i]], indices[i], options);
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < workers; ++k)
      pool.emplace_back(worker);
    for (auto &t : pool)
      t.join();
  }
  return report;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", x);
  return buf;
}

} // namespace

const std::vector<std::string> &suite_names() {
  static const std::vector<std::string> names{"tangent_numbers", "double_tangent", "connection",
                                              "spray_flow", "model_zoo"};
  return names;
}

const std::vector<Check> &check_registry() {
  static const std::vector<Check> registry = build_registry();
  return registry;
}

const Check &find_check(const std::string &id) {
  for (const auto &c : check_registry())
    if (c.id() == id)
      return c;
  throw std::out_of_range("unknown check '" + id + "'");
}

VerifyReport run_verify(const std::string &suite, const VerifyOptions &options) {
  const auto &names = suite_names();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
    throw std::invalid_argument("unknown suite '" + suite + "'");
  std::vector<std::size_t> indices;
  const auto &reg = check_registry();
  for (std::size_t i = 0; i < reg.size(); ++i)
    if (suite == "all" || reg[i].suite == suite)
      indices.push_back(i);
  return run_indices(indices, options);
}

VerifyReport run_checks(const std::vector<std::string> &ids, const VerifyOptions &options) {
  const auto &reg = check_registry();
  std::vector<std::size_t> indices;
  for (const auto &id : ids) {
    const Check &c = find_check(id);
    indices.push_back(static_cast<std::size_t>(&c - reg.data()));
  }
  return run_indices(indices, options);
}

bool VerifyReport::passed() const { return failures() == 0; }

std::size_t VerifyReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(results.begin(), results.end(), [](const auto &r) { return !r.passed; }));
}

std::string VerifyReport::text() const {
  std::ostringstream out;
  for (const auto &r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.id();
    if (!r.error.empty()) {
      out << " error: " << r.error << '\n';
      continue;
    }
    out << " observed=" << sci(r.observed)
        << (r.bound == Bound::at_most ? " tol<=" : " required>=") << sci(r.tolerance) << '\n';
    if (!r.passed)
      out << "    worst probe: " << r.detail << '\n';
  }
  out << results.size() - failures() << "/" << results.size() << " checks passed (seed "
      << seed << ")\n";
  return out.str();
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto &r : results) {
    nlohmann::json j{{"id", r.id()},
                     {"passed", r.passed},
                     {"observed", r.observed},
                     {"tolerance", r.tolerance},
                     {"bound", r.bound == Bound::at_most ? "at_most" : "at_least"},
                     {"worst_probe", r.detail}};
    if (!r.error.empty())
      j["error"] = r.error;
    checks.push_back(std::move(j));
  }
  return {{"seed", seed}, {"passed", passed()}, {"checks", checks}};
}

} // namespace jacobiflow
