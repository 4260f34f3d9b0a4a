#pragma once

/// @file double_tangent.hpp
/// @brief Chart representations of TM, TTM and TTTM with their structural maps.
///
/// Block order for TTM is (x, xi; eta, zeta). The projection onto TM is
/// (x, xi) and the tangent of the base projection is (x, eta). A TTM element
/// is the tangent vector (eta, zeta) at the point (x, xi) of TM, so it is the
/// same thing as a TM point over depth-1 tangent scalars:
///
///     x_i  <->  Tangent{x_i,  eta_i}
///     xi_i <->  Tangent{xi_i, zeta_i}
///
/// TTTM is stored as TT of TM: four blocks of length 2m, (A; B; C; D) with
/// A = (x, xi), B = (eta, zeta) the TTM point and (C, D) its tangent.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include "jacobiflow/tangent.hpp"
#include "jacobiflow/vec.hpp"

namespace jacobiflow {

class NotVertical : public std::domain_error {
public:
  explicit NotVertical(const std::string &what) : std::domain_error(what) {}
};

class BaseMismatch : public std::invalid_argument {
public:
  explicit BaseMismatch(const std::string &what) : std::invalid_argument(what) {}
};

/// A point of TM in a chart.
template <class S = double> struct TangentVector {
  Vec<S> base;
  Vec<S> vec;

  std::size_t dim() const { return base.size(); }
  bool operator==(const TangentVector &) const = default;
};

/// A point of TTM in a chart: (x, xi; eta, zeta).
template <class S = double> struct TTVector {
  Vec<S> x;
  Vec<S> xi;
  Vec<S> eta;
  Vec<S> zeta;

  std::size_t dim() const { return x.size(); }
  bool operator==(const TTVector &) const = default;
};

/// A point of TTTM stored as TT of TM; every block has length 2m.
template <class S = double> struct TTTVector {
  TTVector<S> blocks;

  std::size_t dim() const { return blocks.x.size() / 2; }
  bool operator==(const TTTVector &) const = default;
};

inline constexpr double kBaseTolerance = 1e-12;
inline constexpr double kVerticalTolerance = 1e-9;

namespace detail {

inline bool same_base(const Vec<double> &a, const Vec<double> &b) {
  if (a.size() != b.size())
    return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::fabs(a[i] - b[i]) >
        kBaseTolerance * (1.0 + std::fmax(std::fabs(a[i]), std::fabs(b[i]))))
      return false;
  return true;
}

inline void require_same_base(const Vec<double> &a, const Vec<double> &b,
                              const char *op) {
  if (!same_base(a, b))
    throw BaseMismatch(std::string(op) + ": operands are based at different points");
}

inline double sup_norm(const TTVector<double> &t) {
  return std::fmax(std::fmax(norm_inf(t.x), norm_inf(t.xi)),
                   std::fmax(norm_inf(t.eta), norm_inf(t.zeta)));
}

} // namespace detail

// ---------------------------------------------------------------------------
// Projections

/// pi_TM: TTM -> TM, (x, xi; eta, zeta) -> (x, xi).
template <class S> TangentVector<S> project_tm(const TTVector<S> &t) {
  return {t.x, t.xi};
}

/// T(pi_M): TTM -> TM, (x, xi; eta, zeta) -> (x, eta).
template <class S> TangentVector<S> tangent_project_m(const TTVector<S> &t) {
  return {t.x, t.eta};
}

// ---------------------------------------------------------------------------
// Canonical flips

/// kappa_M: (x, xi; eta, zeta) -> (x, eta; xi, zeta).
template <class S> TTVector<S> flip(const TTVector<S> &t) {
  return {t.x, t.eta, t.xi, t.zeta};
}

/// kappa_TM on TT(TM): swaps the second and third 2m-blocks.
template <class S> TTTVector<S> flip_level2(const TTTVector<S> &t) {
  return {flip(t.blocks)};
}

// ---------------------------------------------------------------------------
// Vertical lifts and projection

/// vl: (y, v) -> (y, 0; 0, v).
template <class S> TTVector<S> vertical_lift(const TangentVector<S> &v) {
  const auto m = v.dim();
  return {v.base, zeros<S>(m), zeros<S>(m), v.vec};
}

/// Vl(u, v) = d/dt|0 (u + t v) = (y, u; 0, v).
inline TTVector<double> vertical_lift_big(const TangentVector<double> &u,
                                          const TangentVector<double> &v) {
  detail::require_same_base(u.base, v.base, "vertical_lift_big");
  return {u.base, u.vec, zeros<double>(u.dim()), v.vec};
}

/// vpr = pr2 o Vl^{-1}: (y, u; 0, w) -> (y, w). The eta block must vanish to
/// within tol * (1 + |t|).
inline TangentVector<double> vertical_projection(const TTVector<double> &t,
                                                 double tol = kVerticalTolerance) {
  const double defect = norm_inf(t.eta);
  if (defect > tol * (1.0 + detail::sup_norm(t)))
    throw NotVertical("vertical_projection: |eta| = " + std::to_string(defect) +
                      " exceeds tolerance");
  return {t.x, t.zeta};
}

/// vl of the bundle (TTM, pi_TM, TM) one level up: (A; B) -> (A; 0; 0; B)
/// where A = (x, xi) and B = (eta, zeta).
template <class S> TTTVector<S> vertical_lift_tt(const TTVector<S> &t) {
  const auto m = t.dim();
  return {TTVector<S>{concat(t.x, t.xi), zeros<S>(2 * m), zeros<S>(2 * m),
                      concat(t.eta, t.zeta)}};
}

// ---------------------------------------------------------------------------
// The two vector bundle structures on TTM

/// Fiber addition of (TTM, pi_TM, TM): equal (x, xi), adds (eta, zeta).
inline TTVector<double> add_over_E(const TTVector<double> &a, const TTVector<double> &b) {
  detail::require_same_base(a.x, b.x, "add_over_E");
  detail::require_same_base(a.xi, b.xi, "add_over_E");
  return {a.x, a.xi, add(a.eta, b.eta), add(a.zeta, b.zeta)};
}

/// Fiber addition of (TTM, T pi_M, TM): equal (x, eta), adds (xi, zeta).
inline TTVector<double> add_over_TM(const TTVector<double> &a, const TTVector<double> &b) {
  detail::require_same_base(a.x, b.x, "add_over_TM");
  detail::require_same_base(a.eta, b.eta, "add_over_TM");
  return {a.x, add(a.xi, b.xi), a.eta, add(a.zeta, b.zeta)};
}

inline TTVector<double> scale_over_E(double c, const TTVector<double> &t) {
  return {t.x, t.xi, scale(c, t.eta), scale(c, t.zeta)};
}

inline TTVector<double> scale_over_TM(double c, const TTVector<double> &t) {
  return {t.x, scale(c, t.xi), t.eta, scale(c, t.zeta)};
}

inline TTVector<double> sub_over_E(const TTVector<double> &a, const TTVector<double> &b) {
  return add_over_E(a, scale_over_E(-1.0, b));
}

inline TTVector<double> sub_over_TM(const TTVector<double> &a, const TTVector<double> &b) {
  return add_over_TM(a, scale_over_TM(-1.0, b));
}

// ---------------------------------------------------------------------------
// Conversions between block form and nested tangent scalars

/// TTVector -> TM point over depth-1 scalars.
template <class S> TangentVector<Tangent<S>> to_tangent(const TTVector<S> &t) {
  return {seed(t.x, t.eta), seed(t.xi, t.zeta)};
}

template <class S> TTVector<S> from_tangent(const TangentVector<Tangent<S>> &v) {
  return {values(v.base), values(v.vec), derivs(v.base), derivs(v.vec)};
}

/// TTVector -> coordinates over depth-2 scalars, used to evaluate TTf for a
/// chart map f. Outer derivative runs along xi, inner along eta.
template <class S> Vec<Tangent<Tangent<S>>> to_nested(const TTVector<S> &t) {
  Vec<Tangent<Tangent<S>>> r(t.dim());
  for (std::size_t i = 0; i < t.dim(); ++i)
    r[i] = {Tangent<S>{t.x[i], t.eta[i]}, Tangent<S>{t.xi[i], t.zeta[i]}};
  return r;
}

template <class S> TTVector<S> from_nested(const Vec<Tangent<Tangent<S>>> &c) {
  TTVector<S> t;
  for (const auto &z : c) {
    t.x.push_back(z.value.value);
    t.eta.push_back(z.value.deriv);
    t.xi.push_back(z.deriv.value);
    t.zeta.push_back(z.deriv.deriv);
  }
  return t;
}

/// A TTM-valued result over depth-1 scalars is a point of TTTM: the values
/// give (A; B), the derivatives give (C; D).
template <class S> TTTVector<S> lift_tt(const TTVector<Tangent<S>> &t) {
  return {TTVector<S>{concat(values(t.x), values(t.xi)),
                      concat(values(t.eta), values(t.zeta)),
                      concat(derivs(t.x), derivs(t.xi)),
                      concat(derivs(t.eta), derivs(t.zeta))}};
}

/// Inverse of lift_tt: a TTTM point as a TTM point over depth-1 scalars.
template <class S> TTVector<Tangent<S>> seed_tt(const TTTVector<S> &z) {
  const auto m = z.dim();
  const auto &b = z.blocks;
  return {seed(slice(b.x, 0, m), slice(b.eta, 0, m)),
          seed(slice(b.x, m, m), slice(b.eta, m, m)),
          seed(slice(b.xi, 0, m), slice(b.zeta, 0, m)),
          seed(slice(b.xi, m, m), slice(b.zeta, m, m))};
}

// ---------------------------------------------------------------------------
// Tangent maps of generic chart maps

/// Tf(x; v) for a chart map f written against generic scalars.
template <class F>
TangentVector<double> tangent_map(F &&f, const TangentVector<double> &v) {
  auto out = f(seed(v.base, v.vec));
  return {values(out), derivs(out)};
}

/// TTf on a TTM element via depth-2 evaluation.
template <class F> TTVector<double> tt_map(F &&f, const TTVector<double> &t) {
  return from_nested(f(to_nested(t)));
}

} // namespace jacobiflow
