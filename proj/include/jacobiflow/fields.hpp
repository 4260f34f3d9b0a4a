#pragma once

/// @file fields.hpp
/// @brief Type-erased callables that can be evaluated at several tangent depths.
///
/// Chart data (Christoffel maps, vector fields, metrics) is written once as a
/// generic lambda and instantiated at every depth the library needs. Tangent
/// maps of that data then come from evaluating over tangent scalars.

#include <functional>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "jacobiflow/tangent.hpp"
#include "jacobiflow/vec.hpp"

namespace jacobiflow {

using T4 = Nested<4>;

/// One std::function per scalar type in Ss, all built from the same generic
/// callable.
template <template <class> class Fn, class... Ss> class DepthTable {
public:
  DepthTable() = default;

  template <class F> static DepthTable from(const F &f) {
    DepthTable t;
    ((std::get<Fn<Ss>>(t.fns_) = Fn<Ss>(f)), ...);
    return t;
  }

  template <class S> const Fn<S> &get() const { return std::get<Fn<S>>(fns_); }

  explicit operator bool() const {
    return static_cast<bool>(std::get<0>(fns_));
  }

private:
  std::tuple<Fn<Ss>...> fns_;
};

template <class S>
using ChristoffelFn =
    std::function<Vec<S>(const Vec<S> &, const Vec<S> &, const Vec<S> &)>;
template <class S> using FieldFn = std::function<Vec<S>(const Vec<S> &)>;
template <class S> using MetricFn = std::function<Matrix<S>(const Vec<S> &)>;

/// y -> Gamma_y(v, xi), bilinear in (v, xi), evaluable to depth 3.
///
/// Sign convention: Gamma parametrizes the horizontal bundle, so it is the
/// negative of the classical symbol and geodesics solve c'' = Gamma_c(c', c').
class ChristoffelMap {
public:
  ChristoffelMap() = default;

  template <class F> static ChristoffelMap from_generic(const F &f) {
    ChristoffelMap c;
    c.table_ = Table::from(f);
    return c;
  }

  template <class S>
  Vec<S> operator()(const Vec<S> &y, const Vec<S> &v, const Vec<S> &xi) const {
    return table_.template get<S>()(y, v, xi);
  }

  explicit operator bool() const { return static_cast<bool>(table_); }

private:
  using Table = DepthTable<ChristoffelFn, double, T1, T2, T3>;
  Table table_;
};

/// A vector field y -> X(y) on a chart, evaluable to depth 3.
class VectorField {
public:
  VectorField() = default;

  template <class F> static VectorField from_generic(const F &f) {
    VectorField v;
    v.table_ = Table::from(f);
    return v;
  }

  template <class S> Vec<S> operator()(const Vec<S> &y) const {
    return table_.template get<S>()(y);
  }

  explicit operator bool() const { return static_cast<bool>(table_); }

private:
  using Table = DepthTable<FieldFn, double, T1, T2, T3>;
  Table table_;
};

/// A symmetric matrix field y -> g(y). Depth 4 is needed because Christoffel
/// symbols at depth 3 take one more derivative of the metric.
class MetricField {
public:
  MetricField() = default;

  template <class F> static MetricField from_generic(const F &f) {
    MetricField g;
    g.table_ = Table::from(f);
    return g;
  }

  template <class S> Matrix<S> operator()(const Vec<S> &y) const {
    return table_.template get<S>()(y);
  }

  explicit operator bool() const { return static_cast<bool>(table_); }

private:
  using Table = DepthTable<MetricFn, double, T1, T2, T3, T4>;
  Table table_;
};

inline VectorField constant_field(Vec<double> c) {
  return VectorField::from_generic([c](const auto &y) {
    using S = typename std::decay_t<decltype(y)>::value_type;
    return lift<S>(c);
  });
}

/// Quadratic polynomial vector field
/// X^i(y) = a^i + sum_j b^i_j y^j + sum_{j<=k} c^i_jk y^j y^k.
struct PolynomialField {
  int dim = 0;
  std::vector<double> offset;    // m
  std::vector<double> linear;    // m * m, row i
  std::vector<double> quadratic; // m * m * m, [i][j][k]

  template <class S> Vec<S> operator()(const Vec<S> &y) const {
    const auto m = static_cast<std::size_t>(dim);
    Vec<S> r(m);
    for (std::size_t i = 0; i < m; ++i) {
      S acc = constant<S>(offset[i]);
      for (std::size_t j = 0; j < m; ++j) {
        acc = acc + linear[i * m + j] * y[j];
        for (std::size_t k = j; k < m; ++k)
          acc = acc + quadratic[(i * m + j) * m + k] * (y[j] * y[k]);
      }
      r[i] = acc;
    }
    return r;
  }
};

/// Quadratic polynomial scalar function h(y) = a + b.y + y^T C y.
struct PolynomialFunction {
  int dim = 0;
  double offset = 0.0;
  std::vector<double> linear;    // m
  std::vector<double> quadratic; // m * m, upper triangle used

  template <class S> S operator()(const Vec<S> &y) const {
    const auto m = static_cast<std::size_t>(dim);
    S acc = constant<S>(offset);
    for (std::size_t j = 0; j < m; ++j) {
      acc = acc + linear[j] * y[j];
      for (std::size_t k = j; k < m; ++k)
        acc = acc + quadratic[j * m + k] * (y[j] * y[k]);
    }
    return acc;
  }
};

} // namespace jacobiflow
