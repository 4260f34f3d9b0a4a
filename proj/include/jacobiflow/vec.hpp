#pragma once

/// @file vec.hpp
/// @brief Chart coordinate vectors over generic scalars.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "jacobiflow/tangent.hpp"

namespace jacobiflow {

/// Chart coordinates (a point or a vector in R^m) over scalar S.
template <class S> using Vec = std::vector<S>;

/// Row-major m x m matrix over scalar S.
template <class S> struct Matrix {
  int dim = 0;
  std::vector<S> data;

  Matrix() = default;
  explicit Matrix(int m) : dim(m), data(static_cast<std::size_t>(m * m)) {
    for (auto &x : data)
      x = constant<S>(0.0);
  }
  S &operator()(int i, int j) { return data[static_cast<std::size_t>(i * dim + j)]; }
  const S &operator()(int i, int j) const {
    return data[static_cast<std::size_t>(i * dim + j)];
  }
};

template <class S> Vec<S> zeros(std::size_t m) {
  return Vec<S>(m, constant<S>(0.0));
}

template <class S> Vec<S> add(const Vec<S> &a, const Vec<S> &b) {
  Vec<S> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = a[i] + b[i];
  return r;
}

template <class S> Vec<S> sub(const Vec<S> &a, const Vec<S> &b) {
  Vec<S> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = a[i] - b[i];
  return r;
}

template <class S, class C> Vec<S> scale(const C &c, const Vec<S> &a) {
  Vec<S> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = c * a[i];
  return r;
}

template <class S> Vec<S> negate(const Vec<S> &a) {
  Vec<S> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = -a[i];
  return r;
}

template <class S> Vec<S> concat(const Vec<S> &a, const Vec<S> &b) {
  Vec<S> r(a);
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

template <class S> Vec<S> slice(const Vec<S> &a, std::size_t start, std::size_t len) {
  return Vec<S>(a.begin() + static_cast<std::ptrdiff_t>(start),
                a.begin() + static_cast<std::ptrdiff_t>(start + len));
}

/// Embed double coordinates as constants at depth of S.
template <class S> Vec<S> lift(const Vec<double> &a) {
  Vec<S> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = constant<S>(a[i]);
  return r;
}

/// Componentwise seed: r[i] = (value[i], deriv[i]).
template <class S> Vec<Tangent<S>> seed(const Vec<S> &value, const Vec<S> &deriv) {
  Vec<Tangent<S>> r(value.size());
  for (std::size_t i = 0; i < value.size(); ++i)
    r[i] = Tangent<S>{value[i], deriv[i]};
  return r;
}

template <class S> Vec<S> values(const Vec<Tangent<S>> &a) {
  Vec<S> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = a[i].value;
  return r;
}

template <class S> Vec<S> derivs(const Vec<Tangent<S>> &a) {
  Vec<S> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = a[i].deriv;
  return r;
}

template <class S> Vec<double> base_values(const Vec<S> &a) {
  Vec<double> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = base_value(a[i]);
  return r;
}

inline double norm_inf(const Vec<double> &a) {
  double m = 0.0;
  for (double x : a)
    m = std::fmax(m, std::fabs(x));
  return m;
}

inline double norm2(const Vec<double> &a) {
  double s = 0.0;
  for (double x : a)
    s += x * x;
  return std::sqrt(s);
}

inline double max_abs_diff(const Vec<double> &a, const Vec<double> &b) {
  if (a.size() != b.size())
    throw std::invalid_argument("max_abs_diff: length mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::fmax(m, std::fabs(a[i] - b[i]));
  return m;
}

inline bool all_finite(const Vec<double> &a) {
  for (double x : a)
    if (!std::isfinite(x))
      return false;
  return true;
}

inline void require_length(const Vec<double> &a, std::size_t m, const char *what) {
  if (a.size() != m)
    throw std::invalid_argument(std::string(what) + ": expected length " +
                                std::to_string(m) + ", got " +
                                std::to_string(a.size()));
}

/// Solve A x = b for symmetric positive-definite A by elimination without
/// pivoting. Throws EvaluationError("solve") on a non-positive pivot.
template <class S> Vec<S> solve_spd(Matrix<S> a, Vec<S> b) {
  const int m = a.dim;
  for (int k = 0; k < m; ++k) {
    if (!(base_value(a(k, k)) > 0.0))
      throw EvaluationError("solve", depth_v<S>);
    for (int i = k + 1; i < m; ++i) {
      S f = a(i, k) / a(k, k);
      for (int j = k; j < m; ++j)
        a(i, j) = a(i, j) - f * a(k, j);
      b[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)] - f * b[static_cast<std::size_t>(k)];
    }
  }
  Vec<S> x(static_cast<std::size_t>(m));
  for (int i = m - 1; i >= 0; --i) {
    S s = b[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < m; ++j)
      s = s - a(i, j) * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(i)] = s / a(i, i);
  }
  return x;
}

/// Positive-definiteness probe by Cholesky on double data.
inline bool is_positive_definite(const Matrix<double> &a, double symmetry_tol = 1e-12) {
  const int m = a.dim;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < i; ++j)
      if (std::fabs(a(i, j) - a(j, i)) >
          symmetry_tol * (1.0 + std::fabs(a(i, j))))
        return false;
  Matrix<double> l(m);
  for (int j = 0; j < m; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k)
      d -= l(j, k) * l(j, k);
    if (!(d > 0.0) || !std::isfinite(d))
      return false;
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < m; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k)
        s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return true;
}

} // namespace jacobiflow
