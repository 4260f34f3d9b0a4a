#pragma once

/// @file tangent.hpp
/// @brief Nestable forward-mode tangent numbers.
///
/// A `Tangent<T>` is a pair (value, deriv) with the product rule built into
/// multiplication. Nesting `Tangent<Tangent<double>>` gives the second
/// tangent functor: evaluating a chart map over depth-k scalars computes the
/// k-fold tangent map of that chart map.
///
/// Every operation computes its value slot with exactly the operations the
/// next level down would use, so projecting a result onto its value slot is
/// bitwise identical to evaluating at the lower depth.

#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace jacobiflow {

/// Raised when an arithmetic kernel leaves its domain (division by zero,
/// square root of a non-positive value). `level()` is the nesting depth of
/// the operand at which the violation was detected.
class EvaluationError : public std::domain_error {
public:
  EvaluationError(std::string op, int level)
      : std::domain_error(op + ": domain violation at tangent depth " +
                          std::to_string(level)),
        op_(std::move(op)), level_(level) {}

  const std::string &op() const noexcept { return op_; }
  int level() const noexcept { return level_; }

private:
  std::string op_;
  int level_;
};

template <class T> struct Tangent {
  T value{};
  T deriv{};

  constexpr bool operator==(const Tangent &) const = default;
};

template <class S> struct tangent_depth : std::integral_constant<int, 0> {};
template <class T>
struct tangent_depth<Tangent<T>>
    : std::integral_constant<int, 1 + tangent_depth<T>::value> {};

template <class S> inline constexpr int depth_v = tangent_depth<S>::value;

template <class S> struct is_tangent : std::false_type {};
template <class T> struct is_tangent<Tangent<T>> : std::true_type {};

/// double or a (possibly nested) Tangent over double.
template <class S>
concept Scalar = std::is_same_v<S, double> || is_tangent<S>::value;

namespace detail {
template <int D> struct nested {
  using type = Tangent<typename nested<D - 1>::type>;
};
template <> struct nested<0> {
  using type = double;
};
} // namespace detail

template <int D> using Nested = typename detail::nested<D>::type;

using T1 = Nested<1>;
using T2 = Nested<2>;
using T3 = Nested<3>;

inline constexpr int kMaxDepth = 3;

// ---------------------------------------------------------------------------
// Slot access

constexpr double base_value(double x) { return x; }
template <class T> constexpr double base_value(const Tangent<T> &x) {
  return base_value(x.value);
}

/// Constant embedding: value tower `c` at the bottom, every derivative slot 0.
template <Scalar S> constexpr S constant(double c) {
  if constexpr (std::is_same_v<S, double>) {
    return c;
  } else {
    using T = decltype(S::value);
    return S{constant<T>(c), constant<T>(0.0)};
  }
}

template <class T> constexpr Tangent<T> seed(T value, T deriv) {
  return Tangent<T>{std::move(value), std::move(deriv)};
}

/// All 2^depth bottom slots, value half first at every level.
inline void append_slots(double x, std::vector<double> &out) {
  out.push_back(x);
}
template <class T>
void append_slots(const Tangent<T> &x, std::vector<double> &out) {
  append_slots(x.value, out);
  append_slots(x.deriv, out);
}
template <Scalar S> std::vector<double> slots(const S &x) {
  std::vector<double> out;
  out.reserve(std::size_t{1} << depth_v<S>);
  append_slots(x, out);
  return out;
}

// ---------------------------------------------------------------------------
// Arithmetic on Tangent<T>

template <class T>
constexpr Tangent<T> operator+(const Tangent<T> &a, const Tangent<T> &b) {
  return {a.value + b.value, a.deriv + b.deriv};
}
template <class T>
constexpr Tangent<T> operator-(const Tangent<T> &a, const Tangent<T> &b) {
  return {a.value - b.value, a.deriv - b.deriv};
}
template <class T> constexpr Tangent<T> operator-(const Tangent<T> &a) {
  return {-a.value, -a.deriv};
}
template <class T>
constexpr Tangent<T> operator*(const Tangent<T> &a, const Tangent<T> &b) {
  return {a.value * b.value, a.deriv * b.value + a.value * b.deriv};
}
template <class T>
Tangent<T> operator/(const Tangent<T> &a, const Tangent<T> &b) {
  if (base_value(b) == 0.0)
    throw EvaluationError("div", depth_v<Tangent<T>>);
  return {a.value / b.value,
          (a.deriv * b.value - a.value * b.deriv) / (b.value * b.value)};
}

// Mixed with plain constants. These never lift the constant, so the slot
// operations match the constant-free ones.
template <class T>
constexpr Tangent<T> operator+(const Tangent<T> &a, double c) {
  return {a.value + c, a.deriv};
}
template <class T>
constexpr Tangent<T> operator+(double c, const Tangent<T> &a) {
  return {c + a.value, a.deriv};
}
template <class T>
constexpr Tangent<T> operator-(const Tangent<T> &a, double c) {
  return {a.value - c, a.deriv};
}
template <class T>
constexpr Tangent<T> operator-(double c, const Tangent<T> &a) {
  return {c - a.value, -a.deriv};
}
template <class T>
constexpr Tangent<T> operator*(const Tangent<T> &a, double c) {
  return {a.value * c, a.deriv * c};
}
template <class T>
constexpr Tangent<T> operator*(double c, const Tangent<T> &a) {
  return {c * a.value, c * a.deriv};
}
template <class T> Tangent<T> operator/(const Tangent<T> &a, double c) {
  if (c == 0.0)
    throw EvaluationError("div", depth_v<Tangent<T>>);
  return {a.value / c, a.deriv / c};
}
template <class T> Tangent<T> operator/(double c, const Tangent<T> &b) {
  if (base_value(b) == 0.0)
    throw EvaluationError("div", depth_v<Tangent<T>>);
  return {c / b.value, (-c * b.deriv) / (b.value * b.value)};
}

template <class T, class U>
Tangent<T> &operator+=(Tangent<T> &a, const U &b) {
  return a = a + b;
}
template <class T, class U>
Tangent<T> &operator-=(Tangent<T> &a, const U &b) {
  return a = a - b;
}
template <class T, class U>
Tangent<T> &operator*=(Tangent<T> &a, const U &b) {
  return a = a * b;
}
template <class T, class U>
Tangent<T> &operator/=(Tangent<T> &a, const U &b) {
  return a = a / b;
}

// ---------------------------------------------------------------------------
// Elementary functions. The double overloads live in this namespace so that
// generic code can call `sin(x)` unqualified at every depth.

inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double exp(double x) { return std::exp(x); }
inline double sqrt(double x) {
  if (x < 0.0)
    throw EvaluationError("sqrt", 0);
  return std::sqrt(x);
}

template <class T> Tangent<T> sin(const Tangent<T> &a) {
  return {sin(a.value), cos(a.value) * a.deriv};
}
template <class T> Tangent<T> cos(const Tangent<T> &a) {
  return {cos(a.value), -(sin(a.value) * a.deriv)};
}
template <class T> Tangent<T> exp(const Tangent<T> &a) {
  T e = exp(a.value);
  return {e, e * a.deriv};
}
template <class T> Tangent<T> sqrt(const Tangent<T> &a) {
  if (base_value(a) <= 0.0)
    throw EvaluationError("sqrt", depth_v<Tangent<T>>);
  T r = sqrt(a.value);
  return {r, a.deriv / (2.0 * r)};
}

/// Integer power by binary exponentiation; the same multiplication sequence
/// at every depth.
template <Scalar S> S powi(const S &x, int n) {
  if (n < 0)
    return 1.0 / powi(x, -n);
  S result = constant<S>(1.0);
  S base = x;
  bool first = true;
  while (n > 0) {
    if (n & 1) {
      result = first ? base : result * base;
      first = false;
    }
    n >>= 1;
    if (n > 0)
      base = base * base;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Runtime-depth entry points

using AnyTangent = std::variant<double, T1, T2, T3>;

/// Constant embedding at a runtime depth in [0, 3].
inline AnyTangent lift_constant(double c, int depth) {
  switch (depth) {
  case 0:
    return constant<double>(c);
  case 1:
    return constant<T1>(c);
  case 2:
    return constant<T2>(c);
  case 3:
    return constant<T3>(c);
  default:
    throw std::out_of_range("lift_constant: depth " + std::to_string(depth) +
                            " outside [0, 3]");
  }
}

inline std::vector<double> slots(const AnyTangent &x) {
  return std::visit([](const auto &v) { return slots(v); }, x);
}

} // namespace jacobiflow
