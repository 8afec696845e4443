#pragma once

#include <functional>
#include <type_traits>

#include "um/matrix.hpp"

namespace um {

/// Default step for central differences; scaled by the field's natural
/// length where the caller knows better.
constexpr double kDefaultStep = 1e-3;

/// Central difference with one Richardson level: error O(h^4) on smooth
/// functions. Works for any value type with +, -, and double scaling.
/// Results are materialised into the value type so Eigen expression
/// templates never outlive their operands.
template <typename F>
auto central_derivative(F&& f, double x0, double h = kDefaultStep) {
  using Value = std::decay_t<decltype(f(x0))>;
  auto d_at = [&](double step) -> Value {
    Value plus = f(x0 + step);
    Value minus = f(x0 - step);
    return Value((plus - minus) / (2.0 * step));
  };
  Value coarse = d_at(h);
  Value fine = d_at(0.5 * h);
  return Value((4.0 * fine - coarse) / 3.0);
}

/// Plain central difference, error O(h^2); used by convergence-order tests.
template <typename F>
auto central_derivative_plain(F&& f, double x0, double h = kDefaultStep) {
  using Value = std::decay_t<decltype(f(x0))>;
  Value plus = f(x0 + h);
  Value minus = f(x0 - h);
  return Value((plus - minus) / (2.0 * h));
}

/// Directional derivative of a field on R^d along coordinate axis `axis`.
template <typename F>
auto partial_derivative(F&& f, const Vector& x, int axis, double h = kDefaultStep) {
  return central_derivative(
      [&](double s) {
        Vector y = x;
        y(axis) = s;
        return f(y);
      },
      x(axis), h);
}

}  // namespace um
