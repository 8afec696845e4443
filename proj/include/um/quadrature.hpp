#pragma once

#include <functional>
#include <limits>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "um/matrix.hpp"

namespace um {

constexpr double kInfiniteChart = std::numeric_limits<double>::infinity();

/// Integration scheme descriptor. Fixed spec => bit-identical result.
struct QuadratureSpec {
  enum class Scheme { Radial, Tensor, MonteCarlo };

  Scheme scheme = Scheme::Radial;
  std::vector<int> nodes = {200};  // per-axis counts, or one count for all axes
  double extent = kInfiniteChart;  // box [-L, L]^d; infinity => tangent substitution
  std::uint64_t seed = 0;          // Monte Carlo only

  int nodes_for_axis(int axis) const;
  void validate(int dim) const;

  nlohmann::json to_json() const;
  static QuadratureSpec from_json(const nlohmann::json& j);
};

/// Gauss-Legendre nodes/weights on [-1, 1]; cached per order.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n);

/// Vol(S^{d-1}) = 2 pi^{d/2} / Gamma(d/2).
double sphere_area(int dim);

/// Vol(S^{d-1}) * integral_0^inf r^{d-1} profile(r) dr via Gauss-Legendre on
/// r = tan(u). Throws DivergenceError when tail samples indicate a
/// non-integrable profile.
double integrate_radial(const std::function<double(double)>& profile, int dim,
                        int nodes = 200);

/// Integral of f over the chart described by spec. NaN from the integrand
/// raises a poisoned-evaluation error naming the point.
double integrate_chart(const std::function<double(const Vector&)>& f, int dim,
                       const QuadratureSpec& spec);

struct MonteCarloResult {
  double value = 0.0;
  double standard_error = 0.0;
};

MonteCarloResult integrate_monte_carlo(const std::function<double(const Vector&)>& f,
                                       int dim, const QuadratureSpec& spec);

/// Generic tensor-grid / radial accumulation of a vector-valued integrand;
/// the metric engine integrates whole tensors in one sweep through it.
/// Reduction order is deterministic and independent of the thread count.
Eigen::VectorXd integrate_chart_vector(
    const std::function<Eigen::VectorXd(const Vector&)>& f, int dim, int out_dim,
    const QuadratureSpec& spec);

/// Worker-thread cap: UM_THREADS, else hardware concurrency.
int worker_threads();

}  // namespace um
