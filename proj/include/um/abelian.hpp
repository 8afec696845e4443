#pragma once

#include <functional>

#include <nlohmann/json_fwd.hpp>

#include "um/matrix.hpp"

namespace um {

/// Fixed profile functions r_i^2(x) = c_i / (e^{x_i} + 1), i < d, with
/// r_d^2 = 1 - sum r_i^2. The c_i are positive with sum < 1.
struct AbelianProfiles {
  int dim = 4;
  Vector c;  // d-1 constants

  static AbelianProfiles defaults(int d);  // c_i = 0.9/(d-1)

  double r2(int i, double xi) const { return c(i) / (std::exp(xi) + 1.0); }
  double dr2(int i, double xi) const {
    double e = std::exp(xi);
    return -c(i) * e / ((e + 1.0) * (e + 1.0));
  }
  double r_last2(const Vector& x) const;

  void validate() const;
};

/// Real U(1) connection on a chart box [-L, L]^d, vanishing outside the
/// inner margin of the box ("pure gauge at infinity" in chart terms).
struct AbelianConnection {
  int dim = 4;
  double extent = 8.0;
  std::function<Vector(const Vector&)> components;  // d real components
};

struct AbelianAngles {
  std::function<double(const Vector&)> theta_bar;
  std::function<Vector(const Vector&)> theta;     // theta_1..theta_{d-1}
  std::function<double(const Vector&)> theta_last;  // theta_d
};

/// Solve A = -sum theta_i d r_i^2 + d theta_bar for the angles:
/// theta_bar by line integration of A_d from the lower chart face
/// (anchored to zero there), theta_i = -(A_i - d_i theta_bar)/d_i r_i^2.
AbelianAngles abelian_angles(const AbelianConnection& a, const AbelianProfiles& profiles,
                             int line_nodes = 200);

/// The d x 1 universal matrix: entries r_i e^{-i(theta_i + theta_d)} for
/// i < d and r_d e^{-i theta_d}; unit norm by construction and
/// i U† dU = A.
std::function<Eigen::VectorXcd(const Vector&)> abelian_frame(
    const AbelianProfiles& profiles, const AbelianAngles& angles);

/// --- grid pipeline (the JSON file interface) ---

/// Real fields sampled on a regular grid; components stored flattened
/// row-major.
struct GridField {
  int dim = 2;
  Vector min, max;
  std::vector<int> shape;
  std::vector<std::vector<double>> components;

  std::int64_t points() const;
  std::int64_t index(const std::vector<int>& idx) const;
  Vector coordinate(const std::vector<int>& idx) const;
  double spacing(int axis) const;

  nlohmann::json to_json() const;
  static GridField from_json(const nlohmann::json& j);

  /// Every second point along each axis (doubles the spacing); used for
  /// convergence-order estimates.
  GridField subsample() const;
};

struct GridReconstruction {
  /// d complex frame components, flattened like GridField (re/im pairs).
  std::vector<std::vector<Complex>> frame;
  double max_error = 0.0;    // max |i U†dU - A| over interior points
  double norm_defect = 0.0;  // max | |U|^2 - 1 |
  nlohmann::json frame_to_json(const GridField& grid) const;
};

/// Margin policy: A must vanish on the outer 20% shell of the box.
void check_margin(const GridField& a, double tol = 1e-12);

GridReconstruction reconstruct_abelian_grid(const GridField& a,
                                            const AbelianProfiles& profiles);

}  // namespace um
