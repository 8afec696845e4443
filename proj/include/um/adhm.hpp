#pragma once

#include <array>

#include "um/frame.hpp"
#include "um/su2.hpp"

namespace um {

/// Moduli of the charge-one SU(2) instanton on R^4: centre a and scale rho.
struct ModuliPoint {
  static constexpr double kRhoMin = 1e-3;

  Eigen::Vector4d centre = Eigen::Vector4d::Zero();
  double rho = 1.0;

  void validate() const {
    if (!(rho >= kRhoMin)) {
      throw SpecError("ModuliPoint: rho below the singular-instanton cutoff");
    }
  }
};

/// The 4 x 2 frame
///   U(x) = ( (x-a)^mu sigma_bar_mu ; -rho I ) / sqrt((x-a)^2 + rho^2).
Matrix adhm_frame(const Eigen::Vector4d& x, const ModuliPoint& t);

/// A_mu = eta^a_{mu nu} (x-a)_nu tau_a / ((x-a)^2 + rho^2); Hermitian,
/// traceless, equal to i U†∂_mu U for the frame above (global sign +1,
/// fixed by the cross-check in the test suite).
std::array<Matrix2, 4> thooft_connection(const Eigen::Vector4d& x, const ModuliPoint& t);

/// Closed-form T_ij = Tr(∂_i P ∂_j P) over moduli order (a^1..a^4, rho):
///   T_{a a}   = 4 delta rho^2 / s^2
///   T_{rho a} = 4 rho (x-a) / s^2
///   T_{rr}    = 4 (x-a)^2 / s^2.
Eigen::Matrix<double, 5, 5> adhm_traces(const Eigen::Vector4d& x, const ModuliPoint& t);

/// Tr Phi(U) = 16 rho^2 / s^2.
double phi_adhm(const Eigen::Vector4d& x, const ModuliPoint& t);

}  // namespace um
