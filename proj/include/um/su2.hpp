#pragma once

#include <array>

#include "um/matrix.hpp"

namespace um {

using Matrix2 = Eigen::Matrix2cd;

/// Pauli matrices tau_1, tau_2, tau_3.
const std::array<Matrix2, 3>& pauli();

/// sigma_mu = (i tau_1, i tau_2, i tau_3, I)  — quaternionic units,
/// indexed mu = 1..4 with sigma_4 = I.
const std::array<Matrix2, 4>& sigma();

/// sigma_bar_mu = sigma_mu† = (-i tau_1, -i tau_2, -i tau_3, I).
const std::array<Matrix2, 4>& sigma_bar();

/// 't Hooft eta symbol, self-dual convention:
///   eta^a_{ij} = eps_{aij},  eta^a_{i4} = delta_{ai},  eta^a_{4i} = -delta_{ai}.
/// Indices are 1-based: a in 1..3, mu, nu in 1..4.
int thooft_eta(int a, int mu, int nu);

}  // namespace um
