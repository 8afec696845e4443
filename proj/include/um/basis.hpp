#pragma once

#include <vector>

#include "um/matrix.hpp"

namespace um {

/// Real basis {f_1 .. f_{n^2}} of the complex Hermitian n x n matrices,
/// each f_r positive definite with operator norm 1. Keeps the Gram matrix
/// G_{rs} = Tr(f_r f_s) and the positive square roots g_r = sqrt(f_r).
class HermitianBasis {
 public:
  explicit HermitianBasis(std::vector<Matrix> fs);

  int dim() const { return n_; }                 // matrix size n
  int size() const { return static_cast<int>(fs_.size()); }  // n^2
  const Matrix& f(int r) const { return fs_[r]; }
  const Matrix& sqrt_f(int r) const { return gs_[r]; }
  const RealMatrix& gram() const { return gram_; }

  /// Real coefficients lambda with H = sum_r lambda_r f_r (Gram solve).
  Vector decompose(const Matrix& h, double tol = 1e-12) const;

  Matrix recompose(const Vector& lambda) const;

 private:
  int n_;
  std::vector<Matrix> fs_;
  std::vector<Matrix> gs_;
  RealMatrix gram_;
  Eigen::LDLT<RealMatrix> gram_solver_;
};

/// f_i = (tau_i + 3 I)/4 for i = 1..3 and f_4 = I; the basis used for the
/// SU(2) instanton decomposition.
HermitianBasis instanton_basis();

/// n = 1 basis, f_1 = [1]; abelian connections decompose trivially on it.
HermitianBasis abelian_basis();

}  // namespace um
