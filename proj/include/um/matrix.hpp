#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>

namespace um {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Violated algebraic constraint (non-orthonormal frame, non-Hermitian
/// input, singular Gram matrix, ...). Carries the measured deviation.
class ConstraintError : public std::runtime_error {
 public:
  ConstraintError(const std::string& what, double deviation)
      : std::runtime_error(what + " (deviation " + std::to_string(deviation) + ")"),
        deviation_(deviation) {}
  double deviation() const { return deviation_; }

 private:
  double deviation_;
};

class DivergenceError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class SpecError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Matrix dagger(const Matrix& m) { return m.adjoint(); }

inline double frobenius(const Matrix& m) { return m.norm(); }

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline bool is_hermitian(const Matrix& m, double tol = 1e-12) {
  return m.rows() == m.cols() && max_abs(Matrix(m - m.adjoint())) <= tol;
}

/// Largest singular value.
double operator_norm(const Matrix& m);

/// Principal square root of a Hermitian positive semi-definite matrix.
/// Throws ConstraintError if an eigenvalue is below -tol.
Matrix hermitian_sqrt(const Matrix& m, double tol = 1e-12);

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m);

/// Haar-distributed m x n orthonormal frame, deterministic per seed.
Matrix random_frame(int rows, int cols, std::uint64_t seed);

/// Random Hermitian n x n matrix with entries O(1), deterministic per seed.
Matrix random_hermitian(int n, std::uint64_t seed);

}  // namespace um
