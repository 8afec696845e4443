#include "um/matrix.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace um {

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

Matrix hermitian_sqrt(const Matrix& m, double tol) {
  if (!is_hermitian(m, 1e-10)) {
    throw ConstraintError("hermitian_sqrt: input not Hermitian",
                          max_abs(Matrix(m - m.adjoint())));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  Eigen::VectorXd ev = es.eigenvalues();
  double lo = ev.minCoeff();
  if (lo < -tol) {
    throw ConstraintError("hermitian_sqrt: matrix not positive semi-definite", -lo);
  }
  Eigen::VectorXd root = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Matrix random_frame(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  // Fix column phases so the result is a deterministic function of the seed
  // independent of the QR implementation's sign choices.
  Matrix r = q.adjoint() * g;
  for (int j = 0; j < cols; ++j) {
    Complex d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

Matrix random_hermitian(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = Complex(gauss(rng), gauss(rng));
  return 0.5 * (g + g.adjoint());
}

}  // namespace um
