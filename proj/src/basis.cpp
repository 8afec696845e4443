#include "um/basis.hpp"

#include "um/su2.hpp"

namespace um {

HermitianBasis::HermitianBasis(std::vector<Matrix> fs) : fs_(std::move(fs)) {
  if (fs_.empty()) throw SpecError("HermitianBasis: empty basis");
  n_ = static_cast<int>(fs_[0].rows());
  if (static_cast<int>(fs_.size()) != n_ * n_) {
    throw SpecError("HermitianBasis: need n^2 matrices for n x n Hermitians");
  }
  gs_.reserve(fs_.size());
  for (const auto& f : fs_) {
    if (f.rows() != n_ || f.cols() != n_ || !is_hermitian(f, 1e-12)) {
      throw ConstraintError("HermitianBasis: element not Hermitian n x n", 0.0);
    }
    Vector ev = hermitian_eigenvalues(f);
    if (ev.minCoeff() <= 0.0) {
      throw ConstraintError("HermitianBasis: element not positive definite", ev.minCoeff());
    }
    if (std::abs(ev.maxCoeff() - 1.0) > 1e-12) {
      throw ConstraintError("HermitianBasis: operator norm != 1", ev.maxCoeff() - 1.0);
    }
    gs_.push_back(hermitian_sqrt(f));
  }
  int m = size();
  gram_.resize(m, m);
  for (int r = 0; r < m; ++r)
    for (int s = 0; s < m; ++s) gram_(r, s) = (fs_[r] * fs_[s]).trace().real();
  gram_solver_.compute(gram_);
  RealMatrix resid = gram_ - gram_ * gram_solver_.solve(RealMatrix::Identity(m, m)) * gram_;
  double cond_defect = resid.cwiseAbs().maxCoeff();
  if (gram_solver_.info() != Eigen::Success || cond_defect > 1e-8) {
    throw ConstraintError("HermitianBasis: Gram matrix singular", cond_defect);
  }
}

Vector HermitianBasis::decompose(const Matrix& h, double tol) const {
  if (!is_hermitian(h, 1e-10)) {
    throw ConstraintError("decompose: input not Hermitian", max_abs(Matrix(h - h.adjoint())));
  }
  int m = size();
  Vector b(m);
  for (int r = 0; r < m; ++r) b(r) = (fs_[r] * h).trace().real();
  Vector lambda = gram_solver_.solve(b);
  double resid = max_abs(Matrix(recompose(lambda) - h));
  if (resid > tol) {
    throw ConstraintError("decompose: residual above tolerance", resid);
  }
  return lambda;
}

Matrix HermitianBasis::recompose(const Vector& lambda) const {
  Matrix h = Matrix::Zero(n_, n_);
  for (int r = 0; r < size(); ++r) h += lambda(r) * fs_[r];
  return h;
}

HermitianBasis instanton_basis() {
  const auto& tau = pauli();
  std::vector<Matrix> fs;
  for (int i = 0; i < 3; ++i) fs.push_back((tau[i] + 3.0 * Matrix2::Identity()) / 4.0);
  fs.push_back(Matrix2::Identity());
  return HermitianBasis(std::move(fs));
}

HermitianBasis abelian_basis() {
  std::vector<Matrix> fs{Matrix::Identity(1, 1)};
  return HermitianBasis(std::move(fs));
}

}  // namespace um
