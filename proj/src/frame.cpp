#include "um/frame.hpp"

namespace um {

double orthonormality_defect(const Matrix& u) {
  Matrix g = u.adjoint() * u;
  return max_abs(Matrix(g - Matrix::Identity(g.rows(), g.cols())));
}

FrameMatrix::FrameMatrix(Matrix u, double tol) : u_(std::move(u)) {
  if (u_.rows() < u_.cols()) {
    throw ConstraintError("FrameMatrix: fewer rows than columns", 0.0);
  }
  double defect = orthonormality_defect(u_);
  if (defect > tol) {
    throw ConstraintError("FrameMatrix: columns not orthonormal", defect);
  }
}

Matrix projector(const Matrix& u, double tol) {
  double defect = orthonormality_defect(u);
  if (defect > tol) {
    throw ConstraintError("projector: non-orthonormal input frame", defect);
  }
  return u * u.adjoint();
}

Matrix stack_frames(const Matrix& u, int copies) {
  if (copies < 1) throw SpecError("stack_frames: need at least one copy");
  Matrix m(u.rows() * copies, u.cols());
  double w = 1.0 / std::sqrt(static_cast<double>(copies));
  for (int k = 0; k < copies; ++k) m.block(k * u.rows(), 0, u.rows(), u.cols()) = w * u;
  return m;
}

}  // namespace um
