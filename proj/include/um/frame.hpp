#pragma once

#include "um/matrix.hpp"

namespace um {

/// Rectangular m x n matrix with orthonormal columns, U†U = I_n.
/// Orthonormality is checked on construction.
class FrameMatrix {
 public:
  static constexpr double kOrthoTol = 1e-12;

  explicit FrameMatrix(Matrix u, double tol = kOrthoTol);

  const Matrix& matrix() const { return u_; }
  int rows() const { return static_cast<int>(u_.rows()); }
  int cols() const { return static_cast<int>(u_.cols()); }

  /// P = U U†, Hermitian idempotent with Tr P = n.
  Matrix projector() const { return u_ * u_.adjoint(); }

 private:
  Matrix u_;
};

/// P = U U† with the orthonormality precondition enforced.
Matrix projector(const Matrix& u, double tol = FrameMatrix::kOrthoTol);

/// Deviation max(‖U†U − I‖_max); used by preconditions and tests.
double orthonormality_defect(const Matrix& u);

/// (U; U; ...; U)/sqrt(N) — same projector traces and U†dU as U.
Matrix stack_frames(const Matrix& u, int copies);

}  // namespace um
