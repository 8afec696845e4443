#pragma once

#include <functional>
#include <optional>

#include <nlohmann/json_fwd.hpp>

#include "um/basis.hpp"
#include "um/family.hpp"

namespace um {

/// Matrix-valued connection on a chart: x -> d Hermitian n x n components.
struct MatrixConnection {
  int space_dim = 4;
  int group_dim = 2;  // n
  std::function<std::vector<Matrix>(const Vector& x)> components;
};

/// lambda_{r,mu}(x), the coefficients of A_mu on a Hermitian basis;
/// returned as an n^2 x d real matrix per point.
using LambdaField = std::function<RealMatrix(const Vector&)>;

/// Construction constants for a Narasimhan-Ramanan frame. `phase_scale`
/// and `shifts` are resolved from the lambda field when left empty; once
/// resolved they must stay fixed across a moduli family (the isotropy
/// cancellation needs moduli-independent constants).
struct NRSpec {
  int space_dim = 4;            // d
  double chart_extent = 5.0;    // box [-L, L]^d
  double phase_scale = 0.0;     // N; 0 => auto, smallest power of two meeting the bound
  RealMatrix shifts;            // k_{r,mu}, n^2 x d; empty => auto
  int resolve_samples = 9;      // per-axis grid used to estimate sup |lambda|

  nlohmann::json to_json() const;
  static NRSpec from_json(const nlohmann::json& j);
};

/// An NR frame field: (2d+1) n^2 blocks of n x n stacked into a
/// ((2d+1) n^3) x n matrix,
///   p_{r,mu} e^{iN x_mu} g_r,   q_{r,mu} e^{-iN x_mu} g_r,   h_r,
/// with p^2 = lambda/N + k, q^2 = k and
/// h_r^2 = (1/n^2) I - [sum_mu (p^2 + q^2)] f_r.
class NRFrame {
 public:
  NRFrame(LambdaField lambda, HermitianBasis basis, NRSpec spec);

  Matrix operator()(const Vector& x) const;

  double phase_scale() const { return phase_scale_; }
  const RealMatrix& shifts() const { return shifts_; }
  const HermitianBasis& basis() const { return basis_; }
  int rows() const;

  /// Suitable finite-difference step: the e^{iNx} phases force h << 1/N.
  double space_step() const { return 1e-4 / std::max(1.0, phase_scale_); }

 private:
  LambdaField lambda_;
  HermitianBasis basis_;
  NRSpec spec_;
  double phase_scale_;
  RealMatrix shifts_;
};

/// Decompose a Hermitian connection on the basis. The residual check
/// catches non-Hermitian data.
LambdaField lambda_field(const MatrixConnection& a, const HermitianBasis& basis);

/// lambda field of the 't Hooft instanton connection at moduli t.
LambdaField instanton_lambda(const ModuliPoint& t);

NRFrame nr_frame(LambdaField lambda, const HermitianBasis& basis, const NRSpec& spec);

/// Resolve phase_scale / shifts against a set of lambda fields so one set
/// of constants serves a whole moduli family (or a connection and its
/// gauge transform).
NRSpec resolve_nr_spec(const std::vector<LambdaField>& lambdas,
                       const HermitianBasis& basis, NRSpec spec);

/// NR frames for the instanton family; frame constants resolved once at
/// the given reference point and held fixed over the moduli.
ModuliFamily nr_instanton_family(const ModuliPoint& reference, NRSpec spec);

/// max over chart points and moduli directions of ‖U†∂_i U‖; < 1e-8 for
/// NR families with fixed construction constants.
double check_isotropy(const ModuliFamily& family, const Vector& t,
                      const std::vector<Vector>& points);

/// sup-norm of U(A^g) - U(A) . g over the sample points; strictly positive
/// for generic g (the NR construction is not equivariant).
double check_nonequivariance(const MatrixConnection& a, const HermitianBasis& basis,
                             const NRSpec& spec, const Matrix& g,
                             const std::vector<Vector>& points);

/// max over points and axes of ‖U†∂_mu U - i sum_r lambda_{r,mu} f_r‖ —
/// the reconstruction defect of a constructed frame.
double reconstruction_defect(const NRFrame& frame, const LambdaField& lambda,
                             const HermitianBasis& basis,
                             const std::vector<Vector>& points);

}  // namespace um
