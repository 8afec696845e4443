#pragma once

#include <optional>

#include <nlohmann/json_fwd.hpp>

#include "um/family.hpp"
#include "um/quadrature.hpp"

namespace um {

/// Symmetric matrix of moduli-space inner products. `length_exponent`
/// records the physical units (length^e); `asymmetry` is the max
/// off-symmetry of the raw quadrature output before symmetrization.
struct MetricTensor {
  std::vector<std::string> labels;
  RealMatrix entries;
  double length_exponent = 0.0;
  std::string provenance;
  double asymmetry = 0.0;

  int dim() const { return static_cast<int>(labels.size()); }
  double operator()(int i, int j) const { return entries(i, j); }

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

struct DefinitenessReport {
  Eigen::VectorXd eigenvalues;  // ascending
  bool positive_definite = false;
  /// Eigenvector labels (dominant component) for directions below the
  /// degeneracy threshold 1e-8 * largest eigenvalue.
  std::vector<std::string> degenerate_directions;
};

/// Pointwise derivative data of one family at (t, x): spatial and moduli
/// derivatives of P, and U†∂U in both directions. One evaluation bundle
/// feeds every metric integrand.
struct FrameDerivatives {
  Matrix u;
  std::vector<Matrix> dp_space;    // ∂_mu P, mu = 1..d
  std::vector<Matrix> dp_moduli;   // ∂_i P over moduli
  std::vector<Matrix> omega_space;   // U†∂_mu U (anti-Hermitian)
  std::vector<Matrix> omega_moduli;  // A_i = U†∂_i U
};

FrameDerivatives frame_derivatives(const ModuliFamily& family, const Vector& t,
                                   const Vector& x, bool need_moduli = true,
                                   bool need_omega = false);

/// Phi(U)(x) = sum_mu Tr(∂_mu P ∂_mu P), the flat-chart damping factor.
double phi_at(const ModuliFamily& family, const Vector& t, const Vector& x);

std::function<double(const Vector&)> phi_field(const ModuliFamily& family, Vector t);

/// phi(x) = sum_mu ∂_mu P ∂_mu P as a matrix; the damping factor is the
/// product of Tr(phi^{alpha_k}) over the exponent list.
double damping_factor(const ModuliFamily& family, const Vector& t, const Vector& x,
                      const std::vector<int>& exponents);

/// g^{0,alpha}_{ij} = \int Phi^alpha Tr(∂_i P ∂_j P).
/// `conformal_scale` rescales the flat chart metric by lambda^2: Phi picks
/// up lambda^-2 and the volume lambda^d, a pure weight-counting exercise
/// used by the conformal-class check.
MetricTensor g0_alpha(const ModuliFamily& family, const Vector& t, double alpha,
                      const QuadratureSpec& spec, double conformal_scale = 1.0);

/// g^{1,beta}_{ij} = -\int Phi^beta Tr(A_i A_j), A_i = U†∂_i U.
MetricTensor g1_beta(const ModuliFamily& family, const Vector& t, double beta,
                     const QuadratureSpec& spec);

inline MetricTensor g0(const ModuliFamily& f, const Vector& t, const QuadratureSpec& s) {
  return g0_alpha(f, t, 0.0, s);
}
inline MetricTensor g1(const ModuliFamily& f, const Vector& t, const QuadratureSpec& s) {
  return g1_beta(f, t, 0.0, s);
}

/// Weighted sum over the union of the parts' labels; entries are matched by
/// label name, absent labels contribute zero rows.
MetricTensor combine_metric(const std::vector<std::pair<MetricTensor, double>>& parts,
                            DefinitenessReport* report = nullptr);

DefinitenessReport definiteness(const MetricTensor& g);

/// For a family of the form U(t) = U0 g(t): returns
///   (max ‖∂_i P‖, max ‖∂_i A - d_A A_i‖)
/// sampled over the given points; both vanish for gauge-orbit families.
std::pair<double, double> check_projector_lemma(const ModuliFamily& family,
                                                const Vector& t,
                                                const std::vector<Vector>& points);

/// Fits g_{aa}(rho) ~ rho^e between two scales; the measured exponent for
/// the instanton family is 2 - 2 alpha.
double metric_scaling_exponent(const ModuliFamily& family, const Vector& t,
                               int rho_index, double alpha, double rho1, double rho2,
                               const QuadratureSpec& spec);

}  // namespace um
