#pragma once

#include <functional>
#include <string>
#include <vector>

#include "um/adhm.hpp"
#include "um/matrix.hpp"

namespace um {

/// A parameterized map (t, x) -> U(t, x) with named moduli; everything the
/// metric engine computes starts from one of these.
struct ModuliFamily {
  std::vector<std::string> labels;
  int space_dim = 4;
  std::function<Matrix(const Vector& t, const Vector& x)> frame;
  double moduli_step = kDefaultStepHint;
  double space_step = kDefaultStepHint;

  static constexpr double kDefaultStepHint = 1e-3;

  int moduli_dim() const { return static_cast<int>(labels.size()); }
};

/// The instanton family, moduli (a^1..a^4, rho); t = (a, rho).
ModuliFamily adhm_family();

ModuliPoint moduli_point(const Vector& t);
Vector moduli_vector(const ModuliPoint& p);

/// h(s) = exp(i s_a tau_a / 2), the rigid SU(2) gauge factor.
Matrix2 rigid_su2(const Eigen::Vector3d& s);

/// ADHM frame at a fixed moduli point, acted on by rigid SU(2) gauge
/// transformations; moduli (s1, s2, s3). A pure gauge orbit: g^0 vanishes,
/// g^{1,beta} carries the metric.
ModuliFamily rigid_su2_family(const ModuliPoint& base);

/// Full 8-moduli family (a, rho, s): ADHM times the rigid gauge factor.
ModuliFamily adhm_rigid_family();

/// U(t, x) = U0(x) . g(t, x) for a fixed frame field U0 — the gauge-orbit
/// families of the projector lemma.
ModuliFamily gauge_orbit_family(
    std::function<Matrix(const Vector& x)> base_frame,
    std::function<Matrix(const Vector& t, const Vector& x)> gauge, int moduli_dim,
    int space_dim = 4);

/// Same moduli map with the frame replaced by (U;...;U)/sqrt(copies).
ModuliFamily stacked_family(const ModuliFamily& base, int copies);

}  // namespace um
