#include "um/family.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include "um/frame.hpp"
#include "um/su2.hpp"

namespace um {

ModuliPoint moduli_point(const Vector& t) {
  if (t.size() < 5) throw SpecError("moduli_point: need (a^1..a^4, rho)");
  ModuliPoint p;
  p.centre = t.head<4>();
  p.rho = t(4);
  p.validate();
  return p;
}

Vector moduli_vector(const ModuliPoint& p) {
  Vector t(5);
  t.head<4>() = p.centre;
  t(4) = p.rho;
  return t;
}

ModuliFamily adhm_family() {
  ModuliFamily fam;
  fam.labels = {"a1", "a2", "a3", "a4", "rho"};
  fam.space_dim = 4;
  fam.frame = [](const Vector& t, const Vector& x) {
    return adhm_frame(Eigen::Vector4d(x.head<4>()), moduli_point(t));
  };
  return fam;
}

Matrix2 rigid_su2(const Eigen::Vector3d& s) {
  const auto& tau = pauli();
  Matrix2 gen = Matrix2::Zero();
  for (int a = 0; a < 3; ++a) gen += Complex(0.0, 0.5) * s(a) * tau[a];
  return gen.exp();
}

ModuliFamily rigid_su2_family(const ModuliPoint& base) {
  ModuliFamily fam;
  fam.labels = {"s1", "s2", "s3"};
  fam.space_dim = 4;
  fam.frame = [base](const Vector& t, const Vector& x) {
    return Matrix(adhm_frame(Eigen::Vector4d(x.head<4>()), base) *
                  rigid_su2(Eigen::Vector3d(t.head<3>())));
  };
  return fam;
}

ModuliFamily adhm_rigid_family() {
  ModuliFamily fam;
  fam.labels = {"a1", "a2", "a3", "a4", "rho", "s1", "s2", "s3"};
  fam.space_dim = 4;
  fam.frame = [](const Vector& t, const Vector& x) {
    return Matrix(adhm_frame(Eigen::Vector4d(x.head<4>()), moduli_point(t)) *
                  rigid_su2(Eigen::Vector3d(t.segment<3>(5))));
  };
  return fam;
}

ModuliFamily gauge_orbit_family(std::function<Matrix(const Vector&)> base_frame,
                                std::function<Matrix(const Vector&, const Vector&)> gauge,
                                int moduli_dim, int space_dim) {
  ModuliFamily fam;
  for (int i = 0; i < moduli_dim; ++i) fam.labels.push_back("t" + std::to_string(i + 1));
  fam.space_dim = space_dim;
  fam.frame = [base = std::move(base_frame), g = std::move(gauge)](const Vector& t,
                                                                   const Vector& x) {
    return Matrix(base(x) * g(t, x));
  };
  return fam;
}

ModuliFamily stacked_family(const ModuliFamily& base, int copies) {
  ModuliFamily fam = base;
  fam.frame = [inner = base.frame, copies](const Vector& t, const Vector& x) {
    return stack_frames(inner(t, x), copies);
  };
  return fam;
}

}  // namespace um
