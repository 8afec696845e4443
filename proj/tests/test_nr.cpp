#include <cmath>
#include <random>

#include "doctest.h"

#include <nlohmann/json.hpp>

#include "um/derivative.hpp"
#include "um/frame.hpp"
#include "um/nr.hpp"

using namespace um;

namespace {

std::vector<Vector> chart_points(int count, int dim, double extent, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-extent, extent);
  std::vector<Vector> pts(count, Vector(dim));
  for (auto& p : pts)
    for (int mu = 0; mu < dim; ++mu) p(mu) = uni(rng);
  return pts;
}

}  // namespace

TEST_CASE("instanton lambda at a hand-checked point") {
  ModuliPoint t;  // a = 0, rho = 1
  LambdaField lambda = instanton_lambda(t);
  Vector x(4);
  x << 0, 0, 0, 1;  // A_i = tau_i / 2, A_4 = 0
  RealMatrix l = lambda(x);
  REQUIRE(l.rows() == 4);
  REQUIRE(l.cols() == 4);
  for (int i = 0; i < 3; ++i)
    for (int mu = 0; mu < 4; ++mu)
      CHECK(l(i, mu) == doctest::Approx(i == mu ? 2.0 : 0.0).epsilon(1e-12));
  for (int mu = 0; mu < 3; ++mu) CHECK(l(3, mu) == doctest::Approx(-1.5));
  CHECK(l(3, 3) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("lambda_4 tracks the traceless constraint") {
  // A_mu traceless forces lambda_4 = -(3/4) sum_i lambda_i on this basis.
  ModuliPoint t;
  t.centre << 0.2, -0.4, 1.0, 0.3;
  t.rho = 1.6;
  LambdaField lambda = instanton_lambda(t);
  for (const Vector& x : chart_points(20, 4, 3.0, 2)) {
    RealMatrix l = lambda(x);
    for (int mu = 0; mu < 4; ++mu) {
      double sum = l(0, mu) + l(1, mu) + l(2, mu);
      CHECK(l(3, mu) == doctest::Approx(-0.75 * sum).epsilon(1e-10));
    }
  }
}

TEST_CASE("n = 1, d = 1 frame by hand") {
  // lambda = 0.2, N = 2, k = 0.05: p^2 = 0.15, q^2 = 0.05, h^2 = 0.8.
  NRSpec spec;
  spec.space_dim = 1;
  spec.chart_extent = 1.0;
  spec.phase_scale = 2.0;
  spec.shifts = RealMatrix::Constant(1, 1, 0.05);
  LambdaField lambda = [](const Vector&) { return RealMatrix::Constant(1, 1, 0.2); };
  NRFrame frame(lambda, abelian_basis(), spec);
  CHECK(frame.rows() == 3);

  double x0 = 0.7;
  Vector x(1);
  x << x0;
  Matrix u = frame(x);
  Complex phase = std::exp(Complex(0.0, 2.0 * x0));
  CHECK(std::abs(u(0, 0) - std::sqrt(0.15) * phase) < 1e-15);
  CHECK(std::abs(u(1, 0) - std::sqrt(0.05) * std::conj(phase)) < 1e-15);
  CHECK(std::abs(u(2, 0) - std::sqrt(0.8)) < 1e-15);
  CHECK(orthonormality_defect(u) < 1e-15);
}

TEST_CASE("positivity guard trips when the shifts are too small") {
  NRSpec spec;
  spec.space_dim = 1;
  spec.phase_scale = 2.0;
  spec.shifts = RealMatrix::Constant(1, 1, 0.05);
  LambdaField bad = [](const Vector&) { return RealMatrix::Constant(1, 1, -0.5); };
  NRFrame frame(bad, abelian_basis(), spec);
  Vector x = Vector::Zero(1);
  CHECK_THROWS_AS(frame(x), SpecError);
}

TEST_CASE("resolved spec: power-of-two N, budget honoured, frozen shifts") {
  NRSpec spec;
  ModuliPoint t;
  NRSpec resolved =
      resolve_nr_spec({instanton_lambda(t)}, instanton_basis(), spec);
  CHECK(resolved.phase_scale > 0.0);
  double log2n = std::log2(resolved.phase_scale);
  CHECK(log2n == doctest::Approx(std::round(log2n)));
  CHECK(resolved.shifts.rows() == 4);
  CHECK(resolved.shifts.cols() == 4);
  CHECK(resolved.shifts.minCoeff() > 0.0);
  // re-resolving with the constants pinned is a no-op
  NRSpec again =
      resolve_nr_spec({instanton_lambda(t)}, instanton_basis(), resolved);
  CHECK(again.phase_scale == resolved.phase_scale);
  CHECK((again.shifts - resolved.shifts).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("instanton NR frame is orthonormal across the chart") {
  ModuliPoint t;
  NRSpec spec;
  NRSpec resolved = resolve_nr_spec({instanton_lambda(t)}, instanton_basis(), spec);
  NRFrame frame(instanton_lambda(t), instanton_basis(), resolved);
  for (const Vector& x : chart_points(50, 4, 5.0, 7)) {
    CHECK(orthonormality_defect(frame(x)) < 1e-12);
  }
}

TEST_CASE("reconstruction: U+ dU = i sum lambda f") {
  ModuliPoint t;
  t.rho = 1.2;
  HermitianBasis basis = instanton_basis();
  LambdaField lambda = instanton_lambda(t);
  NRSpec spec;
  NRFrame frame(lambda, basis, resolve_nr_spec({lambda}, basis, spec));
  auto pts = chart_points(8, 4, 5.0, 11);
  CHECK(reconstruction_defect(frame, lambda, basis, pts) < 1e-5);
}

TEST_CASE("U+ dU is anti-Hermitian") {
  ModuliPoint t;
  HermitianBasis basis = instanton_basis();
  LambdaField lambda = instanton_lambda(t);
  NRSpec spec;
  NRFrame frame(lambda, basis, resolve_nr_spec({lambda}, basis, spec));
  Vector x(4);
  x << 0.4, -1.1, 0.2, 0.9;
  double h = frame.space_step();
  for (int mu = 0; mu < 4; ++mu) {
    Matrix du = partial_derivative([&](const Vector& y) { return frame(y); }, x, mu, h);
    Matrix w = frame(x).adjoint() * du;
    CHECK(max_abs(Matrix(w + w.adjoint())) < 1e-7);
  }
}

TEST_CASE("isotropy of the frozen-constant instanton family") {
  ModuliPoint ref;
  NRSpec spec;
  ModuliFamily fam = nr_instanton_family(ref, spec);
  Vector t = moduli_vector(ref);
  CHECK(check_isotropy(fam, t, chart_points(10, 4, 4.0, 13)) < 1e-8);

  // the cancellation survives away from the reference moduli
  ModuliPoint off;
  off.centre << 0.4, 0.0, -0.3, 0.0;
  off.rho = 1.1;
  CHECK(check_isotropy(fam, moduli_vector(off), chart_points(5, 4, 4.0, 14)) < 1e-8);
}

TEST_CASE("the ADHM family is far from isotropic") {
  ModuliFamily fam = adhm_family();
  ModuliPoint t;
  CHECK(check_isotropy(fam, moduli_vector(t), chart_points(10, 4, 2.0, 17)) > 0.1);
}

TEST_CASE("a moduli-constant family has vanishing defect") {
  ModuliFamily fam;
  fam.labels = {"t1"};
  fam.space_dim = 4;
  fam.frame = [](const Vector&, const Vector& x) {
    ModuliPoint p;
    return adhm_frame(Eigen::Vector4d(x.head<4>()), p);
  };
  CHECK(check_isotropy(fam, Vector::Zero(1), chart_points(5, 4, 2.0, 19)) < 1e-10);
}

TEST_CASE("non-equivariance under a rigid gauge rotation") {
  ModuliPoint t;
  MatrixConnection conn;
  conn.space_dim = 4;
  conn.group_dim = 2;
  conn.components = [t](const Vector& x) {
    auto a = thooft_connection(Eigen::Vector4d(x.head<4>()), t);
    return std::vector<Matrix>(a.begin(), a.end());
  };
  Matrix g = rigid_su2(Eigen::Vector3d(0.0, 0.0, 1.0));
  NRSpec spec;
  double defect =
      check_nonequivariance(conn, instanton_basis(), spec, g, chart_points(10, 4, 3.0, 23));
  CHECK(defect > 0.1);

  // sanity: the identity gauge transformation is exactly equivariant
  Matrix id = Matrix::Identity(2, 2);
  CHECK(check_nonequivariance(conn, instanton_basis(), spec, id,
                              chart_points(5, 4, 3.0, 29)) < 1e-14);
}

TEST_CASE("nr spec json round trip") {
  NRSpec spec;
  spec.space_dim = 4;
  spec.chart_extent = 3.5;
  spec.phase_scale = 512.0;
  spec.shifts = RealMatrix::Constant(4, 4, 0.01);
  NRSpec back = NRSpec::from_json(spec.to_json());
  CHECK(back.space_dim == 4);
  CHECK(back.chart_extent == 3.5);
  CHECK(back.phase_scale == 512.0);
  CHECK((back.shifts - spec.shifts).cwiseAbs().maxCoeff() == 0.0);
}
