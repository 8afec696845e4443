#include "doctest.h"

#include "um/basis.hpp"
#include "um/frame.hpp"
#include "um/su2.hpp"

using namespace um;

TEST_CASE("projector of a canonical frame") {
  Matrix u = Matrix::Identity(3, 1);
  Matrix p = projector(u);
  CHECK(max_abs(Matrix(p - Matrix::Identity(3, 3).col(0) *
                               Matrix::Identity(3, 3).col(0).adjoint())) == 0.0);
  CHECK(p(0, 0).real() == doctest::Approx(1.0));
  CHECK(std::abs(p(1, 1)) == 0.0);
}

TEST_CASE("projector rejects non-orthonormal frames") {
  Matrix u = 2.0 * Matrix::Identity(3, 1);
  CHECK_THROWS_AS(projector(u), ConstraintError);
  try {
    projector(u);
  } catch (const ConstraintError& e) {
    CHECK(e.deviation() == doctest::Approx(3.0));
  }
}

TEST_CASE("random frames: idempotency, hermiticity, trace") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Matrix u = random_frame(5, 2, seed);
    CHECK(orthonormality_defect(u) < 1e-12);
    Matrix p = projector(u);
    CHECK(max_abs(Matrix(p * p - p)) < 1e-12);
    CHECK(max_abs(Matrix(p - p.adjoint())) < 1e-13);
    CHECK(p.trace().real() == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("projector is invariant under constant unitaries") {
  Matrix u = random_frame(6, 3, 7);
  Matrix g = random_frame(3, 3, 8);  // 3x3 unitary
  CHECK(max_abs(Matrix(projector(Matrix(u * g)) - projector(u))) < 1e-14);
}

TEST_CASE("pauli algebra and sigma matrices") {
  const auto& tau = pauli();
  const Complex i{0.0, 1.0};
  CHECK(max_abs(Matrix(tau[0] * tau[1] - i * tau[2])) == 0.0);
  for (int a = 0; a < 3; ++a) {
    CHECK(std::abs(tau[a].trace()) == 0.0);
    CHECK(max_abs(Matrix(tau[a] - tau[a].adjoint())) == 0.0);
    for (int b = 0; b < 3; ++b) {
      Matrix2 anti = tau[a] * tau[b] + tau[b] * tau[a];
      CHECK(max_abs(Matrix(anti - 2.0 * (a == b) * Matrix2::Identity())) == 0.0);
    }
  }
  CHECK(max_abs(Matrix(sigma_bar()[3] - Matrix2::Identity())) == 0.0);
  for (int mu = 0; mu < 4; ++mu) {
    CHECK(max_abs(Matrix(sigma_bar()[mu] - sigma()[mu].adjoint())) == 0.0);
    for (int nu = 0; nu < 4; ++nu) {
      Matrix2 anti = sigma_bar()[mu] * sigma()[nu] + sigma_bar()[nu] * sigma()[mu];
      CHECK(max_abs(Matrix(anti - 2.0 * (mu == nu) * Matrix2::Identity())) < 1e-15);
    }
  }
  Matrix2 sum = Matrix2::Zero();
  for (int mu = 0; mu < 4; ++mu) sum += sigma_bar()[mu] * sigma()[mu];
  CHECK(max_abs(Matrix(sum - 4.0 * Matrix2::Identity())) == 0.0);
}

TEST_CASE("thooft eta values and self-duality") {
  CHECK(thooft_eta(1, 2, 3) == 1);
  CHECK(thooft_eta(3, 3, 4) == 1);
  CHECK(thooft_eta(2, 1, 3) == -1);
  // antisymmetry and self-duality eta^a_{mu nu} = 1/2 eps_{mu nu rho sigma} eta^a_{rho sigma}
  auto eps4 = [](int a, int b, int c, int d) {
    int v[4] = {a, b, c, d};
    int sign = 1;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 3; ++j)
        if (v[j] > v[j + 1]) {
          std::swap(v[j], v[j + 1]);
          sign = -sign;
        }
    for (int j = 0; j < 3; ++j)
      if (v[j] == v[j + 1]) return 0;
    return sign;
  };
  for (int a = 1; a <= 3; ++a)
    for (int mu = 1; mu <= 4; ++mu)
      for (int nu = 1; nu <= 4; ++nu) {
        CHECK(thooft_eta(a, mu, nu) == -thooft_eta(a, nu, mu));
        int dual = 0;
        for (int r = 1; r <= 4; ++r)
          for (int s = 1; s <= 4; ++s) dual += eps4(mu, nu, r, s) * thooft_eta(a, r, s);
        CHECK(thooft_eta(a, mu, nu) == dual / 2);
      }
  CHECK_THROWS_AS(thooft_eta(4, 1, 2), SpecError);
}

TEST_CASE("instanton basis: norms, eigenvalues, gram") {
  HermitianBasis basis = instanton_basis();
  CHECK(basis.dim() == 2);
  CHECK(basis.size() == 4);
  for (int r = 0; r < 3; ++r) {
    Vector ev = hermitian_eigenvalues(basis.f(r));
    CHECK(ev(0) == doctest::Approx(0.5));
    CHECK(ev(1) == doctest::Approx(1.0));
    CHECK(operator_norm(basis.f(r)) == doctest::Approx(1.0));
    CHECK(max_abs(Matrix(basis.sqrt_f(r) * basis.sqrt_f(r) - basis.f(r))) < 1e-14);
  }
}

TEST_CASE("hermitian decomposition on the instanton basis") {
  HermitianBasis basis = instanton_basis();
  Vector c_id = basis.decompose(Matrix2::Identity());
  CHECK(c_id(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(c_id(1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(c_id(2) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(c_id(3) == doctest::Approx(1.0));

  Vector c_tau = basis.decompose(pauli()[0]);
  CHECK(c_tau(0) == doctest::Approx(4.0));
  CHECK(c_tau(1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(c_tau(2) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(c_tau(3) == doctest::Approx(-3.0));

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Matrix h = random_hermitian(2, seed);
    Vector lambda = basis.decompose(h);
    CHECK(max_abs(Matrix(basis.recompose(lambda) - h)) < 1e-12);
  }
  CHECK_THROWS_AS(basis.decompose(Matrix(pauli()[0] * pauli()[1])), ConstraintError);
}

TEST_CASE("stacked frames keep the projector traces") {
  Matrix u = random_frame(4, 2, 42);
  Matrix m = stack_frames(u, 3);
  CHECK(orthonormality_defect(m) < 1e-14);
  Matrix p = projector(u);
  Matrix pm = projector(m);
  CHECK(pm.trace().real() == doctest::Approx(p.trace().real()));
  CHECK((p * p).trace().real() == doctest::Approx((pm * pm).trace().real()));
}
