#include <cmath>

#include "doctest.h"

#include <nlohmann/json.hpp>

#include "um/abelian.hpp"
#include "um/derivative.hpp"

using namespace um;

namespace {

// Smooth bump supported on |u| < 1.
double bump(double u) { return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0; }

double dbump(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  double w = 1.0 - u * u;
  return bump(u) * (-2.0 * u) / (w * w);
}

constexpr double kSupport = 5.0;

double chi(const Vector& x) {
  double v = 1.0;
  for (int a = 0; a < x.size(); ++a) v *= bump(x(a) / kSupport);
  return v;
}

Vector dchi(const Vector& x) {
  Vector g(x.size());
  for (int mu = 0; mu < x.size(); ++mu) {
    double v = dbump(x(mu) / kSupport) / kSupport;
    for (int a = 0; a < x.size(); ++a)
      if (a != mu) v *= bump(x(a) / kSupport);
    g(mu) = v;
  }
  return g;
}

// Compact, non-exact test connection on d = 2.
AbelianConnection bump_connection() {
  AbelianConnection a;
  a.dim = 2;
  a.extent = 8.0;
  a.components = [](const Vector& x) {
    Vector v = dchi(x);
    v(0) += 0.3 * bump(x(0) / kSupport) * bump(x(1) / kSupport);
    return v;
  };
  return a;
}

GridField sample_grid(const AbelianConnection& a, int per_axis) {
  GridField g;
  g.dim = a.dim;
  g.min = Vector::Constant(a.dim, -a.extent);
  g.max = Vector::Constant(a.dim, a.extent);
  g.shape.assign(a.dim, per_axis);
  g.components.assign(a.dim, std::vector<double>(g.points()));
  std::vector<int> idx(a.dim, 0);
  while (true) {
    Vector comp = a.components(g.coordinate(idx));
    for (int mu = 0; mu < a.dim; ++mu) g.components[mu][g.index(idx)] = comp(mu);
    int ax = a.dim - 1;
    for (; ax >= 0; --ax) {
      if (++idx[ax] < g.shape[ax]) break;
      idx[ax] = 0;
    }
    if (ax < 0) break;
  }
  return g;
}

}  // namespace

TEST_CASE("profile defaults and validation") {
  AbelianProfiles p = AbelianProfiles::defaults(4);
  p.validate();
  CHECK(p.c.sum() == doctest::Approx(0.9));
  Vector x = Vector::Zero(4);
  CHECK(p.r_last2(x) == doctest::Approx(1.0 - 3.0 * 0.15));

  AbelianProfiles bad = p;
  bad.c = Vector::Constant(3, 0.4);  // sums above 1
  CHECK_THROWS_AS(bad.validate(), ConstraintError);
}

TEST_CASE("zero connection gives the bare profile frame") {
  AbelianConnection a;
  a.dim = 2;
  a.extent = 8.0;
  a.components = [](const Vector& x) { return Vector::Zero(x.size()); };
  AbelianProfiles p = AbelianProfiles::defaults(2);
  AbelianAngles angles = abelian_angles(a, p);
  auto frame = abelian_frame(p, angles);

  Vector x(2);
  x << 0.7, -1.2;
  CHECK(angles.theta_bar(x) == 0.0);
  CHECK(angles.theta(x)(0) == doctest::Approx(0.0).epsilon(1e-14));
  Eigen::VectorXcd u = frame(x);
  CHECK(u(0).imag() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(u(0).real() == doctest::Approx(std::sqrt(p.r2(0, x(0)))));
  CHECK(u(1).real() == doctest::Approx(std::sqrt(p.r_last2(x))));
  CHECK(std::abs(u.squaredNorm() - 1.0) < 1e-15);
}

TEST_CASE("exact connections are absorbed by theta_bar") {
  AbelianConnection a;
  a.dim = 2;
  a.extent = 8.0;
  a.components = [](const Vector& x) { return dchi(x); };
  AbelianProfiles p = AbelianProfiles::defaults(2);
  AbelianAngles angles = abelian_angles(a, p);

  Vector x(2);
  x << 1.3, 0.4;
  CHECK(angles.theta_bar(x) == doctest::Approx(chi(x)).epsilon(1e-9));
  CHECK(std::abs(angles.theta(x)(0)) < 1e-8);
}

TEST_CASE("i U+ dU reproduces the connection pointwise") {
  AbelianConnection a = bump_connection();
  AbelianProfiles p = AbelianProfiles::defaults(2);
  auto frame = abelian_frame(p, abelian_angles(a, p));
  const Complex i{0.0, 1.0};

  double worst = 0.0;
  double xs[3][2] = {{0.6, -0.9}, {-1.4, 2.0}, {2.5, 0.1}};
  for (auto& pt : xs) {
    Vector x(2);
    x << pt[0], pt[1];
    Vector want = a.components(x);
    Eigen::VectorXcd u = frame(x);
    CHECK(std::abs(u.squaredNorm() - 1.0) < 1e-14);
    for (int mu = 0; mu < 2; ++mu) {
      Eigen::VectorXcd du = partial_derivative(
          [&](const Vector& y) { return Eigen::VectorXcd(frame(y)); }, x, mu, 1e-3);
      Complex got = i * u.dot(du);  // Eigen's dot conjugates the left factor
      worst = std::max(worst, std::abs(got - want(mu)));
    }
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("gauge shifts multiply the frame by a phase") {
  AbelianConnection a = bump_connection();
  AbelianConnection ag = a;
  ag.components = [base = a.components](const Vector& x) {
    return Vector(base(x) + dchi(x));
  };
  AbelianProfiles p = AbelianProfiles::defaults(2);
  auto u1 = abelian_frame(p, abelian_angles(a, p));
  auto u2 = abelian_frame(p, abelian_angles(ag, p));
  const Complex i{0.0, 1.0};

  Vector x(2);
  x << -0.8, 1.1;
  Eigen::VectorXcd diff = u2(x) - std::exp(-i * chi(x)) * u1(x);
  CHECK(diff.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("theta overflow far outside the profile support") {
  AbelianConnection a;
  a.dim = 2;
  a.extent = 40.0;
  a.components = [](const Vector& x) { return Vector::Ones(x.size()); };
  AbelianProfiles p = AbelianProfiles::defaults(2);
  AbelianAngles angles = abelian_angles(a, p);
  Vector x(2);
  x << 35.0, 0.0;  // profile slope ~ e^{-35}; theta blows past the cutoff
  CHECK_THROWS_AS(angles.theta(x), DivergenceError);
}

TEST_CASE("grid reconstruction: norm, error, and convergence order") {
  GridField grid = sample_grid(bump_connection(), 513);
  AbelianProfiles p = AbelianProfiles::defaults(2);
  GridReconstruction fine = reconstruct_abelian_grid(grid, p);
  CHECK(fine.norm_defect < 1e-14);
  CHECK(fine.max_error < 0.05);

  GridReconstruction coarse = reconstruct_abelian_grid(grid.subsample(), p);
  double order = std::log2(coarse.max_error / fine.max_error);
  CHECK(order > 1.8);
  CHECK(order < 2.2);
}

TEST_CASE("margin policy rejects fields touching the boundary") {
  AbelianConnection a;
  a.dim = 2;
  a.extent = 8.0;
  a.components = [](const Vector& x) {
    Vector v(2);
    v << std::cos(x(0)), 0.0;  // no decay at all
    return v;
  };
  GridField grid = sample_grid(a, 33);
  CHECK_THROWS_AS(check_margin(grid), ConstraintError);
  CHECK_THROWS_AS(reconstruct_abelian_grid(grid, AbelianProfiles::defaults(2)),
                  ConstraintError);
}

TEST_CASE("grid json round trip") {
  GridField grid = sample_grid(bump_connection(), 17);
  GridField back = GridField::from_json(grid.to_json());
  CHECK(back.dim == grid.dim);
  CHECK(back.shape == grid.shape);
  CHECK((back.min - grid.min).cwiseAbs().maxCoeff() == 0.0);
  for (int mu = 0; mu < grid.dim; ++mu)
    for (std::int64_t k = 0; k < grid.points(); ++k)
      CHECK(back.components[mu][k] == grid.components[mu][k]);

  nlohmann::json j = grid.to_json();
  j["components"] = nlohmann::json::array();  // wrong component count
  CHECK_THROWS_AS(GridField::from_json(j), SpecError);
}

TEST_CASE("frame export carries the grid and diagnostics") {
  GridField grid = sample_grid(bump_connection(), 33);
  AbelianProfiles p = AbelianProfiles::defaults(2);
  GridReconstruction rec = reconstruct_abelian_grid(grid, p);
  nlohmann::json j = rec.frame_to_json(grid);
  CHECK(j.at("components").size() == 2);
  CHECK(j.at("grid").at("points")[0] == 33);
  CHECK(j.at("max_error").get<double>() == rec.max_error);
  // innermost entries are [re, im] pairs
  CHECK(j["components"][0][0][0].size() == 2);
}

TEST_CASE("the d x 1 abelian frame is smaller than its NR counterpart") {
  // NR needs (2d+1) n^2 blocks even at n = 1; the abelian recipe gets away
  // with d complex entries.
  AbelianProfiles p = AbelianProfiles::defaults(2);
  AbelianConnection a = bump_connection();
  auto frame = abelian_frame(p, abelian_angles(a, p));
  Vector x = Vector::Zero(2);
  CHECK(frame(x).size() == 2);  // vs (2*2 + 1) * 1 = 5 rows for NR
}
