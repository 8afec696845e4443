#include <cmath>

#include "doctest.h"

#include <nlohmann/json.hpp>

#include "um/derivative.hpp"
#include "um/metrics.hpp"

using namespace um;

namespace {

const double kPi2 = M_PI * M_PI;

QuadratureSpec radial_spec() { return QuadratureSpec{}; }

QuadratureSpec box_spec(double extent, int nodes = 24) {
  QuadratureSpec s;
  s.scheme = QuadratureSpec::Scheme::Tensor;
  s.nodes = {nodes};
  s.extent = extent;
  return s;
}

Vector instanton_t(double rho = 1.0) {
  Vector t = Vector::Zero(5);
  t(4) = rho;
  return t;
}

std::vector<Vector> sample_points() {
  std::vector<Vector> pts;
  double xs[4][4] = {{0.5, -0.3, 0.8, 0.1},
                     {1.2, 0.4, -0.6, 0.9},
                     {-0.2, 0.0, 0.3, -1.1},
                     {2.0, 1.0, 0.0, 0.5}};
  for (auto& p : xs) {
    Vector x(4);
    x << p[0], p[1], p[2], p[3];
    pts.push_back(x);
  }
  return pts;
}

// ADHM frame right-multiplied by an x-dependent unitary; same projector.
ModuliFamily regauged_adhm_family() {
  ModuliFamily fam = adhm_family();
  auto base = fam.frame;
  fam.frame = [base](const Vector& t, const Vector& x) {
    Matrix2 h = rigid_su2(Eigen::Vector3d(std::sin(x(0)), 0.2 * x(1), 0.0));
    return Matrix(base(t, x) * h);
  };
  return fam;
}

}  // namespace

TEST_CASE("pointwise identity: Phi = 2 Tr(dU+ dU) + 2 Tr(omega omega)") {
  ModuliFamily fam = adhm_family();
  Vector t = instanton_t();
  for (const Vector& x : sample_points()) {
    double phi = phi_at(fam, t, x);
    double rhs = 0.0;
    for (int mu = 0; mu < 4; ++mu) {
      Matrix du = partial_derivative(
          [&](const Vector& y) { return fam.frame(t, y); }, x, mu, fam.space_step);
      Matrix u = fam.frame(t, x);
      Matrix omega = u.adjoint() * du;
      rhs += 2.0 * (du.adjoint() * du).trace().real() +
             2.0 * (omega * omega).trace().real();
    }
    CHECK(phi == doctest::Approx(rhs).epsilon(1e-8));
    CHECK(phi == doctest::Approx(phi_adhm(Eigen::Vector4d(x), moduli_point(t))).epsilon(1e-7));
  }
}

TEST_CASE("undamped g0 over R^4 is flagged divergent") {
  CHECK_THROWS_AS(g0(adhm_family(), instanton_t(), radial_spec()), DivergenceError);
}

TEST_CASE("g0 with alpha at and below 1/2 keeps g_rhorho divergent") {
  // Phi^alpha T_rhorho ~ r^{-4 alpha - 4} * r^2; integrable only for alpha > 1/2.
  CHECK_THROWS_AS(g0_alpha(adhm_family(), instanton_t(), 0.5, radial_spec()),
                  DivergenceError);
}

TEST_CASE("closed form g^{0,2}: A(2) = 256 pi^2/5 and B(2) = 2/3") {
  MetricTensor g = g0_alpha(adhm_family(), instanton_t(), 2.0, radial_spec());
  double a_coeff = 256.0 * kPi2 / 5.0;
  for (int a = 0; a < 4; ++a)
    CHECK(std::abs(g(a, a) - a_coeff) / a_coeff < 1e-3);
  CHECK(std::abs(g(4, 4) / g(0, 0) - 2.0 / 3.0) < 1e-3);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (i != j) CHECK(std::abs(g(i, j)) < 1e-6 * a_coeff);
  CHECK(g.asymmetry < 1e-8 * a_coeff);
  CHECK(g.length_exponent == doctest::Approx(-2.0));
  CHECK(definiteness(g).positive_definite);
}

TEST_CASE("closed form g^{0,1}: A(1) = 32 pi^2/3 and B(1) = 2") {
  MetricTensor g = g0_alpha(adhm_family(), instanton_t(), 1.0, radial_spec());
  double a_coeff = 32.0 * kPi2 / 3.0;
  CHECK(std::abs(g(0, 0) - a_coeff) / a_coeff < 1e-3);
  CHECK(std::abs(g(4, 4) / g(0, 0) - 2.0) < 1e-3);
  CHECK(g.length_exponent == doctest::Approx(0.0));
}

TEST_CASE("rigid gauge metric g^{1,2} = (delta/2) * 128 pi^2/3") {
  ModuliPoint base;
  MetricTensor g = g1_beta(rigid_su2_family(base), Vector::Zero(3), 2.0, radial_spec());
  double want = 0.5 * 128.0 * kPi2 / 3.0;
  for (int a = 0; a < 3; ++a) {
    CHECK(std::abs(g(a, a) - want) / want < 1e-3);
    for (int b = 0; b < 3; ++b)
      if (a != b) CHECK(std::abs(g(a, b)) < 1e-6 * want);
  }
  CHECK(g.length_exponent == doctest::Approx(0.0));
}

TEST_CASE("undamped g1 of the rigid family diverges on R^4") {
  ModuliPoint base;
  CHECK_THROWS_AS(g1(rigid_su2_family(base), Vector::Zero(3), radial_spec()),
                  DivergenceError);
}

TEST_CASE("gauge orbits carry no g0 metric") {
  ModuliPoint base;
  ModuliFamily fam = rigid_su2_family(base);
  MetricTensor g = g0(fam, Vector::Zero(3), box_spec(2.0, 12));
  CHECK(g.entries.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("g^{0,alpha} only sees the projector: regauged family agrees") {
  MetricTensor a = g0_alpha(adhm_family(), instanton_t(), 2.0, radial_spec());
  MetricTensor b = g0_alpha(regauged_adhm_family(), instanton_t(), 2.0, radial_spec());
  CHECK((a.entries - b.entries).cwiseAbs().maxCoeff() < 1e-6 * a(0, 0));
}

TEST_CASE("stacking leaves g^{0,alpha} unchanged") {
  ModuliFamily base = adhm_family();
  ModuliFamily stacked = stacked_family(base, 3);
  Vector t = instanton_t();
  MetricTensor ga = g0_alpha(base, t, 2.0, radial_spec());
  MetricTensor gb = g0_alpha(stacked, t, 2.0, radial_spec());
  CHECK((ga.entries - gb.entries).cwiseAbs().maxCoeff() < 1e-12 * ga(0, 0));

  // and the undamped metric on a bounded box
  MetricTensor ha = g0(base, t, box_spec(2.0, 10));
  MetricTensor hb = g0(stacked, t, box_spec(2.0, 10));
  CHECK((ha.entries - hb.entries).cwiseAbs().maxCoeff() < 1e-12 * ha(0, 0));
}

TEST_CASE("damping factors: products and the trace inequality") {
  ModuliFamily fam = adhm_family();
  Vector t = instanton_t();
  for (const Vector& x : sample_points()) {
    double tr1 = damping_factor(fam, t, x, {1});
    double tr2 = damping_factor(fam, t, x, {2});
    CHECK(tr1 == doctest::Approx(phi_at(fam, t, x)).epsilon(1e-10));
    CHECK(damping_factor(fam, t, x, {1, 1}) == doctest::Approx(tr1 * tr1));
    // phi is PSD, so Tr phi^2 <= (Tr phi)^2
    CHECK(tr2 <= tr1 * tr1 + 1e-12);
  }
  CHECK_THROWS_AS(damping_factor(fam, t, sample_points()[0], {0}), SpecError);
}

TEST_CASE("combined 8-moduli metric is positive definite") {
  MetricTensor g0part = g0_alpha(adhm_family(), instanton_t(), 2.0, radial_spec());
  ModuliPoint base;
  MetricTensor g1part = g1_beta(rigid_su2_family(base), Vector::Zero(3), 2.0, radial_spec());
  DefinitenessReport rep;
  MetricTensor full = combine_metric({{g0part, 1.0}, {g1part, 1.0}}, &rep);
  CHECK(full.dim() == 8);
  CHECK(rep.positive_definite);
  CHECK(rep.eigenvalues.minCoeff() > 0.0);

  // dropping the gauge block leaves named degenerate directions
  DefinitenessReport degenerate;
  combine_metric({{g0part, 1.0}, {g1part, 0.0}}, &degenerate);
  CHECK_FALSE(degenerate.positive_definite);
  REQUIRE(degenerate.degenerate_directions.size() == 3);
  for (const auto& l : degenerate.degenerate_directions) CHECK(l[0] == 's');

  MetricTensor bad = g0part;
  bad.labels[1] = bad.labels[0];
  CHECK_THROWS_AS(combine_metric({{bad, 1.0}}, nullptr), SpecError);
}

TEST_CASE("projector lemma on gauge-orbit families") {
  ModuliPoint base;
  Eigen::Vector4d a0 = base.centre;
  auto base_frame = [base](const Vector& x) {
    return adhm_frame(Eigen::Vector4d(x.head<4>()), base);
  };

  // rigid gauge factor
  ModuliFamily rigid = gauge_orbit_family(
      base_frame,
      [](const Vector& t, const Vector&) {
        return Matrix(rigid_su2(Eigen::Vector3d(t(0), t(1), t(2))));
      },
      3);
  auto [dp_r, lemma_r] = check_projector_lemma(rigid, Vector::Zero(3), sample_points());
  CHECK(dp_r < 1e-7);
  CHECK(lemma_r < 1e-7);

  // x-dependent gauge factor
  ModuliFamily wavy = gauge_orbit_family(
      base_frame,
      [](const Vector& t, const Vector& x) {
        return Matrix(rigid_su2(Eigen::Vector3d(t(0) * std::sin(0.5 * x(1)), 0.0,
                                                t(0) * std::cos(0.3 * x(0)))));
      },
      1);
  Vector t1 = Vector::Constant(1, 0.4);
  auto [dp_w, lemma_w] = check_projector_lemma(wavy, t1, sample_points());
  CHECK(dp_w < 1e-7);
  CHECK(lemma_w < 1e-7);

  // the ADHM moduli are not a gauge orbit: both defects are O(1) together
  auto [dp_adhm, lemma_adhm] =
      check_projector_lemma(adhm_family(), instanton_t(), sample_points());
  CHECK(dp_adhm > 0.1);
  CHECK(lemma_adhm > 0.1);
}

TEST_CASE("scaling exponent e = 2 - 2 alpha in rho") {
  ModuliFamily fam = adhm_family();
  Vector t = instanton_t();
  QuadratureSpec spec = radial_spec();
  CHECK(metric_scaling_exponent(fam, t, 4, 2.0, 1.0, 2.0, spec) ==
        doctest::Approx(-2.0).epsilon(1e-3));
  CHECK(std::abs(metric_scaling_exponent(fam, t, 4, 1.0, 1.0, 2.0, spec)) < 1e-3);
  CHECK(metric_scaling_exponent(fam, t, 4, 3.0, 1.0, 2.0, spec) ==
        doctest::Approx(-4.0).epsilon(1e-3));
}

TEST_CASE("conformal weight of g^{0,alpha} on R^4") {
  ModuliFamily fam = adhm_family();
  Vector t = instanton_t();
  QuadratureSpec spec = radial_spec();
  // alpha = 2: conformally invariant in d = 4
  MetricTensor g_a = g0_alpha(fam, t, 2.0, spec, 1.0);
  MetricTensor g_b = g0_alpha(fam, t, 2.0, spec, 3.0);
  CHECK((g_a.entries - g_b.entries).cwiseAbs().maxCoeff() < 1e-10 * g_a(0, 0));
  // alpha = 1 picks up lambda^{4 - 2 alpha} = lambda^2
  MetricTensor h_a = g0_alpha(fam, t, 1.0, spec, 1.0);
  MetricTensor h_b = g0_alpha(fam, t, 1.0, spec, 3.0);
  CHECK(h_b(0, 0) == doctest::Approx(9.0 * h_a(0, 0)).epsilon(1e-10));
}

TEST_CASE("metric tensor serialization") {
  MetricTensor g = g0_alpha(adhm_family(), instanton_t(), 2.0, radial_spec());
  nlohmann::json j = g.to_json();
  CHECK(j.at("labels").size() == 5);
  CHECK(j.at("entries").size() == 5);
  CHECK(j.at("exponent").get<double>() == -2.0);
  CHECK(j.at("entries")[0][0].get<double>() == g(0, 0));

  std::string csv = g.to_csv();
  CHECK(csv.find("i,j,label_i,label_j,value") == 0);
  CHECK(csv.find("rho,rho") != std::string::npos);
}
