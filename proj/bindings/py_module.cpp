// Python bindings for the universal-connection metric engine.

#include <random>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "um/abelian.hpp"
#include "um/metrics.hpp"
#include "um/nr.hpp"

namespace py = pybind11;
using um::Matrix;
using um::Vector;

namespace {

um::ModuliPoint make_point(const Eigen::Vector4d& centre, double rho) {
  um::ModuliPoint t;
  t.centre = centre;
  t.rho = rho;
  t.validate();
  return t;
}

um::QuadratureSpec make_spec(const std::string& quad, int nodes, double extent,
                             std::uint64_t seed) {
  um::QuadratureSpec spec;
  if (quad == "radial")
    spec.scheme = um::QuadratureSpec::Scheme::Radial;
  else if (quad == "tensor")
    spec.scheme = um::QuadratureSpec::Scheme::Tensor;
  else if (quad == "mc")
    spec.scheme = um::QuadratureSpec::Scheme::MonteCarlo;
  else
    throw um::SpecError("unknown quadrature scheme '" + quad + "'");
  spec.nodes = {nodes};
  spec.extent = extent;
  spec.seed = seed;
  return spec;
}

py::dict metric_to_dict(const um::MetricTensor& g) {
  py::dict d;
  d["labels"] = g.labels;
  d["entries"] = um::RealMatrix(g.entries);
  d["length_exponent"] = g.length_exponent;
  d["asymmetry"] = g.asymmetry;
  d["provenance"] = g.provenance;
  return d;
}

}  // namespace

PYBIND11_MODULE(_umcore, m) {
  m.doc() = "universal-connection moduli metrics (C++ core)";

  py::register_exception<um::SpecError>(m, "SpecError", PyExc_ValueError);
  py::register_exception<um::DivergenceError>(m, "DivergenceError", PyExc_ArithmeticError);
  py::register_exception<um::ConstraintError>(m, "ConstraintError", PyExc_ArithmeticError);

  m.def(
      "adhm_frame",
      [](const Eigen::Vector4d& x, const Eigen::Vector4d& centre, double rho) {
        return Matrix(um::adhm_frame(x, make_point(centre, rho)));
      },
      py::arg("x"), py::arg("center") = Eigen::Vector4d::Zero(), py::arg("rho") = 1.0,
      "4x2 ADHM frame U(x) with U^dag U = I.");

  m.def(
      "thooft_connection",
      [](const Eigen::Vector4d& x, const Eigen::Vector4d& centre, double rho) {
        auto a = um::thooft_connection(x, make_point(centre, rho));
        return std::vector<Matrix>(a.begin(), a.end());
      },
      py::arg("x"), py::arg("center") = Eigen::Vector4d::Zero(), py::arg("rho") = 1.0,
      "The four Hermitian components A_mu = i U^dag d_mu U.");

  m.def(
      "phi",
      [](const Eigen::Vector4d& x, const Eigen::Vector4d& centre, double rho) {
        return um::phi_adhm(x, make_point(centre, rho));
      },
      py::arg("x"), py::arg("center") = Eigen::Vector4d::Zero(), py::arg("rho") = 1.0,
      "Damping factor Phi(U)(x) = 16 rho^2 / s^2.");

  m.def(
      "adhm_traces",
      [](const Eigen::Vector4d& x, const Eigen::Vector4d& centre, double rho) {
        return Eigen::MatrixXd(um::adhm_traces(x, make_point(centre, rho)));
      },
      py::arg("x"), py::arg("center") = Eigen::Vector4d::Zero(), py::arg("rho") = 1.0,
      "Closed-form trace matrix T_ij = Tr(d_i P d_j P) over (a, rho).");

  m.def(
      "g0_alpha",
      [](double alpha, double rho, const Eigen::Vector4d& centre, const std::string& quad,
         int nodes, double extent, std::uint64_t seed) {
        Vector t(5);
        t.head<4>() = centre;
        t(4) = rho;
        return metric_to_dict(
            um::g0_alpha(um::adhm_family(), t, alpha, make_spec(quad, nodes, extent, seed)));
      },
      py::arg("alpha") = 2.0, py::arg("rho") = 1.0,
      py::arg("center") = Eigen::Vector4d::Zero(), py::arg("quad") = "radial",
      py::arg("nodes") = 200, py::arg("L") = um::kInfiniteChart, py::arg("seed") = 0,
      "g^{0,alpha} of the instanton family at (center, rho).");

  m.def(
      "g1_beta_rigid",
      [](double beta, double rho, const Eigen::Vector4d& centre, const std::string& quad,
         int nodes, double extent, std::uint64_t seed) {
        return metric_to_dict(um::g1_beta(um::rigid_su2_family(make_point(centre, rho)),
                                          Vector::Zero(3),
                                          beta, make_spec(quad, nodes, extent, seed)));
      },
      py::arg("beta") = 2.0, py::arg("rho") = 1.0,
      py::arg("center") = Eigen::Vector4d::Zero(), py::arg("quad") = "radial",
      py::arg("nodes") = 200, py::arg("L") = um::kInfiniteChart, py::arg("seed") = 0,
      "g^{1,beta} of the rigid SU(2) gauge orbit through the instanton.");

  m.def(
      "scaling_exponent",
      [](double alpha, double rho1, double rho2, int nodes) {
        Vector t = Vector::Zero(5);
        t(4) = rho1;
        return um::metric_scaling_exponent(um::adhm_family(), t, 4, alpha, rho1, rho2,
                                           make_spec("radial", nodes, um::kInfiniteChart, 0));
      },
      py::arg("alpha") = 2.0, py::arg("rho1") = 1.0, py::arg("rho2") = 2.0,
      py::arg("nodes") = 200,
      "Measured exponent e with g_aa(rho) ~ rho^e; equals 2 - 2 alpha.");

  m.def(
      "reconstruct_abelian",
      [](const std::string& grid_json) {
        um::GridField grid = um::GridField::from_json(nlohmann::json::parse(grid_json));
        um::GridReconstruction rec =
            um::reconstruct_abelian_grid(grid, um::AbelianProfiles::defaults(grid.dim));
        py::dict d;
        d["max_error"] = rec.max_error;
        d["norm_defect"] = rec.norm_defect;
        return d;
      },
      py::arg("grid_json"),
      "Reconstruct the abelian universal frame from a grid-connection JSON string.");

  m.def(
      "nr_isotropy",
      [](double rho, int points) {
        um::ModuliPoint ref;
        ref.rho = rho;
        um::ModuliFamily fam = um::nr_instanton_family(ref, um::NRSpec{});
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> uni(-4.0, 4.0);
        std::vector<Vector> pts(points, Vector(4));
        for (auto& p : pts)
          for (int mu = 0; mu < 4; ++mu) p(mu) = uni(rng);
        return um::check_isotropy(fam, um::moduli_vector(ref), pts);
      },
      py::arg("rho") = 1.0, py::arg("points") = 5,
      "Isotropy defect max ||U^dag d_i U|| of the NR instanton family.");
}
