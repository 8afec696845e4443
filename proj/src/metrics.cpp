#include "um/metrics.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "um/derivative.hpp"

namespace um {

namespace {

Matrix projector_of(const ModuliFamily& family, const Vector& t, const Vector& x) {
  Matrix u = family.frame(t, x);
  return u * u.adjoint();
}

std::vector<Matrix> space_derivatives(const std::function<Matrix(const Vector&)>& f,
                                      const Vector& x, int dim, double h) {
  std::vector<Matrix> out;
  out.reserve(dim);
  for (int mu = 0; mu < dim; ++mu) out.push_back(partial_derivative(f, x, mu, h));
  return out;
}

double trace_re(const Matrix& a, const Matrix& b) { return (a * b).trace().real(); }

// Decay of the slowest-falling integrand component, judged on axis
// directions at two large radii. Guards every integral over an infinite
// chart against (log-)divergence.
void check_tail(const std::function<Eigen::VectorXd(const Vector&)>& f, int dim,
                int out_dim, const std::string& what) {
  auto sample = [&](double r) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(out_dim);
    Vector x = Vector::Zero(dim);
    for (int a = 0; a < dim; ++a)
      for (double sign : {1.0, -1.0}) {
        x.setZero();
        x(a) = sign * r;
        acc += f(x).cwiseAbs();
      }
    return acc.maxCoeff() / (2.0 * dim);
  };
  const double r1 = 1e3, r2 = 1e5;
  double m1 = sample(r1), m2 = sample(r2);
  if (m2 == 0.0) return;
  if (m1 == 0.0) throw DivergenceError(what + ": integrand grows in the tail");
  double k = std::log(m1 / m2) / std::log(r2 / r1);
  if (k <= dim + 0.05) {
    std::ostringstream os;
    os << what << ": integrand tail decays like r^-" << k << ", integral over R^" << dim
       << " diverges";
    throw DivergenceError(os.str());
  }
}

MetricTensor finish_metric(const ModuliFamily& family, Eigen::VectorXd flat,
                           double exponent, std::string provenance) {
  int nm = family.moduli_dim();
  RealMatrix raw = Eigen::Map<RealMatrix>(flat.data(), nm, nm);
  MetricTensor g;
  g.labels = family.labels;
  g.asymmetry = (raw - raw.transpose()).cwiseAbs().maxCoeff();
  g.entries = 0.5 * (raw + raw.transpose());
  g.length_exponent = exponent;
  g.provenance = std::move(provenance);
  return g;
}

}  // namespace

FrameDerivatives frame_derivatives(const ModuliFamily& family, const Vector& t,
                                   const Vector& x, bool need_moduli, bool need_omega) {
  FrameDerivatives d;
  d.u = family.frame(t, x);
  auto p_of_x = [&](const Vector& xx) { return projector_of(family, t, xx); };
  d.dp_space = space_derivatives(p_of_x, x, family.space_dim, family.space_step);
  if (need_moduli) {
    auto p_of_t = [&](const Vector& tt) { return projector_of(family, tt, x); };
    d.dp_moduli = space_derivatives(p_of_t, t, family.moduli_dim(), family.moduli_step);
  }
  if (need_omega) {
    auto u_of_x = [&](const Vector& xx) { return family.frame(t, xx); };
    for (const Matrix& du : space_derivatives(u_of_x, x, family.space_dim, family.space_step))
      d.omega_space.push_back(d.u.adjoint() * du);
    auto u_of_t = [&](const Vector& tt) { return family.frame(tt, x); };
    for (const Matrix& du : space_derivatives(u_of_t, t, family.moduli_dim(), family.moduli_step))
      d.omega_moduli.push_back(d.u.adjoint() * du);
  }
  return d;
}

double phi_at(const ModuliFamily& family, const Vector& t, const Vector& x) {
  auto p_of_x = [&](const Vector& xx) { return projector_of(family, t, xx); };
  double phi = 0.0;
  for (const Matrix& dp : space_derivatives(p_of_x, x, family.space_dim, family.space_step))
    phi += trace_re(dp, dp);
  return phi;
}

std::function<double(const Vector&)> phi_field(const ModuliFamily& family, Vector t) {
  return [family, t = std::move(t)](const Vector& x) { return phi_at(family, t, x); };
}

double damping_factor(const ModuliFamily& family, const Vector& t, const Vector& x,
                      const std::vector<int>& exponents) {
  for (int a : exponents) {
    if (a < 1) throw SpecError("damping_factor: exponents must be positive integers");
  }
  auto p_of_x = [&](const Vector& xx) { return projector_of(family, t, xx); };
  auto dps = space_derivatives(p_of_x, x, family.space_dim, family.space_step);
  Matrix phi = Matrix::Zero(dps[0].rows(), dps[0].cols());
  for (const Matrix& dp : dps) phi += dp * dp;
  double out = 1.0;
  for (int a : exponents) {
    Matrix pw = Matrix::Identity(phi.rows(), phi.cols());
    for (int k = 0; k < a; ++k) pw = pw * phi;
    out *= pw.trace().real();
  }
  return out;
}

MetricTensor g0_alpha(const ModuliFamily& family, const Vector& t, double alpha,
                      const QuadratureSpec& spec, double conformal_scale) {
  int nm = family.moduli_dim();
  int out_dim = nm * nm;
  double phi_weight = 1.0 / (conformal_scale * conformal_scale);
  double vol_weight = std::pow(conformal_scale, family.space_dim);

  auto integrand = [&, t](const Vector& x) {
    FrameDerivatives d = frame_derivatives(family, t, x, true, false);
    double phi = 0.0;
    for (const Matrix& dp : d.dp_space) phi += trace_re(dp, dp);
    double damp = vol_weight * std::pow(std::max(phi * phi_weight, 0.0), alpha);
    Eigen::VectorXd out(out_dim);
    for (int j = 0; j < nm; ++j)
      for (int i = 0; i < nm; ++i)
        out(j * nm + i) = damp * trace_re(d.dp_moduli[i], d.dp_moduli[j]);
    return out;
  };

  if (std::isinf(spec.extent)) check_tail(integrand, family.space_dim, out_dim, "g0_alpha");
  Eigen::VectorXd flat = integrate_chart_vector(integrand, family.space_dim, out_dim, spec);

  std::ostringstream prov;
  prov << "g0,alpha=" << alpha;
  return finish_metric(family, std::move(flat), 2.0 - 2.0 * alpha, prov.str());
}

MetricTensor g1_beta(const ModuliFamily& family, const Vector& t, double beta,
                     const QuadratureSpec& spec) {
  int nm = family.moduli_dim();
  int out_dim = nm * nm;

  auto integrand = [&, t](const Vector& x) {
    FrameDerivatives d = frame_derivatives(family, t, x, false, true);
    double phi = 0.0;
    for (const Matrix& dp : d.dp_space) phi += trace_re(dp, dp);
    double damp = std::pow(std::max(phi, 0.0), beta);
    Eigen::VectorXd out(out_dim);
    for (int j = 0; j < nm; ++j)
      for (int i = 0; i < nm; ++i)
        out(j * nm + i) = -damp * trace_re(d.omega_moduli[i], d.omega_moduli[j]);
    return out;
  };

  if (std::isinf(spec.extent)) check_tail(integrand, family.space_dim, out_dim, "g1_beta");
  Eigen::VectorXd flat = integrate_chart_vector(integrand, family.space_dim, out_dim, spec);

  std::ostringstream prov;
  prov << "g1,beta=" << beta;
  return finish_metric(family, std::move(flat), 4.0 - 2.0 * beta, prov.str());
}

DefinitenessReport definiteness(const MetricTensor& g) {
  DefinitenessReport report;
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(g.entries);
  report.eigenvalues = es.eigenvalues();
  double top = report.eigenvalues.cwiseAbs().maxCoeff();
  double threshold = 1e-8 * top;
  report.positive_definite = top > 0.0 && report.eigenvalues.minCoeff() > threshold;
  for (int k = 0; k < report.eigenvalues.size(); ++k) {
    if (report.eigenvalues(k) <= threshold) {
      int dominant = 0;
      es.eigenvectors().col(k).cwiseAbs().maxCoeff(&dominant);
      report.degenerate_directions.push_back(g.labels[dominant]);
    }
  }
  return report;
}

MetricTensor combine_metric(const std::vector<std::pair<MetricTensor, double>>& parts,
                            DefinitenessReport* report) {
  if (parts.empty()) throw SpecError("combine_metric: no parts");
  std::vector<std::string> labels;
  for (const auto& [g, w] : parts) {
    std::vector<std::string> seen;
    for (const auto& l : g.labels) {
      if (std::find(seen.begin(), seen.end(), l) != seen.end()) {
        throw SpecError("combine_metric: repeated label '" + l + "' in one part");
      }
      seen.push_back(l);
      if (std::find(labels.begin(), labels.end(), l) == labels.end()) labels.push_back(l);
    }
  }
  int n = static_cast<int>(labels.size());
  MetricTensor out;
  out.labels = labels;
  out.entries = RealMatrix::Zero(n, n);
  out.length_exponent = parts[0].first.length_exponent;
  std::ostringstream prov;
  prov << "combine(";
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const auto& [g, w] = parts[p];
    std::vector<int> index(g.dim());
    for (int i = 0; i < g.dim(); ++i) {
      index[i] = static_cast<int>(
          std::find(labels.begin(), labels.end(), g.labels[i]) - labels.begin());
    }
    for (int i = 0; i < g.dim(); ++i)
      for (int j = 0; j < g.dim(); ++j) out.entries(index[i], index[j]) += w * g(i, j);
    prov << (p ? "; " : "") << g.provenance << " x " << w;
    out.asymmetry = std::max(out.asymmetry, g.asymmetry);
  }
  prov << ")";
  out.provenance = prov.str();
  if (report) *report = definiteness(out);
  return out;
}

std::pair<double, double> check_projector_lemma(const ModuliFamily& family,
                                                const Vector& t,
                                                const std::vector<Vector>& points) {
  double dp_defect = 0.0;
  double lemma_defect = 0.0;
  int nm = family.moduli_dim();
  int d = family.space_dim;

  auto omega_space_at = [&](const Vector& tt, const Vector& xx, int mu) {
    Matrix u = family.frame(tt, xx);
    Matrix du = partial_derivative(
        [&](const Vector& y) { return family.frame(tt, y); }, xx, mu, family.space_step);
    return Matrix(u.adjoint() * du);
  };
  auto omega_moduli_at = [&](const Vector& tt, const Vector& xx, int i) {
    Matrix u = family.frame(tt, xx);
    Matrix du = partial_derivative(
        [&](const Vector& s) { return family.frame(s, xx); }, tt, i, family.moduli_step);
    return Matrix(u.adjoint() * du);
  };

  for (const Vector& x : points) {
    FrameDerivatives der = frame_derivatives(family, t, x, true, true);
    for (int i = 0; i < nm; ++i) dp_defect = std::max(dp_defect, max_abs(der.dp_moduli[i]));
    for (int i = 0; i < nm; ++i) {
      // d_A A_i with A = U†dU:  (d_A A_i)_mu = ∂_mu A_i + [A_mu, A_i].
      for (int mu = 0; mu < d; ++mu) {
        Matrix di_amu = partial_derivative(
            [&](const Vector& s) { return omega_space_at(s, x, mu); }, t, i,
            family.moduli_step);
        Matrix dmu_ai = partial_derivative(
            [&](const Vector& y) { return omega_moduli_at(t, y, i); }, x, mu,
            family.space_step);
        Matrix comm =
            der.omega_space[mu] * der.omega_moduli[i] - der.omega_moduli[i] * der.omega_space[mu];
        lemma_defect = std::max(lemma_defect, max_abs(Matrix(di_amu - dmu_ai - comm)));
      }
    }
  }
  return {dp_defect, lemma_defect};
}

double metric_scaling_exponent(const ModuliFamily& family, const Vector& t,
                               int rho_index, double alpha, double rho1, double rho2,
                               const QuadratureSpec& spec) {
  if (rho1 == rho2) throw SpecError("metric_scaling_exponent: need two distinct scales");
  Vector t1 = t, t2 = t;
  t1(rho_index) = rho1;
  t2(rho_index) = rho2;
  double g1 = g0_alpha(family, t1, alpha, spec)(0, 0);
  double g2 = g0_alpha(family, t2, alpha, spec)(0, 0);
  if (!(g1 > 0.0) || !(g2 > 0.0)) {
    throw DivergenceError("metric_scaling_exponent: non-positive g_aa entries");
  }
  return std::log(g2 / g1) / std::log(rho2 / rho1);
}

nlohmann::json MetricTensor::to_json() const {
  nlohmann::json j;
  j["labels"] = labels;
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < dim(); ++i) {
    std::vector<double> row;
    for (int k = 0; k < dim(); ++k) row.push_back(entries(i, k));
    rows.push_back(std::move(row));
  }
  j["entries"] = rows;
  j["exponent"] = length_exponent;
  j["provenance"] = provenance;
  j["asymmetry"] = asymmetry;
  return j;
}

std::string MetricTensor::to_csv() const {
  std::ostringstream os;
  os << "i,j,label_i,label_j,value\n";
  os.precision(17);
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j)
      os << i << "," << j << "," << labels[i] << "," << labels[j] << "," << entries(i, j)
         << "\n";
  return os.str();
}

}  // namespace um
