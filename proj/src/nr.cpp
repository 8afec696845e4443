#include "um/nr.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "um/derivative.hpp"
#include "um/frame.hpp"
#include "um/su2.hpp"

namespace um {

namespace {

// Sup of lambda and of -lambda per (r, mu) over a chart sample grid. The
// estimates are inflated by a margin because the grid can miss the true
// sup; positivity of p^2 depends on them.
struct LambdaBounds {
  RealMatrix sup_abs;  // n^2 x d
  RealMatrix sup_neg;  // n^2 x d, sup of max(0, -lambda)
};

LambdaBounds scan_lambda(const std::vector<LambdaField>& lambdas, int n2, int d,
                         double extent, int samples) {
  LambdaBounds b;
  b.sup_abs = RealMatrix::Zero(n2, d);
  b.sup_neg = RealMatrix::Zero(n2, d);
  std::vector<int> idx(d, 0);
  Vector x(d);
  while (true) {
    for (int a = 0; a < d; ++a) {
      x(a) = samples == 1 ? 0.0 : -extent + 2.0 * extent * idx[a] / (samples - 1);
    }
    for (const auto& lambda : lambdas) {
      RealMatrix l = lambda(x);
      b.sup_abs = b.sup_abs.cwiseMax(l.cwiseAbs());
      b.sup_neg = b.sup_neg.cwiseMax(-l);
    }
    int a = d - 1;
    for (; a >= 0; --a) {
      if (++idx[a] < samples) break;
      idx[a] = 0;
    }
    if (a < 0) break;
  }
  const double margin = 1.5;
  b.sup_abs *= margin;
  b.sup_neg = b.sup_neg.cwiseMax(0.0) * margin;
  return b;
}

// sup over chart of sum_{r,mu} (|lambda|/N + 2 k)
double spec_bound(const LambdaBounds& b, const RealMatrix& shifts, double big_n) {
  return (b.sup_abs / big_n + 2.0 * shifts).sum();
}

}  // namespace

LambdaField lambda_field(const MatrixConnection& a, const HermitianBasis& basis) {
  if (a.group_dim != basis.dim()) {
    throw SpecError("lambda_field: basis dimension does not match the connection");
  }
  return [a, basis](const Vector& x) {
    std::vector<Matrix> comps = a.components(x);
    RealMatrix l(basis.size(), static_cast<int>(comps.size()));
    for (std::size_t mu = 0; mu < comps.size(); ++mu) {
      l.col(static_cast<int>(mu)) = basis.decompose(comps[mu]);
    }
    return l;
  };
}

LambdaField instanton_lambda(const ModuliPoint& t) {
  MatrixConnection conn;
  conn.space_dim = 4;
  conn.group_dim = 2;
  conn.components = [t](const Vector& x) {
    auto a = thooft_connection(Eigen::Vector4d(x.head<4>()), t);
    return std::vector<Matrix>(a.begin(), a.end());
  };
  return lambda_field(conn, instanton_basis());
}

NRSpec resolve_nr_spec(const std::vector<LambdaField>& lambdas,
                       const HermitianBasis& basis, NRSpec spec) {
  if (lambdas.empty()) throw SpecError("resolve_nr_spec: no lambda fields");
  int n = basis.dim();
  int n2 = basis.size();
  RealMatrix probe = lambdas[0](Vector::Zero(spec.space_dim));
  int d = static_cast<int>(probe.cols());
  if (d != spec.space_dim) throw SpecError("resolve_nr_spec: lambda dimension mismatch");
  LambdaBounds bounds = scan_lambda(lambdas, n2, d, spec.chart_extent, spec.resolve_samples);

  double budget = 1.0 / (2.0 * n * n);
  double eps = 1.0 / (16.0 * d * std::pow(static_cast<double>(n), 4.0));

  auto shifts_for = [&](double big_n) {
    return RealMatrix((bounds.sup_neg / big_n).array() + eps);
  };

  if (spec.phase_scale > 0.0) {
    if (spec.shifts.size() == 0) spec.shifts = shifts_for(spec.phase_scale);
    double bound = spec_bound(bounds, spec.shifts, spec.phase_scale);
    if (bound >= budget) {
      std::ostringstream os;
      os << "NRSpec: positivity bound " << bound << " >= " << budget
         << "; increase phase_scale N";
      throw SpecError(os.str());
    }
    return spec;
  }

  for (double big_n = 1.0; big_n <= 1e12; big_n *= 2.0) {
    RealMatrix shifts = shifts_for(big_n);
    if (spec_bound(bounds, shifts, big_n) < budget) {
      spec.phase_scale = big_n;
      spec.shifts = shifts;
      return spec;
    }
  }
  throw SpecError("resolve_nr_spec: no admissible phase scale found");
}

NRFrame::NRFrame(LambdaField lambda, HermitianBasis basis, NRSpec spec)
    : lambda_(std::move(lambda)), basis_(std::move(basis)), spec_(std::move(spec)) {
  if (spec_.phase_scale <= 0.0 || spec_.shifts.size() == 0) {
    spec_ = resolve_nr_spec({lambda_}, basis_, spec_);
  }
  phase_scale_ = spec_.phase_scale;
  shifts_ = spec_.shifts;
}

int NRFrame::rows() const {
  RealMatrix probe = shifts_;
  int d = static_cast<int>(probe.cols());
  return (2 * d + 1) * basis_.size() * basis_.dim();
}

Matrix NRFrame::operator()(const Vector& x) const {
  RealMatrix l = lambda_(x);
  int n = basis_.dim();
  int n2 = basis_.size();
  int d = static_cast<int>(l.cols());
  double big_n = phase_scale_;

  // Phi_1 (d*n^2 blocks), Phi_2 (d*n^2 blocks), Phi_3 (n^2 blocks);
  // blocks ordered r-major, mu-minor.
  Matrix u((2 * d + 1) * n2 * n, n);
  for (int r = 0; r < n2; ++r) {
    double pq_sum = 0.0;
    for (int mu = 0; mu < d; ++mu) {
      double k = shifts_(r, mu);
      double p2 = l(r, mu) / big_n + k;
      double q2 = k;
      if (!(p2 > 0.0) || !(q2 > 0.0)) {
        throw SpecError("NRFrame: positivity violated; constants too small for this field");
      }
      pq_sum += p2 + q2;
      Complex phase = std::exp(Complex(0.0, big_n * x(mu)));
      int row1 = (r * d + mu) * n;
      int row2 = (d * n2 + r * d + mu) * n;
      u.block(row1, 0, n, n) = std::sqrt(p2) * phase * basis_.sqrt_f(r);
      u.block(row2, 0, n, n) = std::sqrt(q2) * std::conj(phase) * basis_.sqrt_f(r);
    }
    Matrix h2 = (1.0 / (n * n)) * Matrix::Identity(n, n) - pq_sum * basis_.f(r);
    int row3 = (2 * d * n2 + r) * n;
    u.block(row3, 0, n, n) = hermitian_sqrt(h2);
  }
  return u;
}

NRFrame nr_frame(LambdaField lambda, const HermitianBasis& basis, const NRSpec& spec) {
  return NRFrame(std::move(lambda), basis, spec);
}

ModuliFamily nr_instanton_family(const ModuliPoint& reference, NRSpec spec) {
  // Resolve the constants once, over a neighbourhood of the reference
  // moduli, and freeze them: the isotropy cancellation requires k and N
  // independent of the moduli.
  std::vector<LambdaField> probes;
  for (double da : {0.0, 0.5, -0.5}) {
    for (double frho : {1.0, 0.8, 1.25}) {
      ModuliPoint p = reference;
      p.centre(0) += da;
      p.rho *= frho;
      probes.push_back(instanton_lambda(p));
    }
  }
  HermitianBasis basis = instanton_basis();
  NRSpec resolved = resolve_nr_spec(probes, basis, std::move(spec));

  ModuliFamily fam;
  fam.labels = {"a1", "a2", "a3", "a4", "rho"};
  fam.space_dim = 4;
  fam.frame = [resolved, basis](const Vector& t, const Vector& x) {
    NRFrame frame(instanton_lambda(moduli_point(t)), basis, resolved);
    return frame(x);
  };
  fam.space_step = 1e-4 / std::max(1.0, resolved.phase_scale);
  return fam;
}

double check_isotropy(const ModuliFamily& family, const Vector& t,
                      const std::vector<Vector>& points) {
  double defect = 0.0;
  for (const Vector& x : points) {
    Matrix u = family.frame(t, x);
    for (int i = 0; i < family.moduli_dim(); ++i) {
      Matrix du = partial_derivative(
          [&](const Vector& s) { return family.frame(s, x); }, t, i, family.moduli_step);
      defect = std::max(defect, max_abs(Matrix(u.adjoint() * du)));
    }
  }
  return defect;
}

double check_nonequivariance(const MatrixConnection& a, const HermitianBasis& basis,
                             const NRSpec& spec, const Matrix& g,
                             const std::vector<Vector>& points) {
  if (max_abs(Matrix(g.adjoint() * g - Matrix::Identity(g.rows(), g.cols()))) > 1e-12) {
    throw ConstraintError("check_nonequivariance: g not unitary", 0.0);
  }
  MatrixConnection ag;
  ag.space_dim = a.space_dim;
  ag.group_dim = a.group_dim;
  ag.components = [a, g](const Vector& x) {
    std::vector<Matrix> comps = a.components(x);
    for (auto& c : comps) c = g.adjoint() * c * g;
    return comps;
  };
  LambdaField la = lambda_field(a, basis);
  LambdaField lg = lambda_field(ag, basis);
  NRSpec resolved = resolve_nr_spec({la, lg}, basis, spec);
  NRFrame ua(la, basis, resolved);
  NRFrame ug(lg, basis, resolved);

  double defect = 0.0;
  for (const Vector& x : points) {
    defect = std::max(defect, max_abs(Matrix(ug(x) - ua(x) * g)));
  }
  return defect;
}

double reconstruction_defect(const NRFrame& frame, const LambdaField& lambda,
                             const HermitianBasis& basis,
                             const std::vector<Vector>& points) {
  double defect = 0.0;
  double h = frame.space_step();
  for (const Vector& x : points) {
    Matrix u = frame(x);
    RealMatrix l = lambda(x);
    for (int mu = 0; mu < static_cast<int>(l.cols()); ++mu) {
      Matrix du =
          partial_derivative([&](const Vector& y) { return frame(y); }, x, mu, h);
      Matrix target = Matrix::Zero(basis.dim(), basis.dim());
      for (int r = 0; r < basis.size(); ++r) target += Complex(0.0, l(r, mu)) * basis.f(r);
      defect = std::max(defect, max_abs(Matrix(u.adjoint() * du - target)));
    }
  }
  return defect;
}

nlohmann::json NRSpec::to_json() const {
  nlohmann::json j;
  j["dim"] = space_dim;
  j["L"] = chart_extent;
  j["N"] = phase_scale;
  j["resolve_samples"] = resolve_samples;
  if (shifts.size() > 0) {
    std::vector<std::vector<double>> rows;
    for (int r = 0; r < shifts.rows(); ++r) {
      std::vector<double> row;
      for (int c = 0; c < shifts.cols(); ++c) row.push_back(shifts(r, c));
      rows.push_back(std::move(row));
    }
    j["shifts"] = rows;
  }
  return j;
}

NRSpec NRSpec::from_json(const nlohmann::json& j) {
  NRSpec s;
  if (j.contains("dim")) s.space_dim = j.at("dim").get<int>();
  if (j.contains("L")) s.chart_extent = j.at("L").get<double>();
  if (j.contains("N")) s.phase_scale = j.at("N").get<double>();
  if (j.contains("resolve_samples")) s.resolve_samples = j.at("resolve_samples").get<int>();
  if (j.contains("shifts")) {
    auto rows = j.at("shifts").get<std::vector<std::vector<double>>>();
    if (!rows.empty()) {
      s.shifts.resize(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
          s.shifts(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
    }
  }
  return s;
}

}  // namespace um
