#include "um/adhm.hpp"

namespace um {

Matrix adhm_frame(const Eigen::Vector4d& x, const ModuliPoint& t) {
  t.validate();
  Eigen::Vector4d y = x - t.centre;
  double s = y.squaredNorm() + t.rho * t.rho;
  double inv = 1.0 / std::sqrt(s);
  Matrix2 top = Matrix2::Zero();
  const auto& sb = sigma_bar();
  for (int mu = 0; mu < 4; ++mu) top += y(mu) * sb[mu];
  Matrix u(4, 2);
  u.topRows(2) = inv * top;
  u.bottomRows(2) = -t.rho * inv * Matrix2::Identity();
  return u;
}

std::array<Matrix2, 4> thooft_connection(const Eigen::Vector4d& x, const ModuliPoint& t) {
  t.validate();
  Eigen::Vector4d y = x - t.centre;
  double s = y.squaredNorm() + t.rho * t.rho;
  const auto& tau = pauli();
  std::array<Matrix2, 4> conn;
  for (int mu = 1; mu <= 4; ++mu) {
    Matrix2 a = Matrix2::Zero();
    for (int alpha = 1; alpha <= 3; ++alpha)
      for (int nu = 1; nu <= 4; ++nu) {
        int eta = thooft_eta(alpha, mu, nu);
        if (eta != 0) a += (eta * y(nu - 1) / s) * tau[alpha - 1];
      }
    conn[mu - 1] = a;
  }
  return conn;
}

Eigen::Matrix<double, 5, 5> adhm_traces(const Eigen::Vector4d& x, const ModuliPoint& t) {
  t.validate();
  Eigen::Vector4d y = x - t.centre;
  double s = y.squaredNorm() + t.rho * t.rho;
  double s2 = s * s;
  Eigen::Matrix<double, 5, 5> traces = Eigen::Matrix<double, 5, 5>::Zero();
  for (int mu = 0; mu < 4; ++mu) {
    traces(mu, mu) = 4.0 * t.rho * t.rho / s2;
    traces(4, mu) = traces(mu, 4) = 4.0 * t.rho * y(mu) / s2;
  }
  traces(4, 4) = 4.0 * y.squaredNorm() / s2;
  return traces;
}

double phi_adhm(const Eigen::Vector4d& x, const ModuliPoint& t) {
  t.validate();
  double s = (x - t.centre).squaredNorm() + t.rho * t.rho;
  return 16.0 * t.rho * t.rho / (s * s);
}

}  // namespace um
