#include "um/abelian.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "um/derivative.hpp"
#include "um/quadrature.hpp"

namespace um {

namespace {
constexpr double kThetaOverflow = 1e8;
constexpr Complex kI{0.0, 1.0};
}  // namespace

AbelianProfiles AbelianProfiles::defaults(int d) {
  AbelianProfiles p;
  p.dim = d;
  p.c = Vector::Constant(d - 1, 0.9 / (d - 1));
  return p;
}

double AbelianProfiles::r_last2(const Vector& x) const {
  double s = 1.0;
  for (int i = 0; i < dim - 1; ++i) s -= r2(i, x(i));
  return s;
}

void AbelianProfiles::validate() const {
  if (dim < 2) throw SpecError("AbelianProfiles: need d >= 2");
  if (c.size() != dim - 1) throw SpecError("AbelianProfiles: need d-1 constants");
  if (c.minCoeff() <= 0.0) throw SpecError("AbelianProfiles: constants must be positive");
  if (c.sum() >= 1.0) {
    throw ConstraintError("AbelianProfiles: sum of constants must stay below 1",
                          c.sum() - 1.0);
  }
}

AbelianAngles abelian_angles(const AbelianConnection& a, const AbelianProfiles& profiles,
                             int line_nodes) {
  profiles.validate();
  if (a.dim != profiles.dim) throw SpecError("abelian_angles: dimension mismatch");
  int d = a.dim;
  double lo = -a.extent;

  // theta_bar(x) = int_{-L}^{x_d} A_d, anchored to zero on the lower face.
  auto theta_bar = [a, lo, d, line_nodes](const Vector& x) {
    const auto& [gx, gw] = gauss_legendre(line_nodes);
    double half = 0.5 * (x(d - 1) - lo);
    double mid = 0.5 * (x(d - 1) + lo);
    double acc = 0.0;
    Vector y = x;
    for (int i = 0; i < line_nodes; ++i) {
      y(d - 1) = mid + half * gx[i];
      acc += half * gw[i] * a.components(y)(d - 1);
    }
    return acc;
  };

  auto theta = [a, profiles, theta_bar, d](const Vector& x) {
    Vector th(d - 1);
    Vector comp = a.components(x);
    for (int i = 0; i < d - 1; ++i) {
      double dtb = partial_derivative(theta_bar, x, i, 1e-3);
      double slope = profiles.dr2(i, x(i));
      double value = -(comp(i) - dtb) / slope;
      if (!std::isfinite(value) || std::abs(value) > kThetaOverflow) {
        throw DivergenceError(
            "abelian_angles: theta_i overflow near the chart face; field decays too "
            "slowly against the profile slope");
      }
      th(i) = value;
    }
    return th;
  };

  auto theta_last = [profiles, theta_bar, theta, d](const Vector& x) {
    double t = theta_bar(x);
    Vector th = theta(x);
    for (int i = 0; i < d - 1; ++i) t -= profiles.r2(i, x(i)) * th(i);
    return t;
  };

  return AbelianAngles{theta_bar, theta, theta_last};
}

std::function<Eigen::VectorXcd(const Vector&)> abelian_frame(
    const AbelianProfiles& profiles, const AbelianAngles& angles) {
  profiles.validate();
  int d = profiles.dim;
  return [profiles, angles, d](const Vector& x) {
    double rd2 = profiles.r_last2(x);
    if (rd2 <= 0.0) {
      throw ConstraintError("abelian_frame: residual profile r_d^2 not positive", -rd2);
    }
    Vector th = angles.theta(x);
    double thd = angles.theta_last(x);
    Eigen::VectorXcd u(d);
    for (int i = 0; i < d - 1; ++i) {
      u(i) = std::sqrt(profiles.r2(i, x(i))) * std::exp(-kI * (th(i) + thd));
    }
    u(d - 1) = std::sqrt(rd2) * std::exp(-kI * thd);
    return u;
  };
}

std::int64_t GridField::points() const {
  std::int64_t n = 1;
  for (int s : shape) n *= s;
  return n;
}

std::int64_t GridField::index(const std::vector<int>& idx) const {
  std::int64_t flat = 0;
  for (int a = 0; a < dim; ++a) flat = flat * shape[a] + idx[a];
  return flat;
}

Vector GridField::coordinate(const std::vector<int>& idx) const {
  Vector x(dim);
  for (int a = 0; a < dim; ++a) {
    x(a) = shape[a] == 1 ? min(a)
                         : min(a) + (max(a) - min(a)) * idx[a] / (shape[a] - 1.0);
  }
  return x;
}

double GridField::spacing(int axis) const {
  return (max(axis) - min(axis)) / (shape[axis] - 1.0);
}

GridField GridField::subsample() const {
  GridField out;
  out.dim = dim;
  out.min = min;
  out.max = max;
  for (int a = 0; a < dim; ++a) {
    if (shape[a] % 2 == 0) {
      throw SpecError("GridField::subsample: need odd point counts to halve cleanly");
    }
    out.shape.push_back((shape[a] + 1) / 2);
  }
  out.components.resize(components.size());
  std::vector<int> idx(dim, 0);
  for (std::size_t mu = 0; mu < components.size(); ++mu) {
    out.components[mu].resize(out.points());
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      std::vector<int> full(dim);
      for (int a = 0; a < dim; ++a) full[a] = 2 * idx[a];
      out.components[mu][out.index(idx)] = components[mu][index(full)];
      int a = dim - 1;
      for (; a >= 0; --a) {
        if (++idx[a] < out.shape[a]) break;
        idx[a] = 0;
      }
      if (a < 0) break;
    }
  }
  return out;
}

namespace {

void flatten_json(const nlohmann::json& j, std::vector<double>& out) {
  if (j.is_array()) {
    for (const auto& e : j) flatten_json(e, out);
  } else {
    out.push_back(j.get<double>());
  }
}

template <typename Element>
nlohmann::json nest(const std::vector<int>& shape, int axis, std::int64_t& cursor,
                    const Element& element) {
  nlohmann::json arr = nlohmann::json::array();
  if (axis == static_cast<int>(shape.size()) - 1) {
    for (int i = 0; i < shape[axis]; ++i) arr.push_back(element(cursor++));
  } else {
    for (int i = 0; i < shape[axis]; ++i) arr.push_back(nest(shape, axis + 1, cursor, element));
  }
  return arr;
}

}  // namespace

nlohmann::json GridField::to_json() const {
  nlohmann::json j;
  j["dim"] = dim;
  j["grid"]["min"] = std::vector<double>(min.data(), min.data() + min.size());
  j["grid"]["max"] = std::vector<double>(max.data(), max.data() + max.size());
  j["grid"]["points"] = shape;
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : components) {
    std::int64_t cursor = 0;
    comps.push_back(nest(shape, 0, cursor, [&](std::int64_t k) { return c[k]; }));
  }
  j["components"] = comps;
  return j;
}

GridField GridField::from_json(const nlohmann::json& j) {
  GridField g;
  g.dim = j.at("dim").get<int>();
  auto mn = j.at("grid").at("min").get<std::vector<double>>();
  auto mx = j.at("grid").at("max").get<std::vector<double>>();
  g.shape = j.at("grid").at("points").get<std::vector<int>>();
  if (static_cast<int>(mn.size()) != g.dim || static_cast<int>(mx.size()) != g.dim ||
      static_cast<int>(g.shape.size()) != g.dim) {
    throw SpecError("GridField: grid arrays must have 'dim' entries");
  }
  g.min = Eigen::Map<const Vector>(mn.data(), g.dim);
  g.max = Eigen::Map<const Vector>(mx.data(), g.dim);
  const auto& comps = j.at("components");
  if (static_cast<int>(comps.size()) != g.dim) {
    throw SpecError("GridField: need one component per dimension");
  }
  for (const auto& c : comps) {
    std::vector<double> flat;
    flatten_json(c, flat);
    if (static_cast<std::int64_t>(flat.size()) != g.points()) {
      throw SpecError("GridField: component size does not match the grid shape");
    }
    g.components.push_back(std::move(flat));
  }
  return g;
}

void check_margin(const GridField& a, double tol) {
  double scale = 0.0;
  for (const auto& c : a.components)
    for (double v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return;
  std::vector<int> idx(a.dim, 0);
  while (true) {
    bool outer = false;
    for (int ax = 0; ax < a.dim; ++ax) {
      double frac = a.shape[ax] == 1 ? 0.0 : 2.0 * idx[ax] / (a.shape[ax] - 1.0) - 1.0;
      if (std::abs(frac) > 0.8) outer = true;
    }
    if (outer) {
      for (const auto& c : a.components) {
        if (std::abs(c[a.index(idx)]) > tol * scale) {
          throw ConstraintError(
              "abelian grid: field does not vanish on the outer 20% margin",
              std::abs(c[a.index(idx)]) / scale);
        }
      }
    }
    int ax = a.dim - 1;
    for (; ax >= 0; --ax) {
      if (++idx[ax] < a.shape[ax]) break;
      idx[ax] = 0;
    }
    if (ax < 0) break;
  }
}

GridReconstruction reconstruct_abelian_grid(const GridField& a,
                                            const AbelianProfiles& profiles) {
  profiles.validate();
  if (profiles.dim != a.dim) throw SpecError("reconstruct_abelian_grid: dimension mismatch");
  check_margin(a);
  int d = a.dim;
  std::int64_t npts = a.points();

  // Per-axis strides for flattened row-major indexing.
  std::vector<std::int64_t> stride(d, 1);
  for (int ax = d - 2; ax >= 0; --ax) stride[ax] = stride[ax + 1] * a.shape[ax + 1];

  auto deriv = [&](const std::vector<double>& field, std::int64_t flat, int ax,
                   const std::vector<int>& idx) {
    double h = a.spacing(ax);
    int i = idx[ax];
    if (i > 0 && i < a.shape[ax] - 1)
      return (field[flat + stride[ax]] - field[flat - stride[ax]]) / (2.0 * h);
    if (i == 0) return (field[flat + stride[ax]] - field[flat]) / h;
    return (field[flat] - field[flat - stride[ax]]) / h;
  };

  // theta_bar: cumulative trapezoid of A_d along the last axis.
  std::vector<double> theta_bar(npts, 0.0);
  {
    const auto& ad = a.components[d - 1];
    double h = a.spacing(d - 1);
    std::vector<int> idx(d, 0);
    while (true) {
      if (idx[d - 1] > 0) {
        std::int64_t flat = a.index(idx);
        theta_bar[flat] =
            theta_bar[flat - stride[d - 1]] +
            0.5 * h * (ad[flat] + ad[flat - stride[d - 1]]);
      }
      // iterate with the last axis innermost so prefix sums are available
      int ax = d - 1;
      for (; ax >= 0; --ax) {
        if (++idx[ax] < a.shape[ax]) break;
        idx[ax] = 0;
      }
      if (ax < 0) break;
    }
  }

  // theta_i and theta_d pointwise.
  std::vector<std::vector<double>> theta(d - 1, std::vector<double>(npts, 0.0));
  std::vector<double> theta_last(npts, 0.0);
  GridReconstruction out;
  out.frame.assign(d, std::vector<Complex>(npts));
  {
    std::vector<int> idx(d, 0);
    while (true) {
      std::int64_t flat = a.index(idx);
      Vector x = a.coordinate(idx);
      double td = theta_bar[flat];
      for (int i = 0; i < d - 1; ++i) {
        double dtb = deriv(theta_bar, flat, i, idx);
        double value = -(a.components[i][flat] - dtb) / profiles.dr2(i, x(i));
        if (!std::isfinite(value) || std::abs(value) > kThetaOverflow) {
          throw DivergenceError("reconstruct_abelian_grid: theta_i overflow near chart face");
        }
        theta[i][flat] = value;
        td -= profiles.r2(i, x(i)) * value;
      }
      theta_last[flat] = td;

      double rd2 = profiles.r_last2(x);
      if (rd2 <= 0.0) {
        throw ConstraintError("reconstruct_abelian_grid: r_d^2 not positive", -rd2);
      }
      double norm2 = rd2;
      for (int i = 0; i < d - 1; ++i) {
        double r2 = profiles.r2(i, x(i));
        norm2 += r2;
        out.frame[i][flat] = std::sqrt(r2) * std::exp(-kI * (theta[i][flat] + td));
      }
      out.frame[d - 1][flat] = std::sqrt(rd2) * std::exp(-kI * td);
      out.norm_defect = std::max(out.norm_defect, std::abs(norm2 - 1.0));

      int ax = d - 1;
      for (; ax >= 0; --ax) {
        if (++idx[ax] < a.shape[ax]) break;
        idx[ax] = 0;
      }
      if (ax < 0) break;
    }
  }

  // Reconstruction error max |i U†dU - A| on interior points.
  {
    std::vector<int> idx(d, 0);
    while (true) {
      bool interior = true;
      for (int ax = 0; ax < d; ++ax) {
        if (idx[ax] == 0 || idx[ax] == a.shape[ax] - 1) interior = false;
      }
      if (interior) {
        std::int64_t flat = a.index(idx);
        for (int mu = 0; mu < d; ++mu) {
          double h = a.spacing(mu);
          Complex acc = 0.0;
          for (int k = 0; k < d; ++k) {
            Complex du =
                (out.frame[k][flat + stride[mu]] - out.frame[k][flat - stride[mu]]) /
                (2.0 * h);
            acc += std::conj(out.frame[k][flat]) * du;
          }
          // Re(i U†dU) estimates A; the imaginary part is the discrete
          // norm drift d|U|^2/2, zero in the continuum and tracked by
          // norm_defect, so it stays out of the connection error.
          Complex recon = kI * acc;
          out.max_error =
              std::max(out.max_error, std::abs(recon.real() - a.components[mu][flat]));
        }
      }
      int ax = d - 1;
      for (; ax >= 0; --ax) {
        if (++idx[ax] < a.shape[ax]) break;
        idx[ax] = 0;
      }
      if (ax < 0) break;
    }
  }
  return out;
}

nlohmann::json GridReconstruction::frame_to_json(const GridField& grid) const {
  nlohmann::json j;
  j["dim"] = grid.dim;
  j["grid"]["min"] = std::vector<double>(grid.min.data(), grid.min.data() + grid.min.size());
  j["grid"]["max"] = std::vector<double>(grid.max.data(), grid.max.data() + grid.max.size());
  j["grid"]["points"] = grid.shape;
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : frame) {
    std::int64_t cursor = 0;
    comps.push_back(nest(grid.shape, 0, cursor, [&](std::int64_t k) {
      return nlohmann::json::array({c[k].real(), c[k].imag()});
    }));
  }
  j["components"] = comps;
  j["max_error"] = max_error;
  j["norm_defect"] = norm_defect;
  return j;
}

}  // namespace um
