#include "um/quadrature.hpp"

#include <cmath>
#include <cstdlib>
#include <future>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace um {

int QuadratureSpec::nodes_for_axis(int axis) const {
  if (nodes.empty()) throw SpecError("QuadratureSpec: no node counts");
  if (nodes.size() == 1) return nodes[0];
  if (axis < 0 || axis >= static_cast<int>(nodes.size())) {
    throw SpecError("QuadratureSpec: axis out of range");
  }
  return nodes[axis];
}

void QuadratureSpec::validate(int dim) const {
  if (nodes.empty()) throw SpecError("QuadratureSpec: no node counts");
  if (nodes.size() != 1 && static_cast<int>(nodes.size()) != dim) {
    throw SpecError("QuadratureSpec: node list must have 1 or dim entries");
  }
  for (int n : nodes) {
    if (n < 8) throw SpecError("QuadratureSpec: node count below 8");
  }
  if (!(extent > 0.0)) throw SpecError("QuadratureSpec: chart extent must be positive");
}

nlohmann::json QuadratureSpec::to_json() const {
  const char* name = scheme == Scheme::Radial   ? "radial"
                     : scheme == Scheme::Tensor ? "tensor"
                                                : "mc";
  nlohmann::json j;
  j["scheme"] = name;
  if (nodes.size() == 1)
    j["nodes"] = nodes[0];
  else
    j["nodes"] = nodes;
  if (std::isinf(extent))
    j["L"] = "inf";
  else
    j["L"] = extent;
  j["seed"] = seed;
  return j;
}

QuadratureSpec QuadratureSpec::from_json(const nlohmann::json& j) {
  QuadratureSpec spec;
  std::string name = j.at("scheme").get<std::string>();
  if (name == "radial")
    spec.scheme = Scheme::Radial;
  else if (name == "tensor")
    spec.scheme = Scheme::Tensor;
  else if (name == "mc")
    spec.scheme = Scheme::MonteCarlo;
  else
    throw SpecError("QuadratureSpec: unknown scheme '" + name + "'");
  const auto& n = j.at("nodes");
  if (n.is_number_integer())
    spec.nodes = {n.get<int>()};
  else
    spec.nodes = n.get<std::vector<int>>();
  const auto& l = j.at("L");
  spec.extent = l.is_string() ? kInfiniteChart : l.get<double>();
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  return spec;
}

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first->second;
}

double sphere_area(int dim) {
  return 2.0 * std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim);
}

int worker_threads() {
  if (const char* env = std::getenv("UM_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

namespace {

[[noreturn]] void throw_poisoned(const Vector& x) {
  std::ostringstream os;
  os << "integrate: non-finite integrand value at x = (";
  for (int i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x(i);
  os << ")";
  throw DivergenceError(os.str());
}

void check_radial_tail(const std::function<double(double)>& profile, int dim) {
  // Decay exponent measured between two large radii; r^{d-1} profile must
  // fall off faster than 1/r for the half-line integral to exist.
  const double r1 = 1e3, r2 = 1e5;
  double p1 = std::abs(profile(r1));
  double p2 = std::abs(profile(r2));
  if (p1 == 0.0 && p2 == 0.0) return;
  if (p2 == 0.0) return;  // faster than any power
  if (p1 == 0.0) throw DivergenceError("integrate_radial: profile grows in the tail");
  double k = std::log(p1 / p2) / std::log(r2 / r1);
  if (k <= dim + 0.05) {
    std::ostringstream os;
    os << "integrate_radial: tail decay r^-" << k << " too slow for dimension " << dim;
    throw DivergenceError(os.str());
  }
}

// Multi-index walk over a tensor product of per-axis (node, weight) lists.
struct Axis {
  std::vector<double> x, w;
};

std::vector<Axis> build_axes(int dim, const QuadratureSpec& spec) {
  std::vector<Axis> axes(dim);
  bool infinite = std::isinf(spec.extent);
  for (int a = 0; a < dim; ++a) {
    const auto& [gx, gw] = gauss_legendre(spec.nodes_for_axis(a));
    Axis axis;
    axis.x.resize(gx.size());
    axis.w.resize(gx.size());
    for (std::size_t i = 0; i < gx.size(); ++i) {
      if (infinite) {
        // x = tan(u), u in (-pi/2, pi/2): covers the whole line.
        double u = 0.5 * M_PI * gx[i];
        double c = std::cos(u);
        axis.x[i] = std::tan(u);
        axis.w[i] = 0.5 * M_PI * gw[i] / (c * c);
      } else {
        axis.x[i] = spec.extent * gx[i];
        axis.w[i] = spec.extent * gw[i];
      }
    }
    axes[a] = std::move(axis);
  }
  return axes;
}

Eigen::VectorXd tensor_accumulate(const std::function<Eigen::VectorXd(const Vector&)>& f,
                                  int dim, int out_dim, const QuadratureSpec& spec) {
  auto axes = build_axes(dim, spec);
  int outer = static_cast<int>(axes[0].x.size());
  int nthreads = std::min(worker_threads(), outer);

  auto run_slice = [&](int i0) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(out_dim);
    Vector x(dim);
    x(0) = axes[0].x[i0];
    std::vector<int> idx(dim, 0);
    while (true) {
      double w = axes[0].w[i0];
      for (int a = 1; a < dim; ++a) {
        x(a) = axes[a].x[idx[a]];
        w *= axes[a].w[idx[a]];
      }
      Eigen::VectorXd v = f(x);
      if (!v.allFinite()) throw_poisoned(x);
      acc += w * v;
      int a = dim - 1;
      for (; a >= 1; --a) {
        if (++idx[a] < static_cast<int>(axes[a].x.size())) break;
        idx[a] = 0;
      }
      if (a == 0) break;
      if (dim == 1) break;
    }
    return acc;
  };

  std::vector<Eigen::VectorXd> partial(outer);
  std::vector<std::future<void>> tasks;
  std::atomic<int> next{0};
  for (int t = 0; t < nthreads; ++t) {
    tasks.push_back(std::async(std::launch::async, [&] {
      for (int i = next.fetch_add(1); i < outer; i = next.fetch_add(1)) {
        partial[i] = run_slice(i);
      }
    }));
  }
  for (auto& task : tasks) task.get();

  Eigen::VectorXd total = Eigen::VectorXd::Zero(out_dim);
  for (int i = 0; i < outer; ++i) total += partial[i];  // fixed order
  return total;
}

// Angular average over the 2*dim signed axis directions; exact for
// integrands that are rotationally invariant plus odd parts.
Eigen::VectorXd axis_average(const std::function<Eigen::VectorXd(const Vector&)>& f,
                             int dim, int out_dim, double r) {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(out_dim);
  Vector x = Vector::Zero(dim);
  for (int a = 0; a < dim; ++a) {
    for (double sign : {1.0, -1.0}) {
      x.setZero();
      x(a) = sign * r;
      Eigen::VectorXd v = f(x);
      if (!v.allFinite()) throw_poisoned(x);
      acc += v;
    }
  }
  return acc / (2.0 * dim);
}

Eigen::VectorXd radial_accumulate(const std::function<Eigen::VectorXd(const Vector&)>& f,
                                  int dim, int out_dim, const QuadratureSpec& spec) {
  int n = spec.nodes_for_axis(0);
  const auto& [gx, gw] = gauss_legendre(n);
  // Tail admissibility is judged on the max-abs component of the average.
  check_radial_tail(
      [&](double r) { return axis_average(f, dim, out_dim, r).cwiseAbs().maxCoeff(); },
      dim);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(out_dim);
  double area = sphere_area(dim);
  for (int i = 0; i < n; ++i) {
    // r = tan(u), u in (0, pi/2)
    double u = 0.25 * M_PI * (gx[i] + 1.0);
    double c = std::cos(u);
    double r = std::tan(u);
    if (std::isinf(spec.extent) || r <= spec.extent) {
      double w = 0.25 * M_PI * gw[i] / (c * c) * std::pow(r, dim - 1) * area;
      acc += w * axis_average(f, dim, out_dim, r);
    }
  }
  return acc;
}

Eigen::VectorXd mc_accumulate(const std::function<Eigen::VectorXd(const Vector&)>& f,
                              int dim, int out_dim, const QuadratureSpec& spec,
                              Eigen::VectorXd* variance_out) {
  std::int64_t total = 1;
  for (int a = 0; a < dim; ++a) total *= spec.nodes_for_axis(a);
  if (spec.nodes.size() == 1) total = spec.nodes[0];
  bool infinite = std::isinf(spec.extent);

  const std::int64_t chunk = 4096;
  std::int64_t nchunks = (total + chunk - 1) / chunk;
  std::vector<Eigen::VectorXd> sums(nchunks), sqsums(nchunks);

  auto run_chunk = [&](std::int64_t c) {
    // One RNG stream per chunk: results do not depend on thread count.
    std::mt19937_64 rng(spec.seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL + c);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(out_dim);
    Eigen::VectorXd s2 = Eigen::VectorXd::Zero(out_dim);
    std::int64_t lo = c * chunk, hi = std::min(total, lo + chunk);
    Vector x(dim);
    for (std::int64_t i = lo; i < hi; ++i) {
      double w = 1.0;
      for (int a = 0; a < dim; ++a) {
        double g = uni(rng);
        if (infinite) {
          double u = 0.5 * M_PI * g;
          double cc = std::cos(u);
          x(a) = std::tan(u);
          w *= M_PI / (cc * cc);
        } else {
          x(a) = spec.extent * g;
          w *= 2.0 * spec.extent;
        }
      }
      Eigen::VectorXd v = w * f(x);
      if (!v.allFinite()) throw_poisoned(x);
      s += v;
      s2 += v.cwiseProduct(v);
    }
    sums[c] = s;
    sqsums[c] = s2;
  };

  int nthreads = std::min<std::int64_t>(worker_threads(), nchunks);
  std::atomic<std::int64_t> next{0};
  std::vector<std::future<void>> tasks;
  for (int t = 0; t < nthreads; ++t) {
    tasks.push_back(std::async(std::launch::async, [&] {
      for (std::int64_t c = next.fetch_add(1); c < nchunks; c = next.fetch_add(1)) {
        run_chunk(c);
      }
    }));
  }
  for (auto& task : tasks) task.get();

  Eigen::VectorXd sum = Eigen::VectorXd::Zero(out_dim);
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(out_dim);
  for (std::int64_t c = 0; c < nchunks; ++c) {
    sum += sums[c];
    sq += sqsums[c];
  }
  Eigen::VectorXd mean = sum / static_cast<double>(total);
  if (variance_out) {
    *variance_out =
        (sq / static_cast<double>(total) - mean.cwiseProduct(mean)) / static_cast<double>(total);
  }
  return mean;
}

}  // namespace

double integrate_radial(const std::function<double(double)>& profile, int dim, int nodes) {
  if (nodes < 8) throw SpecError("integrate_radial: node count below 8");
  check_radial_tail(profile, dim);
  const auto& [gx, gw] = gauss_legendre(nodes);
  double acc = 0.0;
  for (int i = 0; i < nodes; ++i) {
    double u = 0.25 * M_PI * (gx[i] + 1.0);
    double c = std::cos(u);
    double r = std::tan(u);
    double v = profile(r);
    if (!std::isfinite(v)) throw_poisoned(Vector::Constant(1, r));
    acc += 0.25 * M_PI * gw[i] / (c * c) * std::pow(r, dim - 1) * v;
  }
  return sphere_area(dim) * acc;
}

Eigen::VectorXd integrate_chart_vector(
    const std::function<Eigen::VectorXd(const Vector&)>& f, int dim, int out_dim,
    const QuadratureSpec& spec) {
  spec.validate(dim);
  switch (spec.scheme) {
    case QuadratureSpec::Scheme::Radial:
      return radial_accumulate(f, dim, out_dim, spec);
    case QuadratureSpec::Scheme::Tensor:
      return tensor_accumulate(f, dim, out_dim, spec);
    case QuadratureSpec::Scheme::MonteCarlo:
      return mc_accumulate(f, dim, out_dim, spec, nullptr);
  }
  throw SpecError("integrate_chart_vector: unknown scheme");
}

double integrate_chart(const std::function<double(const Vector&)>& f, int dim,
                       const QuadratureSpec& spec) {
  auto wrapped = [&](const Vector& x) { return Eigen::VectorXd::Constant(1, f(x)); };
  return integrate_chart_vector(wrapped, dim, 1, spec)(0);
}

MonteCarloResult integrate_monte_carlo(const std::function<double(const Vector&)>& f,
                                       int dim, const QuadratureSpec& spec) {
  spec.validate(dim);
  auto wrapped = [&](const Vector& x) { return Eigen::VectorXd::Constant(1, f(x)); };
  Eigen::VectorXd var;
  Eigen::VectorXd mean = mc_accumulate(wrapped, dim, 1, spec, &var);
  return {mean(0), std::sqrt(std::max(0.0, var(0)))};
}

}  // namespace um
