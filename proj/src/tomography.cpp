#include "ssb/tomography.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ssb/parallel.hpp"

namespace ssb {

namespace {

constexpr double kPi = std::numbers::pi;

double axis_spacing(const Eigen::VectorXd& axis, const char* what) {
  const Eigen::Index n = axis.size();
  detail::require(n >= 2, std::string(what) + " needs at least two points");
  const double h = (axis(n - 1) - axis(0)) / static_cast<double>(n - 1);
  detail::require(h > 0, std::string(what) + " must be ascending");
  for (Eigen::Index i = 1; i < n; ++i) {
    detail::require(std::abs(axis(i) - axis(i - 1) - h) <= 1e-9 * h, std::string(what) + " must be uniform");
  }
  return h;
}

void require_normalized(const WignerGridd& g) {
  const double mass = grid_mass(g);
  detail::require(std::abs(mass - 1.0) <= 1e-2, "marginal: grid mass " + std::to_string(mass) + " is not normalized");
}

// Weight of each angle in the back-projection sum: half the gap to its
// neighbours on the circle of period pi. Uniform sets give pi / count.
std::vector<double> angle_weights(const std::vector<double>& angles) {
  const std::size_t n = angles.size();
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double next = i + 1 < n ? angles[i + 1] : angles[0] + kPi;
    const double prev = i > 0 ? angles[i - 1] : angles[n - 1] - kPi;
    w[i] = 0.5 * (next - prev);
  }
  return w;
}

double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

}  // namespace

void QuadratureSet::validate() const {
  detail::require(!angles.empty(), "quadrature set has no angles");
  for (std::size_t i = 0; i < angles.size(); ++i) {
    detail::require(angles[i] >= 0 && angles[i] < kPi, "quadrature angles must lie in [0, pi)");
    if (i > 0) detail::require(angles[i] > angles[i - 1], "quadrature angles must be strictly increasing");
  }
  axis_spacing(x_axis, "quadrature axis");
  detail::require(distributions.rows() == static_cast<Eigen::Index>(angles.size()) &&
                      distributions.cols() == x_axis.size(),
                  "quadrature distributions do not match the angle set and axis");
  detail::require(sample_counts.size() == angles.size(), "quadrature sample counts do not match the angle set");
  const Eigen::VectorXd w = trapezoid_weights<double>(x_axis);
  for (Eigen::Index a = 0; a < distributions.rows(); ++a) {
    detail::require(distributions.row(a).minCoeff() >= 0, "quadrature distributions must be nonnegative");
    const double mass = distributions.row(a).dot(w.transpose());
    detail::require(std::abs(mass - 1.0) <= 1e-3, "quadrature distribution " + std::to_string(a) +
                                                      " has mass " + std::to_string(mass));
  }
}

std::vector<double> uniform_angles(int count) {
  detail::require(count >= 1, "angle count must be positive");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = kPi * i / count;
  return out;
}

double projection_radius(const WignerGridd& g) {
  const double q = g.q_axis.cwiseAbs().maxCoeff();
  const double p = g.p_axis.cwiseAbs().maxCoeff();
  return std::hypot(q, p);
}

Eigen::VectorXd marginal(const WignerGridd& g, double theta, const Eigen::VectorXd& x_axis) {
  detail::require(theta >= 0 && theta < kPi, "marginal: theta must lie in [0, pi)");
  detail::require(g.rows() == g.q_axis.size() && g.cols() == g.p_axis.size(), "marginal: grid shape mismatch");
  require_normalized(g);
  const double hq = axis_spacing(g.q_axis, "grid q axis");
  const double hp = axis_spacing(g.p_axis, "grid p axis");
  const double c = std::cos(theta);
  const double s = std::sin(theta);

  // Ray frequencies stay inside the grid's Nyquist box; the spacing keeps
  // the periodic images of pr(x) farther than 2.5 R apart.
  const double k_max = std::min(std::abs(c) > 0 ? kPi / (hq * std::abs(c)) : INFINITY,
                                std::abs(s) > 0 ? kPi / (hp * std::abs(s)) : INFINITY);
  const double radius = std::max(projection_radius(g), x_axis.cwiseAbs().maxCoeff());
  const double dk_target = 2.0 * kPi / (2.5 * radius);
  const auto nk = static_cast<Eigen::Index>(std::ceil(k_max / dk_target)) + 1;
  const double dk = k_max / static_cast<double>(nk - 1);

  const Eigen::VectorXd wq = trapezoid_weights<double>(g.q_axis);
  const Eigen::VectorXd wp = trapezoid_weights<double>(g.p_axis);
  Eigen::MatrixXd eq_re(g.q_axis.size(), nk), eq_im(g.q_axis.size(), nk);
  Eigen::MatrixXd ep_re(g.p_axis.size(), nk), ep_im(g.p_axis.size(), nk);
  for (Eigen::Index m = 0; m < nk; ++m) {
    const double k = dk * static_cast<double>(m);
    for (Eigen::Index i = 0; i < g.q_axis.size(); ++i) {
      const double a = -k * c * g.q_axis(i);
      eq_re(i, m) = wq(i) * std::cos(a);
      eq_im(i, m) = wq(i) * std::sin(a);
    }
    for (Eigen::Index j = 0; j < g.p_axis.size(); ++j) {
      const double a = -k * s * g.p_axis(j);
      ep_re(j, m) = wp(j) * std::cos(a);
      ep_im(j, m) = wp(j) * std::sin(a);
    }
  }
  const Eigen::MatrixXd m_re = g.values * ep_re;
  const Eigen::MatrixXd m_im = g.values * ep_im;
  const Eigen::VectorXd w_re =
      (eq_re.cwiseProduct(m_re) - eq_im.cwiseProduct(m_im)).colwise().sum().transpose();
  const Eigen::VectorXd w_im =
      (eq_re.cwiseProduct(m_im) + eq_im.cwiseProduct(m_re)).colwise().sum().transpose();

  // pr(x) = (1/pi) Re sum_k w_k e^{ikx} What(k) over k >= 0 (Hermitian symmetry).
  Eigen::VectorXd out(x_axis.size());
  for (Eigen::Index i = 0; i < x_axis.size(); ++i) {
    double acc = 0;
    for (Eigen::Index m = 0; m < nk; ++m) {
      const double weight = (m == 0 || m == nk - 1) ? 0.5 : 1.0;
      const double a = dk * static_cast<double>(m) * x_axis(i);
      acc += weight * (std::cos(a) * w_re(m) - std::sin(a) * w_im(m));
    }
    out(i) = std::max(0.0, acc * dk / kPi);
  }
  return out;
}

QuadratureSet marginals(const WignerGridd& g, const std::vector<double>& angles, const Eigen::VectorXd& x_axis,
                        unsigned workers) {
  QuadratureSet set;
  set.angles = angles;
  set.x_axis = x_axis;
  set.distributions.resize(static_cast<Eigen::Index>(angles.size()), x_axis.size());
  set.sample_counts.assign(angles.size(), 0);
  std::vector<Eigen::VectorXd> rows(angles.size());
  parallel_for(angles.size(), workers, [&](std::size_t a) { rows[a] = marginal(g, angles[a], x_axis); });
  for (std::size_t a = 0; a < angles.size(); ++a) set.distributions.row(static_cast<Eigen::Index>(a)) = rows[a];
  set.validate();
  return set;
}

Eigen::VectorXd histogram(const std::vector<double>& values, const Eigen::VectorXd& x_axis) {
  const double dx = axis_spacing(x_axis, "histogram axis");
  const Eigen::Index n = x_axis.size();
  const Eigen::VectorXd w = trapezoid_weights<double>(x_axis);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(n);
  if (values.empty()) return h;
  for (double v : values) {
    const auto i = static_cast<Eigen::Index>(std::floor((v - x_axis(0)) / dx + 0.5));
    h(std::clamp<Eigen::Index>(i, 0, n - 1)) += 1.0;
  }
  return h.cwiseQuotient(w) / static_cast<double>(values.size());
}

QuadratureSample sample_quadrature(const Eigen::VectorXd& distribution, const Eigen::VectorXd& x_axis, long count,
                                   std::uint64_t seed, std::uint64_t stream) {
  detail::require(count >= 1, "sample count must be positive");
  detail::require(distribution.size() == x_axis.size(), "distribution and axis sizes differ");
  detail::require(distribution.minCoeff() >= 0, "distribution must be nonnegative");
  const double dx = axis_spacing(x_axis, "sampling axis");
  const Eigen::VectorXd w = trapezoid_weights<double>(x_axis);
  const Eigen::Index n = x_axis.size();

  // Node i owns [x_i - dx/2, x_i + dx/2] clipped to the axis range.
  std::vector<double> cdf(static_cast<std::size_t>(n));
  double total = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    total += distribution(i) * w(i);
    cdf[static_cast<std::size_t>(i)] = total;
  }
  detail::require(std::abs(total - 1.0) <= 1e-3, "distribution must be normalized");

  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::mt19937_64 gen(seq);
  QuadratureSample out;
  out.values.reserve(static_cast<std::size_t>(count));
  for (long s = 0; s < count; ++s) {
    const double u = uniform01(gen) * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto i = std::min<Eigen::Index>(it - cdf.begin(), n - 1);
    const double lo = std::max(x_axis(0), x_axis(i) - 0.5 * dx);
    const double before = i > 0 ? cdf[static_cast<std::size_t>(i - 1)] : 0.0;
    const double mass = cdf[static_cast<std::size_t>(i)] - before;
    const double frac = mass > 0 ? std::clamp((u - before) / mass, 0.0, 1.0) : 0.5;
    out.values.push_back(lo + frac * w(i));
  }
  out.histogram = histogram(out.values, x_axis);
  return out;
}

QuadratureSet sample_set(const QuadratureSet& exact, long count, std::uint64_t seed,
                         std::vector<std::vector<double>>* samples, unsigned workers) {
  exact.validate();
  QuadratureSet out = exact;
  std::vector<QuadratureSample> drawn(exact.angles.size());
  parallel_for(exact.angles.size(), workers, [&](std::size_t a) {
    drawn[a] = sample_quadrature(exact.distributions.row(static_cast<Eigen::Index>(a)).transpose(), exact.x_axis,
                                 count, seed, a);
  });
  if (samples) samples->clear();
  for (std::size_t a = 0; a < drawn.size(); ++a) {
    out.distributions.row(static_cast<Eigen::Index>(a)) = drawn[a].histogram.transpose();
    out.sample_counts[a] = count;
    if (samples) samples->push_back(std::move(drawn[a].values));
  }
  return out;
}

double total_variation(const Eigen::VectorXd& p, const Eigen::VectorXd& q, const Eigen::VectorXd& x_axis) {
  detail::require(p.size() == q.size() && p.size() == x_axis.size(), "total_variation: size mismatch");
  return 0.5 * (p - q).cwiseAbs().dot(trapezoid_weights<double>(x_axis));
}

std::string to_string(FilterKind kind) { return kind == FilterKind::Hann ? "hann" : "ram-lak"; }

FilterKind filter_from_string(const std::string& name) {
  if (name == "ram-lak" || name == "ramlak") return FilterKind::RamLak;
  if (name == "hann") return FilterKind::Hann;
  throw std::invalid_argument("unknown filter '" + name + "' (expected ram-lak or hann)");
}

namespace {

// Ramp-filtered projections. The band-limited ramp is applied through its
// exact spatial kernel h[0] = 1/(4 dx^2), h[odd n] = -1/(pi n dx)^2, so the
// zero-frequency response is correct on a finite padded window.
Eigen::MatrixXd filter_projections(const QuadratureSet& quads, const FilterSpec& filter) {
  detail::require(filter.cutoff > 0 && filter.cutoff <= 1, "filter cutoff must lie in (0, 1]");
  const Eigen::Index nx = quads.x_axis.size();
  const double dx = axis_spacing(quads.x_axis, "quadrature axis");
  Eigen::Index len = 1;
  while (len < 2 * nx) len *= 2;

  Eigen::VectorXd kernel = Eigen::VectorXd::Zero(len);
  kernel(0) = 1.0 / (4.0 * dx * dx);
  for (Eigen::Index n = 1; n < nx; n += 2) {
    const double v = -1.0 / (kPi * kPi * static_cast<double>(n * n) * dx * dx);
    kernel(n) = v;
    kernel(len - n) = v;
  }
  Eigen::FFT<double> fft;
  Eigen::VectorXcd response;
  fft.fwd(response, kernel);
  for (Eigen::Index j = 0; j < len; ++j) {
    const double f = static_cast<double>(j <= len / 2 ? j : len - j) / (0.5 * static_cast<double>(len));
    double window = f <= filter.cutoff ? 1.0 : 0.0;
    if (filter.kind == FilterKind::Hann && window > 0) window = 0.5 * (1.0 + std::cos(kPi * f / filter.cutoff));
    response(j) *= window * dx;
  }

  Eigen::MatrixXd out(quads.distributions.rows(), nx);
  Eigen::VectorXd padded(len);
  Eigen::VectorXcd spectrum;
  Eigen::VectorXd filtered;
  for (Eigen::Index a = 0; a < quads.distributions.rows(); ++a) {
    padded.setZero();
    padded.head(nx) = quads.distributions.row(a).transpose();
    fft.fwd(spectrum, padded);
    spectrum.array() *= response.array();
    fft.inv(filtered, spectrum);
    out.row(a) = filtered.head(nx).transpose();
  }
  return out;
}

}  // namespace

ReconstructionReport reconstruct(const QuadratureSet& quads, const Eigen::VectorXd& q_axis,
                                 const Eigen::VectorXd& p_axis, const FilterSpec& filter,
                                 const WignerGridd* reference, unsigned workers) {
  quads.validate();
  detail::require(quads.angles.size() >= 2, "reconstruction needs at least two angles");
  axis_spacing(q_axis, "reconstruction q axis");
  axis_spacing(p_axis, "reconstruction p axis");

  ReconstructionReport report;
  report.angles_used = static_cast<int>(quads.angles.size());
  report.filter = filter;
  if (report.angles_used < kSparseAngleCount) {
    report.sparse_coverage = true;
    report.warnings.push_back("sparse angular coverage: " + std::to_string(report.angles_used) + " angles (fewer than " +
                              std::to_string(kSparseAngleCount) + ")");
  }

  const Eigen::MatrixXd filtered = filter_projections(quads, filter);
  const std::vector<double> weights = angle_weights(quads.angles);
  const Eigen::Index nx = quads.x_axis.size();
  const double x0 = quads.x_axis(0);
  const double dx = (quads.x_axis(nx - 1) - x0) / static_cast<double>(nx - 1);

  WignerGridd& g = report.grid;
  g.q_axis = q_axis;
  g.p_axis = p_axis;
  g.values = Eigen::MatrixXd::Zero(q_axis.size(), p_axis.size());
  if (reference) {
    g.t = reference->t;
    g.big_n = reference->big_n;
    g.frame_scale = reference->frame_scale;
  }
  std::vector<double> cos_a(quads.angles.size()), sin_a(quads.angles.size());
  for (std::size_t a = 0; a < quads.angles.size(); ++a) {
    cos_a[a] = std::cos(quads.angles[a]);
    sin_a[a] = std::sin(quads.angles[a]);
  }
  parallel_for(static_cast<std::size_t>(q_axis.size()), workers, [&](std::size_t row) {
    const auto i = static_cast<Eigen::Index>(row);
    for (Eigen::Index j = 0; j < p_axis.size(); ++j) {
      double acc = 0;
      for (std::size_t a = 0; a < quads.angles.size(); ++a) {
        const double f = (q_axis(i) * cos_a[a] + p_axis(j) * sin_a[a] - x0) / dx;
        const auto k = static_cast<Eigen::Index>(std::floor(f));
        if (k < 0 || k >= nx - 1) continue;
        const double frac = f - static_cast<double>(k);
        const auto r = static_cast<Eigen::Index>(a);
        acc += weights[a] * ((1.0 - frac) * filtered(r, k) + frac * filtered(r, k + 1));
      }
      g.values(i, j) = acc;
    }
  });

  if (reference) {
    detail::require(reference->values.rows() == q_axis.size() && reference->values.cols() == p_axis.size(),
                    "reference grid does not match the reconstruction axes");
    const Eigen::MatrixXd diff = g.values - reference->values;
    report.l2_error = diff.norm() / reference->values.norm();
    report.sup_error = diff.cwiseAbs().maxCoeff() / reference->values.cwiseAbs().maxCoeff();
  }
  return report;
}

ReconstructionReport reconstruct(const QuadratureSet& quads, const WignerGridd& reference, const FilterSpec& filter,
                                 unsigned workers) {
  return reconstruct(quads, reference.q_axis, reference.p_axis, filter, &reference, workers);
}

}  // namespace ssb
