#pragma once

// Simulated homodyne tomography of Wigner grids: rotated-quadrature
// marginals, finite-count sampling, and filtered back-projection.

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssb/wigner.hpp"

namespace ssb {

struct QuadratureSet {
  std::vector<double> angles;  // strictly increasing in [0, pi)
  Eigen::VectorXd x_axis;
  Eigen::MatrixXd distributions;  // one row per angle
  std::vector<long> sample_counts;  // 0 marks an exact marginal

  void validate() const;
};

std::vector<double> uniform_angles(int count);

/// Half-width of the quadrature axis that covers every projection of g.
double projection_radius(const WignerGridd& g);

/// pr(x) = integral of W over the line q cos(theta) + p sin(theta) = x.
///
/// Evaluated through the projection-slice identity: the 1-D Fourier
/// transform of pr is the 2-D transform of W along the ray at angle theta,
/// and both transforms are done as direct quadrature sums on the grid.
Eigen::VectorXd marginal(const WignerGridd& g, double theta, const Eigen::VectorXd& x_axis);

QuadratureSet marginals(const WignerGridd& g, const std::vector<double>& angles, const Eigen::VectorXd& x_axis,
                        unsigned workers = 1);

struct QuadratureSample {
  std::vector<double> values;
  Eigen::VectorXd histogram;  // density on x_axis bins
};

/// Inverse-transform sampling of a distribution tabulated on a uniform
/// axis, modelled as constant over bins of width dx centred on the nodes.
/// `stream` separates independent draws made with one seed.
QuadratureSample sample_quadrature(const Eigen::VectorXd& distribution, const Eigen::VectorXd& x_axis, long count,
                                   std::uint64_t seed, std::uint64_t stream = 0);

Eigen::VectorXd histogram(const std::vector<double>& values, const Eigen::VectorXd& x_axis);

/// Replaces each exact distribution by the histogram of `count` samples.
/// Angle i draws from stream i.
QuadratureSet sample_set(const QuadratureSet& exact, long count, std::uint64_t seed,
                         std::vector<std::vector<double>>* samples = nullptr, unsigned workers = 1);

double total_variation(const Eigen::VectorXd& p, const Eigen::VectorXd& q, const Eigen::VectorXd& x_axis);

enum class FilterKind { RamLak, Hann };

struct FilterSpec {
  FilterKind kind = FilterKind::RamLak;
  /// Fraction of the Nyquist frequency above which the filter is cut.
  double cutoff = 1.0;
};

std::string to_string(FilterKind kind);
FilterKind filter_from_string(const std::string& name);

inline constexpr int kSparseAngleCount = 16;

struct ReconstructionReport {
  WignerGridd grid;
  std::optional<double> l2_error;   // relative, vs reference
  std::optional<double> sup_error;  // relative to the reference peak
  int angles_used = 0;
  FilterSpec filter;
  bool sparse_coverage = false;
  std::vector<std::string> warnings;
};

ReconstructionReport reconstruct(const QuadratureSet& quads, const Eigen::VectorXd& q_axis,
                                 const Eigen::VectorXd& p_axis, const FilterSpec& filter = {},
                                 const WignerGridd* reference = nullptr, unsigned workers = 1);

/// Reconstructs on the reference grid's axes and scores against it.
ReconstructionReport reconstruct(const QuadratureSet& quads, const WignerGridd& reference,
                                 const FilterSpec& filter = {}, unsigned workers = 1);

}  // namespace ssb
