#pragma once

// Periodic harmonic chain: Bogoliubov phonons, the dense dynamical-matrix
// spectrum they must reproduce, and the pinned collective (k = 0) oscillator.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <vector>

#include "ssb/errors.hpp"

namespace ssb {

template <std::floating_point Scalar = double>
struct ChainParams {
  int n_atoms = 2;
  Scalar kappa = 1;
  Scalar mass = 1;
  Scalar lattice_const = 1;

  void validate() const {
    detail::require(n_atoms >= 2, "n_atoms must be >= 2");
    detail::require(kappa > 0, "kappa must be positive");
    detail::require(mass > 0, "mass must be positive");
    detail::require(lattice_const > 0, "lattice_const must be positive");
  }
};

template <std::floating_point Scalar = double>
struct BogoliubovMode {
  Scalar k = 0;       // wavevector
  Scalar a_k = 0;     // 2 - cos(ka)
  Scalar b_k = 0;     // -cos(ka)
  Scalar energy = 0;  // hbar = 1

  bool is_zero_mode() const { return k == Scalar(0); }
};

/// Coefficients of b_k = u beta_k - v beta_{-k}^dagger; u^2 - v^2 = 1.
/// Both diverge as k -> 0, where the transformation does not exist.
template <std::floating_point Scalar>
struct BogoliubovCoefficients {
  Scalar u;
  Scalar v;
};

/// Allowed wavevectors of the periodic chain, 2 pi j / (N a), sorted.
template <std::floating_point Scalar>
std::vector<Scalar> allowed_wavevectors(const ChainParams<Scalar>& params) {
  params.validate();
  const int n = params.n_atoms;
  const int j_min = -(n / 2);
  std::vector<Scalar> ks;
  ks.reserve(static_cast<std::size_t>(n));
  for (int j = j_min; j < j_min + n; ++j) {
    ks.push_back(Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(j) /
                 (Scalar(n) * params.lattice_const));
  }
  return ks;
}

template <std::floating_point Scalar>
BogoliubovMode<Scalar> bogoliubov_mode(const ChainParams<Scalar>& params, Scalar k) {
  const Scalar c = std::cos(k * params.lattice_const);
  BogoliubovMode<Scalar> mode;
  mode.k = k;
  mode.a_k = Scalar(2) - c;
  mode.b_k = -c;
  // a^2 - b^2 = (a - b)(a + b) with a - b = 2 exactly.
  const Scalar a_plus_b = Scalar(2) - Scalar(2) * c;
  const Scalar discriminant = std::max(Scalar(0), Scalar(2) * a_plus_b);
  mode.energy = std::sqrt(params.kappa / (Scalar(2) * params.mass)) * std::sqrt(discriminant);
  if (k == Scalar(0)) mode.energy = 0;
  return mode;
}

/// Phonon branch of the chain, one mode per allowed k, sorted by k.
template <std::floating_point Scalar>
std::vector<BogoliubovMode<Scalar>> phonon_dispersion(const ChainParams<Scalar>& params) {
  std::vector<BogoliubovMode<Scalar>> modes;
  for (Scalar k : allowed_wavevectors(params)) modes.push_back(bogoliubov_mode(params, k));
  return modes;
}

template <std::floating_point Scalar>
BogoliubovCoefficients<Scalar> bogoliubov_coefficients(const BogoliubovMode<Scalar>& mode) {
  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  const Scalar root = std::sqrt(std::max(Scalar(0), (mode.a_k - mode.b_k) * (mode.a_k + mode.b_k)));
  if (root == Scalar(0)) return {inf, mode.b_k < 0 ? -inf : inf};
  const Scalar ratio = mode.a_k / root;
  const Scalar u = std::sqrt((ratio + 1) / 2);
  const Scalar v = std::copysign(std::sqrt((ratio - 1) / 2), mode.b_k);
  return {u, v};
}

/// Force-constant matrix divided by the mass, periodic boundary conditions.
template <std::floating_point Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dynamical_matrix(const ChainParams<Scalar>& params) {
  params.validate();
  const int n = params.n_atoms;
  const Scalar w2 = params.kappa / params.mass;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> d =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const int next = (j + 1) % n;
    d(j, j) += w2;
    d(next, next) += w2;
    d(j, next) -= w2;
    d(next, j) -= w2;
  }
  return d;
}

/// Normal-mode frequencies by dense diagonalization, ascending.
/// Tiny negative eigenvalues from roundoff are clamped to zero.
template <std::floating_point Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> dynamical_matrix_frequencies(const ChainParams<Scalar>& params) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(dynamical_matrix(params), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().array().max(Scalar(0)).sqrt().matrix();
}

/// Ground state of Pi^2/(2N) + B N Q^2/2. At B = 0 the state is the
/// translation-symmetric momentum eigenstate, flagged by `symmetric`.
struct CollectiveState {
  double big_n = 1;
  double field_b = 0;
  double gap = 0;
  double dq2 = 0;
  double dpi2 = 0;
  bool symmetric = false;
};

inline CollectiveState collective_ground_state(double big_n, double field_b) {
  detail::require(big_n > 0, "big_n must be positive");
  detail::require(field_b >= 0, "field_b must be nonnegative");
  CollectiveState s;
  s.big_n = big_n;
  s.field_b = field_b;
  s.gap = std::sqrt(field_b);
  if (field_b == 0) {
    s.symmetric = true;
    s.dq2 = std::numeric_limits<double>::infinity();
    s.dpi2 = 0;
    return s;
  }
  const double stiffness = big_n * std::sqrt(field_b);
  s.dq2 = 1.0 / (2.0 * stiffness);
  s.dpi2 = stiffness / 2.0;
  return s;
}

}  // namespace ssb
