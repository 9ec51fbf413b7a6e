#pragma once

// Strang-split spectral propagator for the ramped oscillator, used as an
// independent check on the closed-form Gaussian solution.

#include <Eigen/Core>

#include <functional>

#include "ssb/ai_dynamics.hpp"

namespace ssb {

struct SplitStepOptions {
  /// Boundary amplitude, relative to the peak, that counts as aliasing.
  double alias_threshold = 1e-8;
};

/// Largest admissible step: 0.01 / sqrt(delta t_final).
double splitstep_max_dt(const Scenario& scenario, double t_final);

/// Propagates psi under Pi^2/(2N) + N B(t) Q^2/2 on the uniform periodic
/// axis q_axis (unrescaled Q). B is sampled at each step midpoint. The
/// step count is ceil((t_final - t_start)/dt) with the step shrunk to fit.
Eigen::VectorXcd splitstep_propagate(Eigen::VectorXcd psi, const Eigen::VectorXd& q_axis, double big_n,
                                     const std::function<double(double)>& field, double t_start, double t_final,
                                     double dt, const SplitStepOptions& options = {});

/// Evolves the ground state at t0 to t_final under the scenario's ramp.
Eigen::VectorXcd splitstep_evolve(const Scenario& scenario, const Eigen::VectorXd& q_axis, double t_final, double dt,
                                  const SplitStepOptions& options = {});

/// |<a|b>| with the uniform-grid inner product.
double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, const Eigen::VectorXd& q_axis);

/// L2 norm of a - b (phases included).
double l2_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, const Eigen::VectorXd& q_axis);

double grid_norm(const Eigen::VectorXcd& psi, const Eigen::VectorXd& q_axis);

}  // namespace ssb
