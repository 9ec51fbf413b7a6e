#pragma once

// Dataset emitters behind the command-line subcommands. Each run writes its
// data files plus `<command>_manifest.json` into config.outputs.directory.

#include <filesystem>
#include <string>
#include <vector>

#include "ssb/config.hpp"

namespace ssb {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunOutput {
  std::vector<std::filesystem::path> files;
  std::filesystem::path manifest;
};

/// Second moments predicted by the adiabatic-impulse picture at any t >= t0:
/// frozen before t_hat, the closed forms after it, and the instantaneous
/// ground state throughout when the ramp starts beyond t_hat.
struct AiMoments {
  double inv_dq2 = 0;
  double inv_dpi2 = 0;

  double product() const { return 1.0 / (inv_dq2 * inv_dpi2); }
};

AiMoments ai_moments(const Scenario& scenario, double t);

struct DynamicsRow {
  double t_over_that = 0;
  AiMoments ai;
  double inv_dq2_exact = 0;
  double inv_dpi2_exact = 0;
  double product_exact = 0;
  double theta_wrapped = 0;
  double theta_unwrapped = 0;
};

std::vector<DynamicsRow> dynamics_series(const ScenarioConfig& config);

RunOutput run_dynamics(const ScenarioConfig& config);
RunOutput run_wigner(const ScenarioConfig& config);
RunOutput run_tomography(const ScenarioConfig& config);
RunOutput run_regime_map(const ScenarioConfig& config);
RunOutput run_dispersion(const ScenarioConfig& config);

}  // namespace ssb
