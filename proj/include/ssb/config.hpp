#pragma once

// Run configuration: a JSON document whose every leaf can be overridden from
// the command line by its dotted name (`--model.delta 1e-3`). Time inputs
// are in units of the freeze-out time t_hat.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ssb/ai_dynamics.hpp"
#include "ssb/exact_dynamics.hpp"
#include "ssb/microcrystal.hpp"
#include "ssb/tomography.hpp"
#include "ssb/wigner.hpp"

namespace ssb {

struct ModelConfig {
  long n_atoms = 10000;
  double delta = 1e-3;
  std::optional<double> t0 = 0.01;  // absolute; exactly one of t0, b0
  std::optional<double> b0;
  double kappa = 1;
  double mass = 1;
  double lattice_const = 1;

  bool operator==(const ModelConfig&) const = default;
};

struct TimeGridConfig {
  std::optional<double> t_start;  // defaults to t0 / t_hat
  double t_end = 8;
  long n_samples = 2000;
  std::string spacing = "linear";

  bool operator==(const TimeGridConfig&) const = default;
};

struct GridConfig {
  long n_points = 512;
  double window_sigmas = 8;
  bool adapt = true;
  double points_per_sigma = 1.5;
  long max_points = 4096;

  bool operator==(const GridConfig&) const = default;
};

struct WignerConfig {
  std::vector<double> times;
  std::string frame = "rescaled";  // or "oscillator"

  bool operator==(const WignerConfig&) const = default;
};

struct TomographyConfig {
  std::optional<double> time;  // defaults to t0 / t_hat
  long angles = 180;
  long samples_per_angle = 0;
  std::uint64_t seed = 0;
  long x_points = 1025;
  long sample_bins = 65;
  std::string filter = "ram-lak";
  double cutoff = 1.0;
  long grid_points = 128;
  double window_sigmas = 8;

  bool operator==(const TomographyConfig&) const = default;
};

struct RegimeConfig {
  std::vector<double> deltas{1e-4, 1e-3, 1e-2};
  double t_min = 1e-2;
  double t_max = 1e2;
  double t0_min = 1e-3;
  double t0_max = 1e2;
  long resolution = 41;

  bool operator==(const RegimeConfig&) const = default;
};

struct ExactConfig {
  std::string method = "airy";  // or "ode"

  bool operator==(const ExactConfig&) const = default;
};

struct OutputConfig {
  std::string directory = "out";
  std::vector<std::string> formats{"csv"};

  bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
  long workers = 0;  // 0 = all hardware threads
  bool absolute_times = false;

  bool operator==(const RunConfig&) const = default;
};

struct ScenarioConfig {
  ModelConfig model;
  TimeGridConfig time_grid;
  GridConfig grid;
  WignerConfig wigner;
  TomographyConfig tomography;
  RegimeConfig regimes;
  ExactConfig exact;
  OutputConfig outputs;
  RunConfig run;

  bool operator==(const ScenarioConfig&) const = default;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  RampSpec ramp() const;
  Scenario scenario() const;
  double t_hat() const { return ramp().t_hat(); }
  double t_start_over_that() const;
  /// Sample times in units of t_hat.
  std::vector<double> time_samples() const;
  double tomography_time_over_that() const;
  EnvelopeMethod envelope_method() const;
  GridSpec grid_spec() const;
  ChainParams<double> chain() const;
  unsigned workers() const;
};

/// Parses and validates. Unknown keys are rejected.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string emit_config(const ScenarioConfig& config);

/// Applies `--section.key value` overrides on top of a JSON document (the
/// defaults when `json_text` is empty) and parses the result.
ScenarioConfig configure(const std::string& json_text, const std::vector<std::pair<std::string, std::string>>& overrides);

}  // namespace ssb
