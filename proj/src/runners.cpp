#include "ssb/runners.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <numeric>

#include "ssb/io.hpp"
#include "ssb/parallel.hpp"

namespace ssb {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Emitter {
 public:
  Emitter(const ScenarioConfig& config, std::string command)
      : config_(config), command_(std::move(command)), dir_(config.outputs.directory) {
    fs::create_directories(dir_);
  }

  fs::path path(const std::string& name) const { return dir_ / name; }

  void record(const fs::path& file) {
    out_.files.push_back(file);
    outputs_.push_back({{"file", file.filename().string()},
                        {"bytes", fs::file_size(file)},
                        {"checksum_fnv1a64", io::file_checksum(file)}});
  }

  void write_csv(const std::string& name, const io::CsvTable& table) {
    const fs::path p = path(name);
    table.write(p);
    record(p);
  }

  void write_wigner(const std::string& name, const WignerGridd& grid) {
    const fs::path p = path(name);
    io::write_wigner(p, grid);
    record(p);
    record(p.string() + ".json");
  }

  void write_json(const std::string& name, const json& doc) {
    const fs::path p = path(name);
    io::write_text(p, doc.dump(2) + "\n");
    record(p);
  }

  json& extra() { return extra_; }

  RunOutput finish() {
    const RampSpec ramp = config_.ramp();
    const double t_start = config_.t_start_over_that() * ramp.t_hat();
    json manifest = {
        {"command", command_},
        {"tool_version", kToolVersion},
        {"timestamp", utc_timestamp()},
        {"config", json::parse(emit_config(config_))},
        {"derived",
         {{"t_hat", ramp.t_hat()},
          {"omega0", std::sqrt(ramp.b0())},
          {"t0", ramp.t0()},
          {"b0", ramp.b0()},
          {"t0_over_that", ramp.t0() / ramp.t_hat()},
          {"regime_at_t_start", std::string(to_string(classify_regime(ramp, std::max(t_start, ramp.t0()))))}}},
        {"time_unit", config_.run.absolute_times ? "absolute" : "t_hat"},
        {"outputs", outputs_},
    };
    if (!extra_.is_null()) manifest["details"] = extra_;
    out_.manifest = path(command_ + "_manifest.json");
    io::write_text(out_.manifest, manifest.dump(2) + "\n");
    return out_;
  }

 private:
  const ScenarioConfig& config_;
  std::string command_;
  fs::path dir_;
  json outputs_ = json::array();
  json extra_;
  RunOutput out_;
};

double time_out(const ScenarioConfig& c, double t_over_that) {
  return c.run.absolute_times ? t_over_that * c.t_hat() : t_over_that;
}

const char* time_column(const ScenarioConfig& c, const char* scaled) { return c.run.absolute_times ? "t" : scaled; }

double relative_gap(std::complex<double> a, std::complex<double> b) { return std::abs(a - b) / std::abs(b); }

// Largest componentwise relative discrepancy between the Airy and ODE
// envelopes at up to 16 of the sample times.
json method_crosscheck(const Scenario& scenario, const std::vector<double>& times) {
  std::vector<double> picked;
  const std::size_t stride = std::max<std::size_t>(1, times.size() / 16);
  for (std::size_t i = 0; i < times.size(); i += stride) picked.push_back(times[i]);
  if (picked.back() != times.back()) picked.push_back(times.back());
  const ExactOscillator airy_osc(scenario, EnvelopeMethod::Airy);
  const ExactOscillator ode_osc(scenario, EnvelopeMethod::OdeIntegration);
  const std::vector<Envelope> a = airy_osc.envelope_series(picked);
  const std::vector<Envelope> o = ode_osc.envelope_series(picked);
  double worst = 0;
  bool airy_used = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    airy_used = airy_used && a[i].method == EnvelopeMethod::Airy;
    worst = std::max({worst, relative_gap(a[i].f, o[i].f), relative_gap(a[i].f_dot, o[i].f_dot)});
  }
  return {{"samples", picked.size()},
          {"airy_in_range", airy_used},
          {"max_relative_discrepancy", worst}};
}

}  // namespace

AiMoments ai_moments(const Scenario& scenario, double t) {
  detail::require(t >= scenario.ramp.t0() * (1 - detail::kTimeSlack), "AI moments requested before t0");
  const double t_hat = scenario.t_hat();
  if (scenario.ramp.t0() > t_hat) {
    const double stiffness = scenario.big_n * std::sqrt(scenario.ramp.field(t));
    return {2.0 * stiffness, 2.0 / stiffness};
  }
  if (t < t_hat) return {frozen_inv_dq2(scenario), frozen_inv_dpi2(scenario)};
  return {inv_dq2(scenario, t), inv_dpi2(scenario, t)};
}

std::vector<DynamicsRow> dynamics_series(const ScenarioConfig& config) {
  const Scenario scenario = config.scenario();
  const double t_hat = scenario.t_hat();
  const std::vector<double> scaled = config.time_samples();
  std::vector<double> times(scaled.size());
  for (std::size_t i = 0; i < scaled.size(); ++i) times[i] = std::max(scaled[i] * t_hat, scenario.ramp.t0());

  const ExactOscillator oscillator(scenario, config.envelope_method());
  const std::vector<Envelope> env = oscillator.envelope_series(times);
  std::vector<double> wrapped(env.size());
  std::vector<DynamicsRow> rows(env.size());
  for (std::size_t i = 0; i < env.size(); ++i) {
    const std::complex<double> omega = width_from_envelope(env[i], scenario.big_n);
    const Moments m = moments(omega);
    DynamicsRow& r = rows[i];
    r.t_over_that = scaled[i];
    r.ai = ai_moments(scenario, times[i]);
    r.inv_dq2_exact = 1.0 / m.dq2;
    r.inv_dpi2_exact = 1.0 / m.dpi2;
    r.product_exact = m.product();
    wrapped[i] = std::atan(omega.imag());
    r.theta_wrapped = wrapped[i];
  }
  const std::vector<double> unwrapped = unwrap_angles(wrapped);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].theta_unwrapped = unwrapped[i];
  return rows;
}

RunOutput run_dynamics(const ScenarioConfig& config) {
  Emitter emit(config, "dynamics");
  const std::vector<DynamicsRow> rows = dynamics_series(config);
  io::CsvTable table({time_column(config, "t_over_that"), "inv_dq2_ai", "inv_dpi2_ai", "product_ai", "inv_dq2_exact",
                      "inv_dpi2_exact", "product_exact", "theta_wrapped", "theta_unwrapped"});
  for (const DynamicsRow& r : rows) {
    table.add_row({time_out(config, r.t_over_that), r.ai.inv_dq2, r.ai.inv_dpi2, r.ai.product(), r.inv_dq2_exact,
                   r.inv_dpi2_exact, r.product_exact, r.theta_wrapped, r.theta_unwrapped});
  }
  emit.write_csv("dynamics.csv", table);

  const Scenario scenario = config.scenario();
  io::CsvTable punctured({"kappa", time_column(config, "t_over_that"), "kind"});
  if (scenario.ramp.t0() <= scenario.t_hat()) {
    const double t_end = config.time_grid.t_end;
    for (PuncturedKind kind : {PuncturedKind::Localization, PuncturedKind::Revival}) {
      const char* label = kind == PuncturedKind::Localization ? "localization" : "revival";
      for (int kappa = 0;; ++kappa) {
        const double t = punctured_times(kind, kappa, 1.0).back();
        if (t > t_end) break;
        if (t >= config.t_start_over_that()) punctured.add_row({static_cast<double>(kappa), time_out(config, t)}, label);
      }
    }
  }
  emit.write_csv("punctured_times.csv", punctured);

  std::vector<double> times;
  for (double s : config.time_samples()) times.push_back(std::max(s * scenario.t_hat(), scenario.ramp.t0()));
  emit.extra() = {{"envelope_method", config.exact.method},
                  {"method_crosscheck", method_crosscheck(scenario, times)}};
  return emit.finish();
}

RunOutput run_wigner(const ScenarioConfig& config) {
  Emitter emit(config, "wigner");
  const Scenario scenario = config.scenario();
  const ExactOscillator oscillator(scenario, config.envelope_method());
  const double frame = config.wigner.frame == "oscillator" ? std::sqrt(scenario.omega0()) : 1.0;
  const GridSpec spec = config.grid_spec();
  const std::vector<double>& scaled = config.wigner.times;

  std::vector<WignerGridd> grids(scaled.size());
  std::vector<std::complex<double>> omegas(scaled.size());
  parallel_for(scaled.size(), config.workers(), [&](std::size_t i) {
    const double t = std::max(scaled[i] * scenario.t_hat(), scenario.ramp.t0());
    omegas[i] = oscillator.omega(t);
    grids[i] = wigner(ComplexWidth{t, omegas[i], 0.0, scenario.big_n}, spec, frame);
    grids[i].t = time_out(config, scaled[i]);
  });

  json shapes = json::array();
  for (std::size_t i = 0; i < grids.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "wigner_%03zu.csv", i);
    emit.write_wigner(name, grids[i]);
    const ShapeStatistics s = shape_statistics(grids[i]);
    shapes.push_back({{"file", name},
                      {"t", grids[i].t},
                      {"points_per_axis", grids[i].rows()},
                      {"mass", s.mass},
                      {"aspect_ratio", s.aspect_ratio},
                      {"major_axis_angle", s.major_axis_angle},
                      {"ridge_angle", ridge_angle(grids[i])},
                      {"rotation_angle", std::atan(omegas[i].imag())}});
  }
  emit.extra() = {{"frame", config.wigner.frame}, {"frame_scale", frame}, {"grids", shapes}};
  return emit.finish();
}

RunOutput run_tomography(const ScenarioConfig& config) {
  Emitter emit(config, "tomography");
  const Scenario scenario = config.scenario();
  const ExactOscillator oscillator(scenario, config.envelope_method());
  const TomographyConfig& tc = config.tomography;
  const double t = std::max(config.tomography_time_over_that() * scenario.t_hat(), scenario.ramp.t0());
  const double frame = std::sqrt(scenario.omega0());

  GridSpec spec = config.grid_spec();
  spec.n_points = tc.grid_points;
  spec.window_sigmas = tc.window_sigmas;
  WignerGridd reference = wigner(ComplexWidth{t, oscillator.omega(t), 0.0, scenario.big_n}, spec, frame);
  const double radius = projection_radius(reference);
  const bool sampled = tc.samples_per_angle > 0;
  const Eigen::VectorXd x_axis = uniform_axis(radius, sampled ? tc.sample_bins : tc.x_points);
  const std::vector<double> angles = uniform_angles(static_cast<int>(tc.angles));
  const unsigned workers = config.workers();

  const QuadratureSet exact = marginals(reference, angles, x_axis, workers);
  emit.write_csv("tomography_quadratures.csv", [&] {
    io::CsvTable table({"angle", "x", "probability"});
    for (std::size_t a = 0; a < angles.size(); ++a) {
      for (Eigen::Index i = 0; i < x_axis.size(); ++i) {
        table.add_row({angles[a], x_axis(i), exact.distributions(static_cast<Eigen::Index>(a), i)});
      }
    }
    return table;
  }());

  QuadratureSet used = exact;
  if (sampled) {
    std::vector<std::vector<double>> samples;
    used = sample_set(exact, tc.samples_per_angle, tc.seed, &samples, workers);
    io::CsvTable table({"angle", "sample_index", "value"});
    for (std::size_t a = 0; a < angles.size(); ++a) {
      for (std::size_t s = 0; s < samples[a].size(); ++s) table.add_row({angles[a], static_cast<double>(s), samples[a][s]});
    }
    emit.write_csv("tomography_samples.csv", table);
  }

  const FilterSpec filter{filter_from_string(tc.filter), tc.cutoff};
  ReconstructionReport report = reconstruct(used, reference, filter, workers);
  reference.t = report.grid.t = time_out(config, t / scenario.t_hat());
  emit.write_wigner("tomography_reference.csv", reference);
  emit.write_wigner("tomography_reconstruction.csv", report.grid);
  emit.write_json("tomography_report.json", {{"l2_error", *report.l2_error},
                                             {"sup_error", *report.sup_error},
                                             {"angles_used", report.angles_used},
                                             {"filter", to_string(report.filter.kind)},
                                             {"cutoff", report.filter.cutoff},
                                             {"samples_per_angle", tc.samples_per_angle},
                                             {"sparse_coverage", report.sparse_coverage},
                                             {"warnings", report.warnings}});
  emit.extra() = {{"frame", "oscillator"}, {"frame_scale", frame}, {"x_points", x_axis.size()}};
  return emit.finish();
}

RunOutput run_regime_map(const ScenarioConfig& config) {
  Emitter emit(config, "regimes");
  const RegimeConfig& rc = config.regimes;
  const auto log_axis = [&](double lo, double hi) {
    std::vector<double> v(static_cast<std::size_t>(rc.resolution));
    for (long i = 0; i < rc.resolution; ++i) {
      v[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(rc.resolution - 1));
    }
    v.front() = lo;
    v.back() = hi;
    return v;
  };
  std::vector<double> ts = log_axis(rc.t_min, rc.t_max);
  // The freeze-out column sits exactly at t = t_hat.
  if (rc.t_min <= 1.0 && rc.t_max >= 1.0) {
    ts.push_back(1.0);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end(), [](double a, double b) { return std::abs(a - b) <= 1e-12 * b; }),
             ts.end());
    for (double& t : ts) {
      if (std::abs(t - 1.0) <= 1e-12) t = 1.0;
    }
  }
  const std::vector<double> t0s = log_axis(rc.t0_min, rc.t0_max);

  const bool absolute = config.run.absolute_times;
  io::CsvTable map({"delta", absolute ? "t" : "t_over_that", absolute ? "t0" : "t0_over_that", "regime"});
  io::CsvTable tau({"delta", absolute ? "t" : "t_over_that", absolute ? "tau" : "tau_over_that"});
  for (double delta : rc.deltas) {
    const double t_hat = freeze_out_time(delta);
    const double scale = absolute ? t_hat : 1.0;
    for (double t0 : t0s) {
      const RampSpec ramp = RampSpec::from_t0(delta, t0 * t_hat);
      for (double t : ts) {
        const std::string label =
            t < t0 ? "BeforeStart" : std::string(to_string(classify_regime(ramp, std::max(t * t_hat, ramp.t0()))));
        map.add_row({delta, t * scale, t0 * scale}, label);
      }
    }
    for (double t : ts) tau.add_row({delta, t * scale, relaxation_time(delta, t * t_hat) / t_hat * scale});
  }
  emit.write_csv("regimes_map.csv", map);
  emit.write_csv("regimes_tau.csv", tau);
  return emit.finish();
}

RunOutput run_dispersion(const ScenarioConfig& config) {
  Emitter emit(config, "dispersion");
  const ChainParams<double> chain = config.chain();
  const std::vector<BogoliubovMode<double>> modes = phonon_dispersion(chain);
  const Eigen::VectorXd dense = dynamical_matrix_frequencies(chain);

  // Match the two spectra level by level after sorting.
  std::vector<std::size_t> order(modes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return modes[a].energy < modes[b].energy; });
  std::vector<double> matched(modes.size());
  for (std::size_t r = 0; r < order.size(); ++r) matched[order[r]] = dense(static_cast<Eigen::Index>(r));

  io::CsvTable table({"k", "A_k", "B_k", "eps_bogoliubov", "eps_diagonalization", "abs_diff", "zero_mode"});
  double worst = 0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const BogoliubovMode<double>& m = modes[i];
    const double diff = std::abs(m.energy - matched[i]);
    if (!m.is_zero_mode()) worst = std::max(worst, diff);
    table.add_row({m.k, m.a_k, m.b_k, m.energy, matched[i], diff, m.is_zero_mode() ? 1.0 : 0.0});
  }
  emit.write_csv("dispersion.csv", table);
  emit.extra() = {{"n_atoms", chain.n_atoms}, {"max_abs_diff_nonzero_modes", worst}};
  return emit.finish();
}

}  // namespace ssb
