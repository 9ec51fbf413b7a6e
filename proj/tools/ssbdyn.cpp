// Command-line driver: ssbdyn <dynamics|wigner|tomography|regimes|dispersion> [options]

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ssb/config.hpp"
#include "ssb/io.hpp"
#include "ssb/runners.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

// Turns leftover `--section.key value` / `--section.key=value` tokens into
// override pairs.
std::vector<std::pair<std::string, std::string>> dotted_overrides(const std::vector<std::string>& extras) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& tok = extras[i];
    if (tok.rfind("--", 0) != 0 || tok.find('.') == std::string::npos) {
      throw ssb::ConfigError("unrecognized argument '" + tok + "'");
    }
    const std::string body = tok.substr(2);
    const auto eq = body.find('=');
    if (eq != std::string::npos) {
      out.emplace_back(body.substr(0, eq), body.substr(eq + 1));
    } else {
      if (i + 1 >= extras.size()) throw ssb::ConfigError("option '" + tok + "' needs a value");
      out.emplace_back(body, extras[++i]);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ramped collective-oscillator dynamics: dataset emitter"};
  app.set_version_flag("--version", ssb::kToolVersion);
  app.require_subcommand(1);
  app.allow_extras();

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<long> workers;
  std::optional<std::uint64_t> seed;
  bool absolute_times = false;
  bool print_config = false;
  app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory (overrides outputs.directory)");
  app.add_option("--workers", workers, "Worker threads, 0 = all cores (overrides run.workers)");
  app.add_option("--seed", seed, "Sampling seed (overrides tomography.seed)");
  app.add_flag("--absolute-times", absolute_times, "Emit raw times instead of units of t_hat");
  app.add_flag("--print-config", print_config, "Print the resolved configuration and exit");

  const std::vector<std::pair<std::string, ssb::RunOutput (*)(const ssb::ScenarioConfig&)>> commands{
      {"dynamics", ssb::run_dynamics},     {"wigner", ssb::run_wigner},       {"tomography", ssb::run_tomography},
      {"regimes", ssb::run_regime_map},    {"dispersion", ssb::run_dispersion}};
  const std::vector<std::string> help{
      "Order parameter, momentum spread and rotation angle versus time",
      "Wigner-function grids at wigner.times",
      "Quadrature marginals, optional samples and filtered back-projection",
      "Impulse/adiabatic regime map and relaxation-time curve",
      "Bogoliubov phonon dispersion checked against dense diagonalization"};
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i].first, help[i]);
    sub->allow_extras();
    sub->fallthrough();
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    std::vector<std::string> extras = app.remaining();
    for (CLI::App* sub : subs) {
      if (sub->parsed()) {
        const std::vector<std::string> rest = sub->remaining();
        extras.insert(extras.end(), rest.begin(), rest.end());
      }
    }
    auto overrides = dotted_overrides(extras);
    if (out_dir) overrides.emplace_back("outputs.directory", nlohmann::json(*out_dir).dump());
    if (workers) overrides.emplace_back("run.workers", std::to_string(*workers));
    if (seed) overrides.emplace_back("tomography.seed", std::to_string(*seed));
    if (absolute_times) overrides.emplace_back("run.absolute_times", "true");

    const std::string text = config_path.empty() ? std::string() : ssb::io::read_text(config_path);
    const ssb::ScenarioConfig config = ssb::configure(text, overrides);
    if (print_config) {
      std::cout << ssb::emit_config(config);
      return 0;
    }
    for (std::size_t i = 0; i < commands.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      const ssb::RunOutput out = commands[i].second(config);
      for (const auto& f : out.files) std::cout << f.string() << '\n';
      std::cout << out.manifest.string() << '\n';
    }
    return 0;
  } catch (const ssb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ssb::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
