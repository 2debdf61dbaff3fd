#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "commands.hpp"
#include "config.hpp"
#include "output.hpp"

namespace {

using Overrides = std::map<std::string, std::string>;

void setup_logging() {
  auto logger = spdlog::stderr_logger_st("qrho");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("QRHO_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

// Flag -> config key; every flag is stored as text and validated later with the file values.
void flag(CLI::App* app, Overrides& ov, const std::string& names, const std::string& key, const std::string& help) {
  app->add_option_function<std::string>(names, [&ov, key](const std::string& v) { ov[key] = v; }, help + " [" + key + "]");
}

void common_flags(CLI::App* app, Overrides& ov) {
  flag(app, ov, "--seed", "run.seed", "random seed");
  flag(app, ov, "--out", "run.out", "output directory");
  flag(app, ov, "--workers", "run.workers", "worker threads (0: logical cores)");
  flag(app, ov, "--format", "run.format", "csv or json");
  flag(app, ov, "--epsilon", "model.epsilon", "noise strength");
  flag(app, ov, "--omega-in", "model.omega_in", "incoming frequency");
  flag(app, ov, "--omega-out", "model.omega_out", "outgoing frequency");
  flag(app, ov, "--omega-as", "model.omega_as", "asymptotic frequency for the thermodynamics");
  flag(app, ov, "--profile", "profile.kind", "constant, step or smooth_step");
  flag(app, ov, "--transition-time", "profile.transition_time", "time of the frequency change");
  flag(app, ov, "--width", "profile.width", "smooth_step width");
  flag(app, ov, "--lambda-grid,--lambdas", "grids.lambda", "lambda grid (lin:a:b:n, log:a:b:n or a,b,c)");
  flag(app, ov, "--rho-grid", "grids.rho", "reflection coefficient grid");
  flag(app, ov, "--theta-grid", "grids.theta", "scaled theta grid");
  flag(app, ov, "--x-grid", "grids.x", "position grid");
  flag(app, ov, "--t-grid", "grids.t", "time grid");
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Stochastic parametric oscillator experiments"};
  app.require_subcommand(1);
  std::string config_file;
  bool dump_config = false;
  app.add_option("--config", config_file, "INI configuration file")->check(CLI::ExistingFile);
  app.add_flag("--dump-config", dump_config, "print the effective configuration and exit");
  app.set_version_flag("--version", std::string(qrho_version()));

  Overrides ov;
  const std::map<std::string, std::string> commands = {
      {"stationary", "stationary density for each lambda*gamma on the theta grid"},
      {"paths", "Langevin sample paths"},
      {"fp", "Fokker-Planck evolution from a spike at theta = 0"},
      {"wavefunction", "stochastic basis function on the x grid"},
      {"transition", "vacuum-vacuum transition probability over the lambda and rho grids"},
      {"thermo", "vacuum thermodynamics over the lambda grid"},
      {"figures", "data behind one of the five figures"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    common_flags(sub, ov);
    if (name == "paths") {
      flag(sub, ov, "--dt", "sde.dt", "time step (0: default)");
      flag(sub, ov, "--theta-cut", "sde.theta_cut", "reinjection cut (0: default)");
      flag(sub, ov, "--n-paths", "sde.n_paths", "number of paths");
      flag(sub, ov, "--stride", "sde.stride", "keep every k-th step");
      flag(sub, ov, "--t0", "sde.t0", "start time");
      flag(sub, ov, "--t1", "sde.t1", "end time");
      flag(sub, ov, "--theta0", "sde.theta0", "initial theta");
    }
    if (name == "fp") {
      flag(sub, ov, "--theta-min", "fp.theta_min", "grid start");
      flag(sub, ov, "--theta-max", "fp.theta_max", "grid end");
      flag(sub, ov, "--cells", "fp.n", "grid points");
      flag(sub, ov, "--dt", "fp.dt", "time step");
      flag(sub, ov, "--t-end", "fp.t_end", "final time");
      flag(sub, ov, "--snapshot", "fp.snapshot", "snapshot interval");
    }
    if (name == "wavefunction") {
      flag(sub, ov, "--n", "wavefunction.n", "state index");
      flag(sub, ov, "--t", "wavefunction.t", "evaluation time");
    }
    if (name == "figures") flag(sub, ov, "--fig", "figures.fig", "figure number 1-5");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    const auto cfg = qrho_cli::load_config(command, config_file, ov);
    const std::string ini = qrho_cli::serialize(cfg);
    if (dump_config) {
      std::cout << ini;
      return 0;
    }
    std::error_code ec;
    std::filesystem::create_directories(cfg.out, ec);
    if (ec) throw qrho_cli::ConfigError("run.out", "cannot create " + cfg.out.string() + ": " + ec.message());

    spdlog::info("running {} (seed {})", command, cfg.seed);
    const auto tables = qrho_cli::run_command(cfg);

    nlohmann::json files = nlohmann::json::array();
    for (const auto& t : tables) {
      const auto w = qrho_cli::write_table(cfg.out, t, cfg.format);
      files.push_back({{"name", w.name}, {"sha256", w.sha256}, {"bytes", w.bytes}, {"rows", w.rows}});
      spdlog::info("wrote {} ({} rows)", w.name, w.rows);
    }
    nlohmann::json config = nlohmann::json::object();
    for (const auto& [section, body] : cfg.tree)
      for (const auto& [key, value] : body) config[section][key] = value.data();
    qrho_cli::write_manifest(cfg.out, {{"tool", "qrho"},
                                       {"version", qrho_version()},
                                       {"command", command},
                                       {"seed", cfg.seed},
                                       {"config_sha256", qrho_cli::sha256_hex(ini)},
                                       {"config", config},
                                       {"files", files}});
    return 0;
  } catch (const qrho_cli::ConfigError& e) {
    spdlog::error("invalid configuration: {}", e.what());
    return 1;
  } catch (const qrho_cli::NumericalError& e) {
    spdlog::error("numerical failure: {}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
}
