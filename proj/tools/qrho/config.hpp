#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>

#include "qrho/qrho.h"

namespace qrho_cli {

// Raised for any invalid configuration value; `field` is the dotted key.
struct ConfigError : std::runtime_error {
  ConfigError(const std::string& field, const std::string& why)
      : std::runtime_error(field + ": " + why), field(field) {}
  std::string field;
};

// Raised when a library call fails during a run.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Grid text "lin:a:b:n", "log:a:b:n" or a comma list.
std::vector<double> parse_grid(const std::string& field, const std::string& text);

struct RunConfig {
  std::string command;
  qrho_params params{1.0, 1.0, 1.0, 1.0};
  qrho_profile profile{QRHO_PROFILE_STEP, 1.0, 1.0, 0.0, 0.0};

  // sde
  double dt = 0.0;         // 0: library default for the parameters
  double theta_cut = 0.0;  // 0: library default
  std::size_t n_paths = 4;
  std::size_t stride = 100;
  double t0 = -5.0, t1 = 5.0, theta0 = 0.0;

  // fp
  double fp_theta_min = -20.0, fp_theta_max = 20.0;
  std::size_t fp_n = 2048;
  double fp_dt = 0.01, fp_t_end = 20.0, fp_snapshot = 1.0;

  // wavefunction
  unsigned wf_n = 0;
  double wf_t = 2.0;

  std::vector<double> lambda_grid, rho_grid, theta_grid, x_grid, t_grid;
  int fig = 0;

  std::uint64_t seed = 1;
  std::filesystem::path out = ".";
  unsigned workers = 0;
  std::string format = "csv";

  boost::property_tree::ptree tree;  // effective key-value form
};

/// Reads the INI file (may be empty path), applies flag overrides keyed by
/// "section.key" and validates every field before anything runs.
RunConfig load_config(const std::string& command, const std::filesystem::path& file,
                      const std::map<std::string, std::string>& overrides);

/// Canonical INI text of the effective configuration.
std::string serialize(const RunConfig& cfg);

}  // namespace qrho_cli
