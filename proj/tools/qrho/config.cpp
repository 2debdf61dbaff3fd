#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

namespace qrho_cli {
namespace pt = boost::property_tree;

namespace {

// Defaults per command; flags and file values override them.
const std::map<std::string, std::string>& base_defaults() {
  static const std::map<std::string, std::string> d = {
      {"model.epsilon", "1"},         {"model.omega_in", "1"},       {"model.omega_out", "3"},
      {"model.omega_as", "1"},        {"profile.kind", "step"},      {"profile.transition_time", "0"},
      {"profile.width", "0"},         {"sde.dt", "0"},               {"sde.theta_cut", "0"},
      {"sde.n_paths", "4"},           {"sde.stride", "100"},         {"sde.t0", "-5"},
      {"sde.t1", "5"},                {"sde.theta0", "0"},           {"fp.theta_min", "-20"},
      {"fp.theta_max", "20"},         {"fp.n", "2048"},              {"fp.dt", "0.01"},
      {"fp.t_end", "20"},             {"fp.snapshot", "1"},          {"wavefunction.n", "0"},
      {"wavefunction.t", "2"},        {"grids.lambda", "0.5,2,8"},   {"grids.rho", "0"},
      {"grids.theta", "lin:-5:5:201"}, {"grids.x", "lin:-5:5:201"},  {"grids.t", "lin:-5:5:201"},  {"run.seed", "1"},
      {"run.out", "."},               {"run.workers", "0"},          {"run.format", "csv"},
      {"figures.fig", "0"},
  };
  return d;
}

// Command-specific grid defaults, chosen to reproduce the figures.
std::map<std::string, std::string> command_defaults(const std::string& command, int fig) {
  std::map<std::string, std::string> d;
  const bool fig3 = command == "transition" || (command == "figures" && fig == 3);
  if (fig3) {
    d["grids.lambda"] = "log:0.01:100:40";
    d["grids.rho"] = "lin:0:0.95:40";
  }
  if (command == "figures" && fig == 4) {
    d["grids.lambda"] = "log:0.01:100:40";
    d["grids.rho"] = "0";
  }
  if (command == "thermo" || (command == "figures" && fig == 5)) d["grids.lambda"] = "log:0.01:10000:50";
  return d;
}

double to_double(const pt::ptree& t, const std::string& key) {
  const std::string s = t.get<std::string>(key);
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key, "'" + s + "' is not a number");
  }
  if (pos != s.size()) throw ConfigError(key, "'" + s + "' is not a number");
  if (!std::isfinite(v)) throw ConfigError(key, "must be finite");
  return v;
}

std::uint64_t to_uint(const pt::ptree& t, const std::string& key) {
  const std::string s = t.get<std::string>(key);
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError(key, "'" + s + "' is not a non-negative integer");
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw ConfigError(key, "'" + s + "' is out of range");
  }
}

void positive(const std::string& key, double v) {
  if (!(v > 0.0)) throw ConfigError(key, "must be positive");
}

}  // namespace

std::vector<double> parse_grid(const std::string& field, const std::string& text) {
  std::vector<std::string> parts;
  std::vector<double> out;
  if (text.rfind("lin:", 0) == 0 || text.rfind("log:", 0) == 0) {
    std::stringstream ss(text.substr(4));
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw ConfigError(field, "grid '" + text + "' must be kind:a:b:n");
    double a = 0, b = 0;
    long n = 0;
    try {
      a = std::stod(parts[0]);
      b = std::stod(parts[1]);
      n = std::stol(parts[2]);
    } catch (const std::exception&) {
      throw ConfigError(field, "grid '" + text + "' has a non-numeric entry");
    }
    if (n < 1) throw ConfigError(field, "grid needs at least one point");
    const bool log = text[1] == 'o';
    if (log && !(a > 0.0 && b > 0.0)) throw ConfigError(field, "log grid bounds must be positive");
    for (long i = 0; i < n; ++i) {
      const double f = n == 1 ? 0.0 : double(i) / double(n - 1);
      out.push_back(log ? std::exp(std::log(a) + f * (std::log(b) - std::log(a))) : a + f * (b - a));
    }
    if (n > 1) out.back() = b;
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    try {
      out.push_back(std::stod(item, &pos));
    } catch (const std::exception&) {
      throw ConfigError(field, "'" + item + "' is not a number");
    }
    if (pos != item.size()) throw ConfigError(field, "'" + item + "' is not a number");
  }
  if (out.empty()) throw ConfigError(field, "empty grid");
  return out;
}

RunConfig load_config(const std::string& command, const std::filesystem::path& file,
                      const std::map<std::string, std::string>& overrides) {
  pt::ptree file_tree;
  if (!file.empty()) {
    try {
      pt::read_ini(file.string(), file_tree);
    } catch (const pt::ini_parser_error& e) {
      throw ConfigError("config", e.message() + " (" + file.string() + ")");
    }
    for (const auto& [section, body] : file_tree) {
      if (body.empty()) throw ConfigError(section, "top-level keys must live in a section");
      for (const auto& [key, value] : body) {
        const std::string dotted = section + "." + key;
        if (!base_defaults().count(dotted)) throw ConfigError(dotted, "unknown key");
      }
    }
  }

  RunConfig c;
  c.command = command;
  pt::ptree t;
  // The figure number selects grid defaults, so resolve it first.
  int fig = 0;
  {
    pt::ptree probe;
    auto it = overrides.find("figures.fig");
    probe.put("figures.fig", it != overrides.end() ? it->second
                                                    : file_tree.get<std::string>("figures.fig", "0"));
    fig = static_cast<int>(to_uint(probe, "figures.fig"));
  }
  const auto cmd_defaults = command_defaults(command, fig);
  for (const auto& [key, def] : base_defaults()) {
    std::string v;
    if (auto it = overrides.find(key); it != overrides.end())
      v = it->second;
    else if (auto fv = file_tree.get_optional<std::string>(key))
      v = *fv;
    else if (auto cd = cmd_defaults.find(key); cd != cmd_defaults.end())
      v = cd->second;
    else
      v = def;
    t.put(key, v);
  }

  c.params.epsilon = to_double(t, "model.epsilon");
  c.params.omega_in = to_double(t, "model.omega_in");
  c.params.omega_out = to_double(t, "model.omega_out");
  c.params.omega_as = to_double(t, "model.omega_as");
  positive("model.epsilon", c.params.epsilon);
  positive("model.omega_in", c.params.omega_in);
  positive("model.omega_out", c.params.omega_out);
  positive("model.omega_as", c.params.omega_as);

  const std::string kind = t.get<std::string>("profile.kind");
  if (kind == "constant")
    c.profile.kind = QRHO_PROFILE_CONSTANT;
  else if (kind == "step")
    c.profile.kind = QRHO_PROFILE_STEP;
  else if (kind == "smooth_step")
    c.profile.kind = QRHO_PROFILE_SMOOTH_STEP;
  else
    throw ConfigError("profile.kind", "'" + kind + "' is not one of constant, step, smooth_step");
  c.profile.omega_in = c.params.omega_in;
  c.profile.omega_out = kind == "constant" ? c.params.omega_in : c.params.omega_out;
  c.profile.transition_time = to_double(t, "profile.transition_time");
  c.profile.width = to_double(t, "profile.width");
  if (kind == "smooth_step") positive("profile.width", c.profile.width);

  c.dt = to_double(t, "sde.dt");
  c.theta_cut = to_double(t, "sde.theta_cut");
  if (c.dt < 0.0) throw ConfigError("sde.dt", "must be non-negative (0 selects the default)");
  if (c.theta_cut < 0.0) throw ConfigError("sde.theta_cut", "must be non-negative (0 selects the default)");
  c.n_paths = to_uint(t, "sde.n_paths");
  if (c.n_paths == 0) throw ConfigError("sde.n_paths", "must be at least 1");
  c.stride = to_uint(t, "sde.stride");
  if (c.stride == 0) throw ConfigError("sde.stride", "must be at least 1");
  c.t0 = to_double(t, "sde.t0");
  c.t1 = to_double(t, "sde.t1");
  if (!(c.t1 > c.t0)) throw ConfigError("sde.t1", "must exceed sde.t0");
  c.theta0 = to_double(t, "sde.theta0");

  c.fp_theta_min = to_double(t, "fp.theta_min");
  c.fp_theta_max = to_double(t, "fp.theta_max");
  if (!(c.fp_theta_max > c.fp_theta_min)) throw ConfigError("fp.theta_max", "must exceed fp.theta_min");
  c.fp_n = to_uint(t, "fp.n");
  if (c.fp_n < 64) throw ConfigError("fp.n", "needs at least 64 cells");
  c.fp_dt = to_double(t, "fp.dt");
  positive("fp.dt", c.fp_dt);
  c.fp_t_end = to_double(t, "fp.t_end");
  positive("fp.t_end", c.fp_t_end);
  c.fp_snapshot = to_double(t, "fp.snapshot");
  positive("fp.snapshot", c.fp_snapshot);

  const auto n = to_uint(t, "wavefunction.n");
  if (n > 32) throw ConfigError("wavefunction.n", "must be at most 32");
  c.wf_n = static_cast<unsigned>(n);
  c.wf_t = to_double(t, "wavefunction.t");

  c.lambda_grid = parse_grid("grids.lambda", t.get<std::string>("grids.lambda"));
  for (double l : c.lambda_grid)
    if (!(l > 0.0)) throw ConfigError("grids.lambda", "values must be positive");
  c.rho_grid = parse_grid("grids.rho", t.get<std::string>("grids.rho"));
  for (double r : c.rho_grid)
    if (!(r >= 0.0 && r < 1.0)) throw ConfigError("grids.rho", "values must lie in [0, 1)");
  c.theta_grid = parse_grid("grids.theta", t.get<std::string>("grids.theta"));
  c.x_grid = parse_grid("grids.x", t.get<std::string>("grids.x"));
  c.t_grid = parse_grid("grids.t", t.get<std::string>("grids.t"));

  c.fig = static_cast<int>(to_uint(t, "figures.fig"));
  if (command == "figures" && (c.fig < 1 || c.fig > 5)) throw ConfigError("figures.fig", "must be 1 to 5");
  c.seed = to_uint(t, "run.seed");
  c.out = t.get<std::string>("run.out");
  c.workers = static_cast<unsigned>(to_uint(t, "run.workers"));
  c.format = t.get<std::string>("run.format");
  if (c.format != "csv" && c.format != "json") throw ConfigError("run.format", "must be csv or json");

  if (qrho_params_validate(&c.params) != QRHO_OK) throw ConfigError("model", qrho_last_error());
  c.tree = t;
  return c;
}

std::string serialize(const RunConfig& cfg) {
  std::ostringstream os;
  pt::write_ini(os, cfg.tree);
  return os.str();
}

}  // namespace qrho_cli
