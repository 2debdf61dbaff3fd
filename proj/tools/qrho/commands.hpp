#pragma once

#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace qrho_cli {

/// Runs the configured command and returns the tables to write.
std::vector<Table> run_command(const RunConfig& cfg);

}  // namespace qrho_cli
