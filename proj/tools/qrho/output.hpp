#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace qrho_cli {

struct Table {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// %.9g, the fixed textual form of every number we write.
std::string format_number(double v);

struct WrittenFile {
  std::string name;
  std::string sha256;
  std::size_t bytes = 0;
  std::size_t rows = 0;
};

/// Writes `table` as <name>.csv (LF endings) or <name>.json.
WrittenFile write_table(const std::filesystem::path& dir, const Table& table, const std::string& format);

std::string sha256_hex(const std::string& data);

/// manifest.json next to the artifacts.
void write_manifest(const std::filesystem::path& dir, const nlohmann::json& manifest);

}  // namespace qrho_cli
