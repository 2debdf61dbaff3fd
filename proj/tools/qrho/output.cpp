#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "config.hpp"

namespace qrho_cli {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

namespace {

std::string render_csv(const Table& t) {
  std::string s;
  for (std::size_t j = 0; j < t.columns.size(); ++j) s += (j ? "," : "") + t.columns[j];
  s += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) s += ',';
      s += format_number(row[j]);
    }
    s += '\n';
  }
  return s;
}

std::string render_json(const Table& t) {
  // Numbers go through the same 9-digit text as CSV so both formats agree.
  std::string s = "{\"columns\":" + nlohmann::json(t.columns).dump() + ",\"rows\":[";
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    s += i ? ",[" : "[";
    for (std::size_t j = 0; j < t.rows[i].size(); ++j) {
      if (j) s += ',';
      const double v = t.rows[i][j];
      s += std::isfinite(v) ? format_number(v) : "null";
    }
    s += ']';
  }
  s += "]}\n";
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("run.out", "cannot write " + path.string());
  f << text;
  if (!f) throw ConfigError("run.out", "write failed for " + path.string());
}

}  // namespace

WrittenFile write_table(const std::filesystem::path& dir, const Table& table, const std::string& format) {
  const std::string text = format == "json" ? render_json(table) : render_csv(table);
  WrittenFile w;
  w.name = table.name + (format == "json" ? ".json" : ".csv");
  write_file(dir / w.name, text);
  w.sha256 = sha256_hex(text);
  w.bytes = text.size();
  w.rows = table.rows.size();
  return w;
}

void write_manifest(const std::filesystem::path& dir, const nlohmann::json& manifest) {
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace qrho_cli
