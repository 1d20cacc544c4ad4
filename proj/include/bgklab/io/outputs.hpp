#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace bgklab::io {

/// Locale-independent shortest-roundtrip double formatting, so identical
/// runs emit identical bytes.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string file_checksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(ss.str())));
  return buf;
}

/// Tabular writer; every row carries the anchor label of the quantity it
/// reports in the trailing column.
class CsvWriter {
 public:
  CsvWriter(std::filesystem::path path, std::vector<std::string> columns)
      : path_(std::move(path)) {
    columns.push_back("anchor");
    for (std::size_t i = 0; i < columns.size(); ++i)
      header_ += (i ? "," : "") + columns[i];
    body_ = header_ + "\n";
    ncols_ = columns.size();
  }

  void row(const std::vector<std::string>& cells, const std::string& anchor) {
    std::string line;
    for (const auto& c : cells) line += c + ",";
    line += anchor;
    body_ += line + "\n";
  }

  const std::filesystem::path& path() const { return path_; }

  void write() const {
    std::ofstream out(path_, std::ios::binary);
    out << body_;
  }

 private:
  std::filesystem::path path_;
  std::string header_;
  std::string body_;
  std::size_t ncols_ = 0;
};

struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Record of one CLI run: the configuration snapshot, emitted files with
/// checksums, and the pass/fail summary of every assertion the command
/// evaluated.
struct RunManifest {
  nlohmann::json config;
  std::string version;
  std::string started_at;
  std::string finished_at;
  std::vector<std::pair<std::string, std::string>> outputs;  // file, checksum
  std::vector<Assertion> assertions;
  std::string error;

  bool all_passed() const {
    for (const auto& a : assertions)
      if (!a.passed) return false;
    return true;
  }

  void check(const std::string& name, bool ok, const std::string& detail) {
    assertions.push_back({name, ok, detail});
  }

  void add_output(const std::filesystem::path& p) {
    outputs.emplace_back(p.filename().string(), file_checksum(p));
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["version"] = version;
    j["config"] = config;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    j["outputs"] = nlohmann::json::array();
    for (const auto& [f, c] : outputs)
      j["outputs"].push_back({{"file", f}, {"checksum", c}});
    j["assertions"] = nlohmann::json::array();
    for (const auto& a : assertions)
      j["assertions"].push_back(
          {{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
    j["passed"] = all_passed();
    if (!error.empty()) j["error"] = error;
    return j;
  }
};

inline std::string timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

inline void write_json(const std::filesystem::path& path,
                       const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << "\n";
}

}  // namespace bgklab::io
