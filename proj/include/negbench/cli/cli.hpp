#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace negbench::cli {

inline constexpr std::string_view kVersion = "0.1.0";

// Record written beside every output: what ran, on which inputs (by content
// hash), with which settings, and what it produced.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::map<std::string, std::string> inputs;   // path -> sha256
  std::map<std::string, std::string> outputs;  // path -> sha256
  std::optional<std::uint64_t> seed;
  std::string started_at;
  std::string finished_at;

  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);
  nlohmann::ordered_json to_json() const;
};

// UTC, ISO 8601 with seconds.
std::string utc_timestamp();

// `dir/manifest.json` for a directory output, `<file>.manifest.json` for a
// file output.
std::filesystem::path manifest_path(const std::filesystem::path& output, bool is_directory);

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

// Entry point. Exit codes: 0 success, 1 usage or input error, 2 internal
// error.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args[0] is the program name

}  // namespace negbench::cli
