#include <chrono>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "negbench/cli/cli.hpp"
#include "negbench/common/digest.hpp"
#include "negbench/common/text_io.hpp"

namespace negbench::cli {

void RunManifest::add_input(const std::filesystem::path& path) {
  inputs[path.string()] = sha256_file(path);
}

void RunManifest::add_output(const std::filesystem::path& path) {
  outputs[path.string()] = sha256_file(path);
}

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = "negbench-manifest/1";
  j["tool"] = "negbench";
  j["version"] = kVersion;
  j["command"] = command;
  j["argv"] = argv;
  j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
  j["config"] = config;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  j["started_at"] = started_at;
  j["finished_at"] = finished_at;
  return j;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

std::filesystem::path manifest_path(const std::filesystem::path& output, bool is_directory) {
  if (is_directory) return output / "manifest.json";
  return std::filesystem::path(output.string() + ".manifest.json");
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
  write_file(path, manifest.to_json().dump(2) + "\n");
}

}  // namespace negbench::cli
