#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace fiberfit {

std::string sha256_file(const std::filesystem::path& path);

/// Provenance record written next to every output.
class Manifest {
 public:
  Manifest(std::string command, std::vector<std::string> argv);

  void set_option(const std::string& key, nlohmann::json value) { options_[key] = std::move(value); }
  void set_input(const std::filesystem::path& path);
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void add_output(const std::filesystem::path& path) { outputs_.push_back(path.filename().string()); }

  void write(const std::filesystem::path& path) const;

 private:
  std::string command_;
  std::vector<std::string> argv_;
  nlohmann::json options_ = nlohmann::json::object();
  nlohmann::json input_ = nullptr;
  std::optional<std::uint64_t> seed_;
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace fiberfit
