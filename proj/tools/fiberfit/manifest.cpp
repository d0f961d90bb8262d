#include "manifest.hpp"

#include <array>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "io.hpp"

namespace fiberfit {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(kExitInvalid, "cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 initialization failed");
  }
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", md[i]);
    hex += byte;
  }
  return hex;
}

Manifest::Manifest(std::string command, std::vector<std::string> argv)
    : command_(std::move(command)), argv_(std::move(argv)) {}

void Manifest::set_input(const std::filesystem::path& path) {
  input_ = {{"path", path.string()}, {"sha256", sha256_file(path)}};
}

void Manifest::write(const std::filesystem::path& path) const {
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  char stamp[32];
  const std::time_t now = std::time(nullptr);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  nlohmann::json j = {
      {"tool", "fiberfit"},
      {"version", FIBERFIT_VERSION},
      {"command", command_},
      {"argv", argv_},
      {"options", options_},
      {"input", input_},
      {"seed", seed_ ? nlohmann::json(*seed_) : nlohmann::json(nullptr)},
      {"outputs", outputs_},
      {"created_utc", stamp},
      {"elapsed_seconds", seconds},
  };
  write_text(path, j.dump(2) + "\n");
}

}  // namespace fiberfit
