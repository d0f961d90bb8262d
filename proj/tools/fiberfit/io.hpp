#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace fiberfit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitOptimizer = 3;

/// Error carrying the process exit code.
class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& what, bool show_usage = false)
      : std::runtime_error(what), code_(code), show_usage_(show_usage) {}
  int code() const noexcept { return code_; }
  /// The subcommand's help text should follow the message.
  bool show_usage() const noexcept { return show_usage_; }

 private:
  int code_;
  bool show_usage_;
};

struct LengthFile {
  std::vector<double> values;
  std::vector<std::size_t> line_numbers;  // 1-based, aligned with values
};

/// One length per line; blank lines and lines starting with '#' are skipped.
LengthFile read_lengths(const std::filesystem::path& path);

std::vector<double> parse_doubles(const std::string& csv, const std::string& option);
std::vector<bool> parse_bools(const std::string& csv, const std::string& option);

struct Grid {
  double from;
  double to;
  std::size_t n;
};

/// "a:b:n" with a < b and n >= 2.
Grid parse_grid(const std::string& text);
std::vector<double> grid_points(const Grid& g);

/// Shortest text that reads back to the same double.
std::string format_double(double v);

/// Writes through a temporary file in the same directory, then renames.
void write_text(const std::filesystem::path& path, const std::string& content);

/// Refuses to overwrite an existing file, or a non-empty directory, unless
/// force is set.
void check_output(const std::filesystem::path& path, bool force);

std::string lower_case(std::string s);

}  // namespace fiberfit
