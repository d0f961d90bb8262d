#include "io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fiberfit {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool parse_double(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* first = t.data();
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, t.data() + t.size(), out);
  return res.ec == std::errc() && res.ptr == t.data() + t.size();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::string lower_case(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

LengthFile read_lengths(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CliError(kExitInvalid, "cannot open data file " + path.string());
  LengthFile out;
  std::vector<std::size_t> bad;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    double v = 0.0;
    if (!parse_double(t, v) || !std::isfinite(v)) {
      bad.push_back(number);
      continue;
    }
    out.values.push_back(v);
    out.line_numbers.push_back(number);
  }
  if (!bad.empty()) {
    std::ostringstream os;
    os << path.string() << ": lines that are not a single finite number:";
    for (std::size_t i = 0; i < std::min<std::size_t>(bad.size(), 20); ++i) os << ' ' << bad[i];
    if (bad.size() > 20) os << " ... (" << bad.size() << " lines)";
    throw CliError(kExitInvalid, os.str());
  }
  if (out.values.empty()) throw CliError(kExitInvalid, path.string() + ": no lengths found");
  return out;
}

std::vector<double> parse_doubles(const std::string& csv, const std::string& option) {
  std::vector<double> out;
  for (const auto& item : split(csv, ',')) {
    double v = 0.0;
    if (!parse_double(item, v)) {
      throw CliError(kExitInvalid, option + ": '" + item + "' is not a number");
    }
    out.push_back(v);
  }
  if (out.empty()) throw CliError(kExitInvalid, option + ": no values given");
  return out;
}

std::vector<bool> parse_bools(const std::string& csv, const std::string& option) {
  std::vector<bool> out;
  for (const auto& item : split(csv, ',')) {
    const std::string v = lower_case(item);
    if (v == "t" || v == "true" || v == "1") {
      out.push_back(true);
    } else if (v == "f" || v == "false" || v == "0") {
      out.push_back(false);
    } else {
      throw CliError(kExitInvalid, option + ": '" + item + "' is not one of T, F, TRUE, FALSE, 1, 0");
    }
  }
  return out;
}

Grid parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  double a = 0.0;
  double b = 0.0;
  double n = 0.0;
  if (parts.size() != 3 || !parse_double(parts[0], a) || !parse_double(parts[1], b) ||
      !parse_double(parts[2], n)) {
    throw CliError(kExitInvalid, "--grid expects a:b:n, got '" + text + "'");
  }
  if (!(a < b) || !(n >= 2.0) || n != std::floor(n) || n > 1e7) {
    throw CliError(kExitInvalid, "--grid needs a < b and an integer n >= 2");
  }
  return {a, b, static_cast<std::size_t>(n)};
}

std::vector<double> grid_points(const Grid& g) {
  std::vector<double> out(g.n);
  const double span = g.to - g.from;
  for (std::size_t i = 0; i < g.n; ++i) {
    out[i] = i + 1 == g.n ? g.to : g.from + span * static_cast<double>(i) / static_cast<double>(g.n - 1);
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::filesystem::create_directories(dir);
  const auto tmp = dir / ("." + path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CliError(kExitInvalid, "cannot write " + path.string());
    out << content;
    if (!out) throw CliError(kExitInvalid, "write failed for " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

void check_output(const std::filesystem::path& path, bool force) {
  namespace fs = std::filesystem;
  if (force || !fs::exists(path)) return;
  if (fs::is_directory(path) && fs::is_empty(path)) return;
  throw CliError(kExitInvalid, path.string() + " already exists; pass --force to overwrite");
}

}  // namespace fiberfit
