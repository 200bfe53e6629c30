#include "kp5/frontend.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "kp5/errors.hpp"
#include "kp5/probes.hpp"
#include "kp5/rng.hpp"

namespace kp5 {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const char* wanted) {
  throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as " + wanted);
}

}  // namespace

void ConfigMap::set(const std::string& key, const std::string& value) { entries_[key] = value; }

bool ConfigMap::has(const std::string& key) const { return entries_.count(key) != 0; }

std::string ConfigMap::get_string(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing config key '" + key + "'");
  return it->second;
}

double ConfigMap::get_double(const std::string& key) const {
  std::string v = get_string(key);
  const char* s = v.c_str();
  char* end = nullptr;
  errno = 0;
  double x = std::strtod(s, &end);
  if (end == s || *end != '\0' || errno == ERANGE) bad_value(key, v, "a number");
  return x;
}

long ConfigMap::get_long(const std::string& key) const {
  std::string v = get_string(key);
  const char* s = v.c_str();
  char* end = nullptr;
  errno = 0;
  long x = std::strtol(s, &end, 10);
  if (end == s || *end != '\0' || errno == ERANGE) bad_value(key, v, "an integer");
  return x;
}

std::size_t ConfigMap::get_size(const std::string& key) const {
  long x = get_long(key);
  if (x < 0) bad_value(key, get_string(key), "a nonnegative integer");
  return static_cast<std::size_t>(x);
}

std::uint64_t ConfigMap::get_u64(const std::string& key) const {
  std::string v = get_string(key);
  const char* s = v.c_str();
  char* end = nullptr;
  errno = 0;
  unsigned long long x = std::strtoull(s, &end, 10);
  if (end == s || *end != '\0' || errno == ERANGE || v.find('-') != std::string::npos)
    bad_value(key, v, "an unsigned integer");
  return static_cast<std::uint64_t>(x);
}

bool ConfigMap::get_bool(const std::string& key) const {
  std::string v = get_string(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, v, "a boolean (true/false)");
}

std::vector<double> ConfigMap::get_double_list(const std::string& key) const {
  std::string v = get_string(key);
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= v.size()) {
    std::size_t comma = v.find(',', pos);
    std::string item = trim(comma == std::string::npos ? v.substr(pos) : v.substr(pos, comma - pos));
    if (!item.empty()) {
      const char* s = item.c_str();
      char* end = nullptr;
      errno = 0;
      double x = std::strtod(s, &end);
      if (end == s || *end != '\0' || errno == ERANGE) bad_value(key, v, "a comma-separated number list");
      out.push_back(x);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

void ConfigMap::require_known(const std::vector<std::string>& allowed) const {
  for (const auto& [k, v] : entries_) {
    bool ok = false;
    for (const auto& a : allowed)
      if (a == k) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError("unknown config key '" + k + "'");
  }
}

std::string ConfigMap::echo() const {
  std::ostringstream out;
  for (const auto& [k, v] : entries_) out << k << " = " << v << "\n";
  return out.str();
}

ConfigMap parse_config_text(const std::string& text) {
  ConfigMap cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string body = trim(line);
    if (body.empty()) continue;
    std::size_t eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    cfg.set(key, value);
  }
  return cfg;
}

ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void apply_assignment(ConfigMap& cfg, const std::string& assignment) {
  std::size_t eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override '" + assignment + "': expected key=value");
  std::string key = trim(assignment.substr(0, eq));
  std::string value = trim(assignment.substr(eq + 1));
  if (key.empty()) throw ConfigError("override '" + assignment + "': empty key");
  cfg.set(key, value);
}

SpectralField initial_single_mode(LatticePtr lat, long k, long l, double amplitude) {
  const auto& g = *lat;
  if (k == 0) throw ConfigError("single-mode init: k must be nonzero (zero x-mean)");
  long half_x = static_cast<long>(g.nx() / 2), half_y = static_cast<long>(g.ny() / 2);
  if (std::labs(k) >= half_x || std::labs(l) >= half_y)
    throw ConfigError("single-mode init: mode outside the representable range");
  SpectralField f = zero_field(std::move(lat));
  std::size_t ik = static_cast<std::size_t>(k >= 0 ? k : k + static_cast<long>(g.nx()));
  std::size_t il = static_cast<std::size_t>(l >= 0 ? l : l + static_cast<long>(g.ny()));
  if (!g.in_dealias_mask(ik, il))
    throw ConfigError("single-mode init: mode outside the dealias band");
  f.coeffs[g.at(ik, il)] = {0.5 * amplitude, 0.0};
  f.coeffs[g.mirror(ik, il)] = {0.5 * amplitude, 0.0};
  return f;
}

SpectralField initial_gaussian_bump_dx(LatticePtr lat, double amplitude, double sigma) {
  const auto& g = *lat;
  if (!(sigma > 0.0)) throw ConfigError("gaussian init: sigma must be positive");
  const double cx = 0.5 * g.lx(), cy = 0.5 * g.ly();
  const double dx = g.lx() / static_cast<double>(g.nx());
  const double dy = g.ly() / static_cast<double>(g.ny());
  std::vector<double> samples(g.size());
  double peak = 0.0;
  for (std::size_t iy = 0; iy < g.ny(); ++iy)
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
      double x = static_cast<double>(ix) * dx - cx;
      double y = static_cast<double>(iy) * dy - cy;
      double v = -x / (sigma * sigma) * std::exp(-(x * x + y * y) / (2.0 * sigma * sigma));
      samples[ix + g.nx() * iy] = v;
      peak = std::max(peak, std::abs(v));
    }
  if (peak > 0.0)
    for (double& v : samples) v *= amplitude / peak;
  SpectralField f = to_spectral(samples, std::move(lat));
  return project_zero_mass(dealias(std::move(f)));
}

bool recover_zero_x_mean(SpectralField& f, double rel_tol) {
  if (f.zero_x_mean) return true;
  const auto& g = *f.lattice;
  double zero_sq = 0.0, total_sq = 0.0;
  for (std::size_t il = 0; il < g.ny(); ++il) zero_sq += std::norm(f.at(0, il));
  for (const auto& c : f.coeffs) total_sq += std::norm(c);
  if (zero_sq > rel_tol * rel_tol * total_sq) return false;
  f = project_zero_mass(std::move(f));
  return true;
}

SpectralField initial_seeded_random(LatticePtr lat, std::uint64_t seed, double amplitude) {
  CounterRng rng(seed);
  SpectralField f = random_field(lat, rng, dealias_band(*lat));
  std::vector<double> phys = to_physical(f);
  double peak = 0.0;
  for (double v : phys) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) f = scale(std::move(f), amplitude / peak);
  return f;
}

}  // namespace kp5
