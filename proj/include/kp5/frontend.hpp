#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kp5/lattice.hpp"

namespace kp5 {

// Flat `key = value` configuration with '#' comments.  Later assignments
// overwrite earlier ones; typed lookups throw ConfigError naming the
// offending key when a value fails to parse.
class ConfigMap {
 public:
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;  // throws if missing
  double get_double(const std::string& key) const;
  long get_long(const std::string& key) const;
  std::size_t get_size(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;  // comma separated

  // Throws ConfigError naming the first key absent from `allowed`.
  void require_known(const std::vector<std::string>& allowed) const;

  const std::map<std::string, std::string>& items() const { return entries_; }

  // Sorted "key = value" lines; feeding this back as a config file reproduces
  // the run.
  std::string echo() const;

 private:
  std::map<std::string, std::string> entries_;
};

ConfigMap parse_config_text(const std::string& text);
ConfigMap parse_config_file(const std::string& path);

// Splits "key=value" at the first '=', trims both sides, stores it.
void apply_assignment(ConfigMap& cfg, const std::string& assignment);

// Built-in initial data.  Every generator returns a dealiased field with an
// exactly zero x-mean, scaled so the physical peak magnitude is `amplitude`.
SpectralField initial_single_mode(LatticePtr lat, long k, long l, double amplitude);
SpectralField initial_gaussian_bump_dx(LatticePtr lat, double amplitude, double sigma);
SpectralField initial_seeded_random(LatticePtr lat, std::uint64_t seed, double amplitude);

// File-boundary repair: physical snapshots cannot carry an exactly zero
// x-mean through the transform roundoff, so content on the xi = 0 column
// that is negligible relative to the whole field (<= rel_tol in L2) is
// projected away, restoring the exact invariant.  Genuinely nonzero means
// are left untouched.  Returns true when the field now has the invariant.
bool recover_zero_x_mean(SpectralField& f, double rel_tol = 1e-12);

}  // namespace kp5
