#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "kp5/dispersion.hpp"
#include "kp5/errors.hpp"
#include "kp5/evolution.hpp"
#include "kp5/frontend.hpp"
#include "kp5/functionals.hpp"
#include "kp5/io.hpp"
#include "kp5/lattice.hpp"
#include "kp5/probes.hpp"

namespace {

using namespace kp5;

// Exit statuses: 0 ok, 1 usage/config, 2 blow-up, 3 trend assertion failed,
// 4 invariant-violating input.
struct TrendAssertionFailure {
  double trend;
  double limit;
};

constexpr double kDefaultBox = 32.0 * 3.14159265358979323846;

double box_or_default(double v) { return v > 0.0 ? v : kDefaultBox; }

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

// One subcommand: the known keys with their defaults, plus per-key CLI
// options that override the config file.  Resolution order is defaults,
// file, --set overrides, explicit flags.
class CommandSetup {
 public:
  CommandSetup(CLI::App* cmd, std::vector<std::pair<std::string, std::string>> defaults)
      : cmd_(cmd), defaults_(std::move(defaults)) {
    cmd_->add_option("--config", config_path_, "flat 'key = value' config file, '#' comments");
    cmd_->add_option("--set", sets_, "config override key=value (repeatable)");
    cmd_->add_option("--output-dir,-o", output_dir_, "directory for output files");
    cmd_->add_flag("--gnuplot", gnuplot_, "also emit a ready-made gnuplot script");
  }

  void key_option(const std::string& flag, const std::string& key, const std::string& desc) {
    values_.push_back(std::make_unique<ValueFlag>());
    ValueFlag& vf = *values_.back();
    vf.key = key;
    vf.opt = cmd_->add_option(flag, vf.text, desc);
  }

  // Positional argument that lands in the same key space as the flags.
  void key_positional(const std::string& name, const std::string& key, const std::string& desc) {
    values_.push_back(std::make_unique<ValueFlag>());
    ValueFlag& vf = *values_.back();
    vf.key = key;
    vf.opt = cmd_->add_option(name, vf.text, desc);
  }

  void key_flag(const std::string& flag, const std::string& key, const std::string& desc) {
    values_.push_back(std::make_unique<ValueFlag>());
    ValueFlag& vf = *values_.back();
    vf.key = key;
    vf.is_flag = true;
    vf.opt = cmd_->add_flag(flag, vf.given, desc);
  }

  ConfigMap resolve() const {
    std::vector<std::string> allowed;
    allowed.reserve(defaults_.size());
    for (const auto& [k, v] : defaults_) allowed.push_back(k);
    ConfigMap user;
    if (!config_path_.empty()) user = parse_config_file(config_path_);
    for (const auto& s : sets_) apply_assignment(user, s);
    user.require_known(allowed);
    ConfigMap cfg;
    for (const auto& [k, v] : defaults_) cfg.set(k, v);
    for (const auto& [k, v] : user.items()) cfg.set(k, v);
    for (const auto& vf : values_) {
      if (vf->is_flag) {
        if (vf->given) cfg.set(vf->key, "true");
      } else if (vf->opt->count() > 0) {
        cfg.set(vf->key, vf->text);
      }
    }
    return cfg;
  }

  const std::string& output_dir() const { return output_dir_; }
  bool gnuplot() const { return gnuplot_; }
  CLI::App* cmd() const { return cmd_; }

 private:
  struct ValueFlag {
    std::string key;
    std::string text;
    bool given = false;
    bool is_flag = false;
    CLI::Option* opt = nullptr;
  };

  CLI::App* cmd_;
  std::vector<std::pair<std::string, std::string>> defaults_;
  std::vector<std::unique_ptr<ValueFlag>> values_;
  std::string config_path_;
  std::vector<std::string> sets_;
  std::string output_dir_ = ".";
  bool gnuplot_ = false;
};

void write_echo(const CommandSetup& setup, const std::string& command, const ConfigMap& cfg) {
  std::filesystem::create_directories(setup.output_dir());
  atomic_write_text(join_path(setup.output_dir(), command + "_config_echo.txt"), cfg.echo());
}

// ---------------------------------------------------------------------------
// classify

int cmd_classify(const CommandSetup& setup) {
  ConfigMap cfg = setup.resolve();
  DispersionParams p{cfg.get_double("alpha"), cfg.get_double("beta")};
  double xi1 = cfg.get_double("xi1");
  double xi2 = cfg.get_double("xi2");
  std::string mu1 = cfg.get_string("mu1");
  std::string mu2 = cfg.get_string("mu2");
  if (mu1.empty() != mu2.empty())
    throw ConfigError("classify: give both mu1 and mu2 or neither");
  InteractionClass cls = mu1.empty()
                             ? classify_interaction(xi1, xi2, p)
                             : classify_interaction(xi1, cfg.get_double("mu1"), xi2,
                                                    cfg.get_double("mu2"), p);
  write_echo(setup, "classify", cfg);
  std::cout << "class = " << to_string(cls.tag) << "\n";
  if (cls.resonant) std::cout << "resonant = " << (*cls.resonant ? "yes" : "no") << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// norm

int cmd_norm(const CommandSetup& setup) {
  ConfigMap cfg = setup.resolve();
  std::string input = cfg.get_string("input");
  if (input.empty()) throw ConfigError("norm: input snapshot file required");
  Snapshot snap = read_snapshot(input);
  LatticePtr lat = make_lattice(snap.nx, snap.ny, snap.lx, snap.ly);
  SpectralField f = to_spectral(snap.samples, lat);
  recover_zero_x_mean(f);
  DispersionParams p = snap.disp;
  if (cfg.get_string("alpha") != "file") p.alpha = cfg.get_double("alpha");
  if (cfg.get_string("beta") != "file") p.beta = cfg.get_double("beta");
  cfg.set("alpha", format_full(p.alpha));
  cfg.set("beta", format_full(p.beta));
  bool skip_zero_mass = cfg.get_bool("skip_zero_mass_norms");
  std::vector<double> s_list = cfg.get_double_list("s_list");
  std::vector<std::pair<double, double>> pairs;
  {
    std::string raw = cfg.get_string("pairs");
    std::size_t pos = 0;
    while (pos < raw.size()) {
      std::size_t comma = raw.find(',', pos);
      std::string item = comma == std::string::npos ? raw.substr(pos) : raw.substr(pos, comma - pos);
      if (!item.empty()) {
        std::size_t colon = item.find(':');
        if (colon == std::string::npos)
          throw ConfigError("config key 'pairs': expected s1:s2 entries separated by commas");
        ConfigMap tmp;
        tmp.set("s1", item.substr(0, colon));
        tmp.set("s2", item.substr(colon + 1));
        pairs.emplace_back(tmp.get_double("s1"), tmp.get_double("s2"));
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  if (!f.zero_x_mean && !skip_zero_mass)
    throw RejectedInputError(
        "input has nonzero x-mean, so the zero-mass norms (hamiltonian, weighted energy) are "
        "undefined; pass --skip-zero-mass-norms to compute mass and anisotropic norms only");

  std::ostringstream header, row;
  header << "mass";
  row << format_full(mass(f));
  if (!skip_zero_mass) {
    header << ",hamiltonian";
    row << "," << format_full(hamiltonian(f, p));
    for (double s : s_list) {
      header << ",es_" << format_full(s);
      row << "," << format_full(es_norm(f, s));
    }
  }
  for (const auto& [s1, s2] : pairs) {
    header << ",hs_" << format_full(s1) << "_" << format_full(s2);
    row << "," << format_full(aniso_sobolev_norm(f, s1, s2));
  }
  write_echo(setup, "norm", cfg);
  std::string text = header.str() + "\n" + row.str() + "\n";
  atomic_write_text(join_path(setup.output_dir(), "norms.csv"), text);
  std::cout << text;
  return 0;
}

// ---------------------------------------------------------------------------
// linear

int cmd_linear(const CommandSetup& setup) {
  ConfigMap cfg = setup.resolve();
  std::string input = cfg.get_string("input");
  if (input.empty()) throw ConfigError("linear: input snapshot file required");
  Snapshot snap = read_snapshot(input);
  LatticePtr lat = make_lattice(snap.nx, snap.ny, snap.lx, snap.ly);
  SpectralField f = to_spectral(snap.samples, lat);
  DispersionParams p = snap.disp;
  if (cfg.get_string("alpha") != "file") p.alpha = cfg.get_double("alpha");
  if (cfg.get_string("beta") != "file") p.beta = cfg.get_double("beta");
  cfg.set("alpha", format_full(p.alpha));
  cfg.set("beta", format_full(p.beta));
  double t = cfg.get_double("t");
  write_echo(setup, "linear", cfg);
  SpectralField g = linear_propagate(f, t, p);
  std::string out = cfg.get_string("out");
  write_snapshot(join_path(setup.output_dir(), out), snapshot_from_field(g, p, snap.time + t));
  std::cout << "wrote " << out << " at t = " << format_full(snap.time + t) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// resonance-map

int cmd_resonance_map(const CommandSetup& setup) {
  ConfigMap cfg = setup.resolve();
  DispersionParams p{cfg.get_double("alpha"), cfg.get_double("beta")};
  auto axis = [&](const char* name, double lo, double hi, std::size_t n) {
    if (n < 1) throw ConfigError(std::string("resonance-map: ") + name + "_n must be >= 1");
    if (n > 1 && !(hi > lo))
      throw ConfigError(std::string("resonance-map: degenerate rectangle, ") + name +
                        "_max must exceed " + name + "_min");
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
      v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
  };
  std::vector<double> xi1 =
      axis("xi1", cfg.get_double("xi1_min"), cfg.get_double("xi1_max"), cfg.get_size("xi1_n"));
  std::vector<double> xi2 =
      axis("xi2", cfg.get_double("xi2_min"), cfg.get_double("xi2_max"), cfg.get_size("xi2_n"));
  std::size_t mu_n = cfg.get_size("mu_n");
  // An empty mu range degenerates to the mu = 0 axis.
  std::vector<double> mu1 = mu_n == 0 ? std::vector<double>{0.0}
                                      : axis("mu1", cfg.get_double("mu1_min"),
                                             cfg.get_double("mu1_max"), mu_n);
  double mu2 = mu_n == 0 ? 0.0 : cfg.get_double("mu2");
  write_echo(setup, "resonance-map", cfg);

  std::ostringstream out;
  std::size_t skipped = 0;
  std::ostringstream body;
  for (double m1 : mu1)
    for (double x2 : xi2)
      for (double x1 : xi1) {
        if (x1 == 0.0 || x2 == 0.0 || x1 + x2 == 0.0) {
          ++skipped;
          continue;
        }
        double r = resonance(x1, m1, x2, mu2, p);
        InteractionClass cls = classify_interaction(x1, m1, x2, mu2, p);
        body << format_full(x1) << "," << format_full(x2) << "," << format_full(m1) << ","
             << format_full(mu2) << "," << format_full(r) << "," << to_string(cls.tag) << ","
             << (cls.resonant.value_or(false) ? 1 : 0) << "\n";
      }
  out << "# skipped_singular = " << skipped << "\n";
  out << "xi1,xi2,mu1,mu2,resonance,class,resonant\n";
  out << body.str();
  atomic_write_text(join_path(setup.output_dir(), "resonance_map.csv"), out.str());
  if (setup.gnuplot()) {
    std::ostringstream gp;
    gp << "set datafile separator \",\"\n"
       << "set key autotitle columnhead\n"
       << "set terminal pngcairo size 900,700\n"
       << "set output \"resonance_map.png\"\n"
       << "set xlabel \"xi1\"\nset ylabel \"xi2\"\n"
       << "set view map\n"
       << "set dgrid3d " << xi2.size() << "," << xi1.size() << "\n"
       << "splot \"resonance_map.csv\" using 1:2:5 with pm3d notitle\n";
    atomic_write_text(join_path(setup.output_dir(), "resonance_map.gnuplot"), gp.str());
  }
  std::cout << "wrote resonance_map.csv (" << (xi1.size() * xi2.size() * mu1.size() - skipped)
            << " rows, " << skipped << " singular nodes skipped)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(const CommandSetup& setup) {
  ConfigMap cfg = setup.resolve();
  SimConfig sc;
  std::string init = cfg.get_string("init");
  SpectralField u0;
  if (init == "file") {
    std::string path = cfg.get_string("init_file");
    if (path.empty()) throw ConfigError("simulate: init = file requires init_file");
    Snapshot snap = read_snapshot(path);
    sc.nx = snap.nx;
    sc.ny = snap.ny;
    sc.lx = snap.lx;
    sc.ly = snap.ly;
    sc.disp = snap.disp;
    u0 = to_spectral(snap.samples, make_lattice(snap.nx, snap.ny, snap.lx, snap.ly));
    cfg.set("nx", std::to_string(sc.nx));
    cfg.set("ny", std::to_string(sc.ny));
    cfg.set("lx", format_full(sc.lx));
    cfg.set("ly", format_full(sc.ly));
    cfg.set("alpha", format_full(sc.disp.alpha));
    cfg.set("beta", format_full(sc.disp.beta));
  } else {
    sc.nx = cfg.get_size("nx");
    sc.ny = cfg.get_size("ny");
    sc.lx = cfg.get_double("lx");
    sc.ly = cfg.get_double("ly");
    sc.disp.alpha = cfg.get_double("alpha");
    sc.disp.beta = cfg.get_double("beta");
  }
  sc.dt = cfg.get_double("dt");
  sc.big_t = cfg.get_double("big_t");
  sc.output_stride = cfg.get_size("stride");
  sc.seed = cfg.get_u64("seed");
  sc.diag_s = cfg.get_double("diag_s");
  sc.linear_only = cfg.get_bool("linear_only");
  std::string integ = cfg.get_string("integrator");
  if (integ == "exponential_rk4")
    sc.integrator = Integrator::ExponentialRk4;
  else if (integ == "splitstep2")
    sc.integrator = Integrator::SplitStep2;
  else
    throw ConfigError("simulate: integrator must be exponential_rk4 or splitstep2");
  sc.validate();

  if (init != "file") {
    LatticePtr lat = make_lattice(sc.nx, sc.ny, sc.box_lx(), sc.box_ly());
    double amplitude = cfg.get_double("amplitude");
    if (init == "zero") {
      u0 = zero_field(lat);
    } else if (init == "single-mode") {
      u0 = initial_single_mode(lat, cfg.get_long("mode_k"), cfg.get_long("mode_l"), amplitude);
    } else if (init == "gaussian-bump-x-derivative") {
      double sigma = cfg.get_double("sigma");
      if (sigma <= 0.0) sigma = sc.box_lx() / 16.0;
      u0 = initial_gaussian_bump_dx(lat, amplitude, sigma);
    } else if (init == "seeded-random") {
      u0 = initial_seeded_random(lat, sc.seed, amplitude);
    } else {
      throw ConfigError(
          "simulate: init must be one of zero, single-mode, gaussian-bump-x-derivative, "
          "seeded-random, file");
    }
  }

  write_echo(setup, "simulate", cfg);
  Trajectory traj = simulate(u0, sc);

  std::ostringstream diag;
  diag << "t,mass,hamiltonian,es\n";
  for (const auto& row : traj.diagnostics)
    diag << format_full(row.t) << "," << format_full(row.mass_value) << ","
         << format_full(row.hamiltonian_value) << "," << format_full(row.es_value) << "\n";
  atomic_write_text(join_path(setup.output_dir(), "diagnostics.csv"), diag.str());
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    char name[40];
    std::snprintf(name, sizeof name, "snapshot_%06zu.kpf1", i);
    write_snapshot(join_path(setup.output_dir(), name),
                   snapshot_from_field(traj.snapshots[i], sc.disp, traj.times[i]));
  }
  if (setup.gnuplot()) {
    std::ostringstream gp;
    gp << "set datafile separator \",\"\n"
       << "set key autotitle columnhead\n"
       << "set terminal pngcairo size 900,600\n"
       << "set output \"diagnostics.png\"\n"
       << "set xlabel \"t\"\n"
       << "plot \"diagnostics.csv\" using 1:2 with lines, \\\n"
       << "     \"\" using 1:3 with lines, \\\n"
       << "     \"\" using 1:4 with lines\n";
    atomic_write_text(join_path(setup.output_dir(), "diagnostics.gnuplot"), gp.str());
  }
  std::cout << "simulated to t = " << format_full(traj.times.back()) << ", "
            << traj.snapshots.size() << " snapshots, " << traj.diagnostics.size()
            << " diagnostics rows\n";
  return 0;
}

// ---------------------------------------------------------------------------
// probe

int cmd_probe(const CommandSetup& setup) {
  ConfigMap cfg = setup.resolve();
  std::string id = cfg.get_string("inequality");
  if (id.empty()) throw ConfigError("probe: inequality id required");
  DispersionParams p{cfg.get_double("alpha"), cfg.get_double("beta")};
  std::size_t nx = cfg.get_size("nx"), ny = cfg.get_size("ny"), nt = cfg.get_size("nt");
  double lx = box_or_default(cfg.get_double("lx"));
  double ly = box_or_default(cfg.get_double("ly"));
  TimeWindow w{cfg.get_double("big_t")};
  std::size_t ensemble = cfg.get_size("ensemble");
  std::uint64_t seed = cfg.get_u64("seed");
  LatticePtr base = make_lattice(nx, ny, lx, ly);
  Band band{cfg.get_long("band_kx"), cfg.get_long("band_ky")};
  if (band.kx <= 0 || band.ky <= 0) band = dealias_band(*base);

  auto run_probe = [&](LatticePtr lat) -> ProbeReport {
    if (id == "strichartz") {
      StrichartzExponents e(cfg.get_double("q"), cfg.get_double("r"));
      return strichartz_probe(e, lat, p, w, nt, ensemble, seed, band);
    }
    if (id == "dyadic-strichartz") {
      StrichartzExponents e(cfg.get_double("q"), cfg.get_double("r"));
      return dyadic_strichartz_probe(static_cast<unsigned>(cfg.get_size("j")), e, lat, p, w, nt,
                                     ensemble, seed, band);
    }
    if (id == "maximal") {
      std::string mname = cfg.get_string("multiplier");
      MultiplierSpec m = mname == "unit-cube" ? MultiplierSpec::unit_cube()
                         : mname == "ones"    ? MultiplierSpec::ones()
                         : mname == "zero"
                             ? MultiplierSpec::zero()
                             : throw ConfigError("probe: multiplier must be unit-cube, ones, or zero");
      return maximal_probe(m, lat, p, w, nt, ensemble, seed, band);
    }
    if (id == "time-gain") {
      return time_gain_probe(cfg.get_double("a"), cfg.get_double("b"),
                             cfg.get_double_list("t_list"), lat, p, nt, ensemble, seed, band,
                             cfg.get_double("padding"));
    }
    if (id == "bilinear") {
      return bilinear_probe(cfg.get_double("s"), lat, p, w, nt, ensemble, seed, band);
    }
    throw ConfigError("probe: unknown inequality id '" + id +
                      "' (want strichartz, dyadic-strichartz, maximal, time-gain, bilinear)");
  };

  write_echo(setup, "probe", cfg);
  ProbeReport rep = run_probe(base);
  std::string stem = "probe_" + id;
  atomic_write_text(join_path(setup.output_dir(), stem + ".csv"), rep.to_csv());
  std::cout << id << ": max ratio = " << format_full(rep.max_ratio)
            << ", median = " << format_full(rep.median_ratio) << ", degenerate = " << rep.degenerate
            << "\n";
  if (setup.gnuplot()) {
    std::ostringstream gp;
    gp << "set datafile separator \",\"\n"
       << "set key autotitle columnhead\n"
       << "set terminal pngcairo size 900,600\n"
       << "set output \"" << stem << ".png\"\n"
       << "set xlabel \"sample\"\nset ylabel \"ratio\"\n"
       << "plot \"" << stem << ".csv\" using 1:3 with points pt 7\n";
    atomic_write_text(join_path(setup.output_dir(), stem + ".gnuplot"), gp.str());
  }

  double limit = cfg.get_double("assert_trend");
  if (limit > 0.0) {
    LatticePtr refined = make_lattice(2 * nx, 2 * ny, lx, ly);
    ProbeReport rep2 = run_probe(refined);
    atomic_write_text(join_path(setup.output_dir(), stem + "_refined.csv"), rep2.to_csv());
    double trend = refinement_trend(rep, rep2);
    std::ostringstream tr;
    tr << "base_max_ratio,refined_max_ratio,trend\n"
       << format_full(rep.max_ratio) << "," << format_full(rep2.max_ratio) << ","
       << format_full(trend) << "\n";
    atomic_write_text(join_path(setup.output_dir(), stem + "_trend.csv"), tr.str());
    std::cout << "refinement trend (" << nx << "x" << ny << " -> " << 2 * nx << "x" << 2 * ny
              << ") = " << format_full(trend) << "\n";
    if (trend > limit) throw TrendAssertionFailure{trend, limit};
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudo-spectral toolkit for a fifth-order dispersive model"};
  app.require_subcommand(1);

  CommandSetup classify(app.add_subcommand("classify", "classify one frequency interaction"),
                        {{"alpha", "0"},
                         {"beta", "1"},
                         {"xi1", "0"},
                         {"xi2", "0"},
                         {"mu1", ""},
                         {"mu2", ""}});
  classify.key_option("--alpha", "alpha", "third-order dispersion coefficient");
  classify.key_option("--beta", "beta", "fifth-order dispersion coefficient");
  classify.key_option("--xi1", "xi1", "first x-frequency");
  classify.key_option("--xi2", "xi2", "second x-frequency");
  classify.key_option("--mu1", "mu1", "first y-frequency (optional)");
  classify.key_option("--mu2", "mu2", "second y-frequency (optional)");

  CommandSetup norm(app.add_subcommand("norm", "report norms of a snapshot"),
                    {{"input", ""},
                     {"alpha", "file"},
                     {"beta", "file"},
                     {"s_list", "1"},
                     {"pairs", ""},
                     {"skip_zero_mass_norms", "false"}});
  norm.key_option("--input,-i", "input", "snapshot file");
  norm.key_option("--alpha", "alpha", "override the snapshot's alpha");
  norm.key_option("--beta", "beta", "override the snapshot's beta");
  norm.key_option("--s-list", "s_list", "comma-separated s values for the weighted energy norm");
  norm.key_option("--pairs", "pairs", "comma-separated s1:s2 anisotropic exponent pairs");
  norm.key_flag("--skip-zero-mass-norms", "skip_zero_mass_norms",
                "only compute norms defined without the zero x-mean constraint");

  CommandSetup linear(app.add_subcommand("linear", "exact linear evolution of a snapshot"),
                      {{"input", ""},
                       {"t", "1"},
                       {"alpha", "file"},
                       {"beta", "file"},
                       {"out", "linear_out.kpf1"}});
  linear.key_option("--input,-i", "input", "snapshot file");
  linear.key_option("--t", "t", "propagation time");
  linear.key_option("--alpha", "alpha", "override the snapshot's alpha");
  linear.key_option("--beta", "beta", "override the snapshot's beta");
  linear.key_option("--out", "out", "output snapshot name");

  CommandSetup rmap(app.add_subcommand("resonance-map", "grid of resonance values and classes"),
                    {{"alpha", "0"},
                     {"beta", "1"},
                     {"xi1_min", "0.5"},
                     {"xi1_max", "10"},
                     {"xi1_n", "40"},
                     {"xi2_min", "0.5"},
                     {"xi2_max", "10"},
                     {"xi2_n", "40"},
                     {"mu1_min", "0"},
                     {"mu1_max", "0"},
                     {"mu_n", "1"},
                     {"mu2", "0"}});
  rmap.key_option("--alpha", "alpha", "third-order dispersion coefficient");
  rmap.key_option("--beta", "beta", "fifth-order dispersion coefficient");
  rmap.key_option("--xi1-min", "xi1_min", "xi1 axis start");
  rmap.key_option("--xi1-max", "xi1_max", "xi1 axis end");
  rmap.key_option("--xi1-n", "xi1_n", "xi1 sample count");
  rmap.key_option("--xi2-min", "xi2_min", "xi2 axis start");
  rmap.key_option("--xi2-max", "xi2_max", "xi2 axis end");
  rmap.key_option("--xi2-n", "xi2_n", "xi2 sample count");
  rmap.key_option("--mu1-min", "mu1_min", "mu1 slice start");
  rmap.key_option("--mu1-max", "mu1_max", "mu1 slice end");
  rmap.key_option("--mu-n", "mu_n", "mu1 slice count (0 = mu axis only)");
  rmap.key_option("--mu2", "mu2", "fixed mu2 for every slice");

  CommandSetup sim(app.add_subcommand("simulate", "nonlinear (or linear-only) time evolution"),
                   {{"nx", "128"},      {"ny", "128"},
                    {"lx", "0"},        {"ly", "0"},
                    {"alpha", "0"},     {"beta", "1"},
                    {"dt", "0.0002"},   {"big_t", "1"},
                    {"stride", "100"},  {"seed", "1"},
                    {"integrator", "exponential_rk4"},
                    {"linear_only", "false"},
                    {"diag_s", "1"},    {"init", "zero"},
                    {"init_file", ""},  {"amplitude", "0.1"},
                    {"mode_k", "1"},    {"mode_l", "1"},
                    {"sigma", "0"}});
  sim.key_option("--nx", "nx", "x sample count (power of two)");
  sim.key_option("--ny", "ny", "y sample count (power of two)");
  sim.key_option("--lx", "lx", "box length in x (0 = default)");
  sim.key_option("--ly", "ly", "box length in y (0 = default)");
  sim.key_option("--alpha", "alpha", "third-order dispersion coefficient");
  sim.key_option("--beta", "beta", "fifth-order dispersion coefficient");
  sim.key_option("--dt", "dt", "time step");
  sim.key_option("--big-t", "big_t", "final time");
  sim.key_option("--stride", "stride", "steps between recorded outputs");
  sim.key_option("--seed", "seed", "seed for the seeded-random generator");
  sim.key_option("--integrator", "integrator", "exponential_rk4 or splitstep2");
  sim.key_flag("--linear-only", "linear_only", "disable the nonlinear term");
  sim.key_option("--diag-s", "diag_s", "s for the diagnostics energy norm");
  sim.key_option("--init", "init",
                 "zero | single-mode | gaussian-bump-x-derivative | seeded-random | file");
  sim.key_option("--init-file", "init_file", "snapshot to start from (init = file)");
  sim.key_option("--amplitude", "amplitude", "peak magnitude of the generated initial data");
  sim.key_option("--mode-k", "mode_k", "single-mode x wavenumber");
  sim.key_option("--mode-l", "mode_l", "single-mode y wavenumber");
  sim.key_option("--sigma", "sigma", "gaussian width (0 = lx/16)");

  CommandSetup probe(app.add_subcommand("probe", "random-ensemble inequality probe"),
                     {{"inequality", ""},
                      {"nx", "64"},
                      {"ny", "64"},
                      {"nt", "64"},
                      {"lx", "0"},
                      {"ly", "0"},
                      {"alpha", "0"},
                      {"beta", "1"},
                      {"big_t", "1"},
                      {"ensemble", "100"},
                      {"seed", "1"},
                      {"band_kx", "0"},
                      {"band_ky", "0"},
                      {"q", "4"},
                      {"r", "4"},
                      {"j", "3"},
                      {"s", "0.5"},
                      {"a", "0.25"},
                      {"b", "0.51"},
                      {"t_list", "0.4,0.2,0.1,0.05"},
                      {"padding", "2"},
                      {"multiplier", "unit-cube"},
                      {"assert_trend", "0"}});
  probe.key_positional("inequality", "inequality",
                       "strichartz | dyadic-strichartz | maximal | time-gain | bilinear");
  probe.key_option("--nx", "nx", "x sample count");
  probe.key_option("--ny", "ny", "y sample count");
  probe.key_option("--nt", "nt", "time sample count (power of two)");
  probe.key_option("--lx", "lx", "box length in x (0 = default)");
  probe.key_option("--ly", "ly", "box length in y (0 = default)");
  probe.key_option("--alpha", "alpha", "third-order dispersion coefficient");
  probe.key_option("--beta", "beta", "fifth-order dispersion coefficient");
  probe.key_option("--big-t", "big_t", "time window half-width");
  probe.key_option("--ensemble", "ensemble", "number of random samples");
  probe.key_option("--seed", "seed", "ensemble seed");
  probe.key_option("--band-kx", "band_kx", "x band limit in integer modes (0 = dealias band)");
  probe.key_option("--band-ky", "band_ky", "y band limit in integer modes (0 = dealias band)");
  probe.key_option("--q", "q", "time exponent (strichartz)");
  probe.key_option("--r", "r", "space exponent (strichartz)");
  probe.key_option("--j", "j", "modulation shell (dyadic-strichartz)");
  probe.key_option("--s", "s", "regularity (bilinear)");
  probe.key_option("--a", "a", "modulation discount (time-gain)");
  probe.key_option("--b", "b", "base modulation exponent (time-gain)");
  probe.key_option("--t-list", "t_list", "comma-separated window sizes (time-gain)");
  probe.key_option("--padding", "padding", "grid extension factor over T (time-gain)");
  probe.key_option("--multiplier", "multiplier", "unit-cube | ones | zero (maximal)");
  probe.key_option("--assert-trend", "assert_trend",
                   "also run at doubled resolution; fail (status 3) when the max-ratio trend "
                   "exceeds this bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(classify.cmd())) return cmd_classify(classify);
    if (app.got_subcommand(norm.cmd())) return cmd_norm(norm);
    if (app.got_subcommand(linear.cmd())) return cmd_linear(linear);
    if (app.got_subcommand(rmap.cmd())) return cmd_resonance_map(rmap);
    if (app.got_subcommand(sim.cmd())) return cmd_simulate(sim);
    if (app.got_subcommand(probe.cmd())) return cmd_probe(probe);
    std::cerr << "no command\n";
    return 1;
  } catch (const TrendAssertionFailure& t) {
    std::cerr << "trend assertion failed: " << format_full(t.trend) << " > "
              << format_full(t.limit) << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const BlowUpError& e) {
    std::cerr << "blow-up at t = " << format_full(e.time) << ": " << e.what() << "\n";
    return 2;
  } catch (const SingularFrequencyError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 4;
  } catch (const RejectedInputError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
