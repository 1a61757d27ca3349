#include <fftw3.h>

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"
#include "zk/config.hpp"
#include "zk/dyadic.hpp"
#include "zk/growth.hpp"
#include "zk/invariants.hpp"
#include "zk/snapshot.hpp"

namespace fs = std::filesystem;

namespace {

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

int cmd_simulate(const zk::cli::Common& opts) {
  zk::SimulationConfig cfg = opts.config.empty() ? zk::SimulationConfig{} : zk::load_config(opts.config);
  cfg.seed = opts.seed;
  fs::create_directories(opts.out);
  const zk::RealField2D u0 = zk::make_initial(cfg);
  zk::Solver solver(u0, cfg.solver_options());
  const int s_main = cfg.s_list.empty() ? 2 : cfg.s_list.front();

  std::ofstream manifest(fs::path(opts.out) / "manifest.csv");
  std::ofstream diag(fs::path(opts.out) / "diagnostics.csv");
  std::ofstream shells(fs::path(opts.out) / "shell_spectrum.csv");
  manifest << "step,t,dt,max_abs_u,snapshot_path\n";
  diag << "t,mass,energy,h1,hs,gn_ratio\n";
  shells << "t,N,energy\n";

  const long n_samples = long(std::floor(cfg.t_end / cfg.snapshot_every + 1e-9));
  for (long k = 0; k <= n_samples; ++k) {
    const double t = k * cfg.snapshot_every;
    if (k > 0) solver.advance_to(t);
    const zk::RealField2D u = solver.field();
    std::ostringstream name;
    name << "snap_" << std::setw(6) << std::setfill('0') << k << ".zk2d";
    zk::write_snapshot((fs::path(opts.out) / name.str()).string(), u);
    manifest << solver.step_count() << ',' << num(t) << ',' << num(solver.last_dt()) << ','
             << num(solver.max_abs()) << ',' << name.str() << '\n';
    const zk::ConservedRecord rec = zk::conserved_record(u, t, s_main);
    diag << num(t) << ',' << num(rec.mass) << ',' << num(rec.energy) << ',' << num(rec.h1) << ','
         << num(rec.hs) << ',' << (rec.gn_ratio ? num(*rec.gn_ratio) : "inapplicable") << '\n';
    for (const auto& e : zk::shell_spectrum(u))
      shells << num(t) << ',' << num(e.N) << ',' << num(e.energy) << '\n';
  }
  std::ofstream(fs::path(opts.out) / "config.json") << zk::serialize_config(cfg) << '\n';
  std::cout << "simulated to t = " << solver.t() << " in " << solver.step_count() << " steps\n";
  return 0;
}

struct ManifestRow {
  double t;
  std::string path;
};

std::vector<ManifestRow> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw zk::Error(zk::ErrorKind::Io, "cannot open manifest " + path);
  std::string line;
  std::getline(in, line);
  std::vector<ManifestRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5) throw zk::Error(zk::ErrorKind::Io, "malformed manifest line: " + line);
    rows.push_back({std::stod(cells[1]), cells[4]});
  }
  if (rows.empty()) throw zk::Error(zk::ErrorKind::Io, "empty manifest");
  return rows;
}

int cmd_fit_growth(const zk::cli::Common& opts, const std::string& manifest_path,
                   std::vector<double> beta_grid, int s, double K1, double d_factor) {
  const auto rows = read_manifest(manifest_path);
  const fs::path dir = fs::path(manifest_path).parent_path();
  if (beta_grid.empty()) beta_grid = zk::default_beta_grid();
  zk::LocalTheoryParams params;
  params.s = s;
  params.validate();

  std::vector<zk::GrowthSample> hist;
  double A = 0.0;
  std::optional<zk::RealField2D> u0;
  for (const auto& r : rows) {
    const zk::RealField2D u = zk::read_snapshot((dir / r.path).string());
    if (!u0) u0 = u;
    hist.push_back({r.t, zk::sobolev_norm(u, s)});
    A = std::max(A, zk::sobolev_norm(u, 1.0));
  }
  const zk::GrowthFit fit = zk::fit_growth(hist, beta_grid);
  const double T = A > 0 ? zk::existence_time(A, params) : 1.0;

  double c0 = 0.0;
  zk::SolverOptions so;
  so.dt = std::max(T / 8, 1e-300);
  if (A > 0) {
    const auto amp = zk::measure_amplification(*u0, params, so, T, 32);
    if (amp) c0 = amp->C_meas;
  }

  const double eps = params.eps();
  const double d = d_factor / eps;
  const zk::GrowthEnvelope env = zk::lemma13_constants(K1, eps, d);
  const long k_max = 100000;
  const bool ok = zk::lemma13_verify(env, k_max, 0);

  nlohmann::json j;
  j["s"] = s;
  j["A"] = A;
  j["T_window"] = T;
  j["C0_measured"] = c0;
  j["beta_best"] = fit.beta_best;
  j["envelope_C"] = fit.envelope_C;
  j["stabilized"] = fit.stabilized;
  j["beta_threshold"] = (s - 1) / 2.0;
  j["lemma13"] = {{"K1", env.K1},
                  {"eps", env.eps},
                  {"d", env.d},
                  {"N", double(env.N)},
                  {"K2", double(env.K2())},
                  {"log_K2", double(env.log_K2)},
                  {"verified_to_k", ok ? k_max : 0}};
  fs::create_directories(opts.out);
  std::ofstream(fs::path(opts.out) / "growth.json") << j.dump(2) << '\n';
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_spectrum(const zk::cli::Common& opts, const std::string& snapshot, double t, bool sharp) {
  const zk::RealField2D u = zk::read_snapshot(snapshot);
  fs::create_directories(opts.out);
  std::ofstream out(fs::path(opts.out) / "shell_spectrum.csv");
  out << "t,N,energy\n";
  for (const auto& e : zk::shell_spectrum(u, sharp))
    out << num(t) << ',' << num(e.N) << ',' << num(e.energy) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zakharov-Kuznetsov simulator and frequency-space analysis toolkit"};
  app.require_subcommand(1);
  zk::cli::Common opts;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config, "JSON configuration file");
    sub->add_option("--out", opts.out, "output directory");
    sub->add_option("--seed", opts.seed, "64-bit seed");
    sub->add_option("--threads", opts.threads, "FFT threads")->check(CLI::PositiveNumber);
  };

  auto* sim = app.add_subcommand("simulate", "run the solver and write trajectory outputs");
  add_common(sim);

  std::string suite;
  auto* ver = app.add_subcommand("verify", "run a verification suite");
  ver->add_option("suite", suite, "linear | bilinear | measures | lemma13 | increments")->required();
  add_common(ver);

  std::string manifest;
  std::vector<double> betas;
  int s = 2;
  double K1 = 1.0, d_factor = 2.0;
  auto* fit = app.add_subcommand("fit-growth", "fit a polynomial envelope to a simulated history");
  fit->add_option("--manifest", manifest, "manifest.csv from simulate")->required();
  fit->add_option("--beta-grid", betas, "beta values (default 0.1..3.0)")->delimiter(',');
  fit->add_option("--s", s, "Sobolev index of the history");
  fit->add_option("--K1", K1, "recurrence constant K1");
  fit->add_option("--d-factor", d_factor, "d = d_factor / eps");
  add_common(fit);

  std::string snapshot;
  double t_label = 0.0;
  bool sharp = false;
  auto* spec = app.add_subcommand("spectrum", "dyadic shell spectrum of a snapshot");
  spec->add_option("snapshot", snapshot, "snapshot file")->required();
  spec->add_option("--t", t_label, "time label for the CSV");
  spec->add_flag("--sharp", sharp, "use the normalized partition");
  add_common(spec);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  if (opts.threads > 1) {
    fftw_init_threads();
    fftw_plan_with_nthreads(opts.threads);
  }
  try {
    if (*sim) return cmd_simulate(opts);
    if (*ver) {
      if (!zk::cli::known_suite(suite)) {
        std::cerr << "unknown suite '" << suite << "'\n" << ver->help();
        return 2;
      }
      return zk::cli::run_verify(suite, opts);
    }
    if (*fit) return cmd_fit_growth(opts, manifest, betas, s, K1, d_factor);
    if (*spec) return cmd_spectrum(opts, snapshot, t_label, sharp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
