#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "zk/bourgain.hpp"
#include "zk/config.hpp"
#include "zk/dyadic.hpp"
#include "zk/dynamics.hpp"
#include "zk/growth.hpp"
#include "zk/lab.hpp"
#include "zk/symbols.hpp"

namespace fs = std::filesystem;

namespace zk::cli {
namespace {

struct Check {
  std::string name;
  double value;
  double limit;
  bool pass;
};

class Report {
 public:
  void add(std::string name, double value, double limit, bool pass) {
    checks_.push_back({std::move(name), value, limit, pass && std::isfinite(value)});
  }
  void le(const std::string& name, double value, double limit) { add(name, value, limit, value <= limit); }

  int finish(const std::string& suite, const Common& opts) const {
    fs::create_directories(opts.out);
    std::ofstream out(fs::path(opts.out) / ("verify_" + suite + ".csv"));
    out << "check,value,limit,pass\n" << std::setprecision(12);
    for (const auto& c : checks_) out << c.name << ',' << c.value << ',' << c.limit << ',' << c.pass << '\n';
    for (const auto& c : checks_) {
      if (!c.pass) {
        std::cerr << "FAIL " << c.name << ": " << c.value << " (limit " << c.limit << ")\n";
        return 1;
      }
    }
    std::cout << suite << ": " << checks_.size() << " checks passed\n";
    return 0;
  }

 private:
  std::vector<Check> checks_;
};

SimulationConfig config_of(const Common& opts) {
  return opts.config.empty() ? SimulationConfig{} : load_config(opts.config);
}

double rel_l2(const Spectrum& a, const Spectrum& b) {
  return std::sqrt((a - b).abs2().sum() / std::max(b.abs2().sum(), 1e-300));
}

int suite_linear(const Common& opts) {
  Report r;
  const SimulationConfig cfg = config_of(opts);
  const GridPtr g = make_grid(cfg.nx, cfg.ny, cfg.box_x, cfg.box_y);
  const RealField2D u0 = band_limit(random_smooth_field(g, opts.seed, 1.0));

  SolverOptions so;
  so.nonlinear = false;
  Solver solver(u0, so);
  for (int k = 0; k < 1000; ++k) solver.step_exact(1e-3);
  r.le("linear_flow_rel_l2", rel_l2(solver.spectrum(), linear_propagate(*g, u0.spectrum(), solver.t())),
       1e-12);
  r.le("partition_deviation", partition_deviation(*g), 1e-12);

  // The identity ratio is checked on a coarse grid to keep the suite fast.
  const GridPtr gc = make_grid(64, 64, 16 * M_PI, 16 * M_PI);
  const RealField2D f = random_smooth_field(gc, opts.seed + 1, 1.0);
  const TimeWindow w{-2.0, 3.0, 256};
  for (double s : {0.0, 1.0, 2.0})
    for (double b : {0.0, 5.0 / 12.0, 0.5, 0.6})
      for (double T : {1.0, 0.5, 0.25}) {
        const double q = linear_identity_ratio(f, s, b, T, w).value_or(NAN);
        std::ostringstream name;
        name << "identity_s" << s << "_b" << b << "_T" << T;
        r.le(name.str(), std::abs(q - 1.0), 0.02);
      }
  return r.finish("linear", opts);
}

int suite_bilinear(const Common& opts) {
  Report r;
  lab::BilinearParams p;
  nlohmann::json j;
  for (auto e : {lab::Bilinear::B1, lab::Bilinear::B3, lab::Bilinear::B2}) {
    const auto res = lab::bilinear_constant(e, p, 30, 16, opts.seed);
    j[lab::to_string(e)] = {{"max_ratio", res.max_ratio}, {"median_ratio", res.median_ratio}};
    r.add(lab::to_string(e) + "_max_ratio_finite", res.max_ratio, INFINITY,
          std::isfinite(res.max_ratio) && res.max_ratio > 0);
  }
  fs::create_directories(opts.out);
  std::ofstream(fs::path(opts.out) / "bilinear.json") << j.dump(2) << '\n';
  return r.finish("bilinear", opts);
}

int suite_measures(const Common& opts) {
  Report r;
  using lab::BlockMode;
  const DyadicBlockSpec a{1, 1, SignSet::None}, b{1, 1, SignSet::None};
  const DyadicBlockSpec lo{1, 1, SignSet::None}, hi{4, 1, SignSet::None};
  const DyadicBlockSpec s1a{2, 1, SignSet::S1}, s1b{2, 1, SignSet::S1};
  struct Case {
    BlockMode m;
    DyadicBlockSpec x, y;
  };
  for (const Case& c : {Case{BlockMode::Measure, a, b}, Case{BlockMode::Measure2, lo, hi},
                        Case{BlockMode::Measure3, s1a, s1b}}) {
    const auto res = lab::block_product_ratio(c.x, c.y, c.m, 10, 16, opts.seed);
    r.add(lab::to_string(c.m) + "_max_ratio", res.max_ratio, INFINITY,
          std::isfinite(res.max_ratio) && res.max_ratio > 0);
  }
  // Coarse and refined counts of a nonempty set must agree to within 2x.
  lab::MeasureQuery q;
  q.N1 = q.N2 = 2;
  q.xi = 2.5;
  q.mu = 0.5;
  q.tau = omega(q.xi, q.mu);
  const auto coarse = lab::count_measure_A(q);
  q.h = 2.0 / 32;
  const auto fine = lab::count_measure_A(q);
  const double ratio = fine.estimate_A > 0 && coarse.estimate_A > 0
                           ? std::max(fine.estimate_A / coarse.estimate_A, coarse.estimate_A / fine.estimate_A)
                           : NAN;
  r.le("measure_A_refinement_ratio", ratio, 2.0);
  return r.finish("measures", opts);
}

int suite_lemma13(const Common& opts) {
  Report r;
  nlohmann::json j = nlohmann::json::array();
  for (double K1 : {0.1, 1.0, 10.0})
    for (double eps : {0.3, 0.5, 0.9})
      for (double f : {1.1, 2.0, 5.0}) {
        const double d = f / eps;
        const GrowthEnvelope env = lemma13_constants(K1, eps, d);
        const auto fail = lemma13_first_failure(env, 100000, 0);
        std::ostringstream name;
        name << "lemma13_K" << K1 << "_e" << eps << "_d" << d;
        r.add(name.str(), fail ? double(*fail) : -1.0, 100000, !fail);
        r.add(name.str() + "_convexity", d, 1e6, verify_convexity(d, 1000000));
        j.push_back({{"K1", K1}, {"eps", eps}, {"d", d}, {"N", double(env.N)},
                     {"log_K2", double(env.log_K2)}, {"first_failure", fail ? *fail : -1}});
      }
  fs::create_directories(opts.out);
  std::ofstream(fs::path(opts.out) / "lemma13.json") << j.dump(2) << '\n';
  return r.finish("lemma13", opts);
}

int suite_increments(const Common& opts) {
  Report r;
  const GridPtr g = make_grid(128, 128, 32 * M_PI, 32 * M_PI);
  const RealField2D u0 = band_limit(random_smooth_field(g, opts.seed, 1.0));
  SolverOptions so;
  Solver solver(u0, so);
  solver.advance_to(0.05);
  const IncrementReport inc = increment_decomposition(solver.field(), 2, solver.t());
  r.le("I0_relative", std::abs(inc.I0) / std::max(inc.scale, 1e-300), 1e-10);
  r.le("total_vs_direct", std::abs(inc.total - inc.hs_derivative) / std::max(std::abs(inc.hs_derivative), 1e-300),
       1e-8);

  const double h = 1e-3;
  Solver fwd(solver.field(), so), bwd(solver.field(), so);
  fwd.step_exact(h);
  bwd.step_exact(-h);
  const double fd = (hs_norm_sq(*g, fwd.spectrum(), 2) - hs_norm_sq(*g, bwd.spectrum(), 2)) / (2 * h);
  r.le("total_vs_finite_difference", std::abs(inc.total - fd) / std::max(std::abs(fd), 1e-300), 1e-4);
  return r.finish("increments", opts);
}

}  // namespace

bool known_suite(const std::string& suite) {
  static const std::array<std::string, 5> names{"linear", "bilinear", "measures", "lemma13", "increments"};
  return std::find(names.begin(), names.end(), suite) != names.end();
}

int run_verify(const std::string& suite, const Common& opts) {
  if (suite == "linear") return suite_linear(opts);
  if (suite == "bilinear") return suite_bilinear(opts);
  if (suite == "measures") return suite_measures(opts);
  if (suite == "lemma13") return suite_lemma13(opts);
  if (suite == "increments") return suite_increments(opts);
  return 2;
}

}  // namespace zk::cli
