#include "zk/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "zk/bourgain.hpp"
#include "zk/snapshot.hpp"

namespace zk {

using nlohmann::json;

void SimulationConfig::validate() const {
  auto bad = [](const std::string& m) { throw Error(ErrorKind::InvalidArgument, m); };
  if (nx < 8 || ny < 8 || nx % 2 || ny % 2) bad("nx, ny must be even and >= 8");
  if (!(box_x > 0 && box_y > 0)) bad("box lengths must be positive");
  if (!(dt > 0)) bad("dt must be positive");
  if (!(cfl > 0 && cfl <= 1)) bad("cfl must lie in (0, 1]");
  if (!(t_end >= 0)) bad("t_end must be non-negative");
  if (!(snapshot_every > 0)) bad("snapshot_every must be positive");
  if (!(width_x > 0 && width_y > 0)) bad("widths must be positive");
  if (!(spectral_width > 0)) bad("spectral_width must be positive");
  for (int s : s_list)
    if (s < 1) bad("s_list entries must be integers >= 1");
  if (initial != "gaussian" && initial != "mode_sum" && initial != "file" && initial != "random")
    bad("unknown initial type '" + initial + "'");
  if (initial == "file" && file.empty()) bad("initial type file needs 'file'");
}

SolverOptions SimulationConfig::solver_options() const {
  SolverOptions o;
  o.dt = dt;
  o.cfl = cfl;
  o.nonlinear = nonlinear;
  return o;
}

SimulationConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "config must be a JSON object");
  SimulationConfig c;
  try {
    c.nx = j.value("nx", c.nx);
    c.ny = j.value("ny", c.ny);
    c.box_x = j.value("box_x", c.box_x);
    c.box_y = j.value("box_y", c.box_y);
    c.initial = j.value("initial", c.initial);
    c.amplitude = j.value("amplitude", c.amplitude);
    c.width_x = j.value("width_x", c.width_x);
    c.width_y = j.value("width_y", c.width_y);
    c.center_x = j.value("center_x", c.center_x);
    c.center_y = j.value("center_y", c.center_y);
    c.file = j.value("file", c.file);
    c.spectral_width = j.value("spectral_width", c.spectral_width);
    c.dt = j.value("dt", c.dt);
    c.cfl = j.value("cfl", c.cfl);
    c.nonlinear = j.value("nonlinear", c.nonlinear);
    c.t_end = j.value("t_end", c.t_end);
    c.snapshot_every = j.value("snapshot_every", c.snapshot_every);
    c.s_list = j.value("s_list", c.s_list);
    c.seed = j.value("seed", c.seed);
    if (j.contains("modes"))
      for (const auto& m : j.at("modes"))
        c.modes.push_back({m.value("kx", 1), m.value("ky", 0), m.value("amplitude", 1.0),
                           m.value("phase", 0.0)});
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

SimulationConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const SimulationConfig& c) {
  json j;
  j["nx"] = c.nx;
  j["ny"] = c.ny;
  j["box_x"] = c.box_x;
  j["box_y"] = c.box_y;
  j["initial"] = c.initial;
  j["amplitude"] = c.amplitude;
  j["width_x"] = c.width_x;
  j["width_y"] = c.width_y;
  j["center_x"] = c.center_x;
  j["center_y"] = c.center_y;
  j["file"] = c.file;
  j["spectral_width"] = c.spectral_width;
  j["dt"] = c.dt;
  j["cfl"] = c.cfl;
  j["nonlinear"] = c.nonlinear;
  j["t_end"] = c.t_end;
  j["snapshot_every"] = c.snapshot_every;
  j["s_list"] = c.s_list;
  j["seed"] = c.seed;
  j["modes"] = json::array();
  for (const auto& m : c.modes)
    j["modes"].push_back({{"kx", m.kx}, {"ky", m.ky}, {"amplitude", m.amplitude}, {"phase", m.phase}});
  return j.dump(2);
}

bool operator==(const ModeSpec& a, const ModeSpec& b) {
  return a.kx == b.kx && a.ky == b.ky && a.amplitude == b.amplitude && a.phase == b.phase;
}

bool operator==(const SimulationConfig& a, const SimulationConfig& b) {
  return serialize_config(a) == serialize_config(b);
}

RealField2D gaussian(const GridPtr& g, double amplitude, double wx, double wy, double cx, double cy) {
  RealArray v(g->nx(), g->ny());
  for (int i = 0; i < g->nx(); ++i)
    for (int j = 0; j < g->ny(); ++j) {
      const double dx = (g->x(i) - cx) / wx, dy = (g->y(j) - cy) / wy;
      v(i, j) = amplitude * std::exp(-(dx * dx + dy * dy));
    }
  return RealField2D(g, std::move(v));
}

RealField2D make_initial(const SimulationConfig& c) {
  c.validate();
  if (c.initial == "file") return read_snapshot(c.file);
  auto g = make_grid(c.nx, c.ny, c.box_x, c.box_y);
  if (c.initial == "random") {
    RealField2D f = random_smooth_field(g, c.seed, c.spectral_width);
    return RealField2D(g, RealArray(f.values() * c.amplitude));
  }
  RealField2D f(g);
  if (c.initial == "gaussian") {
    const double cx = c.center_x < 0 ? 0.5 * c.box_x : c.center_x;
    const double cy = c.center_y < 0 ? 0.5 * c.box_y : c.center_y;
    f = gaussian(g, c.amplitude, c.width_x, c.width_y, cx, cy);
  } else {
    RealArray v = RealArray::Zero(c.nx, c.ny);
    for (const auto& m : c.modes)
      for (int i = 0; i < c.nx; ++i)
        for (int j = 0; j < c.ny; ++j)
          v(i, j) += m.amplitude * std::cos(2 * M_PI * (m.kx * g->x(i) / c.box_x +
                                                        m.ky * g->y(j) / c.box_y) + m.phase);
    f = RealField2D(g, std::move(v));
  }
  return band_limit(f);
}

}  // namespace zk
