#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zk/dynamics.hpp"
#include "zk/grid.hpp"

namespace zk {

struct ModeSpec {
  int kx = 1;  ///< integer wavenumber along x
  int ky = 0;
  double amplitude = 1.0;
  double phase = 0.0;
};

/// Flat JSON experiment description.
struct SimulationConfig {
  int nx = 256;
  int ny = 256;
  double box_x = 32 * M_PI;
  double box_y = 32 * M_PI;

  std::string initial = "gaussian";  ///< gaussian | mode_sum | file | random
  double amplitude = 1.0;
  double width_x = 2.0;
  double width_y = 2.0;
  double center_x = -1.0;  ///< negative selects the box centre
  double center_y = -1.0;
  std::vector<ModeSpec> modes;
  std::string file;
  double spectral_width = 1.0;  ///< random data envelope

  double dt = 1e-3;
  double cfl = 0.5;
  bool nonlinear = true;
  double t_end = 1.0;
  double snapshot_every = 0.1;
  std::vector<int> s_list{2};
  std::uint64_t seed = 1;

  void validate() const;
  SolverOptions solver_options() const;
};

SimulationConfig parse_config(const std::string& json_text);
SimulationConfig load_config(const std::string& path);
std::string serialize_config(const SimulationConfig& c);

bool operator==(const ModeSpec& a, const ModeSpec& b);
bool operator==(const SimulationConfig& a, const SimulationConfig& b);

/// Initial data on the configured grid (band-limited for gaussian, mode_sum
/// and random data; file data is taken as is).
RealField2D make_initial(const SimulationConfig& c);

/// exp(-((x-cx)^2/wx^2 + (y-cy)^2/wy^2)) scaled by the amplitude.
RealField2D gaussian(const GridPtr& g, double amplitude, double wx, double wy, double cx, double cy);

}  // namespace zk
