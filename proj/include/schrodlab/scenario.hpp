#pragma once
#include <optional>
#include <string>
#include <vector>

#include "schrodlab/config.hpp"
#include "schrodlab/field.hpp"
#include "schrodlab/potential.hpp"

namespace schrodlab {

// Parsed scenario: the simulation core ([grid], [initial], [potential],
// [forcing], [time]) plus optional analysis blocks ([observe], [appell],
// [carleman], [diagnostics]). All cross-field constraints are validated up
// front and reported together.
struct GridBlock {
  int dim = 1;
  double half_width = 0;
  int points = 0;
};

struct InitialBlock {
  std::string kind = "gaussian";  // gaussian | sum | zero
  struct Component {
    double amplitude = 1;
    std::array<double, 2> center{0, 0};
    double width = 1;
    std::array<double, 2> momentum{0, 0};
  };
  std::vector<Component> components;
};

struct PotentialBlock {
  std::string kind = "zero";  // zero | constant | gaussian_well
  cplx value{0, 0};
  double width = 1;
  double modulation = 0;
};

struct TimeBlock {
  double dt = 0;
  double t_end = 0;
  int stride = 1;
};

struct ObserveBlock {
  double R0 = 0;
  double M = 0;  // 0 means "whole box"
  double band_factor = 4;
  bool periodic = false;
  double fit_t = 0;
  std::vector<double> fit_rhos;
  std::vector<double> heldout_rhos;
  std::vector<double> heldout_ts;
  double probe_rho = 0;
  std::vector<double> probe_fit_ts;
  std::vector<double> probe_ts;
  std::vector<double> probe_rhos;
  double probe_t = 0;
  double single_rho = 0, single_t = 0;  // one-off J query (sweepable)
  bool do_fit = false, do_lower_bound = false;
  bool do_probe_tzero = false, do_probe_rhoinf = false;
  bool do_single = false;
};

struct AppellBlock {
  double gamma = 0;
  bool bounds_check = false;
  int bound_samples = 1000;
  bool closure = false;
  double out_t0 = 0, out_dt = 0;
  int out_slices = 0;
};

struct CarlemanBlock {
  double R = 2;
  int order = 4;
  int t_slices = 256;
  int suite_size = 10;
  std::vector<double> sigma_multipliers{1, 2, 4};
  bool calibrate = true;
  bool commutator = false;
};

struct DiagnosticsBlock {
  bool mass_check = false;
  std::vector<double> mass_times;
  bool chain = false;
  double gamma = 0;
  double R0 = 0;
  double cn = 1.0 / 64.0;
  double sigma_mult = 64.0;
  int smoothness_order = 4;
};

struct Scenario {
  std::string name;
  std::uint64_t config_hash = 0;
  GridBlock grid;
  InitialBlock initial;
  PotentialBlock potential;
  std::optional<PotentialBlock> forcing;
  TimeBlock time;
  std::optional<ObserveBlock> observe;
  std::optional<AppellBlock> appell;
  std::optional<CarlemanBlock> carleman;
  std::optional<DiagnosticsBlock> diagnostics;

  Grid make_grid_object() const;
  WaveField make_initial(const Grid& g) const;
  Potential make_potential() const;
  Forcing make_forcing() const;
};

// Throws ValidationError listing every violation (with line references where
// available): grid shape, dt | t_end, stride, guard dt*sup|Im V| <= 0.1,
// observation window alignment to the stored lattice, band width >= 8 cells,
// bands inside the box, M >= 4 R0 + 1, gamma > 16 for scalar-bound suites, etc.
Scenario build_scenario(const ConfigFile& cfg);

}  // namespace schrodlab
