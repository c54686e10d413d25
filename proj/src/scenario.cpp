#include "schrodlab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "schrodlab/scalars.hpp"

namespace schrodlab {

namespace {

bool on_lattice(double t, double step, double tol = 1e-9) {
  if (step <= 0) return false;
  const double raw = t / step;
  return std::abs(raw - std::round(raw)) <= tol * std::max(1.0, std::abs(raw));
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::array<double, 2> pair_from_list(const std::vector<double>& v, int dim,
                                     const std::string& what,
                                     std::vector<std::string>& issues) {
  std::array<double, 2> out{0, 0};
  if (v.empty()) return out;
  if (static_cast<int>(v.size()) > dim) {
    issues.push_back(what + " has " + std::to_string(v.size()) +
                     " components but the grid is " + std::to_string(dim) +
                     "-dimensional");
    return out;
  }
  out[0] = v[0];
  if (v.size() > 1) out[1] = v[1];
  return out;
}

cplx complex_from_list(const std::vector<double>& v, const std::string& what,
                       std::vector<std::string>& issues) {
  if (v.empty()) return {0, 0};
  if (v.size() > 2) {
    issues.push_back(what + " must be 're' or 're, im'");
    return {0, 0};
  }
  return {v[0], v.size() > 1 ? v[1] : 0.0};
}

PotentialBlock read_potential_block(ConfigReader& r, const ConfigFile& cfg,
                                    const std::string& section,
                                    std::vector<std::string>& issues) {
  PotentialBlock b;
  b.kind = r.text(section, "kind", "zero");
  if (b.kind == "zero") {
    // nothing else
  } else if (b.kind == "constant") {
    b.value = complex_from_list(r.number_list(section, "value", true),
                                "[" + section + "] value", issues);
  } else if (b.kind == "gaussian_well") {
    b.value = complex_from_list(r.number_list(section, "amplitude", true),
                                "[" + section + "] amplitude", issues);
    b.width = r.number(section, "width", 1.0);
    b.modulation = r.number(section, "modulation", 0.0);
    if (b.width <= 0)
      issues.push_back("[" + section + "] width must be positive");
  } else {
    const ConfigEntry* e = cfg.find(section, "kind");
    issues.push_back(
        (e ? cfg.path + ":" + std::to_string(e->line) + ": " : "") + "[" +
        section + "] kind '" + b.kind +
        "' is not one of zero | constant | gaussian_well");
  }
  return b;
}

Potential potential_from_block(const PotentialBlock& b) {
  if (b.kind == "constant") return constant_potential(b.value);
  if (b.kind == "gaussian_well")
    return gaussian_well(b.value, b.width, b.modulation);
  return zero_potential();
}

double block_sup_im(const PotentialBlock& b) {
  if (b.kind == "constant" || b.kind == "gaussian_well")
    return std::abs(b.value.imag());
  return 0;
}

std::string path_stem(const std::string& path) {
  auto slash = path.find_last_of("/\\");
  std::string base =
      (slash == std::string::npos) ? path : path.substr(slash + 1);
  auto dot = base.find_last_of('.');
  if (dot != std::string::npos && dot > 0) base = base.substr(0, dot);
  return base.empty() ? "scenario" : base;
}

}  // namespace

Grid Scenario::make_grid_object() const {
  return make_grid(grid.dim, grid.half_width, grid.points);
}

WaveField Scenario::make_initial(const Grid& g) const {
  WaveField f = make_field(g);
  for (const auto& c : initial.components) {
    WaveField part =
        gaussian_packet(g, c.amplitude, c.center, c.width, c.momentum);
    for (std::size_t j = 0; j < f.values.size(); ++j)
      f.values[j] += part.values[j];
  }
  return f;
}

Potential Scenario::make_potential() const {
  return potential_from_block(potential);
}

Forcing Scenario::make_forcing() const {
  return forcing ? potential_from_block(*forcing) : zero_potential();
}

Scenario build_scenario(const ConfigFile& cfg) {
  std::vector<std::string> issues;
  ConfigReader r(cfg, issues);
  Scenario sc;
  sc.name = r.text("scenario", "name", path_stem(cfg.path));
  sc.config_hash = fnv1a64(cfg.raw);

  // --- grid ---
  if (!cfg.has_section("grid")) {
    issues.push_back("missing required section [grid]");
  } else {
    sc.grid.dim = r.integer("grid", "dim", 1);
    sc.grid.half_width = r.number("grid", "half_width");
    sc.grid.points = r.integer("grid", "points");
    if (sc.grid.dim != 1 && sc.grid.dim != 2)
      issues.push_back("[grid] dim must be 1 or 2");
    if (sc.grid.half_width <= 0)
      issues.push_back("[grid] half_width must be positive");
    if (sc.grid.points < 8 || sc.grid.points % 2 != 0)
      issues.push_back("[grid] points must be even and at least 8");
  }
  const double h = (sc.grid.points > 0)
                       ? 2.0 * sc.grid.half_width / sc.grid.points
                       : 0.0;

  // --- initial ---
  if (!cfg.has_section("initial")) {
    issues.push_back("missing required section [initial]");
  } else {
    sc.initial.kind = r.text("initial", "kind", "gaussian");
    auto read_component = [&](const std::string& suffix) {
      InitialBlock::Component c;
      c.amplitude = r.number("initial", "amplitude" + suffix, 1.0);
      c.width = r.number("initial", "width" + suffix, 1.0);
      c.center = pair_from_list(r.number_list("initial", "center" + suffix),
                                sc.grid.dim, "[initial] center" + suffix,
                                issues);
      c.momentum = pair_from_list(
          r.number_list("initial", "momentum" + suffix), sc.grid.dim,
          "[initial] momentum" + suffix, issues);
      if (c.width <= 0)
        issues.push_back("[initial] width" + suffix + " must be positive");
      return c;
    };
    if (sc.initial.kind == "gaussian") {
      sc.initial.components.push_back(read_component(""));
    } else if (sc.initial.kind == "sum") {
      const int count = r.integer("initial", "components", 0);
      if (count < 1 || count > 16)
        issues.push_back("[initial] components must be between 1 and 16");
      for (int i = 1; i <= std::min(count, 16); ++i)
        sc.initial.components.push_back(
            read_component(std::to_string(i)));
    } else if (sc.initial.kind == "zero") {
      // no components
    } else {
      issues.push_back("[initial] kind '" + sc.initial.kind +
                       "' is not one of gaussian | sum | zero");
    }
  }

  // --- potential / forcing ---
  if (cfg.has_section("potential"))
    sc.potential = read_potential_block(r, cfg, "potential", issues);
  if (cfg.has_section("forcing"))
    sc.forcing = read_potential_block(r, cfg, "forcing", issues);

  // --- time ---
  double store_dt = 0;
  if (!cfg.has_section("time")) {
    issues.push_back("missing required section [time]");
  } else {
    sc.time.dt = r.number("time", "dt");
    sc.time.t_end = r.number("time", "t_end");
    sc.time.stride = r.integer("time", "stride", 1);
    if (sc.time.dt <= 0) issues.push_back("[time] dt must be positive");
    if (sc.time.t_end <= 0) issues.push_back("[time] t_end must be positive");
    if (sc.time.stride < 1) issues.push_back("[time] stride must be >= 1");
    if (sc.time.dt > 0 && sc.time.t_end > 0) {
      if (!on_lattice(sc.time.t_end, sc.time.dt)) {
        issues.push_back("[time] t_end = " + fmt(sc.time.t_end) +
                         " is not an integer multiple of dt = " +
                         fmt(sc.time.dt));
      } else if (sc.time.stride >= 1) {
        const long steps = std::lround(sc.time.t_end / sc.time.dt);
        if (steps % sc.time.stride != 0)
          issues.push_back("[time] stride = " + std::to_string(sc.time.stride) +
                           " does not divide the " + std::to_string(steps) +
                           " steps, so the final state would not be stored");
        store_dt = sc.time.dt * sc.time.stride;
      }
    }
    const double guard = sc.time.dt * block_sup_im(sc.potential);
    if (guard > 0.1)
      issues.push_back(
          "[time] dt * sup|Im V| = " + fmt(guard) +
          " exceeds the stability guard 0.1; shrink dt or the imaginary "
          "amplitude");
  }

  auto check_window = [&](double rho, double t, double band_factor,
                          bool periodic, const std::string& label) {
    if (rho <= 0) {
      issues.push_back(label + ": rho must be positive (got " + fmt(rho) +
                       ")");
      return;
    }
    if (t <= 0) {
      issues.push_back(label + ": t must be positive (got " + fmt(t) + ")");
      return;
    }
    if (store_dt > 0) {
      if (!on_lattice(t, 4.0 * store_dt))
        issues.push_back(label + ": t = " + fmt(t) +
                         " must be a multiple of 4*stride*dt = " +
                         fmt(4.0 * store_dt) +
                         " so the window [t/4, 3t] lands on stored slices");
      if (3.0 * t > sc.time.t_end * (1.0 + 1e-12))
        issues.push_back(label + ": window end 3t = " + fmt(3.0 * t) +
                         " exceeds t_end = " + fmt(sc.time.t_end));
    }
    const double hw_band = band_factor * rho * std::sqrt(t);
    const double hw_eff = periodic ? std::min(hw_band, kPi) : hw_band;
    if (h > 0 && 2.0 * hw_eff < 8.0 * h)
      issues.push_back(label + ": observation band width " +
                       fmt(2.0 * hw_eff) + " spans fewer than 8 grid cells "
                       "(spacing " + fmt(h) + ")");
    if (!periodic && sc.grid.half_width > 0 &&
        4.0 * rho + hw_band > sc.grid.half_width)
      issues.push_back(label + ": outermost band edge 4*rho + width = " +
                       fmt(4.0 * rho + hw_band) + " leaves the box (" +
                       fmt(sc.grid.half_width) + "); enlarge half_width");
  };

  // --- observe ---
  if (cfg.has_section("observe")) {
    ObserveBlock ob;
    ob.R0 = r.number("observe", "R0");
    ob.M = r.number("observe", "M", 0.0);
    ob.band_factor = r.number("observe", "band_factor", 4.0);
    ob.periodic = r.flag("observe", "periodic", false);
    const double M_eff = (ob.M == 0) ? sc.grid.half_width : ob.M;
    if (ob.R0 <= 0) issues.push_back("[observe] R0 must be positive");
    if (ob.R0 > 0 && M_eff < 4.0 * ob.R0 + 1.0)
      issues.push_back("[observe] observability requires M >= 4*R0 + 1 "
                       "(M = " + fmt(M_eff) + ", R0 = " + fmt(ob.R0) + ")");
    if (M_eff > sc.grid.half_width)
      issues.push_back("[observe] M = " + fmt(M_eff) +
                       " exceeds half_width = " + fmt(sc.grid.half_width));
    if (ob.band_factor <= 0)
      issues.push_back("[observe] band_factor must be positive");
    if (ob.periodic) {
      if (sc.grid.dim != 1)
        issues.push_back("[observe] periodic bands are only supported in "
                         "one dimension");
      if (std::abs(sc.grid.half_width - kPi) > 1e-12)
        issues.push_back("[observe] periodic observation assumes the 2*pi "
                         "torus (half_width = pi)");
    }

    ob.fit_t = r.number("observe", "fit_t", 0.0);
    ob.fit_rhos = r.number_list("observe", "fit_rhos");
    ob.do_fit = ob.fit_t > 0 && !ob.fit_rhos.empty();
    if ((ob.fit_t > 0) != !ob.fit_rhos.empty())
      issues.push_back("[observe] fit_t and fit_rhos must be given together");
    if (ob.do_fit) {
      if (ob.fit_rhos.size() < 5)
        issues.push_back("[observe] the decay fit needs at least 5 rho "
                         "samples");
      for (double rho : ob.fit_rhos)
        check_window(rho, ob.fit_t, ob.band_factor, ob.periodic,
                     "[observe] fit rho = " + fmt(rho));
    }

    ob.heldout_rhos = r.number_list("observe", "heldout_rhos");
    ob.heldout_ts = r.number_list("observe", "heldout_ts");
    ob.do_lower_bound = !ob.heldout_rhos.empty() && !ob.heldout_ts.empty();
    if (ob.heldout_rhos.empty() != ob.heldout_ts.empty())
      issues.push_back("[observe] heldout_rhos and heldout_ts must be given "
                       "together");
    if (ob.do_lower_bound) {
      if (!ob.do_fit)
        issues.push_back("[observe] held-out certificate checks need the "
                         "decay fit (fit_t, fit_rhos)");
      for (double t : ob.heldout_ts)
        for (double rho : ob.heldout_rhos)
          check_window(rho, t, ob.band_factor, ob.periodic,
                       "[observe] held-out rho = " + fmt(rho) +
                           ", t = " + fmt(t));
      for (double rho : ob.heldout_rhos)
        if (ob.R0 > 0 && (rho < ob.R0 || rho > M_eff))
          issues.push_back("[observe] held-out rho = " + fmt(rho) +
                           " is outside [R0, M] = [" + fmt(ob.R0) + ", " +
                           fmt(M_eff) + "]");
    }

    ob.probe_rho = r.number("observe", "probe_rho", 0.0);
    ob.probe_fit_ts = r.number_list("observe", "probe_fit_ts");
    ob.probe_ts = r.number_list("observe", "probe_ts");
    ob.do_probe_tzero = ob.probe_rho > 0 && !ob.probe_ts.empty();
    if (ob.do_probe_tzero) {
      if (ob.probe_fit_ts.size() < 5)
        issues.push_back("[observe] the time probe needs probe_fit_ts with "
                         "at least 5 entries to calibrate the rate");
      if (ob.probe_ts.size() < 4)
        issues.push_back("[observe] probe_ts needs at least 4 entries");
      for (double t : ob.probe_fit_ts)
        check_window(ob.probe_rho, t, ob.band_factor, ob.periodic,
                     "[observe] probe fit t = " + fmt(t));
      for (double t : ob.probe_ts)
        check_window(ob.probe_rho, t, ob.band_factor, ob.periodic,
                     "[observe] probe t = " + fmt(t));
      for (std::size_t i = 1; i < ob.probe_ts.size(); ++i)
        if (ob.probe_ts[i] >= ob.probe_ts[i - 1]) {
          issues.push_back("[observe] probe_ts must be strictly decreasing");
          break;
        }
    }

    ob.probe_rhos = r.number_list("observe", "probe_rhos");
    ob.probe_t = r.number("observe", "probe_t", 0.0);
    ob.do_probe_rhoinf = ob.probe_t > 0 && !ob.probe_rhos.empty();
    if (ob.do_probe_rhoinf) {
      if (ob.probe_rhos.size() < 4)
        issues.push_back("[observe] probe_rhos needs at least 4 entries");
      for (double rho : ob.probe_rhos)
        check_window(rho, ob.probe_t, ob.band_factor, ob.periodic,
                     "[observe] probe rho = " + fmt(rho));
      for (std::size_t i = 1; i < ob.probe_rhos.size(); ++i)
        if (ob.probe_rhos[i] <= ob.probe_rhos[i - 1]) {
          issues.push_back("[observe] probe_rhos must be strictly increasing");
          break;
        }
    }
    if (ob.do_probe_rhoinf && (ob.probe_fit_ts.size() < 5 || ob.probe_rho <= 0))
      issues.push_back("[observe] the radius probe also needs probe_rho and "
                       "probe_fit_ts (>= 5 entries) to calibrate the rate");

    ob.single_rho = r.number("observe", "single_rho", 0.0);
    ob.single_t = r.number("observe", "single_t", 0.0);
    ob.do_single = ob.single_rho > 0 && ob.single_t > 0;
    if ((ob.single_rho > 0) != (ob.single_t > 0))
      issues.push_back("[observe] single_rho and single_t must be given "
                       "together");
    if (ob.do_single)
      check_window(ob.single_rho, ob.single_t, ob.band_factor, ob.periodic,
                   "[observe] single query");
    sc.observe = ob;
  }

  // --- appell ---
  if (cfg.has_section("appell")) {
    AppellBlock ab;
    ab.gamma = r.number("appell", "gamma");
    ab.bounds_check = r.flag("appell", "bounds_check", false);
    ab.bound_samples = r.integer("appell", "bound_samples", 1000);
    ab.closure = r.flag("appell", "closure", false);
    ab.out_t0 = r.number("appell", "out_t0", 0.0);
    ab.out_dt = r.number("appell", "out_dt", 0.0);
    ab.out_slices = r.integer("appell", "out_slices", 0);
    if (ab.gamma <= 0) issues.push_back("[appell] gamma must be positive");
    if (ab.bounds_check) {
      if (ab.gamma <= 16)
        issues.push_back("[appell] the scalar-bound suite requires "
                         "gamma > 16");
      if (ab.bound_samples < 100)
        issues.push_back("[appell] bound_samples must be at least 100");
    }
    if (ab.closure) {
      if (ab.out_dt <= 0 || ab.out_slices < 4)
        issues.push_back("[appell] closure needs out_dt > 0 and "
                         "out_slices >= 4");
      const double out_end = ab.out_t0 + ab.out_dt * (ab.out_slices - 1);
      if (ab.out_t0 < 0 || out_end > 1.0 + 1e-12)
        issues.push_back("[appell] output window [" + fmt(ab.out_t0) + ", " +
                         fmt(out_end) + "] must sit inside [0, 1]");
    }
    sc.appell = ab;
  }

  // --- carleman ---
  if (cfg.has_section("carleman")) {
    CarlemanBlock cb;
    cb.R = r.number("carleman", "R", 2.0);
    cb.order = r.integer("carleman", "order", 4);
    cb.t_slices = r.integer("carleman", "t_slices", 256);
    cb.suite_size = r.integer("carleman", "suite_size", 10);
    auto mults = r.number_list("carleman", "sigma_multipliers");
    if (!mults.empty()) cb.sigma_multipliers = mults;
    cb.calibrate = r.flag("carleman", "calibrate", true);
    cb.commutator = r.flag("carleman", "commutator", false);
    if (cb.R < 2) issues.push_back("[carleman] R must be at least 2");
    if (cb.order < 4) issues.push_back("[carleman] order must be at least 4");
    if (cb.t_slices < 64)
      issues.push_back("[carleman] t_slices must be at least 64");
    if (cb.suite_size < 1)
      issues.push_back("[carleman] suite_size must be at least 1");
    for (double m : cb.sigma_multipliers)
      if (m <= 0) {
        issues.push_back("[carleman] sigma_multipliers must be positive");
        break;
      }
    const double reach = 4.7 * cb.R + 4.0 * h;
    if (sc.grid.half_width > 0 && sc.grid.half_width < reach)
      issues.push_back("[carleman] the box must hold the off-center test "
                       "fields: need half_width >= " + fmt(reach));
    sc.carleman = cb;
  }

  // --- diagnostics ---
  if (cfg.has_section("diagnostics")) {
    DiagnosticsBlock db;
    db.mass_check = r.flag("diagnostics", "mass_check", false);
    db.mass_times = r.number_list("diagnostics", "mass_times");
    db.chain = r.flag("diagnostics", "chain", false);
    db.gamma = r.number("diagnostics", "gamma", 0.0);
    db.R0 = r.number("diagnostics", "R0", 0.0);
    db.cn = r.number("diagnostics", "cn", 1.0 / 64.0);
    db.sigma_mult = r.number("diagnostics", "sigma_mult", 64.0);
    db.smoothness_order = r.integer("diagnostics", "smoothness_order", 4);
    if (db.mass_check) {
      if (db.mass_times.empty())
        issues.push_back("[diagnostics] mass_check needs mass_times");
      for (double t : db.mass_times) {
        if (store_dt > 0 && !on_lattice(t, store_dt))
          issues.push_back("[diagnostics] mass time " + fmt(t) +
                           " is not on the stored lattice (spacing " +
                           fmt(store_dt) + ")");
        if (t > sc.time.t_end * (1.0 + 1e-12) || t < 0)
          issues.push_back("[diagnostics] mass time " + fmt(t) +
                           " is outside [0, t_end]");
      }
    }
    if (db.chain) {
      if (db.gamma <= 16)
        issues.push_back("[diagnostics] the chain accounting requires "
                         "gamma > 16");
      if (db.R0 <= 0)
        issues.push_back("[diagnostics] chain needs R0 > 0");
      if (db.cn <= 0 || db.sigma_mult <= 0)
        issues.push_back("[diagnostics] cn and sigma_mult must be positive");
      if (db.smoothness_order < 4)
        issues.push_back("[diagnostics] smoothness_order must be at "
                         "least 4");
      if (db.gamma > 16 && db.R0 > 0) {
        const double band_hw = 4.0 * db.R0 / std::sqrt(db.gamma);
        if (h > 0 && 2.0 * band_hw < 8.0 * h)
          issues.push_back("[diagnostics] transfer band of width "
                           "8*R0/sqrt(gamma) = " + fmt(2.0 * band_hw) +
                           " spans fewer than 8 grid cells (spacing " +
                           fmt(h) + ")");
        const double s_hi = s_interval_outer(db.gamma).hi;
        if (sc.time.t_end > 0 && sc.time.t_end < s_hi * (1.0 - 1e-12))
          issues.push_back("[diagnostics] chain needs t_end >= " + fmt(s_hi) +
                           " to cover the outer window (t_end = " +
                           fmt(sc.time.t_end) + ")");
        if (sc.grid.half_width > 0 &&
            4.0 * db.R0 + 1.0 > sc.grid.half_width)
          issues.push_back("[diagnostics] chain needs half_width >= "
                           "4*R0 + 1 = " + fmt(4.0 * db.R0 + 1.0));
      }
    }
    sc.diagnostics = db;
  }

  if (!issues.empty()) throw ValidationError(std::move(issues));
  return sc;
}

}  // namespace schrodlab
