#include "schrodlab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <thread>

#include "schrodlab/appell.hpp"
#include "schrodlab/carleman.hpp"
#include "schrodlab/csvio.hpp"
#include "schrodlab/diagnostics.hpp"
#include "schrodlab/observability.hpp"
#include "schrodlab/propagator.hpp"
#include "schrodlab/scalars.hpp"
#include "schrodlab/spectral.hpp"

namespace schrodlab {

namespace {

std::string verdict_name(ProbeVerdict v) {
  switch (v) {
    case ProbeVerdict::ToZero: return "to_zero";
    case ProbeVerdict::Diverges: return "diverges";
    default: return "bounded";
  }
}

struct Summary {
  std::vector<std::pair<std::string, double>> scalars;
  void put(const std::string& key, double v) { scalars.emplace_back(key, v); }
};

struct RunOutcome {
  int status = 0;
  Summary summary;
};

double fit_rate(const ObservabilityEvaluator& ev,
                const std::vector<RegionQuery>& queries, double* r_sq) {
  std::vector<double> J(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i)
    J[i] = ev.functional(queries[i]).J;
  const FitResult f = decay_fit(queries, J);
  if (r_sq) *r_sq = f.r_sq;
  return -f.slope;
}

RunOutcome run_blocks(const Scenario& sc, const RunOptions& opt,
                      const std::string& dir, bool write_outputs) {
  RunOutcome out;
  const Grid grid = sc.make_grid_object();
  const Potential V = sc.make_potential();
  const Forcing F = sc.make_forcing();

  const bool need_solve =
      opt.run_simulate || opt.run_observe || opt.run_mass || opt.run_chain ||
      (opt.run_appell && sc.appell && sc.appell->closure);

  Trajectory u;
  if (need_solve) {
    const WaveField u0 = sc.make_initial(grid);
    u = solve(u0, V, F, sc.time.t_end, sc.time.dt, sc.time.stride);
  }

  if (opt.run_simulate) {
    Table t;
    t.header = {"slice", "time", "mass", "grad_energy"};
    for (std::size_t k = 0; k < u.slices.size(); ++k) {
      WaveField w = u.field(k);
      const auto gd = gradient_density(grid, w.values);
      double ge = 0;
      for (double v : gd) ge += v;
      ge *= grid.cell_volume();
      t.add_row({static_cast<std::int64_t>(k), u.time(k), field_mass(w), ge});
    }
    const double m0 = field_mass(u.field(0));
    const double m1 = field_mass(u.field(u.slices.size() - 1));
    out.summary.put("mass_initial", m0);
    out.summary.put("mass_final", m1);
    out.summary.put("mass_drift", m1 - m0);
    if (write_outputs) {
      write_table(dir + "/slices", t);
      // final state in plot-friendly columns (1d: x re im abs2)
      if (grid.dim == 1) {
        std::vector<double> xs(grid.size()), re(grid.size()), im(grid.size()),
            a2(grid.size());
        const auto& last = u.slices.back();
        for (std::size_t j = 0; j < grid.size(); ++j) {
          xs[j] = grid.point(j)[0];
          re[j] = last[j].real();
          im[j] = last[j].imag();
          a2[j] = std::norm(last[j]);
        }
        write_plot_columns(dir + "/final_state.dat",
                           {"x", "re", "im", "abs2"}, {xs, re, im, a2});
      }
    }
  }

  if (opt.run_observe && sc.observe) {
    const ObserveBlock& ob = *sc.observe;
    const double M_eff = (ob.M == 0) ? grid.half_width : ob.M;
    const ObservabilityConstants consts =
        compute_constants(u, V, ob.R0, M_eff);
    const double ts = t_star(consts);
    out.summary.put("c0_sq", consts.c0_sq);
    out.summary.put("A_sq", consts.A_sq);
    out.summary.put("L", consts.L);
    out.summary.put("t_star", ts);

    ObservabilityEvaluator ev(u);
    auto make_query = [&](double rho, double t) {
      RegionQuery q;
      q.rho = rho;
      q.t = t;
      q.band_factor = ob.band_factor;
      q.periodic = ob.periodic;
      return q;
    };

    double c_fit = 0;
    bool have_fit = false;
    if (ob.do_fit) {
      std::vector<RegionQuery> qs;
      std::vector<double> J;
      Table t;
      t.header = {"rho", "t", "rho_sq_over_t", "J", "J_mass", "J_grad"};
      for (double rho : ob.fit_rhos) {
        const RegionQuery q = make_query(rho, ob.fit_t);
        const JResult jr = ev.functional(q);
        qs.push_back(q);
        J.push_back(jr.J);
        t.add_row({rho, q.t, rho * rho / q.t, jr.J, jr.J_mass, jr.J_grad});
      }
      const FitResult fr = decay_fit(qs, J);
      c_fit = -fr.slope;
      have_fit = true;
      out.summary.put("c_fit", c_fit);
      out.summary.put("fit_r_sq", fr.r_sq);
      out.summary.put("fit_intercept", fr.intercept);
      if (write_outputs) {
        write_table(dir + "/fit_points", t);
        std::vector<double> rs, xs, js;
        for (std::size_t i = 0; i < qs.size(); ++i) {
          rs.push_back(qs[i].rho);
          xs.push_back(qs[i].rho * qs[i].rho / qs[i].t);
          js.push_back(J[i]);
        }
        write_plot_columns(dir + "/J_vs_rho.dat", {"rho", "rho_sq_over_t", "J"},
                           {rs, xs, js});
      }
      std::printf("[observe] decay fit: c_fit = %.6e, r^2 = %.6f (%d points)\n",
                  c_fit, fr.r_sq, fr.n);
    }

    if (ob.do_lower_bound) {
      if (!have_fit)
        throw std::runtime_error("certificate checks need the decay fit");
      Table t;
      t.header = {"rho", "t", "J", "log_margin", "pass"};
      int failures = 0;
      double worst = 0;
      bool first = true;
      for (double tt : ob.heldout_ts) {
        for (double rho : ob.heldout_rhos) {
          const LowerBoundResult lb =
              lower_bound_check(ev, make_query(rho, tt), consts, c_fit);
          t.add_row({rho, tt, lb.J, lb.log_margin, lb.pass});
          if (!lb.pass && !lb.skipped) ++failures;
          if (first || lb.log_margin < worst) worst = lb.log_margin;
          first = false;
        }
      }
      out.summary.put("certificate_failures", failures);
      out.summary.put("certificate_worst_margin", worst);
      if (write_outputs) write_table(dir + "/certificate", t);
      std::printf("[observe] certificate: %d/%zu held-out checks failed, "
                  "worst log-margin %.4f\n",
                  failures, t.rows.size(), worst);
      if (failures > 0) out.status = 3;
    }

    if (ob.do_probe_tzero || ob.do_probe_rhoinf) {
      std::vector<RegionQuery> fit_qs;
      for (double tt : ob.probe_fit_ts)
        fit_qs.push_back(make_query(ob.probe_rho, tt));
      double emp_r_sq = 0;
      const double c_emp = fit_rate(ev, fit_qs, &emp_r_sq);
      out.summary.put("c_emp", c_emp);
      out.summary.put("c_emp_r_sq", emp_r_sq);

      auto run_probe = [&](ProbeMode mode,
                           const std::vector<RegionQuery>& samples,
                           const std::string& label) {
        const ProbeResult fast = uniqueness_probe(ev, 2.0 * c_emp, mode,
                                                  samples);
        const ProbeResult slow =
            uniqueness_probe(ev, c_emp / 4.0, mode, samples);
        Table t;
        t.header = {"rho", "t", "J", "logQ_at_2c", "logQ_at_quarter_c"};
        for (std::size_t i = 0; i < samples.size(); ++i)
          t.add_row({samples[i].rho, samples[i].t, fast.J_values[i],
                     fast.log_values[i], slow.log_values[i]});
        if (write_outputs) write_table(dir + "/" + label, t);
        std::printf("[observe] %s: at 2c verdict %s, at c/4 verdict %s\n",
                    label.c_str(), verdict_name(fast.verdict).c_str(),
                    verdict_name(slow.verdict).c_str());
        out.summary.put(label + "_verdict_2c",
                        static_cast<double>(fast.verdict));
        out.summary.put(label + "_verdict_quarter",
                        static_cast<double>(slow.verdict));
      };

      if (ob.do_probe_tzero) {
        std::vector<RegionQuery> samples;
        for (double tt : ob.probe_ts)
          samples.push_back(make_query(ob.probe_rho, tt));
        run_probe(ProbeMode::TimeToZero, samples, "probe_time");
      }
      if (ob.do_probe_rhoinf) {
        std::vector<RegionQuery> samples;
        for (double rho : ob.probe_rhos)
          samples.push_back(make_query(rho, ob.probe_t));
        run_probe(ProbeMode::RadiusToInfinity, samples, "probe_radius");
      }
    }

    if (ob.do_single) {
      const JResult jr = ev.functional(make_query(ob.single_rho, ob.single_t));
      out.summary.put("J_single", jr.J);
      out.summary.put("J_single_mass", jr.J_mass);
      out.summary.put("J_single_grad", jr.J_grad);
    }
  }

  if (opt.run_appell && sc.appell) {
    const AppellBlock& ab = *sc.appell;
    if (ab.bounds_check) {
      const ScalarBoundsReport rep =
          check_scalar_bounds(ab.gamma, ab.bound_samples);
      Table t;
      t.header = {"check", "pass", "worst_margin"};
      for (const auto& c : rep.checks)
        t.add_row({c.name, c.pass, c.worst_margin});
      if (write_outputs) write_table(dir + "/scalar_bounds", t);
      out.summary.put("scalar_bounds_all_pass", rep.all_pass ? 1.0 : 0.0);
      std::printf("[appell] scalar bounds at gamma = %g: %s\n", ab.gamma,
                  rep.all_pass ? "all pass" : "FAILED");
      if (!rep.all_pass) out.status = 3;
    }
    if (ab.closure) {
      TransformSpec spec;
      spec.weights = normalized_weights(ab.gamma);
      spec.out_grid = grid;
      spec.out_t0 = ab.out_t0;
      spec.out_dt = ab.out_dt;
      spec.out_slices = ab.out_slices;
      const Trajectory v = appell_transform(u, spec);
      const Potential Vt = transform_potential(V, spec);
      const Forcing Ft = transform_forcing(F, spec);
      const ResidualReport rr = schrodinger_residual(v, Vt, Ft);
      Table t;
      t.header = {"out_t0", "out_dt", "out_slices", "residual_absolute",
                  "reference", "residual_relative"};
      t.add_row({ab.out_t0, ab.out_dt, static_cast<std::int64_t>(ab.out_slices),
                 rr.absolute, rr.reference, rr.relative});
      if (write_outputs) write_table(dir + "/appell_closure", t);
      out.summary.put("appell_residual_relative", rr.relative);
      std::printf("[appell] transformed-solution residual: %.3e relative\n",
                  rr.relative);
    }
  }

  if (opt.run_carleman && sc.carleman) {
    const CarlemanBlock& cb = *sc.carleman;
    const CutoffSet cut = build_cutoffs(cb.R, cb.order);
    const auto suite = carleman_test_suite(grid, cb.t_slices, cut,
                                           cb.suite_size, opt.seed);
    double cn = 1.0;
    if (cb.calibrate) {
      const CalibrationResult cal =
          calibrate_cn(suite, cut, cb.sigma_multipliers);
      Table t;
      t.header = {"cn", "pass_count", "total"};
      const std::int64_t total = static_cast<std::int64_t>(
          suite.size() * cb.sigma_multipliers.size());
      for (std::size_t i = 0; i < cal.scan_values.size(); ++i)
        t.add_row({cal.scan_values[i],
                   static_cast<std::int64_t>(cal.pass_counts[i]), total});
      if (write_outputs) write_table(dir + "/calibration", t);
      out.summary.put("cn", cal.cn);
      out.summary.put("cn_found", cal.found ? 1.0 : 0.0);
      out.summary.put("cn_lower_edge", cal.lower_edge ? 1.0 : 0.0);
      std::printf("[carleman] calibration: cn = %g%s\n", cal.cn,
                  cal.lower_edge ? " (scan floor: upper bound on the "
                                   "empirical constant)"
                                 : "");
      if (!cal.found) {
        out.status = 3;
        cn = 1.0;
      } else {
        cn = cal.cn;
      }
    }

    Table checks;
    checks.header = {"field", "sigma", "lhs_log", "rhs_log", "ratio", "pass"};
    int failures = 0;
    for (std::size_t fi = 0; fi < suite.size(); ++fi) {
      for (double mult : cb.sigma_multipliers) {
        CarlemanConfig cfg;
        cfg.cutoffs = cut;
        cfg.cn = cn;
        cfg.sigma = mult * cb.R * cb.R;
        const CarlemanCheck ck = carleman_check(suite[fi], cfg);
        checks.add_row({static_cast<std::int64_t>(fi), cfg.sigma, ck.lhs_log,
                        ck.rhs_log, ck.ratio, ck.pass});
        if (!ck.pass) ++failures;
      }
    }
    if (write_outputs) write_table(dir + "/carleman_checks", checks);
    out.summary.put("carleman_failures", failures);
    std::printf("[carleman] %d/%zu weighted lower-bound checks failed\n",
                failures, checks.rows.size());
    if (failures > 0) out.status = 3;

    if (cb.commutator) {
      // Plateau-supported static fields: the moving center is constant on
      // the support, so the closed commutator form is exact up to stencil
      // and spectral error and the weight-term coefficient is exposed.
      // Bumps that the narrow window cuts down to (almost) nothing carry no
      // resolvable content -- their residual is pure truncation noise -- so
      // they are listed in the table but kept out of the summary.
      const auto plateau = carleman_test_suite(grid, cb.t_slices, cut,
                                               cb.suite_size, opt.seed, 0.42,
                                               0.58, 0.05);
      double max_norm = 0;
      for (const auto& f : plateau) max_norm = std::max(max_norm, st_norm(f));
      Table t;
      t.header = {"field", "resolved", "residual_coeff8", "residual_coeff4",
                  "norm_commutator", "norm_lap_term", "norm_w_term8",
                  "norm_phi_term", "norm_dx1_term"};
      double worst8 = 0, best4 = 0;
      int degenerate = 0;
      bool first = true;
      for (std::size_t fi = 0; fi < plateau.size(); ++fi) {
        CarlemanConfig cfg;
        cfg.cutoffs = cut;
        cfg.cn = cn;
        cfg.sigma = 2.0;
        const bool resolved = st_norm(plateau[fi]) > 1e-3 * max_norm;
        const CommutatorReport cr = commutator_check(plateau[fi], cfg);
        t.add_row({static_cast<std::int64_t>(fi),
                   static_cast<std::int64_t>(resolved), cr.residual_coeff8,
                   cr.residual_coeff4, cr.norm_commutator, cr.norm_lap_term,
                   cr.norm_w_term8, cr.norm_phi_term, cr.norm_dx1_term});
        if (!resolved) {
          ++degenerate;
          continue;
        }
        worst8 = std::max(worst8, cr.residual_coeff8);
        best4 = first ? cr.residual_coeff4 : std::min(best4,
                                                      cr.residual_coeff4);
        first = false;
      }
      if (write_outputs) write_table(dir + "/commutator", t);
      out.summary.put("commutator_worst_residual_coeff8", worst8);
      out.summary.put("commutator_best_residual_coeff4", best4);
      out.summary.put("commutator_degenerate_fields", degenerate);
      std::printf("[carleman] commutator: worst residual %.3e with weight "
                  "coefficient 8; the coefficient-4 form never drops below "
                  "%.3e (%d of %zu fields degenerate on the plateau window, "
                  "skipped)\n",
                  worst8, best4, degenerate, plateau.size());
    }
  }

  if (opt.run_mass && sc.diagnostics && sc.diagnostics->mass_check) {
    Table t;
    t.header = {"t", "lhs", "rhs", "residual", "relative", "pointwise_l1",
                "pointwise_relative"};
    double worst = 0;
    for (double tt : sc.diagnostics->mass_times) {
      const MassIdentityResult mr = mass_identity_residual(u, V, tt);
      const PointwiseMassResult pr = mass_identity_pointwise(u, V, tt);
      t.add_row({tt, mr.lhs, mr.rhs, mr.residual, mr.relative, pr.l1_residual,
                 pr.relative});
      worst = std::max(worst, mr.relative);
    }
    if (write_outputs) write_table(dir + "/mass_identity", t);
    out.summary.put("mass_identity_worst_relative", worst);
    std::printf("[mass] worst relative balance residual %.3e over %zu "
                "times\n",
                worst, sc.diagnostics->mass_times.size());
  }

  if (opt.run_chain && sc.diagnostics && sc.diagnostics->chain) {
    const DiagnosticsBlock& db = *sc.diagnostics;
    const double M_chain = 4.0 * db.R0 + 1.0;
    const ObservabilityConstants consts =
        compute_constants(u, V, db.R0, M_chain);
    const ProofChainReport rep =
        proof_chain_diagnostics(u, V, db.gamma, db.R0, consts,
                                db.smoothness_order, db.cn, db.sigma_mult);
    Table t;
    t.header = {"quantity", "value", "bound", "pass"};
    t.add_row({std::string("B_scaled"), rep.B_scaled, rep.B_bound, rep.pass_B});
    t.add_row({std::string("B1"), rep.B1, rep.B1_bound, rep.pass_B1});
    t.add_row({std::string("B1_banded"), rep.B1, rep.B1_bound_band,
               rep.B1 <= rep.B1_bound_band});
    t.add_row({std::string("B2"), rep.B2, rep.B2_bound, rep.pass_B2});
    t.add_row({std::string("triangle_gap"), rep.triangle_gap, 1e-10,
               rep.triangle_gap <= 1e-10});
    t.add_row({std::string("floor"), rep.floor_lhs, rep.floor_rhs,
               rep.pass_floor});
    t.add_row({std::string("I1"), rep.I1, rep.I1_bound, rep.pass_I1});
    t.add_row({std::string("I2"), rep.I2, rep.I2_bound, rep.pass_I2});
    t.add_row({std::string("cond2"), rep.cond2_lhs_log, rep.cond2_rhs_log,
               rep.cond2});
    t.add_row({std::string("cond3"), rep.cond3_lhs_log, rep.cond3_rhs_log,
               rep.cond3});
    t.add_row({std::string("cond4"), rep.cond4_lhs_log, rep.cond4_rhs_log,
               rep.cond4});
    if (write_outputs) write_table(dir + "/chain", t);
    out.summary.put("chain_all_pass", rep.all_pass ? 1.0 : 0.0);
    out.summary.put("chain_B_scaled", rep.B_scaled);
    out.summary.put("chain_B1", rep.B1);
    out.summary.put("chain_B2", rep.B2);
    out.summary.put("chain_floor", rep.floor_lhs);
    out.summary.put("chain_I1", rep.I1);
    out.summary.put("chain_I2", rep.I2);
    std::printf("[chain] gamma = %g: %s\n", rep.gamma,
                rep.all_pass ? "all inequalities hold" : "FAILED");
    if (!rep.all_pass) out.status = 3;
  }

  return out;
}

}  // namespace

int run_scenario(const Scenario& sc, const RunOptions& opt) {
  namespace fs = std::filesystem;
  const std::string dir = opt.out_dir + "/" + sc.name;
  fs::create_directories(dir);
  const auto start = std::chrono::steady_clock::now();
  RunOutcome out = run_blocks(sc, opt, dir, true);
  Table summary;
  summary.header = {"key", "value"};
  for (const auto& [k, v] : out.summary.scalars)
    summary.add_row({k, v});
  write_table(dir + "/summary", summary);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  write_meta(dir + "/meta.json", sc.name, sc.config_hash, wall);
  return out.status;
}

int run_sweep(const ConfigFile& base_config, const std::string& axis,
              const std::vector<double>& values, const RunOptions& opt) {
  if (values.empty())
    throw std::invalid_argument("sweep needs at least one value");
  const auto dot = axis.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == axis.size())
    throw std::invalid_argument(
        "sweep axis must be 'section.key' (got '" + axis + "')");
  const std::string section = axis.substr(0, dot);
  const std::string key = axis.substr(dot + 1);

  struct Row {
    int status = 0;
    std::string error;
    Summary summary;
  };
  std::vector<Row> rows(values.size());

  auto run_one = [&](std::size_t i) {
    char vbuf[40];
    std::snprintf(vbuf, sizeof vbuf, "%.17g", values[i]);
    ConfigFile cfg = base_config;
    bool replaced = false;
    auto it = cfg.sections.find(section);
    if (it != cfg.sections.end()) {
      for (auto& e : it->second) {
        if (e.key == key) {
          e.value = vbuf;
          replaced = true;
          break;
        }
      }
    }
    if (!replaced) {
      ConfigEntry e;
      e.key = key;
      e.value = vbuf;
      e.line = 0;
      cfg.sections[section].push_back(std::move(e));
    }
    cfg.raw += "\n# sweep " + axis + " = " + vbuf + "\n";
    try {
      Scenario sc = build_scenario(cfg);
      sc.name += "_sweep";  // single shared directory; tables not written
      rows[i].summary =
          run_blocks(sc, opt, opt.out_dir, false).summary;
    } catch (const std::exception& ex) {
      rows[i].status = 1;
      rows[i].error = ex.what();
    }
  };

  const int nthreads = std::max(1, opt.threads);
  if (nthreads == 1 || values.size() == 1) {
    for (std::size_t i = 0; i < values.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const std::size_t nw =
        std::min<std::size_t>(static_cast<std::size_t>(nthreads),
                              values.size());
    pool.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= values.size()) return;
          run_one(i);
        }
      });
    for (auto& th : pool) th.join();
  }

  // Union of summary keys, in first-seen order, so the table is rectangular.
  std::vector<std::string> keys;
  for (const auto& r : rows)
    for (const auto& [k, v] : r.summary.scalars) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end())
        keys.push_back(k);
    }
  Table t;
  t.header = {axis, "status", "error"};
  for (const auto& k : keys) t.header.push_back(k);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::vector<Cell> cells{values[i],
                            static_cast<std::int64_t>(rows[i].status),
                            rows[i].error};
    for (const auto& k : keys) {
      double v = 0;
      bool found = false;
      for (const auto& [kk, vv] : rows[i].summary.scalars)
        if (kk == k) {
          v = vv;
          found = true;
          break;
        }
      cells.push_back(found ? Cell{v} : Cell{std::string("")});
    }
    t.add_row(std::move(cells));
  }
  std::filesystem::create_directories(opt.out_dir);
  const std::string stem = opt.out_dir + "/sweep_" + section + "_" + key;
  write_table(stem, t);

  int status = 0;
  for (const auto& r : rows) status = std::max(status, r.status);
  return status;
}

}  // namespace schrodlab
