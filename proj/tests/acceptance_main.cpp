// Acceptance battery: one line per criterion, exit 0 only when all hold.
// Usage: schrodlab_acceptance [--scenarios DIR] [--out DIR]
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "schrodlab/appell.hpp"
#include "schrodlab/carleman.hpp"
#include "schrodlab/csvio.hpp"
#include "schrodlab/cutoffs.hpp"
#include "schrodlab/diagnostics.hpp"
#include "schrodlab/grid.hpp"
#include "schrodlab/observability.hpp"
#include "schrodlab/potential.hpp"
#include "schrodlab/propagator.hpp"
#include "schrodlab/runner.hpp"
#include "schrodlab/scalars.hpp"
#include "schrodlab/scenario.hpp"

namespace fs = std::filesystem;
using namespace schrodlab;

namespace {

std::string g_scenarios = "scenarios";
std::string g_out = "acceptance_out";

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error(what);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// summary.csv rows are key,value with %.16e doubles.
std::map<std::string, double> read_summary(const std::string& dir) {
  std::map<std::string, double> out;
  std::istringstream in(slurp(dir + "/summary.csv"));
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    const auto c = line.find(',');
    if (c == std::string::npos) continue;
    out[line.substr(0, c)] = std::strtod(line.c_str() + c + 1, nullptr);
  }
  return out;
}

double get(const std::map<std::string, double>& s, const std::string& key) {
  const auto it = s.find(key);
  require(it != s.end(), "summary is missing '" + key + "'");
  return it->second;
}

Scenario load_scenario(const std::string& file) {
  return build_scenario(parse_config_file(g_scenarios + "/" + file));
}

double sup_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  require(a.size() == b.size(), "size mismatch in sup_diff");
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// --- 1. solver self-convergence at second order -------------------------

std::string solver_order() {
  const Grid g = make_grid(1, 16.0, 512);
  const WaveField u0 = gaussian_packet(g, 1.0, {0, 0}, 1.0, {0, 0});
  // smooth complex potential with genuine time dependence
  const Potential V = callable_potential(
      [](double x, double, double t) {
        return cplx(0.3, 0.2) * std::exp(-x * x / 8.0) *
               (1.0 + 0.5 * std::sin(2.0 * kPi * t));
      },
      1.5 * std::hypot(0.3, 0.2), 1.5 * 0.2);
  const double T = 0.5;
  const auto ref =
      solve(u0, V, zero_potential(), T, 1.25e-4, 4000).slices.back();
  double err[3];
  int i = 0;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    const int steps = static_cast<int>(std::lround(T / dt));
    err[i++] =
        sup_diff(solve(u0, V, zero_potential(), T, dt, steps).slices.back(),
                 ref);
  }
  const double r1 = err[0] / err[1], r2 = err[1] / err[2];
  require(r1 >= 3.4 && r1 <= 4.6 && r2 >= 3.4 && r2 <= 4.6,
          fmt("halving dt shrank the error by %.2f and %.2f (want ~4)", r1,
              r2));
  return fmt("sup errors %.2e / %.2e / %.2e, ratios %.2f, %.2f", err[0],
             err[1], err[2], r1, r2);
}

// --- 2. free evolution against the closed form --------------------------

std::vector<cplx> free_gaussian_exact(const Grid& g, double t) {
  // exp(-x^2/4) evolves to (1+it)^{-1/2} exp(-x^2/(4(1+it)))
  const cplx den(1.0, t);
  const cplx pref = 1.0 / std::sqrt(den);
  std::vector<cplx> out(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.point(j)[0];
    out[j] = pref * std::exp(-x * x / (4.0 * den));
  }
  return out;
}

std::string free_closed_form() {
  const Grid g = make_grid(1, 24.0, 512);
  const WaveField u0 = gaussian_packet(g, 1.0, {0, 0}, 1.0, {0, 0});
  double one_shot = 0;
  for (double t : {0.1, 0.7, 1.9})
    one_shot = std::max(
        one_shot, sup_diff(free_propagate(u0, t).values,
                           free_gaussian_exact(g, t)));
  require(one_shot < 1e-12,
          fmt("one-shot spectral propagation off by %.2e", one_shot));

  const Trajectory tr =
      solve(u0, zero_potential(), zero_potential(), 1.9, 1e-3, 100);
  double stepped = 0;
  for (std::size_t k : {std::size_t{1}, std::size_t{7}, std::size_t{19}})
    stepped = std::max(
        stepped, sup_diff(tr.slices[k], free_gaussian_exact(g, tr.time(k))));
  require(stepped < 1e-10, fmt("stepped free solve off by %.2e", stepped));
  return fmt("one-shot %.2e, 1900-step march %.2e", one_shot, stepped);
}

// --- 3. transform closure under refinement -------------------------------

struct ClosureCase {
  const char* label;
  double amp, cx, width, px;
  Potential V;
  Forcing F;
};

std::string transform_closure() {
  const double gamma = 2.25;
  const std::vector<ClosureCase> cases = {
      {"free", 1.0, 0.0, 1.0, 0.0, zero_potential(), zero_potential()},
      {"complex well", 1.0, 0.0, 0.8, 0.4,
       gaussian_well(cplx(0.3, 0.2), 2.0, 1.5), zero_potential()},
      {"constant", 1.0, 0.6, 1.1, 0.0, constant_potential(cplx(0.2, -0.1)),
       zero_potential()},
      {"forced", 1.0, 0.0, 1.0, 0.0, zero_potential(),
       gaussian_well(cplx(0.1, 0.05), 1.0, 2.0)},
      // the forcing must be localized: a constant forcing feeds the box
      // edge directly and trips the wrap-around guard
      {"well+forcing", 1.0, 0.0, 0.9, -0.3,
       gaussian_well(cplx(0.25, 0.0), 1.5, 0.0),
       gaussian_well(cplx(0.05, 0.02), 1.5, 0.0)}};

  std::string detail;
  for (const auto& c : cases) {
    double res[2];
    for (int lv = 0; lv < 2; ++lv) {
      const int N = lv ? 512 : 256;
      const double dt = lv ? 1e-3 : 2e-3;
      const Grid g = make_grid(1, 16.0, N);
      const WaveField u0 =
          gaussian_packet(g, c.amp, {c.cx, 0}, c.width, {c.px, 0});
      const Trajectory u = solve(u0, c.V, c.F, 0.5, dt, 1);
      TransformSpec spec;
      spec.weights = normalized_weights(gamma);
      spec.out_grid = g;
      spec.out_t0 = 0.04;
      spec.out_dt = lv ? 2e-3 : 4e-3;
      spec.out_slices = lv ? 241 : 121;
      const Trajectory v = appell_transform(u, spec);
      res[lv] = schrodinger_residual(v, transform_potential(c.V, spec),
                                     transform_forcing(c.F, spec))
                    .relative;
    }
    const double order = std::log2(res[0] / res[1]);
    // cases the stepper integrates exactly (constant potentials commute
    // with the splitting) sit at the comparison floor -- a few 1e-9 from
    // time interpolation and the residual stencil -- where measured order
    // is meaningless
    require(order >= 1.8 || res[1] <= 1e-7,
            fmt("%s: residuals %.3e -> %.3e, order %.2f", c.label, res[0],
                res[1], order));
    detail += fmt("%s %.2f ", c.label, order);
  }

  // unit dilation ratio must reproduce the time-shifted field exactly
  const Grid gi = make_grid(1, 16.0, 256);
  const WaveField w0 = gaussian_packet(gi, 1.0, {0, 0}, 0.9, {0.3, 0});
  const Potential Vi = gaussian_well(cplx(0.3, 0.0), 2.0, 0.0);
  const Trajectory src = solve(w0, Vi, zero_potential(), 0.2, 2e-3, 5);
  TransformSpec sid;
  sid.weights = normalized_weights(1.0);
  sid.out_grid = gi;
  sid.out_t0 = 0.05;
  sid.out_dt = 0.01;
  sid.out_slices = 11;
  const Trajectory vid = appell_transform(src, sid);
  double ident = 0;
  for (int k = 0; k < 11; ++k)
    ident = std::max(ident, sup_diff(vid.slices[k], src.slices[5 + k]));
  require(ident <= 1e-12, fmt("unit-ratio map deviates by %.2e", ident));
  return "orders: " + detail + fmt("| unit ratio exact to %.1e", ident);
}

// --- 4. scalar envelope/chirp windows ------------------------------------

std::string scalar_windows() {
  const auto start = std::chrono::steady_clock::now();
  for (double gamma : {16.0001, 1e6, 1e8}) {
    const ScalarBoundsReport rep = check_scalar_bounds(gamma, 10000);
    require(rep.all_pass, fmt("scalar windows fail at ratio %g", gamma));
  }
  const double sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  require(sec < 5.0, fmt("scalar sweep took %.1fs (budget 5s)", sec));
  return fmt("10000-sample sweeps pass at ratios 16+, 1e6, 1e8 in %.2fs",
             sec);
}

// --- 5. mass-flux balance -------------------------------------------------

std::string mass_balance() {
  const Grid g = make_grid(1, 16.0, 256);
  const WaveField u0 = gaussian_packet(g, 1.0, {0, 0}, 1.0, {0, 0});

  // uniform imaginary drain: exact exponential mass decay
  const Potential Vd = constant_potential(cplx(0.0, 0.25));
  const Trajectory td = solve(u0, Vd, zero_potential(), 0.2, 5e-4, 1);
  const MassIdentityResult md = mass_identity_residual(td, Vd, 0.2);
  require(md.relative <= 1e-6,
          fmt("drain balance residual %.2e", md.relative));

  // pointwise balance converges at second order in the stored step
  const Potential Vw = gaussian_well(cplx(0.3, 0.2), 1.5, 0.0);
  double pw[2];
  int i = 0;
  for (double dt : {1e-3, 5e-4})
    pw[i++] =
        mass_identity_pointwise(solve(u0, Vw, zero_potential(), 0.2, dt, 1),
                                Vw, 0.2)
            .relative;
  const double ratio = pw[0] / pw[1];
  require(ratio >= 3.0 && ratio <= 5.0,
          fmt("pointwise residual ratio %.2f (want ~4)", ratio));

  // weighted balance with a moving packet exercises the flux term
  const WaveField m0 = gaussian_packet(g, 1.0, {0, 0}, 0.9, {0.6, 0});
  const Trajectory tm =
      solve(m0, zero_potential(), zero_potential(), 0.2, 5e-4, 4);
  const auto wfun = [](double x, double) { return std::exp(-x * x / 8.0); };
  const auto wgrad = [](double x, double) {
    return std::array<double, 2>{-x / 4.0 * std::exp(-x * x / 8.0), 0.0};
  };
  const MassIdentityResult mw =
      mass_identity_residual(tm, zero_potential(), 0.2, wfun, wgrad);
  require(std::abs(mw.lhs) > 1e-3, "flux term did not move any mass");
  require(mw.relative <= 1e-5,
          fmt("weighted balance residual %.2e", mw.relative));
  return fmt("drain %.1e, pointwise ratio %.2f, weighted flux %.1e",
             md.relative, ratio, mw.relative);
}

// --- 6. weight conjugation identity and commutator refinement ------------

std::string conjugation_and_commutator() {
  const CutoffSet cut = build_cutoffs(2.0, 4);

  // conjugation identity, measured at two resolutions with the window that
  // moves the weight under the field; the residual is pure discretization
  // and collapses under refinement
  double coarse_conj = 0, fine_conj = 0, fine_conj_sig2 = 0;
  {
    const Grid gc = make_grid(1, 10.0, 256);
    const auto fields = carleman_test_suite(gc, 1024, cut, 2, 2026);
    CarlemanConfig cfg;
    cfg.cutoffs = cut;
    cfg.sigma = 0.0625;
    for (const auto& f : fields)
      coarse_conj = std::max(coarse_conj, conjugation_residual(f, cfg));
  }
  {
    const Grid gf = make_grid(1, 10.0, 1024);
    const auto fields = carleman_test_suite(gf, 4096, cut, 2, 2026);
    CarlemanConfig cfg;
    cfg.cutoffs = cut;
    cfg.sigma = 0.0625;
    for (const auto& f : fields)
      fine_conj = std::max(fine_conj, conjugation_residual(f, cfg));
    cfg.sigma = 2.0;
    for (const auto& f : fields)
      fine_conj_sig2 = std::max(fine_conj_sig2, conjugation_residual(f, cfg));
  }
  require(fine_conj < 2e-6,
          fmt("conjugation residual %.2e on the fine grid", fine_conj));
  require(fine_conj_sig2 < 1e-3,
          fmt("conjugation residual %.2e at sigma 2", fine_conj_sig2));
  require(fine_conj < coarse_conj / 20.0,
          fmt("conjugation residual not refining: %.2e -> %.2e", coarse_conj,
              fine_conj));

  // coefficient 8 in the weight term: residual vanishes under refinement,
  // the coefficient-4 alternative stays order one
  Table t;
  t.header = {"points", "t_slices", "worst_residual_coeff8",
              "min_residual_coeff4"};
  double c8[3], c4[3];
  int lv = 0;
  for (int N : {256, 512, 1024}) {
    const int T = 2 * N;
    const Grid gl = make_grid(1, 10.0, N);
    const auto suite = carleman_test_suite(gl, T, cut, 2, 777, 0.42, 0.58,
                                           0.05);
    double w8 = 0, m4 = 0;
    bool first = true;
    for (const auto& f : suite) {
      CarlemanConfig cfg;
      cfg.cutoffs = cut;
      cfg.sigma = 2.0;
      const CommutatorReport cr = commutator_check(f, cfg);
      w8 = std::max(w8, cr.residual_coeff8);
      m4 = first ? cr.residual_coeff4 : std::min(m4, cr.residual_coeff4);
      first = false;
    }
    c8[lv] = w8;
    c4[lv] = m4;
    t.add_row({static_cast<std::int64_t>(N), static_cast<std::int64_t>(T), w8,
               m4});
    ++lv;
  }
  write_table(g_out + "/commutator_refinement", t);
  require(c8[2] < c8[0] / 4.0,
          fmt("coefficient-8 residual not refining: %.3e -> %.3e -> %.3e",
              c8[0], c8[1], c8[2]));
  for (int k = 0; k < 3; ++k)
    require(c4[k] > 0.1, fmt("coefficient-4 residual dipped to %.3e", c4[k]));
  return fmt("conjugation %.1e -> %.1e (sigma 2: %.1e); coeff-8 %.2e -> "
             "%.2e -> %.2e, coeff-4 >= %.2f",
             coarse_conj, fine_conj, fine_conj_sig2, c8[0], c8[1], c8[2],
             std::min(std::min(c4[0], c4[1]), c4[2]));
}

// --- 7. weighted-inequality battery with calibration ---------------------

std::string carleman_scenario() {
  const auto start = std::chrono::steady_clock::now();
  const Scenario sc = load_scenario("carleman_1d.ini");
  RunOptions opt;
  opt.out_dir = g_out;
  opt.run_carleman = true;
  const int status = run_scenario(sc, opt);
  const double sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  require(status == 0, fmt("scenario exited with status %d", status));
  const auto s = read_summary(g_out + "/" + sc.name);
  require(get(s, "carleman_failures") == 0.0,
          fmt("%g weighted checks failed", get(s, "carleman_failures")));
  require(get(s, "cn_found") == 1.0, "calibration scan found no constant");
  require(sec < 180.0, fmt("battery took %.0fs (budget 180s)", sec));
  return fmt("cn = %g%s, 0/40 checks failed, %.1fs", get(s, "cn"),
             get(s, "cn_lower_edge") == 1.0 ? " (scan floor)" : "", sec);
}

// --- 8. observability decay fit and certificate --------------------------

std::string observability_certificate() {
  const Scenario sc = load_scenario("gaussian_free_1d.ini");
  RunOptions opt;
  opt.out_dir = g_out;
  opt.run_observe = true;
  const int status = run_scenario(sc, opt);
  require(status == 0, fmt("scenario exited with status %d", status));
  const auto s = read_summary(g_out + "/" + sc.name);
  const double c_fit = get(s, "c_fit");
  const double pinned = 2.80971025e-5;
  require(get(s, "fit_r_sq") >= 0.99,
          fmt("decay fit r^2 = %.4f", get(s, "fit_r_sq")));
  require(std::abs(c_fit - pinned) <= 1e-3 * pinned,
          fmt("c_fit %.8e drifted from pinned %.8e", c_fit, pinned));
  require(get(s, "certificate_failures") == 0.0,
          fmt("%g held-out checks failed", get(s, "certificate_failures")));
  require(get(s, "certificate_worst_margin") > 0.0,
          fmt("worst log-margin %.4f not positive",
              get(s, "certificate_worst_margin")));
  return fmt("c_fit %.6e (r^2 %.4f), 20/20 held-out margins > 0, worst "
             "%+.3f",
             c_fit, get(s, "fit_r_sq"), get(s, "certificate_worst_margin"));
}

// --- 9. vanishing-data probes ---------------------------------------------

std::string uniqueness_probes() {
  // identically zero data must register as vanishing in both probe modes
  const Grid gz = make_grid(1, 20.0, 512);
  Trajectory z;
  z.grid = gz;
  z.t0 = 0;
  z.dt = 1e-3;
  z.slices.assign(49, std::vector<cplx>(gz.size(), cplx(0, 0)));
  const ObservabilityEvaluator ev(z);
  auto q = [](double rho, double t) {
    RegionQuery r;
    r.rho = rho;
    r.t = t;
    return r;
  };
  const ProbeResult zt = uniqueness_probe(
      ev, 1.0, ProbeMode::TimeToZero,
      {q(2, 0.016), q(2, 0.012), q(2, 0.008), q(2, 0.004)});
  const ProbeResult zr = uniqueness_probe(
      ev, 1.0, ProbeMode::RadiusToInfinity,
      {q(2, 0.012), q(2.5, 0.012), q(3, 0.012), q(3.5, 0.012)});
  require(zt.verdict == ProbeVerdict::ToZero &&
              zr.verdict == ProbeVerdict::ToZero,
          "zero data did not register as vanishing");

  const Scenario sc = load_scenario("probe_1d.ini");
  RunOptions opt;
  opt.out_dir = g_out;
  opt.run_observe = true;
  const int status = run_scenario(sc, opt);
  require(status == 0, fmt("scenario exited with status %d", status));
  const auto s = read_summary(g_out + "/" + sc.name);
  require(get(s, "probe_time_verdict_2c") == 2.0,
          "doubled rate should force divergence");
  require(get(s, "probe_time_verdict_quarter") == 0.0,
          "quartered rate should die out");
  const double c_emp = get(s, "c_emp");
  const double pinned = 8.02232e-3;
  require(std::abs(c_emp - pinned) <= 1e-2 * pinned,
          fmt("empirical rate %.6e drifted from pinned %.6e", c_emp, pinned));
  return fmt("zero data vanishes in both modes; 2c diverges, c/4 dies "
             "(c_emp %.4e)",
             c_emp);
}

// --- 10. end-to-end accounting chain --------------------------------------

std::string accounting_chain() {
  const Scenario sc = load_scenario("chain_1d.ini");
  RunOptions opt;
  opt.out_dir = g_out;
  opt.run_chain = true;
  opt.run_mass = true;
  opt.run_appell = true;
  const int status = run_scenario(sc, opt);
  require(status == 0, fmt("scenario exited with status %d", status));
  const auto s = read_summary(g_out + "/" + sc.name);
  require(get(s, "chain_all_pass") == 1.0, "accounting chain failed");
  require(get(s, "scalar_bounds_all_pass") == 1.0,
          "scalar windows failed at the chain ratio");
  const double mass = get(s, "mass_identity_worst_relative");
  require(mass <= 1e-6, fmt("mass balance residual %.2e", mass));
  return fmt("chain holds at ratio 26000; worst mass residual %.1e", mass);
}

// --- 11. bitwise deterministic reruns --------------------------------------

std::string determinism() {
  int compared = 0;
  for (const char* file : {"probe_1d.ini", "torus_1d.ini"}) {
    const Scenario sc = load_scenario(file);
    RunOptions opt;
    opt.run_simulate = true;
    opt.run_observe = true;
    opt.out_dir = g_out + "/det_a";
    const int s1 = run_scenario(sc, opt);
    opt.out_dir = g_out + "/det_b";
    const int s2 = run_scenario(sc, opt);
    require(s1 == 0 && s2 == 0, fmt("%s reruns exited %d/%d", file, s1, s2));
    int here = 0;
    for (const auto& e :
         fs::directory_iterator(g_out + "/det_a/" + sc.name)) {
      const std::string fn = e.path().filename().string();
      if (fn == "meta.json") continue;  // wall time lives there
      require(slurp(e.path().string()) ==
                  slurp(g_out + "/det_b/" + sc.name + "/" + fn),
              sc.name + "/" + fn + " differs between reruns");
      ++here;
    }
    require(here >= 3, fmt("only %d files to compare for %s", here, file));
    compared += here;
  }
  return fmt("2 scenarios rerun byte-identical across %d files", compared);
}

struct Criterion {
  const char* name;
  std::function<std::string()> run;
};

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--scenarios" && i + 1 < argc) {
      g_scenarios = argv[++i];
    } else if (a == "--out" && i + 1 < argc) {
      g_out = argv[++i];
    } else {
      std::fprintf(stderr, "usage: %s [--scenarios DIR] [--out DIR]\n",
                   argv[0]);
      return 1;
    }
  }
  fs::create_directories(g_out);

  const std::vector<Criterion> criteria = {
      {"solver second-order self-convergence", solver_order},
      {"free evolution matches the closed form", free_closed_form},
      {"transform closure under refinement", transform_closure},
      {"scalar envelope/chirp windows", scalar_windows},
      {"mass-flux balance", mass_balance},
      {"conjugation identity and commutator coefficient",
       conjugation_and_commutator},
      {"weighted-inequality battery", carleman_scenario},
      {"observability decay fit and certificate", observability_certificate},
      {"vanishing-data probes", uniqueness_probes},
      {"end-to-end accounting chain", accounting_chain},
      {"deterministic reruns", determinism},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = c.run();
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    const double sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start)
            .count();
    std::printf("[%s] %s: %s (%.1fs)\n", ok ? "PASS" : "FAIL", c.name,
                detail.c_str(), sec);
    std::fflush(stdout);
    if (!ok) ++failed;
  }
  if (failed > 0) {
    std::printf("%d of %zu acceptance criteria failed\n", failed,
                criteria.size());
    return 3;
  }
  std::printf("all %zu acceptance criteria hold\n", criteria.size());
  return 0;
}
