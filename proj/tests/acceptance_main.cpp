// Acceptance suite: runs the ten exit criteria end to end at desk scale and
// prints one PASS/FAIL line per criterion. Exit code is the number of
// failures. Thresholds were frozen from the first oracle-validated sweep
// (see README, "Acceptance suite").

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdarg>
#include <cstring>
#include <string>
#include <vector>

#include "shearlab/diagnostics.hpp"
#include "shearlab/experiments.hpp"
#include "shearlab/inviscid.hpp"
#include "shearlab/oracle.hpp"
#include "shearlab/viscous.hpp"

using namespace shearlab;

namespace {

int failures = 0;
std::vector<std::string> lines;

void report(int id, bool ok, const std::string& detail) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "[%s] criterion %2d: %s",
                ok ? "PASS" : "FAIL", id, detail.c_str());
  std::puts(buf);
  std::fflush(stdout);
  lines.push_back(buf);
  if (!ok) ++failures;
}

std::string fmt(const char* f, ...) {
  char buf[480];
  std::va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

struct Shared {
  // criterion 3 artifacts, reused by criterion 4 and 9
  DissipationLedger inv_ledger;               // kappa = 0 reference, 1024^2 j4
  std::vector<DissipationLedger> visc_ledgers;  // kappa in {1e-3,1e-4,1e-5}
  double theta0_l2 = 0.0;
  // criterion 5 artifacts, reused by criterion 4
  SweepReport sweep;
  bool sweep_ok = false;
  // criterion 6 artifacts: (residual, |theta0|^2) per viscous branch
  std::vector<std::pair<double, double>> extra_resid;
  std::vector<double> nonuniq_gaps;
};

Shared shared;

// ---------------------------------------------------------------- criterion 1
void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  HarmonicData h;
  InitialData d(h);
  StageSchedule s = build_universal(0.5, 6);
  double worst_l2 = 0.0;
  for (int j = 3; j <= 6; ++j) {
    auto [nx, ny] = recommended_grid(d, s, j, 1.3, 64, 1 << 13);
    GridField g = sample_grid_values(d, s, j, nx, ny);
    worst_l2 = std::max(worst_l2, std::fabs(g.l2() / h.l2() - 1.0));
  }
  // The determinant check runs at j = 5: by j = 6 the finite-difference
  // stencil cannot sit below the truncation error of the composed map while
  // staying above rounding (the j = 6 volume preservation is certified by
  // the machine-zero L2 drift above).
  double worst_det = 0.0;
  double step = 1e-5;
  for (int i = 0; i < 100; ++i) {
    double x = counter_rng_unit(2026, 2 * i) * two_pi;
    double y = counter_rng_unit(2026, 2 * i + 1) * two_pi;
    auto [xp, yp] = backward_map(s, 5, x + step, y);
    auto [xm, ym] = backward_map(s, 5, x - step, y);
    auto [xq, yq] = backward_map(s, 5, x, y + step);
    auto [xr, yr] = backward_map(s, 5, x, y - step);
    double det = ((xp - xm) * (yq - yr) - (xq - xr) * (yp - ym)) /
                 (4.0 * step * step);
    worst_det = std::max(worst_det, std::fabs(det - 1.0));
  }
  double secs = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0).count();
  bool ok = worst_l2 <= 1e-10 && worst_det <= 1e-6 && secs < 60.0;
  report(1, ok,
         fmt("inviscid exactness: max |L2 drift| %.2e (<=1e-10), max |det-1| "
             "%.2e (<=1e-6), %.0f s (<60)",
             worst_l2, worst_det, secs));
}

// ---------------------------------------------------------------- criterion 2
void criterion2() {
  HarmonicData h;
  StageSchedule s = build_universal(0.5, 6);
  BootstrapOptions bo;
  bo.max_grid = 1 << 13;
  BootstrapTrace tr = bootstrap_trace(h, s, bo);
  double upper = std::exp(1.0 / (std::exp2(0.5) - 1.0));
  double c_min = 1e300, c_max = 0.0, worst_a = 0.0;
  double first_a = -1.0;
  int checked = 0;
  for (const auto& r : tr.records) {
    if (r.initial) continue;
    double pred = std::exp2(0.25 * r.j * (r.j + 1));
    double ratio = r.h1 / tr.theta0_h1 / pred;
    c_min = std::min(c_min, ratio);
    c_max = std::max(c_max, ratio);
    worst_a = std::max(worst_a, r.a_ratio / (2.0 * std::exp2(-0.5 * r.j)));
    if (first_a < 0.0) first_a = r.a_ratio;
    ++checked;
  }
  bool ok = checked >= 4 && c_min > 0.05 && c_max <= upper && worst_a <= 1.0 &&
            first_a < 0.6;
  report(2, ok,
         fmt("H1 growth c in [%.3f, %.3f] (floor 0.05, cap %.2f), "
             "A_j/(2 2^-aj) max %.3f (<=1), first A %.3f (<3/5), stages %d",
             c_min, c_max, upper, worst_a, first_a, checked));
}

// ---------------------------------------------------------------- criterion 3
void criterion3() {
  HarmonicData h;
  StageSchedule s = build_universal(0.5, 4);
  SpectralField f0 = harmonic_field(h, 1024, 1024);
  SolverConfig cfg;
  cfg.nx = 1024;
  cfg.ny = 1024;
  cfg.substeps_per_stage = 128;
  cfg.ledger_stride = 8;
  cfg.kappa = 0.0;
  shared.inv_ledger = run(f0, s, cfg).ledger;
  shared.theta0_l2 = h.l2();
  double band_min = 1e300, band_max = 0.0;
  for (double kappa : {1e-3, 1e-4, 1e-5}) {
    cfg.kappa = kappa;
    RunResult r = run(f0, s, cfg);
    auto ratios = h2_ratio_trace(r.ledger, shared.inv_ledger);
    double m = 0.0;
    bool finite = true;
    for (const auto& p : ratios) {
      finite = finite && std::isfinite(p.ratio);
      m = std::max(m, p.ratio);
    }
    band_min = std::min(band_min, m);
    band_max = std::max(band_max, m);
    shared.visc_ledgers.push_back(std::move(r.ledger));
    if (!finite) {
      report(3, false, "non-finite H2 ratio");
      return;
    }
  }
  bool ok = band_max / band_min < 3.0;
  report(3, ok,
         fmt("sup_t |theta^k|_H2 / |theta|_H1^2 in [%.4g, %.4g] across kappa "
             "in {1e-3,1e-4,1e-5}: spread %.2f (<3)",
             band_min, band_max, band_max / band_min));
}

// ---------------------------------------------------------------- criterion 4
void criterion4() {
  double t0sq = shared.theta0_l2 * shared.theta0_l2;
  double worst = 0.0;
  int runs = 0;
  for (const auto& l : shared.visc_ledgers) {
    worst = std::max(worst, l.final_residual() / t0sq);
    ++runs;
  }
  if (shared.sweep_ok) {
    double s0sq = shared.sweep.theta0_l2 * shared.sweep.theta0_l2;
    for (const auto& kr : shared.sweep.results) {
      if (kr.trimmed) continue;
      worst = std::max(worst, kr.residual / s0sq);
      ++runs;
    }
  }
  for (const auto& [resid, t0sq] : shared.extra_resid) {
    worst = std::max(worst, resid / t0sq);
    ++runs;
  }
  bool ok = runs >= 6 && worst <= 1e-6;
  report(4, ok,
         fmt("energy balance: max residual %.3e |theta0|^2 over %d viscous "
             "runs at 128 substeps (<=1e-6)",
             worst, runs));
}

// ---------------------------------------------------------------- criterion 5
void criterion5() {
  RunConfig c;
  c.experiment = "acceptance-sweep";
  c.alpha = 0.5;
  c.kappas = {1e-3, 3e-4, 1e-4, 3e-5};
  c.nx = 2048;
  c.ny = 2048;
  c.j_max = 5;
  c.substeps = 128;
  c.ledger_stride = 16;
  c.outdir = "acceptance_out/sweep";
  c.jmax_sensitivity = true;
  SweepReport rep = exp_sweep(c);
  shared.sweep = rep;
  shared.sweep_ok = true;
  double t0sq = rep.theta0_l2 * rep.theta0_l2;
  // thresholds frozen from the first oracle-validated sweep: the truncated
  // program at 2048^2/j5 dissipates 0.56..0.96% of the energy over the
  // ladder; floor 0.004 keeps a 1.4x margin, ratio 2 as specified
  bool plateau = rep.chi_min / t0sq > 0.004 && rep.plateau_ratio <= 2.0;

  // contrast control: u == 0 decays by the heat kernel
  RunConfig hc = c;
  hc.nx = 256;
  hc.ny = 256;
  hc.zero_velocity = true;
  hc.outdir = "acceptance_out/sweep_control";
  hc.jmax_sensitivity = false;
  SweepReport ctl = exp_sweep(hc);
  double worst_ctl = 0.0;
  for (const auto& kr : ctl.results) {
    double exact = 0.5 * t0sq * (1.0 - std::exp(-4.0 * kr.kappa));
    worst_ctl = std::max(worst_ctl, std::fabs(kr.chi / exact - 1.0));
  }
  bool ok = plateau && worst_ctl < 0.01;
  report(5, ok,
         fmt("dissipation plateau: chi/|theta0|^2 in [%.4f, %.4f], ratio %.2f "
             "(<=2, floor 0.004); heat control off by %.2e (<1e-2); "
             "j_max sensitivity %.2f",
             rep.chi_min / t0sq, rep.chi_max / t0sq, rep.plateau_ratio,
             worst_ctl, rep.sensitivity_dchi_rel));
}

// ---------------------------------------------------------------- criterion 6
void criterion6() {
  // Theorem 1.3 fixes no alpha; alpha = 0.9 packs three cascade decades into
  // a 2048^2-resolvable program so the gap stabilizes over two kappa decades.
  // Per-kappa substeps keep every run's energy residual below 1e-6 |theta0|^2.
  const double kappas[3] = {2e-3, 2e-4, 2e-5};
  const int substeps[3] = {448, 384, 128};
  double gap_min = 1e300, gap_max = 0.0, rev_err = 0.0, worst_resid = 0.0;
  for (int i = 0; i < 3; ++i) {
    RunConfig c;
    c.experiment = "acceptance-nonuniq";
    c.alpha = 0.9;
    c.kappas = {kappas[i]};
    c.nx = 2048;
    c.ny = 2048;
    c.j_max = 4;
    c.substeps = substeps[i];
    c.ledger_stride = 32;
    c.outdir = fmt("acceptance_out/nonuniq_k%d", i);
    NonUniqReport rep = exp_nonuniq(c);
    rev_err = std::max(rev_err, rep.reversible_error);
    double t0sq = harmonic_field(HarmonicData{}, 64, 64).l2();
    t0sq *= t0sq;
    for (const auto& b : rep.branches) {
      gap_min = std::min(gap_min, b.gap);
      gap_max = std::max(gap_max, b.gap);
      shared.nonuniq_gaps.push_back(b.gap);
      shared.extra_resid.push_back({b.residual, t0sq});
    }
  }
  (void)worst_resid;
  double mid = 0.0;
  for (double g : shared.nonuniq_gaps) mid += g;
  mid /= static_cast<double>(shared.nonuniq_gaps.size());
  bool stable = gap_min > 0.02 && gap_max / mid <= 1.2 && gap_min / mid >= 0.8;
  bool ok = rev_err <= 1e-10 && stable;
  report(6, ok,
         fmt("non-uniqueness: reversible error %.2e (<=1e-10); viscous gap in "
             "[%.4f, %.4f] over two kappa decades (floor 0.02, +-20%% about "
             "the mean %.4f)",
             rev_err, gap_min, gap_max, mid));
}

// ---------------------------------------------------------------- criterion 7
void criterion7() {
  RunConfig c;
  c.outdir = "acceptance_out/oracle";
  c.substeps = 64;
  OracleValidation v = exp_oracle_validate(1e-3, c);
  double chi_rel = std::fabs(v.study.chi_extrapolated / v.chi_spectral - 1.0);
  bool ok = v.spectral_vs_fd_rel_l2 <= 2e-3 && v.study.observed_order >= 1.8 &&
            chi_rel <= 0.05;
  report(7, ok,
         fmt("cross-validation: spectral vs FD rel L2 %.2e (<=2e-3), FD order "
             "%.2f (>=1.8), extrapolated chi off by %.2e (<=5e-2)",
             v.spectral_vs_fd_rel_l2, v.study.observed_order, chi_rel));
}

// ---------------------------------------------------------------- criterion 8
void criterion8() {
  HarmonicData h;
  SpectralField f0 = harmonic_field(h, 128, 128);
  Stage a;
  a.duration = 0.3;
  a.freq = 2;
  a.eps = 0.3;
  a.horizontal = true;
  Stage b;
  b.duration = 0.25;
  b.freq = 3;
  b.eps = 0.25;
  b.horizontal = false;
  StageSchedule s = make_custom_schedule({a, b});
  auto at = [&](int sub) {
    SolverConfig cfg;
    cfg.kappa = 1e-2;
    cfg.substeps_per_stage = sub;
    cfg.nx = 128;
    cfg.ny = 128;
    cfg.nyquist_fraction = 1.0;
    return run(f0, s, cfg).field;
  };
  SpectralField ref = at(512);
  auto dev = [&](const SpectralField& f) {
    double e2 = 0.0;
    for (std::size_t i = 0; i < f.c.size(); ++i)
      e2 += std::norm(f.c[i] - ref.c[i]);
    return std::sqrt(e2);
  };
  double e8 = dev(at(8)), e16 = dev(at(16)), e32 = dev(at(32));
  double r1 = e8 / e16, r2 = e16 / e32;
  bool ok = r1 >= 3.5 && r1 <= 4.5 && r2 >= 3.5 && r2 <= 4.5;
  report(8, ok,
         fmt("Strang order: doubling substeps shrinks the deviation by %.2f "
             "and %.2f (within [3.5, 4.5])",
             r1, r2));
}

// ---------------------------------------------------------------- criterion 9
void criterion9() {
  if (shared.visc_ledgers.empty()) {
    report(9, false, "missing shared ledgers (criterion 3 did not run)");
    return;
  }
  CriterionReport c1 =
      criterion1_check(shared.inv_ledger, shared.visc_ledgers[0],
                       shared.theta0_l2);
  CriterionReport c2 = criterion2_check(shared.inv_ledger, shared.theta0_l2);
  StageSchedule s6 = build_universal(0.5, 6);
  CriterionReport c3 =
      criterion3_check(shared.inv_ledger, s6, shared.theta0_l2);
  bool ratios_exact = !c3.grad_u_ratio.empty();
  for (const auto& [j, ratio] : c3.grad_u_ratio) {
    double expect = std::exp2(static_cast<int>(std::ceil(1.5 * j)) - j);
    if (ratio != expect) ratios_exact = false;
    if (j % 2 == 0 && ratio != std::exp2(0.5 * j)) ratios_exact = false;
  }
  bool ok = c1.constant > 0.0 && c2.growth_factor > 1.2 && ratios_exact &&
            !c3.grad_u_bounded;
  report(9, ok,
         fmt("checkers: inf c = %.4f (>0); C(t) grows %.2fx (non-mixing); "
             "grad-u ratio = 2^{ceil((1+a)j)-j} exactly, unbounded (hypothesis "
             "3 honestly fails)",
             c1.constant, c2.growth_factor));
}

// --------------------------------------------------------------- criterion 10
void criterion10() {
  RunConfig c;
  c.experiment = "acceptance-oc";
  c.alpha = 0.5;
  c.kappas = {1e-3, 1e-4};
  c.nx = 1024;
  c.ny = 1024;
  c.j_max = 4;
  c.substeps = 64;
  c.ledger_stride = 16;
  c.outdir = "acceptance_out/oc";
  c.beta_probe = {0.125, 0.25, 0.5};
  OCCompareReport rep = exp_oc_compare(c);
  bool all_ok = !rep.rows.empty();
  for (const auto& r : rep.rows) all_ok = all_ok && r.satisfied;
  // exponent arithmetic against hand values at three (alpha, beta) pairs
  bool expo = true;
  auto near = [](double a, double b) { return std::fabs(a - b) < 1e-12; };
  expo = expo && near(obukhov_corrsin_bound(1, 1, 1e-4, 1, 1, 1).exponent, 1.0);
  expo = expo &&
         near(obukhov_corrsin_bound(0.5, 0.25, 1e-3, 1, 1, 1).exponent, 0.0);
  expo = expo && near(obukhov_corrsin_bound(0.5, 0.5, 1e-3, 1, 1, 1).exponent,
                      1.0 / 3.0);
  expo = expo &&
         near(obukhov_corrsin_bound(1, 1, 1e-4, 1, 1, 1).bound, 3e-4);
  bool growing = rep.breakdown.size() >= 2 &&
                 rep.breakdown.back().second > 2.0 * rep.breakdown.front().second;
  bool ok = all_ok && expo && growing;
  report(10, ok,
         fmt("scaling bound: measured chi below the assembled bound for all "
             "%zu (kappa,beta) pairs; exponents match hand arithmetic; "
             "Hoelder quotient grows %.1fx along the cascade",
             rep.rows.size(),
             rep.breakdown.empty()
                 ? 0.0
                 : rep.breakdown.back().second / rep.breakdown.front().second));
}

}  // namespace

int main(int argc, char** argv) {
  bool only[11] = {};
  bool have_only = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      have_only = true;
      for (const char* p = argv[i + 1]; *p;) {
        int v = std::atoi(p);
        if (v >= 1 && v <= 10) only[v] = true;
        while (*p && *p != ',') ++p;
        if (*p == ',') ++p;
      }
    }
  }
  auto want = [&](int id) { return !have_only || only[id]; };
  auto t0 = std::chrono::steady_clock::now();
  ensure_outdir("acceptance_out");
  // order: 3 before 4/9 (shared ledgers), 5 before 4 (sweep residuals)
  if (want(1)) criterion1();
  if (want(2)) criterion2();
  if (want(3)) criterion3();
  if (want(5)) criterion5();
  if (want(6)) criterion6();
  if (want(4)) criterion4();
  if (want(7)) criterion7();
  if (want(8)) criterion8();
  if (want(9)) criterion9();
  if (want(10)) criterion10();
  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::printf("---\n%d criterion(s) failed, total %.0f s\n", failures, secs);
  return failures;
}
