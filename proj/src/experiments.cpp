#include "shearlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "shearlab/diagnostics.hpp"

namespace shearlab {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string Theta0Spec::describe() const {
  if (kind == Kind::File) return "file:" + file;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s:%d,%d,%.17g",
                harmonic_kind_name(harmonic.kind), harmonic.M, harmonic.L,
                harmonic.amplitude);
  return buf;
}

std::string RunConfig::canonical_json() const {
  json j;
  j["experiment"] = experiment;
  j["alpha"] = alpha;
  j["theta0"] = theta0.describe();
  j["kappas"] = kappas;
  j["nx"] = nx;
  j["ny"] = ny;
  j["j_max"] = j_max;
  j["substeps"] = substeps;
  j["ledger_stride"] = ledger_stride;
  j["strict"] = strict;
  j["seed"] = seed;
  j["include_tail"] = include_tail;
  j["perturb_eps"] = perturb_eps;
  j["perturb_band"] = perturb_band;
  j["beta_probe"] = beta_probe;
  j["jmax_sensitivity"] = jmax_sensitivity;
  j["zero_velocity"] = zero_velocity;
  return j.dump(2);
}

std::uint64_t RunConfig::content_hash() const {
  std::uint64_t h = fnv1a(canonical_json());
  if (theta0.kind == Theta0Spec::Kind::File) {
    std::ifstream in(theta0.file, std::ios::binary);
    if (in) {
      std::ostringstream ss;
      ss << in.rdbuf();
      h = fnv1a(ss.str(), h);
    }
  }
  return h;
}

SpectralField make_theta0(const RunConfig& cfg) {
  if (cfg.theta0.kind == Theta0Spec::Kind::File) {
    SpectralField f = load_field_file(cfg.theta0.file);
    return embed_field(f, cfg.nx, cfg.ny);
  }
  return harmonic_field(cfg.theta0.harmonic, cfg.nx, cfg.ny);
}

SpectralField random_band_limited(int band, std::uint64_t seed, int nx, int ny) {
  if (band < 1 || band >= std::min(nx, ny) / 2)
    throw ConfigError("perturbation band must fit below Nyquist");
  SpectralField f(nx, ny);
  std::uint64_t counter = 0;
  // fixed enumeration order: ky = 0..band, kx = -band..band, half-spectrum
  for (int ky = 0; ky <= band; ++ky)
    for (int kx = -band; kx <= band; ++kx) {
      if (ky == 0 && kx <= 0) continue;
      double re = counter_rng_unit(seed, counter++) - 0.5;
      double im = counter_rng_unit(seed, counter++) - 0.5;
      f.at(kx, ky) = std::complex<double>(re, im);
      f.at(-kx, -ky) = std::complex<double>(re, -im);
    }
  f.mean_zero = true;
  double n = f.l2();
  for (auto& z : f.c) z /= n;
  return f;
}

void ensure_outdir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory: " + dir);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << text;
}

namespace {

void write_config_echo(const RunConfig& cfg) {
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(cfg.content_hash()));
  json j = json::parse(cfg.canonical_json());
  j["input_hash"] = hash;
  write_text_file(cfg.outdir + "/config.json", j.dump(2) + "\n");
}

int guard_jmax(const RunConfig& cfg, std::vector<std::string>* notices) {
  // velocity Nyquist guard: N_j <= (n/2)/4 on the shear axis (square grids
  // here use the smaller side)
  int n_min = std::min(cfg.nx, cfg.ny);
  double limit = 0.25 * (n_min / 2.0);
  int j = cfg.j_max;
  StageSchedule s = build_universal(cfg.alpha, cfg.j_max);
  while (j > 0) {
    const Stage& st = s.stages[static_cast<std::size_t>(j)];
    if (!st.active || static_cast<double>(st.freq) <= limit) break;
    --j;
  }
  if (j != cfg.j_max && notices) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "j_max trimmed %d -> %d by the shear Nyquist guard at %dx%d",
                  cfg.j_max, j, cfg.nx, cfg.ny);
    notices->push_back(buf);
  }
  return j;
}

// Smallest kappa the grid resolves: either the whole inviscid cascade fits
// below Nyquist, or the diffusive cutoff during the last stage does.
bool kappa_resolved(const RunConfig& cfg, const StageSchedule& s,
                    const SpectralField& theta0, double kappa) {
  InitialData d(theta0);
  auto [bx, by] = support_bound(d, s, s.j_max);
  double nyq_x = cfg.nx / 2.0, nyq_y = cfg.ny / 2.0;
  if (bx <= 0.9 * nyq_x && by <= 0.9 * nyq_y) return true;
  if (kappa <= 0.0) return false;
  double t_last = 0.0;
  for (const Stage& st : s.stages)
    if (st.active && st.duration > 0.0) t_last = st.duration;
  double k_need = std::sqrt(1.0 / (2.0 * kappa * t_last));
  return k_need <= 0.75 * std::min(nyq_x, nyq_y);
}

std::string kappa_tag(double k) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", k);
  std::string s = buf;
  for (char& c : s)
    if (c == '.' || c == '+') c = '_';
  return s;
}

SweepReport sweep_with_schedule(const RunConfig& cfg, const StageSchedule& s,
                                const SpectralField& theta0,
                                const StageCallback& cb = {}) {
  ensure_outdir(cfg.outdir);
  SweepReport rep;
  rep.config = cfg;
  rep.j_max_effective = s.j_max;
  rep.theta0_l2 = theta0.l2();
  double tail = cfg.include_tail ? 1.0 - s.total_time() : 0.0;
  for (double kappa : cfg.kappas) {
    KappaResult kr;
    kr.kappa = kappa;
    if (!kappa_resolved(cfg, s, theta0, kappa)) {
      kr.trimmed = true;
      char buf[120];
      std::snprintf(buf, sizeof buf,
                    "kappa %.3g trimmed: diffusive cutoff exceeds the grid",
                    kappa);
      rep.notices.push_back(buf);
      if (cfg.strict) throw ResolutionError(buf);
      rep.results.push_back(kr);
      continue;
    }
    SolverConfig sc;
    sc.kappa = kappa;
    sc.substeps_per_stage = cfg.substeps;
    sc.nx = cfg.nx;
    sc.ny = cfg.ny;
    sc.ledger_stride = cfg.ledger_stride;
    sc.strict = cfg.strict;
    sc.zero_velocity = cfg.zero_velocity;
    RunResult r = run(theta0, s, sc, cb);
    if (tail > 0.0)
      run_diffusion_interval(r.field, kappa, tail, 8, &r.ledger);
    kr.chi = r.ledger.final_chi();
    kr.final_l2 = r.ledger.rows.back().l2;
    kr.residual = r.ledger.final_residual();
    kr.ledger_file = cfg.outdir + "/ledger_k" + kappa_tag(kappa) + ".csv";
    write_ledger_csv_file(r.ledger, kr.ledger_file);
    rep.results.push_back(kr);
  }
  double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0;
  for (const KappaResult& kr : rep.results) {
    if (kr.trimmed) continue;
    cmin = std::min(cmin, kr.chi);
    cmax = std::max(cmax, kr.chi);
  }
  rep.chi_min = cmin;
  rep.chi_max = cmax;
  rep.plateau_ratio = cmin > 0.0 ? cmax / cmin : 0.0;

  if (cfg.jmax_sensitivity && s.j_max > s.first_active() &&
      !cfg.kappas.empty()) {
    double mid = cfg.kappas[cfg.kappas.size() / 2];
    RunConfig c2 = cfg;
    c2.j_max = s.j_max - 1;
    StageSchedule s2 = build_universal(cfg.alpha, c2.j_max);
    SolverConfig sc;
    sc.kappa = mid;
    sc.substeps_per_stage = cfg.substeps;
    sc.nx = cfg.nx;
    sc.ny = cfg.ny;
    sc.ledger_stride = cfg.ledger_stride;
    RunResult r = run(theta0, s2, sc);
    if (cfg.include_tail && 1.0 - s2.total_time() > 0.0)
      run_diffusion_interval(r.field, mid, 1.0 - s2.total_time(), 8, &r.ledger);
    double chi_ref = 0.0;
    for (const KappaResult& kr : rep.results)
      if (kr.kappa == mid) chi_ref = kr.chi;
    if (chi_ref > 0.0)
      rep.sensitivity_dchi_rel =
          std::fabs(r.ledger.final_chi() - chi_ref) / chi_ref;
    char buf[120];
    std::snprintf(buf, sizeof buf,
                  "chi sensitivity to j_max at kappa=%.3g: relative %.3g", mid,
                  rep.sensitivity_dchi_rel);
    rep.notices.push_back(buf);
  }
  return rep;
}

}  // namespace

void write_sweep_outputs(const SweepReport& rep) {
  std::ostringstream csv;
  csv << "kappa,chi,chi_over_theta0sq,final_l2,residual,trimmed\n";
  char buf[256];
  double t2 = rep.theta0_l2 * rep.theta0_l2;
  for (const KappaResult& kr : rep.results) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                  kr.kappa, kr.chi, kr.chi / t2, kr.final_l2, kr.residual,
                  kr.trimmed ? 1 : 0);
    csv << buf;
  }
  write_text_file(rep.config.outdir + "/sweep.csv", csv.str());
  std::ostringstream notes;
  for (const std::string& n : rep.notices) notes << n << "\n";
  std::snprintf(buf, sizeof buf,
                "j_max_effective %d\nchi_min %.17g\nchi_max %.17g\n"
                "plateau_ratio %.17g\n",
                rep.j_max_effective, rep.chi_min, rep.chi_max,
                rep.plateau_ratio);
  notes << buf;
  write_text_file(rep.config.outdir + "/summary.txt", notes.str());
  write_text_file(rep.config.outdir + "/plot.gp",
                  "set logscale xy\nset xlabel 'kappa'\nset ylabel 'chi'\n"
                  "set datafile separator ','\n"
                  "plot 'sweep.csv' using 1:2 skip 1 with linespoints title "
                  "'dissipation'\n");
}

SweepReport exp_sweep(const RunConfig& cfg) {
  ensure_outdir(cfg.outdir);
  write_config_echo(cfg);
  RunConfig c = cfg;
  std::vector<std::string> notices;
  int jm = guard_jmax(cfg, &notices);
  c.j_max = jm;
  StageSchedule s = build_universal(c.alpha, jm);
  save_schedule_file(s, c.outdir + "/schedule.txt");
  SpectralField theta0 = make_theta0(c);
  SweepReport rep = sweep_with_schedule(c, s, theta0);
  rep.notices.insert(rep.notices.begin(), notices.begin(), notices.end());
  write_sweep_outputs(rep);
  return rep;
}

PerturbedReport exp_perturbed(const RunConfig& cfg) {
  ensure_outdir(cfg.outdir);
  write_config_echo(cfg);
  if (cfg.theta0.kind != Theta0Spec::Kind::Harmonic)
    throw ConfigError("exp_perturbed wants a harmonic base state");
  RunConfig c = cfg;
  std::vector<std::string> notices;
  c.j_max = guard_jmax(cfg, &notices);
  StageSchedule s = build_universal(c.alpha, c.j_max);

  SpectralField psi = harmonic_field(c.theta0.harmonic, c.nx, c.ny);
  double psi_l2 = psi.l2();
  SpectralField eta = random_band_limited(c.perturb_band, c.seed, c.nx, c.ny);
  // orthogonalize against the base harmonic's modes, renormalize
  for (int iy = 0; iy < psi.ny && c.perturb_eps > 0.0; ++iy)
    for (int ix = 0; ix < psi.nx; ++ix) {
      std::size_t i = static_cast<std::size_t>(iy) * psi.nx + ix;
      if (psi.c[i] != std::complex<double>(0.0, 0.0)) eta.c[i] = 0.0;
    }
  double en = eta.l2();
  if (en <= 0.0) throw NumericalError("perturbation vanished");
  for (auto& z : eta.c) z *= 1.0 / en;

  SpectralField theta0 = psi;
  for (std::size_t i = 0; i < theta0.c.size(); ++i)
    theta0.c[i] += c.perturb_eps * psi_l2 * eta.c[i];
  theta0.mean_zero = true;

  PerturbedReport rep;
  rep.theta0L_l2 = psi_l2;
  rep.theta0H_l2 = c.perturb_eps * psi_l2;
  double t0sq = theta0.l2() * theta0.l2();
  rep.split_defect = std::fabs(t0sq - rep.theta0L_l2 * rep.theta0L_l2 -
                               rep.theta0H_l2 * rep.theta0H_l2) /
                     t0sq;
  rep.sweep = sweep_with_schedule(c, s, theta0);
  rep.sweep.notices.insert(rep.sweep.notices.begin(), notices.begin(),
                           notices.end());

  // pure-harmonic reference runs on the same kappas, for the splitting bound
  RunConfig cp = c;
  cp.outdir = c.outdir + "/pure";
  ensure_outdir(cp.outdir);
  SweepReport pure = sweep_with_schedule(cp, s, psi);
  std::ostringstream csv;
  csv << "kappa,final_l2,bound_rhs,final_l2_pure\n";
  char buf[200];
  for (std::size_t i = 0; i < rep.sweep.results.size(); ++i) {
    const KappaResult& kr = rep.sweep.results[i];
    const KappaResult& pr = pure.results[i];
    double chi_frac = pr.chi / (psi_l2 * psi_l2);
    double rhs = std::sqrt(std::max(0.0, 1.0 - 2.0 * chi_frac)) * psi_l2 +
                 rep.theta0H_l2;
    rep.bound_rhs.push_back(rhs);
    rep.final_l2_pure.push_back(pr.final_l2);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", kr.kappa,
                  kr.final_l2, rhs, pr.final_l2);
    csv << buf;
  }
  write_text_file(c.outdir + "/perturbed.csv", csv.str());
  write_sweep_outputs(rep.sweep);
  return rep;
}

AdaptiveReport exp_adaptive(const RunConfig& cfg) {
  ensure_outdir(cfg.outdir);
  write_config_echo(cfg);
  RunConfig c = cfg;
  std::vector<std::string> notices;
  c.j_max = guard_jmax(cfg, &notices);
  SpectralField theta0 = make_theta0(c);
  InitialData data(theta0);
  AdaptiveOptions ao;
  ao.max_grid = std::min(std::max(c.nx, c.ny), 1 << 12);
  StageSchedule s = build_adaptive(data, c.alpha, c.j_max, ao);
  AdaptiveReport rep;
  rep.a0 = s.a0;
  for (const Stage& st : s.stages)
    if (st.active) rep.signs.push_back(st.sign);
  rep.schedule_file = c.outdir + "/schedule.txt";
  save_schedule_file(s, rep.schedule_file);
  rep.sweep = sweep_with_schedule(c, s, theta0);
  rep.sweep.notices.insert(rep.sweep.notices.begin(), notices.begin(),
                           notices.end());
  write_sweep_outputs(rep.sweep);
  std::ostringstream ss;
  ss << "a0 " << s.a0 << "\nsigns";
  for (int v : rep.signs) ss << " " << v;
  ss << "\n";
  write_text_file(c.outdir + "/adaptive.txt", ss.str());
  return rep;
}

NonUniqReport exp_nonuniq(const RunConfig& cfg) {
  ensure_outdir(cfg.outdir);
  write_config_echo(cfg);
  RunConfig c = cfg;
  std::vector<std::string> notices;
  c.j_max = guard_jmax(cfg, &notices);
  StageSchedule s = build_universal(c.alpha, c.j_max);
  SpectralField theta0 = make_theta0(c);
  NonUniqReport rep;
  rep.config = c;

  // Reversible branch: the composed backward map of [program; mirrored
  // program] is the identity; evaluate theta0 through it and compare.
  {
    std::vector<Stage> both;
    for (const Stage& st : s.stages)
      if (st.active) both.push_back(st);
    for (auto it = s.stages.rbegin(); it != s.stages.rend(); ++it) {
      if (!it->active) continue;
      Stage st = *it;
      st.sign = 1 - st.sign;
      both.push_back(st);
    }
    StageSchedule round_trip = make_custom_schedule(std::move(both));
    InitialData d(theta0);
    int n = 256;
    double h = two_pi / n, err2 = 0.0, ref2 = 0.0;
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        double x = ix * h, y = iy * h;
        double a = evaluate(d, round_trip, round_trip.j_max, x, y);
        double b = d.value(x, y);
        err2 += (a - b) * (a - b);
        ref2 += b * b;
      }
    rep.reversible_error = std::sqrt(err2 / ref2);
  }

  double gmin = std::numeric_limits<double>::infinity(), gmax = 0.0;
  for (double kappa : c.kappas) {
    SolverConfig sc;
    sc.kappa = kappa;
    sc.substeps_per_stage = c.substeps;
    sc.nx = c.nx;
    sc.ny = c.ny;
    sc.ledger_stride = c.ledger_stride;
    RunResult r = run_forward_reversed(theta0, s, sc, c.include_tail);
    NonUniqReport::Branch b;
    b.kappa = kappa;
    double t0sq = r.ledger.theta0_l2 * r.ledger.theta0_l2;
    double tl = r.ledger.rows.back().l2;
    b.terminal_energy_ratio = tl * tl / t0sq;
    b.gap = 1.0 - b.terminal_energy_ratio;
    b.residual = r.ledger.final_residual();
    b.ledger_file = c.outdir + "/nonuniq_k" + kappa_tag(kappa) + ".csv";
    write_ledger_csv_file(r.ledger, b.ledger_file);
    rep.branches.push_back(b);
    gmin = std::min(gmin, b.gap);
    gmax = std::max(gmax, b.gap);
  }
  rep.gap_min = gmin;
  rep.gap_max = gmax;
  write_nonuniq_outputs(rep);
  return rep;
}

void write_nonuniq_outputs(const NonUniqReport& rep) {
  std::ostringstream csv;
  csv << "kappa,terminal_energy_ratio,gap\n";
  char buf[160];
  for (const auto& b : rep.branches) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", b.kappa,
                  b.terminal_energy_ratio, b.gap);
    csv << buf;
  }
  write_text_file(rep.config.outdir + "/nonuniq.csv", csv.str());
  std::snprintf(buf, sizeof buf,
                "reversible_error %.17g\ngap_min %.17g\ngap_max %.17g\n",
                rep.reversible_error, rep.gap_min, rep.gap_max);
  write_text_file(rep.config.outdir + "/nonuniq_summary.txt", buf);
  write_text_file(rep.config.outdir + "/plot.gp",
                  "set logscale x\nset xlabel 'kappa'\nset ylabel 'terminal "
                  "energy ratio'\nset datafile separator ','\n"
                  "plot 'nonuniq.csv' using 1:2 skip 1 with linespoints title "
                  "'vanishing-viscosity branch'\n");
}

DynamoReport exp_dynamo(const RunConfig& cfg) {
  SweepReport sw = exp_sweep(cfg);
  DynamoReport rep;
  rep.config = sw.config;
  std::vector<double> lx, ly;
  for (const KappaResult& kr : sw.results) {
    if (kr.trimmed) continue;
    DynamoReport::Row r;
    r.kappa = kr.kappa;
    r.chi = kr.chi;
    r.b_energy_time_integral = kr.chi / kr.kappa;
    rep.rows.push_back(r);
    lx.push_back(std::log(1.0 / kr.kappa));
    ly.push_back(std::log(r.b_energy_time_integral));
  }
  if (lx.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    double n = static_cast<double>(lx.size());
    rep.growth_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  write_dynamo_outputs(rep);
  return rep;
}

void write_dynamo_outputs(const DynamoReport& rep) {
  std::ostringstream csv;
  csv << "kappa,b_energy_time_integral,chi\n";
  char buf[160];
  for (const auto& r : rep.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r.kappa,
                  r.b_energy_time_integral, r.chi);
    csv << buf;
  }
  write_text_file(rep.config.outdir + "/dynamo.csv", csv.str());
  std::snprintf(buf, sizeof buf, "growth_exponent %.17g\n",
                rep.growth_exponent);
  write_text_file(rep.config.outdir + "/dynamo_summary.txt", buf);
}

OCCompareReport exp_oc_compare(const RunConfig& cfg) {
  ensure_outdir(cfg.outdir);
  write_config_echo(cfg);
  RunConfig c = cfg;
  std::vector<std::string> notices;
  c.j_max = guard_jmax(cfg, &notices);
  StageSchedule s = build_universal(c.alpha, c.j_max);
  SpectralField theta0 = make_theta0(c);
  OCCompareReport rep;
  rep.config = c;
  std::vector<double> betas =
      c.beta_probe.empty() ? std::vector<double>{0.125, 0.25, 0.5} : c.beta_probe;

  // probe separations: between grid scale and pi, geometric
  std::vector<double> ells;
  for (double ell = two_pi / (std::min(c.nx, c.ny) / 4); ell < 3.0; ell *= 2.0)
    ells.push_back(ell);

  for (const Stage& st : s.stages)
    if (st.active)
      rep.u_l1_calpha += st.duration * stage_velocity_holder(st, c.alpha, ells);

  for (double kappa : c.kappas) {
    SolverConfig sc;
    sc.kappa = kappa;
    sc.substeps_per_stage = c.substeps;
    sc.nx = c.nx;
    sc.ny = c.ny;
    sc.ledger_stride = c.ledger_stride;
    std::vector<double> sup_series(ells.size(), 0.0);
    auto cb = [&](const SpectralField& f, double) {
      std::vector<double> snap = increment_sup(f, ells);
      for (std::size_t i = 0; i < ells.size(); ++i)
        sup_series[i] = std::max(sup_series[i], snap[i]);
    };
    RunResult r = run(theta0, s, sc, cb);
    if (c.include_tail && 1.0 - s.total_time() > 0.0)
      run_diffusion_interval(r.field, kappa, 1.0 - s.total_time(), 4, &r.ledger);
    std::vector<double> snap = increment_sup(r.field, ells);
    for (std::size_t i = 0; i < ells.size(); ++i)
      sup_series[i] = std::max(sup_series[i], snap[i]);
    double chi = r.ledger.final_chi();
    for (double beta : betas) {
      OCCompareReport::Row row;
      row.kappa = kappa;
      row.beta = beta;
      for (std::size_t i = 0; i < ells.size(); ++i)
        row.theta_cbeta = std::max(
            row.theta_cbeta, sup_series[i] / std::pow(ells[i], beta));
      OCBound b = obukhov_corrsin_bound(c.alpha, beta, kappa, row.theta_cbeta,
                                        rep.u_l1_calpha, 1.0);
      row.bound = b.bound;
      row.chi = chi;
      row.satisfied = chi <= b.bound;
      rep.rows.push_back(row);
    }
  }

  // Hoelder breakdown along the inviscid cascade: quotient at scale 2pi/N_j
  InitialData d(theta0);
  double beta_ref = betas.front();
  for (const Stage& st : s.stages) {
    if (!st.active) continue;
    auto [nx, ny] = recommended_grid(d, s, st.index, 2.0, 64, 1 << 12);
    if (nx == 0) break;
    SampleOptions so;
    so.quiet = true;
    SpectralField f = sample_grid(d, s, st.index, nx, ny, so);
    double ell = two_pi / static_cast<double>(st.freq);
    std::vector<double> one{ell};
    double q = increment_sup(f, one)[0] / std::pow(ell, beta_ref);
    rep.breakdown.push_back({st.index, q});
  }
  write_oc_outputs(rep);
  return rep;
}

void write_oc_outputs(const OCCompareReport& rep) {
  std::ostringstream csv;
  csv << "kappa,beta,theta_cbeta,bound,chi,satisfied\n";
  char buf[200];
  for (const auto& r : rep.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                  r.kappa, r.beta, r.theta_cbeta, r.bound, r.chi,
                  r.satisfied ? 1 : 0);
    csv << buf;
  }
  write_text_file(rep.config.outdir + "/oc_compare.csv", csv.str());
  std::ostringstream bcsv;
  bcsv << "stage,quotient\n";
  for (const auto& [j, q] : rep.breakdown) {
    std::snprintf(buf, sizeof buf, "%d,%.17g\n", j, q);
    bcsv << buf;
  }
  write_text_file(rep.config.outdir + "/oc_breakdown.csv", bcsv.str());
  std::snprintf(buf, sizeof buf, "u_l1_calpha %.17g\n", rep.u_l1_calpha);
  write_text_file(rep.config.outdir + "/oc_summary.txt", buf);
}

StageSchedule validation_schedule() {
  std::vector<Stage> stages;
  Stage a;
  a.duration = 0.3;
  a.freq = 2;
  a.eps = 0.3;
  a.horizontal = true;
  a.sign = 0;
  stages.push_back(a);
  Stage b;
  b.duration = 0.25;
  b.freq = 2;
  b.eps = 0.25;
  b.horizontal = false;
  b.sign = 0;
  stages.push_back(b);
  Stage c;
  c.duration = 0.2;
  c.freq = 3;
  c.eps = 0.2;
  c.horizontal = true;
  c.sign = 0;
  stages.push_back(c);
  return make_custom_schedule(std::move(stages));
}

OracleValidation exp_oracle_validate(double kappa, const RunConfig& cfg) {
  StageSchedule s = validation_schedule();
  HarmonicData h;  // sin(x) sin(y)
  OracleValidation v;

  int n = 256;
  SpectralField theta0 = harmonic_field(h, n, n);
  SolverConfig sc;
  sc.kappa = kappa;
  sc.substeps_per_stage = std::max(64, cfg.substeps);
  sc.nx = n;
  sc.ny = n;
  sc.nyquist_fraction = 1.0;  // gentle custom program, guard not binding
  RunResult spec_run = run(theta0, s, sc);
  v.chi_spectral = spec_run.ledger.final_chi();
  GridField spec_grid = field_to_grid(spec_run.field);

  GridField init(n, n);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix)
      init.at(ix, iy) = h.value(init.x(ix), init.y(iy));
  FdRunResult fd = fd_run(init, s, kappa, 4096.0);
  double d2 = 0.0, r2 = 0.0;
  for (std::size_t i = 0; i < spec_grid.v.size(); ++i) {
    double d = spec_grid.v[i] - fd.field.v[i];
    d2 += d * d;
    r2 += spec_grid.v[i] * spec_grid.v[i];
  }
  v.spectral_vs_fd_rel_l2 = std::sqrt(d2 / r2);
  v.study = convergence_study(s, kappa, h, 4096.0);
  if (!cfg.outdir.empty()) {
    ensure_outdir(cfg.outdir);
    std::ostringstream ss;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "spectral_vs_fd_rel_l2 %.17g\nchi_spectral %.17g\n"
                  "observed_order %.17g\nchi_extrapolated %.17g\n",
                  v.spectral_vs_fd_rel_l2, v.chi_spectral,
                  v.study.observed_order, v.study.chi_extrapolated);
    ss << buf;
    for (const auto& lv : v.study.levels) {
      std::snprintf(buf, sizeof buf, "grid %d chi %.17g err_vs_finer %.17g\n",
                    lv.n, lv.chi, lv.err_vs_finer);
      ss << buf;
    }
    write_text_file(cfg.outdir + "/oracle_validate.txt", ss.str());
  }
  return v;
}

}  // namespace shearlab
