// Command-line front end: builds fields and velocity programs, runs the
// inviscid and viscous solvers, and drives the experiment suite. Exit codes:
// 0 success, 2 configuration error, 3 resolution guard, 4 numerical failure.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "shearlab/diagnostics.hpp"
#include "shearlab/experiments.hpp"
#include "shearlab/inviscid.hpp"
#include "shearlab/oracle.hpp"

using namespace shearlab;

namespace {

Theta0Spec parse_theta0(const std::string& spec) {
  Theta0Spec t;
  auto colon = spec.find(':');
  std::string head = spec.substr(0, colon);
  if (head == "sinsin" || head == "sincos" || head == "cossin" ||
      head == "coscos") {
    if (colon == std::string::npos)
      throw ConfigError("harmonic spec needs indices, e.g. sinsin:1,1");
    t.kind = Theta0Spec::Kind::Harmonic;
    t.harmonic.kind = parse_harmonic_kind(head);
    std::string rest = spec.substr(colon + 1);
    double amp = 1.0;
    int m = 0, l = 0;
    int got = std::sscanf(rest.c_str(), "%d,%d,%lf", &m, &l, &amp);
    if (got < 2) throw ConfigError("bad harmonic spec: " + spec);
    t.harmonic.M = m;
    t.harmonic.L = l;
    t.harmonic.amplitude = amp;
    t.harmonic.validate();
    return t;
  }
  t.kind = Theta0Spec::Kind::File;
  t.file = head == "file" && colon != std::string::npos ? spec.substr(colon + 1)
                                                        : spec;
  return t;
}

struct CommonOpts {
  std::string theta0 = "sinsin:1,1";
  double alpha = 0.5;
  std::vector<double> kappas;
  int nx = 1024, ny = 1024;
  int jmax = 5;
  int substeps = 64;
  int stride = 8;
  std::string out = "out";
  std::uint64_t seed = 1;
  bool strict = false;
  bool no_tail = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_kappa = true) {
  cmd->add_option("--theta0", o.theta0,
                  "initial data: sinsin:M,L[,amp] (also sincos/cossin/coscos) "
                  "or a coefficient file path");
  cmd->add_option("--alpha", o.alpha, "velocity Hoelder exponent in (0,1)");
  if (with_kappa)
    cmd->add_option("--kappa", o.kappas, "diffusivity (repeatable)");
  cmd->add_option("--nx", o.nx, "grid size in x (power of two)");
  cmd->add_option("--ny", o.ny, "grid size in y (power of two)");
  cmd->add_option("--jmax", o.jmax, "last program stage");
  cmd->add_option("--substeps", o.substeps, "splitting substeps per stage");
  cmd->add_option("--stride", o.stride, "ledger row stride (substeps)");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--seed", o.seed, "seed for the counter RNG");
  cmd->add_flag("--strict", o.strict, "resolution warnings become errors");
  cmd->add_flag("--no-tail", o.no_tail, "stop at the truncated program end");
}

RunConfig to_config(const CommonOpts& o, const std::string& experiment) {
  RunConfig c;
  c.experiment = experiment;
  c.theta0 = parse_theta0(o.theta0);
  c.alpha = o.alpha;
  c.kappas = o.kappas.empty() ? std::vector<double>{1e-2, 1e-3, 1e-4, 1e-5}
                              : o.kappas;
  c.nx = o.nx;
  c.ny = o.ny;
  c.j_max = o.jmax;
  c.substeps = o.substeps;
  c.ledger_stride = o.stride;
  c.outdir = o.out;
  c.seed = o.seed;
  c.strict = o.strict;
  c.include_tail = !o.no_tail;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shearlab: alternating-shear passive scalar laboratory"};
  app.require_subcommand(1);

  CommonOpts o;

  auto* c_build = app.add_subcommand("build-field", "write a coefficient file");
  std::string build_out = "theta0.fld";
  double perturb = 0.0;
  int band = 8;
  add_common(c_build, o, false);
  c_build->add_option("--field-out", build_out, "output coefficient file");
  c_build->add_option("--perturb", perturb, "add seeded band-limited noise");
  c_build->add_option("--band", band, "perturbation band limit");

  auto* c_inv = app.add_subcommand("run-inviscid",
                                   "exact map evolution + bootstrap trace");
  add_common(c_inv, o, false);

  auto* c_visc = app.add_subcommand("run-viscous", "single viscous run");
  add_common(c_visc, o);

  auto* c_sweep = app.add_subcommand("sweep", "kappa sweep on the universal "
                                              "program");
  add_common(c_sweep, o);
  bool control = false;
  c_sweep->add_flag("--control", control, "u = 0 heat control");
  bool sens = false;
  c_sweep->add_flag("--jmax-sensitivity", sens, "extra run at j_max - 1");

  auto* c_pert = app.add_subcommand("perturbed", "universality near harmonics");
  add_common(c_pert, o);
  double eps = 0.01;
  c_pert->add_option("--eps", eps, "perturbation fraction");
  c_pert->add_option("--band", band, "perturbation band limit");

  auto* c_adap = app.add_subcommand("adaptive", "data-adaptive program");
  add_common(c_adap, o);

  auto* c_nonu = app.add_subcommand("nonuniq", "two weak solutions demo");
  add_common(c_nonu, o);

  auto* c_dyn = app.add_subcommand("dynamo", "magnetic energy growth report");
  add_common(c_dyn, o);

  auto* c_oc = app.add_subcommand("oc-compare", "scaling bound comparison");
  add_common(c_oc, o);
  std::vector<double> betas;
  c_oc->add_option("--beta", betas, "probe Hoelder exponents (repeatable)");

  auto* c_oracle = app.add_subcommand("oracle-validate",
                                      "finite-difference cross-check");
  add_common(c_oracle, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_build->parsed()) {
      RunConfig c = to_config(o, "build-field");
      SpectralField f = make_theta0(c);
      if (perturb > 0.0) {
        SpectralField eta = random_band_limited(band, c.seed, f.nx, f.ny);
        double scale = perturb * f.l2();
        for (std::size_t i = 0; i < f.c.size(); ++i)
          f.c[i] += scale * eta.c[i];
      }
      f.zero_mean();
      save_field_file(f, build_out);
      std::printf("wrote %s (%dx%d)\n", build_out.c_str(), f.nx, f.ny);
    } else if (c_inv->parsed()) {
      RunConfig c = to_config(o, "run-inviscid");
      if (c.theta0.kind != Theta0Spec::Kind::Harmonic)
        throw ConfigError("run-inviscid expects harmonic data");
      StageSchedule s = build_universal(c.alpha, c.j_max);
      ensure_outdir(c.outdir);
      save_schedule_file(s, c.outdir + "/schedule.txt");
      BootstrapOptions bo;
      bo.strict = c.strict;
      BootstrapTrace tr = bootstrap_trace(c.theta0.harmonic, s, bo);
      write_bootstrap_csv_file(tr, c.outdir + "/bootstrap.csv");
      std::printf("wrote %s/bootstrap.csv (%zu records)\n", c.outdir.c_str(),
                  tr.records.size());
    } else if (c_visc->parsed()) {
      RunConfig c = to_config(o, "run-viscous");
      if (c.kappas.size() != 1)
        throw ConfigError("run-viscous expects exactly one --kappa");
      StageSchedule s = build_universal(c.alpha, c.j_max);
      SpectralField theta0 = make_theta0(c);
      SolverConfig sc;
      sc.kappa = c.kappas[0];
      sc.substeps_per_stage = c.substeps;
      sc.nx = c.nx;
      sc.ny = c.ny;
      sc.ledger_stride = c.ledger_stride;
      sc.strict = c.strict;
      RunResult r = run(theta0, s, sc);
      if (c.include_tail && 1.0 - s.total_time() > 0.0)
        run_diffusion_interval(r.field, sc.kappa, 1.0 - s.total_time(), 8,
                               &r.ledger);
      ensure_outdir(c.outdir);
      write_ledger_csv_file(r.ledger, c.outdir + "/ledger.csv");
      save_field_file(r.field, c.outdir + "/final.fld");
      std::printf("chi %.6g residual %.3g\n", r.ledger.final_chi(),
                  r.ledger.final_residual());
    } else if (c_sweep->parsed()) {
      RunConfig c = to_config(o, "sweep");
      c.zero_velocity = control;
      c.jmax_sensitivity = sens;
      SweepReport rep = exp_sweep(c);
      std::printf("chi in [%.6g, %.6g], plateau ratio %.3g\n", rep.chi_min,
                  rep.chi_max, rep.plateau_ratio);
    } else if (c_pert->parsed()) {
      RunConfig c = to_config(o, "perturbed");
      c.perturb_eps = eps;
      c.perturb_band = band;
      PerturbedReport rep = exp_perturbed(c);
      std::printf("split defect %.3g, chi in [%.6g, %.6g]\n", rep.split_defect,
                  rep.sweep.chi_min, rep.sweep.chi_max);
    } else if (c_adap->parsed()) {
      RunConfig c = to_config(o, "adaptive");
      AdaptiveReport rep = exp_adaptive(c);
      std::printf("a0 %.6g, chi in [%.6g, %.6g]\n", rep.a0, rep.sweep.chi_min,
                  rep.sweep.chi_max);
    } else if (c_nonu->parsed()) {
      RunConfig c = to_config(o, "nonuniq");
      NonUniqReport rep = exp_nonuniq(c);
      std::printf("reversible error %.3g, gap in [%.6g, %.6g]\n",
                  rep.reversible_error, rep.gap_min, rep.gap_max);
    } else if (c_dyn->parsed()) {
      RunConfig c = to_config(o, "dynamo");
      DynamoReport rep = exp_dynamo(c);
      std::printf("growth exponent %.3g\n", rep.growth_exponent);
    } else if (c_oc->parsed()) {
      RunConfig c = to_config(o, "oc-compare");
      c.beta_probe = betas;
      OCCompareReport rep = exp_oc_compare(c);
      int ok = 0;
      for (const auto& r : rep.rows) ok += r.satisfied ? 1 : 0;
      std::printf("%d/%zu (kappa,beta) pairs below the bound\n", ok,
                  rep.rows.size());
    } else if (c_oracle->parsed()) {
      RunConfig c = to_config(o, "oracle-validate");
      double kappa = c.kappas.size() == 1 ? c.kappas[0] : 1e-3;
      OracleValidation v = exp_oracle_validate(kappa, c);
      std::printf("spectral vs fd rel l2 %.3g, order %.3g\n",
                  v.spectral_vs_fd_rel_l2, v.study.observed_order);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ResolutionError& e) {
    std::cerr << "resolution guard: " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
