#ifndef SHEARLAB_EXPERIMENTS_HPP
#define SHEARLAB_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "shearlab/inviscid.hpp"
#include "shearlab/oracle.hpp"
#include "shearlab/viscous.hpp"

namespace shearlab {

struct Theta0Spec {
  enum class Kind { Harmonic, File };
  Kind kind = Kind::Harmonic;
  HarmonicData harmonic;
  std::string file;

  std::string describe() const;
};

// Fully determines a run; echoed as JSON (with an input content hash) next to
// every output so reruns are bit-reproducible.
struct RunConfig {
  std::string experiment;
  double alpha = 0.5;
  Theta0Spec theta0;
  std::vector<double> kappas;
  int nx = 1024, ny = 1024;
  int j_max = 5;
  int substeps = 64;
  int ledger_stride = 8;
  std::string outdir = "out";
  bool strict = false;
  std::uint64_t seed = 1;
  bool include_tail = true;      // idle interval up to t = 1 (and its mirror)
  double perturb_eps = 0.0;      // exp_perturbed: |eta| fraction
  int perturb_band = 8;          // band limit of the random perturbation
  std::vector<double> beta_probe;  // exp_oc_compare
  bool jmax_sensitivity = false;   // one extra mid-kappa run at j_max - 1
  bool zero_velocity = false;      // heat-control variant of exp_sweep

  std::string canonical_json() const;
  std::uint64_t content_hash() const;  // config + theta0 file bytes
};

SpectralField make_theta0(const RunConfig& cfg);
// Seeded band-limited perturbation: unit-L2, mean-zero, Hermitian, modes
// 0 < max(|kx|,|ky|) <= band drawn from the documented counter RNG.
SpectralField random_band_limited(int band, std::uint64_t seed, int nx, int ny);

struct KappaResult {
  double kappa = 0.0;
  double chi = 0.0;
  double final_l2 = 0.0;
  double residual = 0.0;
  bool trimmed = false;  // skipped by the resolution notice
  std::string ledger_file;
};

struct SweepReport {
  RunConfig config;
  int j_max_effective = 0;
  double theta0_l2 = 0.0;
  std::vector<KappaResult> results;
  double chi_min = 0.0, chi_max = 0.0, plateau_ratio = 0.0;
  double sensitivity_dchi_rel = 0.0;  // |chi(j-1)-chi(j)|/chi(j) if measured
  std::vector<std::string> notices;
};

SweepReport exp_sweep(const RunConfig& cfg);

struct PerturbedReport {
  SweepReport sweep;  // on the perturbed data
  double theta0L_l2 = 0.0, theta0H_l2 = 0.0;  // orthogonal split
  double split_defect = 0.0;  // | |t0|^2 - |t0L|^2 - |t0H|^2 | / |t0|^2
  // per kappa: measured |theta^k(1)| against sqrt(1-2chi_L)|t0L| + |t0H|
  std::vector<double> bound_rhs;
  std::vector<double> final_l2_pure;  // unperturbed runs, same kappas
};

PerturbedReport exp_perturbed(const RunConfig& cfg);

struct AdaptiveReport {
  SweepReport sweep;
  double a0 = 1.0;
  std::vector<int> signs;  // per stage index first_active..j_max
  std::string schedule_file;
};

AdaptiveReport exp_adaptive(const RunConfig& cfg);

struct NonUniqReport {
  RunConfig config;
  double reversible_error = 0.0;  // |theta_bar(2T) - theta0| / |theta0|
  struct Branch {
    double kappa = 0.0;
    double terminal_energy_ratio = 0.0;  // |theta^k(2T)|^2 / |theta0|^2
    double gap = 0.0;                    // 1 - ratio
    double residual = 0.0;               // energy-balance residual at 2T
    std::string ledger_file;
  };
  std::vector<Branch> branches;
  double gap_min = 0.0, gap_max = 0.0;
};

NonUniqReport exp_nonuniq(const RunConfig& cfg);

struct DynamoReport {
  RunConfig config;
  struct Row {
    double kappa = 0.0;
    double b_energy_time_integral = 0.0;  // int_0^T |B|^2 dt = chi / kappa
    double chi = 0.0;
  };
  std::vector<Row> rows;
  double growth_exponent = 0.0;  // slope of log int|B|^2 vs log 1/kappa
};

DynamoReport exp_dynamo(const RunConfig& cfg);

struct OCCompareReport {
  RunConfig config;
  double u_l1_calpha = 0.0;  // sum_j t_j |stage velocity|_{C^alpha} (measured)
  struct Row {
    double kappa = 0.0, beta = 0.0;
    double theta_cbeta = 0.0;  // measured quotient at probe scales
    double bound = 0.0;
    double chi = 0.0;
    bool satisfied = false;
  };
  std::vector<Row> rows;
  // Hoelder breakdown: quotient of theta_j at scale 2pi/N_j per stage
  std::vector<std::pair<int, double>> breakdown;
};

OCCompareReport exp_oc_compare(const RunConfig& cfg);

// Gentle three-stage program used for cross-solver validation (frequencies
// low enough that the second-order oracle is accurate at 256^2).
StageSchedule validation_schedule();

struct OracleValidation {
  double spectral_vs_fd_rel_l2 = 0.0;  // terminal difference at 256^2
  ConvergenceStudy study;
  double chi_spectral = 0.0;
};

OracleValidation exp_oracle_validate(double kappa, const RunConfig& cfg);

// Shared output helpers.
void ensure_outdir(const std::string& dir);
void write_text_file(const std::string& path, const std::string& text);
void write_sweep_outputs(const SweepReport& rep);
void write_nonuniq_outputs(const NonUniqReport& rep);
void write_dynamo_outputs(const DynamoReport& rep);
void write_oc_outputs(const OCCompareReport& rep);

}  // namespace shearlab

#endif
