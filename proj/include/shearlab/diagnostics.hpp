#ifndef SHEARLAB_DIAGNOSTICS_HPP
#define SHEARLAB_DIAGNOSTICS_HPP

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "shearlab/schedule.hpp"
#include "shearlab/spectral_field.hpp"
#include "shearlab/viscous.hpp"

namespace shearlab {

// (sum_k |k|^{2s} |c_k|^2)^{1/2} times 2pi (Parseval convention of
// SpectralField). s < 0 requires mean-zero data.
double sobolev_norm(const SpectralField& f, double s);

// Empirical margins for the three dissipation criteria. The checkers measure
// the propositions' hypotheses on recorded traces and report the implied
// lower bounds; they assert nothing beyond what was measured.
struct CriterionSample {
  double t = 0.0;
  double value = 0.0;
};

struct CriterionReport {
  int id = 0;
  std::vector<CriterionSample> samples;  // per-time hypothesis quantity
  double constant = 0.0;       // inf c (1) or sup C (2, 3)
  double implied_bound = 0.0;  // dissipation lower bound from the proposition
  bool hypothesis_ok = false;
  // criterion 1: log-log slope of int_0^t |grad theta|^2 against 1/(1-t)
  double growth_slope = 0.0;
  // criterion 2: C(t) growth factor over the trace (non-mixing indicator)
  double growth_factor = 0.0;
  // criterion 3 split constants
  double c_h2 = 0.0, c_h1_lower = 0.0, c_grad_u = 0.0;
  bool grad_u_bounded = false;
  std::vector<std::pair<int, double>> grad_u_ratio;  // per stage: N_j (1-T_j)
};

// c(t) = |theta|_{H1}^2 / ((|theta|_{H2} + |theta^k|_{H2}) |theta0|_{L2}),
// homogeneous norms, inf over the aligned samples; implied bound (c/2)^4
// |theta0|^2. Also fits the growth of the inviscid gradient integral.
CriterionReport criterion1_check(const DissipationLedger& inviscid,
                                 const DissipationLedger& viscous,
                                 double theta0_l2);

// C(t) = |theta|_{H^-1} |theta|_{H1} / |theta0|^2, sup; implied bound
// |theta0|^2 / (64 C^2).
CriterionReport criterion2_check(const DissipationLedger& inviscid,
                                 double theta0_l2);

// The three hypotheses with T = 1: H2 control, H1 lower growth, and the
// velocity gradient budget |grad u| <= C/(1-t) (reported per stage as
// N_j (1 - T_j), exactly 2^{ceil((1+alpha)j) - j}).
CriterionReport criterion3_check(const DissipationLedger& inviscid,
                                 const StageSchedule& schedule,
                                 double theta0_l2);

void write_criterion_csv(const CriterionReport& r, std::ostream& out);
void write_criterion_csv_file(const CriterionReport& r, const std::string& path);

// Structure functions S_p(ell) = <|f(x + ell e) - f(x)|^p> averaged over the
// grid and over the four separations x, y, and both diagonals (ell/sqrt(2)
// per component), with periodic wraparound; shifts are spectral (exact).
struct StructureTable {
  double p = 2.0;
  std::vector<double> ell;
  std::vector<double> sp;
};

StructureTable structure_function(const SpectralField& f, double p,
                                  const std::vector<double>& ells);
// Time-weighted series (L^1-in-time average), e.g. velocity snapshots.
StructureTable structure_function_series(
    const std::vector<SpectralField>& fields, const std::vector<double>& weights,
    double p, const std::vector<double>& ells);
// Pointwise sampler variant (no grid data needed).
StructureTable structure_function_sampler(
    const std::function<double(double, double)>& f, int n, double p,
    const std::vector<double>& ells);

void write_structure_csv(const StructureTable& t, std::ostream& out);

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms of log-residuals
  double ell_lo = 0.0, ell_hi = 0.0;
  int points = 0;
};

// OLS in log-log over the user-fixed window [ell_lo, ell_hi].
PowerLawFit fit_powerlaw(const StructureTable& t, double ell_lo, double ell_hi);
void write_fit_json(const PowerLawFit& f, std::ostream& out);

// sup over the probe separations and the grid of |delta_ell f| / ell^beta
// (four directions). Also exposed per-ell for breakdown diagnostics.
double holder_quotient(const SpectralField& f, double beta,
                       const std::vector<double>& ells);
std::vector<double> increment_sup(const SpectralField& f,
                                  const std::vector<double>& ells);

// Measured Hoelder quotient of one shear stage's velocity profile at probe
// separations (closed-form profile, dense 1-D grid).
double stage_velocity_holder(const Stage& st, double alpha,
                             const std::vector<double>& ells, int n = 1 << 14);

struct OCBound {
  double ell = 0.0;       // kappa^{1/(alpha+1)}
  double bound = 0.0;     // the assembled right-hand side
  double exponent = 0.0;  // (alpha + 2 beta - 1)/(alpha + 1)
};

// Dissipation upper bound for C^alpha velocity and C^beta scalar, assembled
// from the supplied Hoelder norms:
//   ell^{alpha+2beta-1} |theta|_{Cb}^2 |u|_{L1Ca} +
//   (kappa T ell^{2(beta-1)} + ell^{2beta}) |theta|_{Cb}^2,  ell = kappa^{1/(alpha+1)}.
OCBound obukhov_corrsin_bound(double alpha, double beta, double kappa,
                              double theta_cbeta, double u_l1_calpha, double T);

}  // namespace shearlab

#endif
