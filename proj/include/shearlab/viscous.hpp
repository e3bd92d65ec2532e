#ifndef SHEARLAB_VISCOUS_HPP
#define SHEARLAB_VISCOUS_HPP

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "shearlab/schedule.hpp"
#include "shearlab/spectral_field.hpp"

namespace shearlab {

struct SolverConfig {
  double kappa = 0.0;
  int substeps_per_stage = 64;  // >= 4; accuracy knob for the Strang splitting
  int nx = 256, ny = 256;
  bool dealias = false;  // plumbed for the structure-function pipeline only
  int ledger_stride = 1;  // full ledger row every this many substeps
  bool strict = false;
  bool zero_velocity = false;  // control runs: same timeline with u == 0
  double nyquist_fraction = 0.25;  // stage guard: N_j <= fraction * (n/2)
};

struct LedgerRow {
  double t = 0.0;
  double l2 = 0.0, h1 = 0.0, h2 = 0.0, hneg1 = 0.0;
  double chi = 0.0;       // kappa * int_0^t |grad theta|^2
  double residual = 0.0;  // |l2(t)^2/2 - l2(0)^2/2 + chi(t)|
};

// Time series of norms plus the running dissipation integral. chi is a
// composite trapezoid over every substep sample of kappa |grad theta|^2, so
// the energy-balance residual column makes the quadrature error visible.
struct DissipationLedger {
  std::vector<LedgerRow> rows;
  double kappa = 0.0;
  double theta0_l2 = 0.0;
  int nx = 0, ny = 0;
  int substeps_per_stage = 0;

  double final_chi() const { return rows.empty() ? 0.0 : rows.back().chi; }
  double final_residual() const {
    return rows.empty() ? 0.0 : rows.back().residual;
  }
  // int_0^t |grad theta|^2 ds recovered from the h1 column (trapezoid); used
  // by the criterion checkers on kappa = 0 reference runs.
  std::vector<double> gradient_integral() const;
};

void write_ledger_csv(const DissipationLedger& l, std::ostream& out);
void write_ledger_csv_file(const DissipationLedger& l, const std::string& path);

// Advances the field by the stage duration with Strang splitting of exact
// sub-flows: half-step diffusion multiplier, exact shear phase in the mixed
// (wavenumber, shear coordinate) representation, half-step diffusion.
void step_stage(SpectralField& f, const Stage& st, double kappa, int substeps);

struct RunResult {
  SpectralField field;
  DissipationLedger ledger;
};

// Called after each completed stage with the current state.
using StageCallback = std::function<void(const SpectralField&, double t)>;

// Iterates step_stage over the schedule from t = 0 with ledger sampling.
RunResult run(const SpectralField& theta0, const StageSchedule& s,
              const SolverConfig& cfg, const StageCallback& on_stage_end = {});

// Forward program, u = 0 tail to t = 1, then the reversed program with
// flipped signs on [1, 2]: the velocity of the non-uniqueness construction.
// Returns the state at 2T together with the full ledger.
RunResult run_forward_reversed(const SpectralField& theta0,
                               const StageSchedule& s, const SolverConfig& cfg,
                               bool include_tail = true);

// Pure heat flow for `duration`: exact multiplier, exact chi increment
// (closed form, no quadrature error), `samples` ledger rows.
void run_diffusion_interval(SpectralField& f, double kappa, double duration,
                            int samples, DissipationLedger* ledger);

// Zero-pad (or error on shrink below support) to a new grid.
SpectralField embed_field(const SpectralField& f, int nx, int ny);

// |theta^kappa(t)|_{H^2} / |theta_ref(t)|_{H^1}^2 over matched ledger times
// (full inhomogeneous norms); the reference is normally the kappa = 0 run.
struct H2RatioPoint {
  double t = 0.0;
  double ratio = 0.0;
};
std::vector<H2RatioPoint> h2_ratio_trace(const DissipationLedger& viscous,
                                         const DissipationLedger& reference);

}  // namespace shearlab

#endif
