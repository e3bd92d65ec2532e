#ifndef SHEARLAB_ORACLE_HPP
#define SHEARLAB_ORACLE_HPP

#include <vector>

#include "shearlab/grid_field.hpp"
#include "shearlab/schedule.hpp"
#include "shearlab/viscous.hpp"

namespace shearlab {

// Small-scale cross-validation solver, deliberately from a different
// discretization family than the spectral path: second-order central
// advection (midpoint in time) plus Crank-Nicolson diffusion factored per
// direction (Peaceman-Rachford ADI) with periodic tridiagonal solves.

// One step. Preconditions: dt * max|u| / h <= 0.5 (advection CFL); the
// implicit diffusion is unconditionally stable.
void fd_step(GridField& f, const Stage& st, double kappa, double dt);

struct FdRunResult {
  GridField field;
  DissipationLedger ledger;  // same schema as the spectral ledger
};

// Advances through the schedule with per-stage uniform steps chosen from
// steps_per_unit_time (scaled so the CFL precondition holds).
FdRunResult fd_run(const GridField& theta0, const StageSchedule& s,
                   double kappa, double steps_per_unit_time);

struct ConvergenceLevel {
  int n = 0;
  double dt = 0.0;
  double err_vs_finer = 0.0;  // L2 difference against the next refinement
  double chi = 0.0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceLevel> levels;  // grids 64, 128, 256
  double observed_order = 0.0;           // log2(err(64)/err(128))
  double chi_extrapolated = 0.0;         // Richardson (h^2) from 128/256
};

ConvergenceStudy convergence_study(const StageSchedule& s, double kappa,
                                   const HarmonicData& theta0,
                                   double steps_per_unit_time = 2048.0);

}  // namespace shearlab

#endif
