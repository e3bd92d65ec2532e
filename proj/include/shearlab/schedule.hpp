#ifndef SHEARLAB_SCHEDULE_HPP
#define SHEARLAB_SCHEDULE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "shearlab/common.hpp"
#include "shearlab/profile.hpp"

namespace shearlab {

// One shear stage of the piecewise-in-time velocity program. Stage j occupies
// [start, start + duration) with duration t_j = 2^-j (t_0 = 0), shears with
// frequency N_j and smoothing eps_j, and alternates direction with the parity
// of j (even = horizontal, u = sigma * (S_eps(N y), 0)). The exact solution
// operator of the stage is the shear map that shifts the advected coordinate
// by sigma * t_j * S_eps(N * other coordinate).
struct Stage {
  int index = 0;
  double duration = 0.0;
  double start = 0.0;
  std::int64_t freq = 1;
  double eps = 0.1;
  bool horizontal = true;
  int sign = 0;         // s_j in {0,1}; velocity sign is (-1)^{s_j}
  bool active = false;  // stages below the activation index are u == 0

  double end() const { return start + duration; }
  double sigma() const { return sign == 0 ? 1.0 : -1.0; }
  // sup |grad u| over the stage (|S'| <= 1 with equality attained).
  double grad_sup() const { return active ? static_cast<double>(freq) : 0.0; }
  SawtoothProfile profile() const { return SawtoothProfile(eps); }
};

struct StageSchedule {
  double alpha = 0.5;
  double a0 = 1.0;
  int j_active_min = 0;  // J(alpha) for built programs
  int j_max = 0;
  std::vector<Stage> stages;  // indices 0..j_max

  double total_time() const { return stages.empty() ? 0.0 : stages.back().end(); }
  // Index of the stage whose window contains t, or -1 past the built program.
  int stage_at(double t) const;
  int first_active() const;
};

// J(alpha) = floor(1/alpha) + 1; stages up to 1/alpha run as the identity.
// Defined as 1 at the alpha = 0 boundary (test mode only).
int activation_index(double alpha);

struct BuildOptions {
  // Permit the boundary exponents alpha = 0 and alpha = 1 (used by tests that
  // pin the degenerate scalings; the theorems require alpha < 1).
  bool allow_boundary_alpha = false;
  double a0 = 1.0;
};

// The universal program: t_j = 2^-j, N_j = 2^{ceil((1+alpha) j)},
// eps_j = a0 * exp(-30 (1 + 1/(2^alpha - 1))) * 2^{-2j}, all signs 0.
// The frequency exponent is rounded up to keep N_j an integer power of two
// (exact periodicity) while preserving t_j N_j >= 2^{alpha j}.
StageSchedule build_universal(double alpha, int j_max,
                              const BuildOptions& opts = {});

// A schedule from explicit stages (validation programs, oracle comparisons).
// Start times are recomputed cumulatively; indices are renumbered from
// first_index so direction parity can be chosen by the caller.
StageSchedule make_custom_schedule(std::vector<Stage> stages,
                                   int first_index = 0);

// Velocity at (t, x, y) per the program display: stage j contributes
// sigma_j * (S_eps(N_j y), 0) when horizontal, the transpose when vertical.
// Domain [0, 1); times past the truncated program return zero.
std::pair<double, double> velocity_at(const StageSchedule& s, double t,
                                      double x, double y);

struct HolderBudget {
  double partial_sum = 0.0;  // sum over built active stages of t_j N_j^{a'}
  double tail_bound = 0.0;   // geometric bound on the truncated tail
  double tail_ratio = 0.0;   // 2^{(1+alpha) a' - 1}
  double exponent = 0.0;     // (1+alpha) a' - 1
  bool finite = false;
};

// Partial sum of t_j N_j^{alpha'} plus the analytic geometric tail; finite
// exactly when alpha < 1/alpha' - 1.
HolderBudget holder_budget(const StageSchedule& s, double alpha_prime);

// Key-value text serialization; reals are written as hex floats so a saved
// schedule reloads bit-exactly.
void save_schedule(const StageSchedule& s, std::ostream& out);
void save_schedule_file(const StageSchedule& s, const std::string& path);
StageSchedule load_schedule(std::istream& in);
StageSchedule load_schedule_file(const std::string& path);

}  // namespace shearlab

#endif
