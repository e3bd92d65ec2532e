#include <cmath>
#include <limits>

#include "shearlab/inviscid.hpp"

namespace shearlab {

namespace {

// |d_amp theta_j|_{L2} on the stage-adequate grid via the analytic gradient.
double amplified_norm(const InitialData& d, const StageSchedule& s, int j,
                      const AdaptiveOptions& opts) {
  auto [nx, ny] = recommended_grid(d, s, j, opts.margin, 64, opts.max_grid,
                                   opts.pad);
  if (nx == 0) {
    // under-resolved deep stage: clamp to the cap; the greedy comparison
    // degrades gracefully but stays deterministic
    nx = opts.max_grid;
    ny = opts.max_grid;
  }
  const Stage& st = s.stages[static_cast<std::size_t>(j - s.stages.front().index)];
  bool want_x = !st.horizontal;  // vertical stages amplify d_x
  std::vector<double> rows(static_cast<std::size_t>(ny));
  double hx = two_pi / nx, hy = two_pi / ny;
  for (int iy = 0; iy < ny; ++iy) {
    double y = iy * hy;
    double acc = 0.0;
    for (int ix = 0; ix < nx; ++ix) {
      double gx, gy;
      evaluate_gradient(d, s, j, ix * hx, y, gx, gy);
      double g = want_x ? gx : gy;
      acc += g * g;
    }
    rows[static_cast<std::size_t>(iy)] = acc;
  }
  double mean = pairwise_sum(rows) / (static_cast<double>(nx) * ny);
  return two_pi * std::sqrt(mean);
}

double driving_norm_theta0(const InitialData& d, const Stage& first_stage,
                           int n) {
  // |d_i theta0|_{L2} for the direction the first stage consumes
  bool want_x = first_stage.horizontal;  // horizontal stages consume d_x
  std::vector<double> rows(static_cast<std::size_t>(n));
  double h = two_pi / n;
  for (int iy = 0; iy < n; ++iy) {
    double acc = 0.0;
    for (int ix = 0; ix < n; ++ix) {
      double gx, gy;
      d.gradient(ix * h, iy * h, gx, gy);
      double g = want_x ? gx : gy;
      acc += g * g;
    }
    rows[static_cast<std::size_t>(iy)] = acc;
  }
  return two_pi * std::sqrt(pairwise_sum(rows) / (static_cast<double>(n) * n));
}

}  // namespace

StageSchedule build_adaptive(const InitialData& theta0, double alpha, int j_max,
                             const AdaptiveOptions& opts) {
  BuildOptions bo = opts.build;
  bo.a0 = 1.0;
  StageSchedule s = build_universal(alpha, j_max, bo);
  int first = s.first_active();
  if (first < 0) return s;  // nothing active to tune

  int base = s.stages.front().index;
  int n0 = std::min(256, opts.max_grid);
  double g_prev = driving_norm_theta0(
      theta0, s.stages[static_cast<std::size_t>(first - base)], n0);

  // Shrink a0 (halving) until the first active stage satisfies A < 1. Only
  // eps_j depends on a0, so the stages are rebuilt per candidate.
  double chosen_a0 = 0.0;
  int sign_first = 0;
  for (double a0 = 1.0; a0 >= opts.a0_min; a0 *= 0.5) {
    bo.a0 = a0;
    s = build_universal(alpha, j_max, bo);
    Stage& fs = s.stages[static_cast<std::size_t>(first - base)];
    double best = -1.0;
    int best_sign = 0;
    for (int sg = 0; sg <= 1; ++sg) {
      fs.sign = sg;
      double g = amplified_norm(theta0, s, first, opts);
      if (g > best * (1.0 + 1e-12)) {
        best = g;
        best_sign = sg;
      }
    }
    fs.sign = best_sign;
    if (g_prev < best) {  // A_J = g_prev / best < 1
      chosen_a0 = a0;
      sign_first = best_sign;
      break;
    }
  }
  if (chosen_a0 == 0.0)
    throw NumericalError(
        "adaptive program: a0 underflowed 2^-40 without A_J < 1 "
        "(pathological data)");

  s.a0 = chosen_a0;
  s.stages[static_cast<std::size_t>(first - base)].sign = sign_first;

  // Greedy signs for the remaining stages: keep whichever sign maximizes the
  // amplified directional norm; ties resolve to sign 0.
  for (int j = first + 1; j <= s.j_max; ++j) {
    Stage& st = s.stages[static_cast<std::size_t>(j - base)];
    if (!st.active) continue;
    st.sign = 0;
    double g0 = amplified_norm(theta0, s, j, opts);
    st.sign = 1;
    double g1 = amplified_norm(theta0, s, j, opts);
    st.sign = (g1 > g0 * (1.0 + 1e-12)) ? 1 : 0;
  }
  return s;
}

}  // namespace shearlab
