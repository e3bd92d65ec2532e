#include "shearlab/oracle.hpp"

#include <cmath>

#include "shearlab/diagnostics.hpp"
#include "shearlab/spectral_field.hpp"

namespace shearlab {

namespace {

// Periodic constant-coefficient tridiagonal solve (diag b, off-diag a) by
// Sherman-Morrison around the Thomas sweep.
class CyclicTridiag {
 public:
  CyclicTridiag(int n, double a, double b) : n_(n), a_(a), b_(b) {
    // Thomas factorization for the modified system with b[0] -= gamma,
    // b[n-1] -= a*a/gamma
    gamma_ = -b_;
    cp_.resize(static_cast<std::size_t>(n_));
    double b0 = b_ - gamma_;
    double bn = b_ - a_ * a_ / gamma_;
    diag_.assign(static_cast<std::size_t>(n_), b_);
    diag_[0] = b0;
    diag_[static_cast<std::size_t>(n_ - 1)] = bn;
    cp_[0] = a_ / diag_[0];
    for (int i = 1; i < n_; ++i)
      cp_[static_cast<std::size_t>(i)] =
          a_ / (diag_[static_cast<std::size_t>(i)] -
                a_ * cp_[static_cast<std::size_t>(i - 1)]);
    // u = (gamma, 0, ..., 0, a); v = (1, 0, ..., 0, a/gamma)
    u_.assign(static_cast<std::size_t>(n_), 0.0);
    u_[0] = gamma_;
    u_[static_cast<std::size_t>(n_ - 1)] = a_;
    q_ = u_;
    solve_thomas(q_);
    double vq = q_[0] + a_ / gamma_ * q_[static_cast<std::size_t>(n_ - 1)];
    denom_ = 1.0 + vq;
  }

  void solve(std::vector<double>& rhs) const {
    solve_thomas(rhs);
    double vy = rhs[0] + a_ / gamma_ * rhs[static_cast<std::size_t>(n_ - 1)];
    double f = vy / denom_;
    for (int i = 0; i < n_; ++i)
      rhs[static_cast<std::size_t>(i)] -= f * q_[static_cast<std::size_t>(i)];
  }

 private:
  void solve_thomas(std::vector<double>& d) const {
    std::vector<double> w(static_cast<std::size_t>(n_));
    w[0] = d[0] / diag_[0];
    for (int i = 1; i < n_; ++i)
      w[static_cast<std::size_t>(i)] =
          (d[static_cast<std::size_t>(i)] -
           a_ * w[static_cast<std::size_t>(i - 1)]) /
          (diag_[static_cast<std::size_t>(i)] -
           a_ * cp_[static_cast<std::size_t>(i - 1)]);
    d[static_cast<std::size_t>(n_ - 1)] = w[static_cast<std::size_t>(n_ - 1)];
    for (int i = n_ - 2; i >= 0; --i)
      d[static_cast<std::size_t>(i)] =
          w[static_cast<std::size_t>(i)] -
          cp_[static_cast<std::size_t>(i)] * d[static_cast<std::size_t>(i + 1)];
  }

  int n_;
  double a_, b_, gamma_, denom_;
  std::vector<double> diag_, cp_, u_, q_;
};

// u . grad theta with second-order central differences; the shear velocity
// depends only on the non-advected coordinate.
void advection_term(const GridField& f, const std::vector<double>& vel,
                    bool horizontal, GridField& out) {
  int nx = f.nx, ny = f.ny;
  if (horizontal) {
    double inv2h = nx / (2.0 * two_pi);
    for (int iy = 0; iy < ny; ++iy) {
      double u = vel[static_cast<std::size_t>(iy)];
      for (int ix = 0; ix < nx; ++ix) {
        double dfdx = (f.at(ix + 1, iy) - f.at(ix - 1, iy)) * inv2h;
        out.at(ix, iy) = u * dfdx;
      }
    }
  } else {
    double inv2h = ny / (2.0 * two_pi);
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix) {
        double u = vel[static_cast<std::size_t>(ix)];
        double dfdy = (f.at(ix, iy + 1) - f.at(ix, iy - 1)) * inv2h;
        out.at(ix, iy) = u * dfdy;
      }
  }
}

void diffusion_adi(GridField& f, double kappa, double dt) {
  if (kappa <= 0.0) return;
  int nx = f.nx, ny = f.ny;
  double hx = two_pi / nx, hy = two_pi / ny;
  double rx = 0.5 * kappa * dt / (hx * hx);
  double ry = 0.5 * kappa * dt / (hy * hy);
  CyclicTridiag sx(nx, -rx, 1.0 + 2.0 * rx);
  CyclicTridiag sy(ny, -ry, 1.0 + 2.0 * ry);

  // (I - (dt/2) kappa Dxx) w = (I + (dt/2) kappa Dyy) f
  GridField w(nx, ny);
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      w.at(ix, iy) = f.at(ix, iy) +
                     ry * (f.at(ix, iy + 1) - 2.0 * f.at(ix, iy) +
                           f.at(ix, iy - 1));
  std::vector<double> line(static_cast<std::size_t>(nx));
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) line[static_cast<std::size_t>(ix)] = w.at(ix, iy);
    sx.solve(line);
    for (int ix = 0; ix < nx; ++ix) w.at(ix, iy) = line[static_cast<std::size_t>(ix)];
  }
  // (I - (dt/2) kappa Dyy) f = (I + (dt/2) kappa Dxx) w
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      f.at(ix, iy) = w.at(ix, iy) +
                     rx * (w.at(ix + 1, iy) - 2.0 * w.at(ix, iy) +
                           w.at(ix - 1, iy));
  std::vector<double> col(static_cast<std::size_t>(ny));
  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) col[static_cast<std::size_t>(iy)] = f.at(ix, iy);
    sy.solve(col);
    for (int iy = 0; iy < ny; ++iy) f.at(ix, iy) = col[static_cast<std::size_t>(iy)];
  }
}

std::vector<double> stage_velocity_line(const Stage& st, int n) {
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  if (!st.active) return v;
  SawtoothProfile prof = st.profile();
  double nf = static_cast<double>(st.freq);
  double h = two_pi / n;
  for (int i = 0; i < n; ++i)
    v[static_cast<std::size_t>(i)] = st.sigma() * prof.value(nf * (i * h));
  return v;
}

double grid_h1_sq(const GridField& f) {
  // central-difference gradient, discrete L2 over [0,2pi)^2
  int nx = f.nx, ny = f.ny;
  double ix2 = nx / (2.0 * two_pi), iy2 = ny / (2.0 * two_pi);
  double cell = (two_pi / nx) * (two_pi / ny);
  std::vector<double> rows(static_cast<std::size_t>(ny));
  for (int iy = 0; iy < ny; ++iy) {
    double s = 0.0;
    for (int ix = 0; ix < nx; ++ix) {
      double gx = (f.at(ix + 1, iy) - f.at(ix - 1, iy)) * ix2;
      double gy = (f.at(ix, iy + 1) - f.at(ix, iy - 1)) * iy2;
      s += gx * gx + gy * gy;
    }
    rows[static_cast<std::size_t>(iy)] = s;
  }
  return pairwise_sum(rows) * cell;
}

void ledger_row(DissipationLedger& led, const GridField& f, double t,
                double chi) {
  LedgerRow r;
  r.t = t;
  r.l2 = f.l2();
  r.h1 = std::sqrt(grid_h1_sq(f));
  // h2/hneg1 via the spectral transform of the samples (diagnostic only)
  SpectralField sf = field_from_grid(f);
  sf.c[0] = 0.0;
  r.h2 = two_pi * std::sqrt(sf.mode_sum(2.0));
  r.hneg1 = two_pi * std::sqrt(sf.mode_sum(-1.0));
  r.chi = chi;
  double e0 = 0.5 * led.theta0_l2 * led.theta0_l2;
  r.residual = std::fabs(0.5 * r.l2 * r.l2 - e0 + chi);
  led.rows.push_back(r);
}

}  // namespace

void fd_step(GridField& f, const Stage& st, double kappa, double dt) {
  int n_shear = st.horizontal ? f.ny : f.nx;
  int n_adv = st.horizontal ? f.nx : f.ny;
  double h_adv = two_pi / n_adv;
  if (st.active && dt * half_pi / h_adv > 0.5 + 1e-12)
    throw ConfigError("fd_step: advection CFL dt*max|u|/h <= 0.5 violated");
  if (st.active) {
    std::vector<double> vel = stage_velocity_line(st, n_shear);
    // The velocity here is the transport field of the stage map
    // (x,y) -> (x + sigma t S, y), i.e. -sigma S, so the kappa -> 0 limit
    // composes to exactly the backward maps the inviscid module applies.
    for (double& v : vel) v = -v;
    GridField k1(f.nx, f.ny), mid(f.nx, f.ny);
    advection_term(f, vel, st.horizontal, k1);
    for (std::size_t i = 0; i < f.v.size(); ++i)
      mid.v[i] = f.v[i] - 0.5 * dt * k1.v[i];
    advection_term(mid, vel, st.horizontal, k1);
    for (std::size_t i = 0; i < f.v.size(); ++i) f.v[i] -= dt * k1.v[i];
  }
  diffusion_adi(f, kappa, dt);
}

FdRunResult fd_run(const GridField& theta0, const StageSchedule& s,
                   double kappa, double steps_per_unit_time) {
  FdRunResult out{theta0, {}};
  out.ledger.kappa = kappa;
  out.ledger.nx = theta0.nx;
  out.ledger.ny = theta0.ny;
  out.ledger.theta0_l2 = theta0.l2();
  double chi = 0.0;
  double t = 0.0;
  double last_f = kappa * grid_h1_sq(out.field);
  ledger_row(out.ledger, out.field, 0.0, 0.0);
  for (const Stage& st : s.stages) {
    if (st.duration <= 0.0) continue;
    int n_adv = st.horizontal ? theta0.nx : theta0.ny;
    double h_adv = two_pi / n_adv;
    int steps = std::max(
        1, static_cast<int>(std::ceil(st.duration * steps_per_unit_time)));
    // tighten to the CFL bound if needed
    double dt = st.duration / steps;
    if (st.active && dt * half_pi / h_adv > 0.5) {
      steps = static_cast<int>(std::ceil(st.duration * half_pi / (0.5 * h_adv)));
      dt = st.duration / steps;
    }
    for (int m = 0; m < steps; ++m) {
      fd_step(out.field, st, kappa, dt);
      double fnew = kappa * grid_h1_sq(out.field);
      chi += 0.5 * dt * (last_f + fnew);
      last_f = fnew;
    }
    t += st.duration;
    ledger_row(out.ledger, out.field, t, chi);
  }
  return out;
}

ConvergenceStudy convergence_study(const StageSchedule& s, double kappa,
                                   const HarmonicData& theta0,
                                   double steps_per_unit_time) {
  const int grids[3] = {64, 128, 256};
  ConvergenceStudy st;
  std::vector<GridField> finals;
  for (int g = 0; g < 3; ++g) {
    int n = grids[g];
    GridField init(n, n);
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix)
        init.at(ix, iy) = theta0.value(init.x(ix), init.y(iy));
    // dt ~ h so the spatial and temporal errors refine together
    FdRunResult r = fd_run(init, s, kappa, steps_per_unit_time * n / 256.0);
    finals.push_back(r.field);
    ConvergenceLevel lv;
    lv.n = n;
    lv.chi = r.ledger.final_chi();
    st.levels.push_back(lv);
  }
  // L2 difference against the next refinement on the coarse points
  for (int g = 0; g < 2; ++g) {
    const GridField& coarse = finals[static_cast<std::size_t>(g)];
    const GridField& fine = finals[static_cast<std::size_t>(g + 1)];
    int n = coarse.nx;
    double s2 = 0.0;
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        double d = coarse.at(ix, iy) - fine.at(2 * ix, 2 * iy);
        s2 += d * d;
      }
    st.levels[static_cast<std::size_t>(g)].err_vs_finer =
        two_pi * std::sqrt(s2 / (static_cast<double>(n) * n));
  }
  st.observed_order =
      std::log2(st.levels[0].err_vs_finer / st.levels[1].err_vs_finer);
  st.chi_extrapolated =
      st.levels[2].chi + (st.levels[2].chi - st.levels[1].chi) / 3.0;
  return st;
}

}  // namespace shearlab
