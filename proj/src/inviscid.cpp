#include "shearlab/inviscid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>

#include "shearlab/fft.hpp"

namespace shearlab {

InitialData::InitialData(const HarmonicData& h) : h_(h) {
  h.validate();
  l2_ = h.l2();
  max_kx_ = h.M;
  max_ky_ = h.L;
}

InitialData::InitialData(const SpectralField& f) {
  if (std::abs(f.c[0]) > 1e-12 * (f.l2() / two_pi + 1e-300))
    throw ConfigError("initial data must be mean-zero");
  for (int iy = 0; iy < f.ny; ++iy)
    for (int ix = 0; ix < f.nx; ++ix) {
      std::complex<double> z = f.c[static_cast<std::size_t>(iy) * f.nx + ix];
      if (z == std::complex<double>(0.0, 0.0)) continue;
      int kx = SpectralField::wavenumber(ix, f.nx);
      int ky = SpectralField::wavenumber(iy, f.ny);
      if (kx == -f.nx / 2 || ky == -f.ny / 2)
        throw ResolutionError("initial data carries Nyquist modes");
      if (kx == 0 && ky == 0) continue;
      // keep the half-spectrum ky > 0 or (ky == 0, kx > 0)
      if (ky < 0 || (ky == 0 && kx < 0)) continue;
      modes_.push_back({static_cast<double>(kx), static_cast<double>(ky), z});
      max_kx_ = std::max(max_kx_, std::abs(kx));
      max_ky_ = std::max(max_ky_, std::abs(ky));
    }
  l2_ = f.l2();
  if (modes_.empty()) throw ConfigError("initial data is identically zero");
}

std::size_t InitialData::mode_count() const {
  return h_ ? 4 : modes_.size();
}

double InitialData::value(double x, double y) const {
  if (h_) return h_->value(x, y);
  double s = 0.0;
  for (const Mode& m : modes_) {
    double ph = m.kx * x + m.ky * y;
    s += m.c.real() * std::cos(ph) - m.c.imag() * std::sin(ph);
  }
  return 2.0 * s;
}

void InitialData::gradient(double x, double y, double& dx, double& dy) const {
  if (h_) {
    h_->gradient(x, y, dx, dy);
    return;
  }
  double sx = 0.0, sy = 0.0;
  for (const Mode& m : modes_) {
    double ph = m.kx * x + m.ky * y;
    // d/dx 2 Re(c e^{i ph}) = -2 (Re c sin + Im c cos) kx
    double t = m.c.real() * std::sin(ph) + m.c.imag() * std::cos(ph);
    sx += m.kx * t;
    sy += m.ky * t;
  }
  dx = -2.0 * sx;
  dy = -2.0 * sy;
}

namespace {

inline void apply_stage_map(const Stage& st, const SawtoothProfile& prof,
                            double dur, double& x, double& y) {
  if (!st.active || dur == 0.0) return;
  double nf = static_cast<double>(st.freq);
  if (st.horizontal)
    x += st.sigma() * dur * prof.value(nf * y);
  else
    y += st.sigma() * dur * prof.value(nf * x);
}

}  // namespace

std::pair<double, double> backward_map(const StageSchedule& s, int j, double x,
                                       double y) {
  int base = s.stages.empty() ? 0 : s.stages.front().index;
  for (int i = j; i >= base; --i) {
    const Stage& st = s.stages[static_cast<std::size_t>(i - base)];
    if (!st.active) break;  // everything earlier is the identity
    SawtoothProfile prof = st.profile();
    apply_stage_map(st, prof, st.duration, x, y);
  }
  return {x, y};
}

std::pair<double, double> backward_map_at_time(const StageSchedule& s, double t,
                                               double x, double y) {
  if (t < 0.0 || t > s.total_time() + 1e-15)
    throw ConfigError("time outside the program");
  int j = s.stage_at(t);
  if (j < 0) return backward_map(s, s.j_max, x, y);
  int base = s.stages.front().index;
  const Stage& deepest = s.stages[static_cast<std::size_t>(j - base)];
  if (deepest.active) {
    SawtoothProfile prof = deepest.profile();
    apply_stage_map(deepest, prof, t - deepest.start, x, y);
  }
  auto [px, py] = backward_map(s, j - 1, x, y);
  return {px, py};
}

MapDerivative backward_map_derivative(const StageSchedule& s, int j, double x,
                                      double y) {
  MapDerivative d{{{1.0, 0.0}, {0.0, 1.0}}};
  int base = s.stages.empty() ? 0 : s.stages.front().index;
  for (int i = j; i >= base; --i) {
    const Stage& st = s.stages[static_cast<std::size_t>(i - base)];
    if (!st.active) break;
    SawtoothProfile prof = st.profile();
    double nf = static_cast<double>(st.freq);
    double a = st.sigma() * st.duration * nf;
    // left-multiply by the stage Jacobian at the current point
    if (st.horizontal) {
      double g = a * prof.slope(nf * y);
      // [[1, g], [0, 1]] * d
      d.m[0][0] += g * d.m[1][0];
      d.m[0][1] += g * d.m[1][1];
    } else {
      double g = a * prof.slope(nf * x);
      d.m[1][0] += g * d.m[0][0];
      d.m[1][1] += g * d.m[0][1];
    }
    apply_stage_map(st, prof, st.duration, x, y);
  }
  return d;
}

double evaluate(const InitialData& d, const StageSchedule& s, int j, double x,
                double y) {
  auto [px, py] = backward_map(s, j, x, y);
  return d.value(px, py);
}

double evaluate_at_time(const InitialData& d, const StageSchedule& s, double t,
                        double x, double y) {
  auto [px, py] = backward_map_at_time(s, t, x, y);
  return d.value(px, py);
}

void evaluate_gradient(const InitialData& d, const StageSchedule& s, int j,
                       double x, double y, double& dx, double& dy) {
  MapDerivative m = backward_map_derivative(s, j, x, y);
  auto [px, py] = backward_map(s, j, x, y);
  double gx, gy;
  d.gradient(px, py, gx, gy);
  dx = gx * m.m[0][0] + gy * m.m[1][0];
  dy = gx * m.m[0][1] + gy * m.m[1][1];
}

std::pair<double, double> support_bound(const InitialData& d,
                                        const StageSchedule& s, int j) {
  double kx = d.max_kx(), ky = d.max_ky();
  int base = s.stages.empty() ? 0 : s.stages.front().index;
  for (int i = base; i <= j; ++i) {
    const Stage& st = s.stages[static_cast<std::size_t>(i - base)];
    if (!st.active) continue;
    double tn = st.duration * static_cast<double>(st.freq);
    if (st.horizontal)
      ky += kx * tn;
    else
      kx += ky * tn;
  }
  return {kx, ky};
}

std::pair<double, double> shear_freq_bound(const StageSchedule& s, int j) {
  double fx = 0.0, fy = 0.0;
  int base = s.stages.empty() ? 0 : s.stages.front().index;
  for (int i = base; i <= j; ++i) {
    const Stage& st = s.stages[static_cast<std::size_t>(i - base)];
    if (!st.active) continue;
    // vertical stages shear with S(N x): harmonics land on the x-axis
    if (st.horizontal)
      fy = std::max(fy, static_cast<double>(st.freq));
    else
      fx = std::max(fx, static_cast<double>(st.freq));
  }
  return {fx, fy};
}

std::pair<int, int> recommended_grid(const InitialData& d,
                                     const StageSchedule& s, int j,
                                     double margin, int min_n, int max_n,
                                     int pad) {
  auto [bx, by] = support_bound(d, s, j);
  auto [fx, fy] = shear_freq_bound(s, j);
  double wx = 2.0 * (margin * bx + pad * fx);
  double wy = 2.0 * (margin * by + pad * fy);
  if (wx > static_cast<double>(max_n) || wy > static_cast<double>(max_n))
    return {0, 0};
  int nx = static_cast<int>(next_pow2(static_cast<std::size_t>(
      std::max(static_cast<double>(min_n), wx))));
  int ny = static_cast<int>(next_pow2(static_cast<std::size_t>(
      std::max(static_cast<double>(min_n), wy))));
  return {nx, ny};
}

GridField sample_grid_values(const InitialData& d, const StageSchedule& s,
                             int j, int nx, int ny) {
  GridField g(nx, ny);
  double hx = two_pi / nx, hy = two_pi / ny;
  for (int iy = 0; iy < ny; ++iy) {
    double y = iy * hy;
    for (int ix = 0; ix < nx; ++ix)
      g.v[static_cast<std::size_t>(iy) * nx + ix] =
          evaluate(d, s, j, ix * hx, y);
  }
  return g;
}

SpectralField sample_grid(const InitialData& d, const StageSchedule& s, int j,
                          int nx, int ny, const SampleOptions& opts) {
  if (!is_pow2(static_cast<std::size_t>(nx)) ||
      !is_pow2(static_cast<std::size_t>(ny)))
    throw ConfigError("grid sizes must be powers of two");
  auto [bx, by] = support_bound(d, s, j);
  bool under = (opts.margin * bx > nx / 2.0) || (opts.margin * by > ny / 2.0);
  if (under) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "stage %d support bound (%.0f, %.0f) exceeds Nyquist/%.2g "
                  "at %dx%d",
                  j, bx, by, opts.margin, nx, ny);
    if (opts.strict) throw ResolutionError(msg);
    if (!opts.quiet) std::cerr << "[shearlab] warning: " << msg << "\n";
  }
  GridField g = sample_grid_values(d, s, j, nx, ny);
  SpectralField f = field_from_grid(g);
  double rel = std::abs(f.c[0]) * two_pi / (d.l2() + 1e-300);
  if (rel > 1e-12) {
    char msg[120];
    std::snprintf(msg, sizeof msg,
                  "sampled mean %.3e relative (under-resolved?)", rel);
    if (opts.strict) throw ResolutionError(msg);
    if (!opts.quiet) std::cerr << "[shearlab] warning: " << msg << "\n";
  }
  f.zero_mean();
  return f;
}

namespace {

struct GradQuadrature {
  double dx_l2 = 0.0;  // |d_x theta|_{L2}
  double dy_l2 = 0.0;
  double h1 = 0.0;
};

// Grid quadrature of the analytic gradient squares. Exact to near machine
// precision for the composed shear fields: |S'| = 1 off the caps, so the
// integrand is a trigonometric polynomial plus shear-harmonic terms whose
// grid sums cancel by parity once the grid covers ~4 points per shear period.
GradQuadrature gradient_quadrature(const InitialData& d, const StageSchedule& s,
                                   int j, int nx, int ny) {
  std::vector<double> rx(static_cast<std::size_t>(ny)),
      ry(static_cast<std::size_t>(ny));
  double hx = two_pi / nx, hy = two_pi / ny;
  for (int iy = 0; iy < ny; ++iy) {
    double y = iy * hy;
    double sx = 0.0, sy = 0.0;
    for (int ix = 0; ix < nx; ++ix) {
      double gx, gy;
      evaluate_gradient(d, s, j, ix * hx, y, gx, gy);
      sx += gx * gx;
      sy += gy * gy;
    }
    rx[static_cast<std::size_t>(iy)] = sx;
    ry[static_cast<std::size_t>(iy)] = sy;
  }
  double cell = 1.0 / (static_cast<double>(nx) * ny);
  GradQuadrature q;
  double ix2 = pairwise_sum(rx) * cell, iy2 = pairwise_sum(ry) * cell;
  q.dx_l2 = two_pi * std::sqrt(ix2);
  q.dy_l2 = two_pi * std::sqrt(iy2);
  q.h1 = two_pi * std::sqrt(ix2 + iy2);
  return q;
}

// Dense-grid sup of |d_x theta_j| and |d_y theta_j| from the analytic chain
// rule; a lower bound on the true sup, tightening with factor.
std::pair<double, double> dense_w1inf(const InitialData& d,
                                      const StageSchedule& s, int j, int nx,
                                      int ny) {
  double mx = 0.0, my = 0.0;
  double hx = two_pi / nx, hy = two_pi / ny;
  for (int iy = 0; iy < ny; ++iy) {
    double y = iy * hy;
    for (int ix = 0; ix < nx; ++ix) {
      double dx, dy;
      evaluate_gradient(d, s, j, ix * hx, y, dx, dy);
      mx = std::max(mx, std::fabs(dx));
      my = std::max(my, std::fabs(dy));
    }
  }
  return {mx, my};
}

}  // namespace

BootstrapTrace bootstrap_trace(const HarmonicData& h, const StageSchedule& s,
                               const BootstrapOptions& opts) {
  h.validate();
  InitialData data(h);
  BootstrapTrace tr;
  tr.theta0_l2 = h.l2();

  int first = s.first_active();
  if (first < 0) return tr;  // all-identity program: nothing to trace
  int base = s.stages.front().index;
  const Stage& first_stage = s.stages[static_cast<std::size_t>(first - base)];

  double prev_dir = std::numeric_limits<double>::quiet_NaN();
  for (int j = first - 1; j <= s.j_max; ++j) {
    bool initial = j < first;
    if (!initial && !s.stages[static_cast<std::size_t>(j - base)].active)
      continue;
    // A horizontal stage shifts x by f(y), so d_y is amplified; the initial
    // record carries the direction the first stage will consume.
    const Stage& st =
        s.stages[static_cast<std::size_t>((initial ? first : j) - base)];
    Axis amp;
    if (initial)
      amp = first_stage.horizontal ? Axis::X : Axis::Y;
    else
      amp = st.horizontal ? Axis::Y : Axis::X;

    int sample_j = initial ? base - 1 : j;  // below `base` composes nothing
    auto [nx, ny] = recommended_grid(data, s, sample_j, opts.margin, 64,
                                     opts.max_grid, opts.pad);
    if (nx == 0) {
      if (opts.strict)
        throw ResolutionError("bootstrap trace under-resolved at stage " +
                              std::to_string(j));
      break;
    }
    SampleOptions so;
    so.strict = opts.strict;
    so.margin = opts.margin;
    SpectralField f = sample_grid(data, s, sample_j, nx, ny, so);
    GradQuadrature gq = gradient_quadrature(data, s, sample_j, nx, ny);

    BootstrapRecord rec;
    rec.j = j;
    rec.initial = initial;
    rec.amp_axis = amp;
    rec.dir_norm = amp == Axis::X ? gq.dx_l2 : gq.dy_l2;
    rec.h1 = gq.h1;
    rec.h2 = two_pi * std::sqrt(f.mode_sum(2.0));
    auto [wx, wy] = dense_w1inf(data, s, sample_j,
                                std::min(opts.dense_factor * nx, opts.dense_cap),
                                std::min(opts.dense_factor * ny, opts.dense_cap));
    rec.w1inf = std::max(wx, wy);
    rec.a_ratio = initial ? std::numeric_limits<double>::quiet_NaN()
                          : prev_dir / rec.dir_norm;
    rec.r_ratio = rec.w1inf / rec.dir_norm;
    rec.nx = nx;
    rec.ny = ny;
    rec.t = initial ? 0.0 : st.duration;
    rec.eps = st.eps;
    rec.freq = st.freq;
    rec.horizontal = st.horizontal;
    rec.sign = st.sign;
    tr.records.push_back(rec);
    prev_dir = rec.dir_norm;
    if (initial) tr.theta0_h1 = rec.h1;
  }
  return tr;
}

void write_bootstrap_csv(const BootstrapTrace& tr, std::ostream& out) {
  out << "j,initial,amp_axis,dir_norm,A,R,h1,h2,w1inf,t,N,eps,dir,sign,nx,ny\n";
  char buf[512];
  for (const BootstrapRecord& r : tr.records) {
    std::snprintf(buf, sizeof buf,
                  "%d,%d,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%lld,"
                  "%.17g,%s,%d,%d,%d\n",
                  r.j, r.initial ? 1 : 0, r.amp_axis == Axis::X ? "x" : "y",
                  r.dir_norm, r.a_ratio, r.r_ratio, r.h1, r.h2, r.w1inf, r.t,
                  r.freq, r.eps, r.horizontal ? "h" : "v", r.sign, r.nx, r.ny);
    out << buf;
  }
}

void write_bootstrap_csv_file(const BootstrapTrace& tr,
                              const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open for writing: " + path);
  write_bootstrap_csv(tr, f);
}

}  // namespace shearlab
