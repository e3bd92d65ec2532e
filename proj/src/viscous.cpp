#include "shearlab/viscous.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <limits>

#include "shearlab/fft.hpp"

namespace shearlab {

namespace {

using cplx = std::complex<double>;

struct NormSums {
  double l2sq = 0.0;  // sum |c|^2           (times (2pi)^2 -> int |theta|^2)
  double h1sq = 0.0;  // sum |k|^2 |c|^2
};

// Row-partial accumulation combined pairwise over rows: deterministic and
// accurate independent of traversal chunking.
NormSums field_norm_sums(const SpectralField& f) {
  std::vector<double> row_l2(f.ny), row_h1(f.ny);
  for (int iy = 0; iy < f.ny; ++iy) {
    double ky = SpectralField::wavenumber(iy, f.ny);
    const cplx* row = f.c.data() + static_cast<std::size_t>(iy) * f.nx;
    double s = 0.0, sk = 0.0;
    for (int ix = 0; ix < f.nx; ++ix) {
      double kx = SpectralField::wavenumber(ix, f.nx);
      double a = std::norm(row[ix]);
      s += a;
      sk += kx * kx * a;
    }
    row_l2[iy] = s;
    row_h1[iy] = sk + ky * ky * s;
  }
  return {pairwise_sum(row_l2), pairwise_sum(row_h1)};
}

struct FullNorms {
  double l2 = 0.0, h1 = 0.0, h2 = 0.0, hneg1 = 0.0;
};

FullNorms field_full_norms(const SpectralField& f) {
  std::vector<double> r0(f.ny), r1(f.ny), r2(f.ny), rn(f.ny);
  for (int iy = 0; iy < f.ny; ++iy) {
    double ky = SpectralField::wavenumber(iy, f.ny);
    const cplx* row = f.c.data() + static_cast<std::size_t>(iy) * f.nx;
    double s0 = 0, s1 = 0, s2 = 0, sn = 0;
    for (int ix = 0; ix < f.nx; ++ix) {
      double kx = SpectralField::wavenumber(ix, f.nx);
      double k2 = kx * kx + ky * ky;
      double a = std::norm(row[ix]);
      s0 += a;
      s1 += k2 * a;
      s2 += k2 * k2 * a;
      if (k2 > 0.0) sn += a / k2;
    }
    r0[iy] = s0;
    r1[iy] = s1;
    r2[iy] = s2;
    rn[iy] = sn;
  }
  FullNorms n;
  n.l2 = two_pi * std::sqrt(pairwise_sum(r0));
  n.h1 = two_pi * std::sqrt(pairwise_sum(r1));
  n.h2 = two_pi * std::sqrt(pairwise_sum(r2));
  n.hneg1 = two_pi * std::sqrt(pairwise_sum(rn));
  return n;
}

// Ledger assembly shared by run(), the reversal driver and the diffusion
// intervals. chi is the substep trapezoid of kappa |theta|_{H1}^2 except
// where an exact increment is supplied (pure heat flow).
class LedgerBuilder {
 public:
  LedgerBuilder(double kappa, int stride, const SolverConfig& cfg)
      : kappa_(kappa), stride_(stride) {
    ledger_.kappa = kappa;
    ledger_.nx = cfg.nx;
    ledger_.ny = cfg.ny;
    ledger_.substeps_per_stage = cfg.substeps_per_stage;
  }

  void start(const SpectralField& f) {
    NormSums s = field_norm_sums(f);
    last_f_ = kappa_ * two_pi * two_pi * s.h1sq;
    e0_ = 0.5 * two_pi * two_pi * s.l2sq;
    ledger_.theta0_l2 = two_pi * std::sqrt(s.l2sq);
    emit_row(f, 0.0);
  }

  // After each substep: fused sums from the final diffusion pass.
  void substep(double t_new, const SpectralField& f, double l2sq, double h1sq,
               double dt) {
    if (!std::isfinite(l2sq) || !std::isfinite(h1sq))
      throw NumericalError("solver produced non-finite norms at t = " +
                           std::to_string(t_new));
    double fnew = kappa_ * two_pi * two_pi * h1sq;
    chi_ += 0.5 * dt * (last_f_ + fnew);
    last_f_ = fnew;
    last_l2sq_ = l2sq;
    t_ = t_new;
    if (++count_ % stride_ == 0) emit_row(f, t_new);
  }

  // Exact dissipation increment over a heat-flow chunk.
  void exact_chunk(double t_new, const SpectralField& f, double dchi,
                   double h1sq_new) {
    chi_ += dchi;
    last_f_ = kappa_ * two_pi * two_pi * h1sq_new;
    t_ = t_new;
    emit_row(f, t_new);
  }

  void boundary(const SpectralField& f) { emit_row(f, t_); }

  double time() const { return t_; }
  void set_time(double t) { t_ = t; }

  DissipationLedger finish(const SpectralField& f) {
    emit_row(f, t_);
    return ledger_;
  }

 private:
  void emit_row(const SpectralField& f, double t) {
    if (!ledger_.rows.empty() && ledger_.rows.back().t == t &&
        ledger_.rows.back().chi == chi_)
      return;
    FullNorms n = field_full_norms(f);
    LedgerRow r;
    r.t = t;
    r.l2 = n.l2;
    r.h1 = n.h1;
    r.h2 = n.h2;
    r.hneg1 = n.hneg1;
    r.chi = chi_;
    r.residual = std::fabs(0.5 * n.l2 * n.l2 - e0_ + chi_);
    ledger_.rows.push_back(r);
  }

  double kappa_;
  int stride_;
  double chi_ = 0.0;
  double last_f_ = 0.0;
  double last_l2sq_ = 0.0;
  double e0_ = 0.0;
  double t_ = 0.0;
  long count_ = 0;
  DissipationLedger ledger_;
};

// One Strang substep for a shear stage. The state enters and leaves in full
// spectral form; norm sums of the post-substep state are returned from the
// final fused pass.
class StageStepper {
 public:
  StageStepper(SpectralField& f, const Stage& st, double kappa, int substeps,
               bool zero_velocity)
      : f_(f),
        fft_(fft_plans(f.nx, f.ny)),
        kappa_(kappa),
        dt_(st.duration / substeps),
        horizontal_(st.horizontal),
        amplitude_(st.active && !zero_velocity) {
    int n_shear = horizontal_ ? f.ny : f.nx;  // shear-coordinate grid size
    // displacement per substep at each shear-coordinate grid point
    ang_.resize(static_cast<std::size_t>(n_shear));
    if (amplitude_) {
      SawtoothProfile prof = st.profile();
      double nf = static_cast<double>(st.freq);
      double h = two_pi / n_shear;
      for (int m = 0; m < n_shear; ++m)
        ang_[static_cast<std::size_t>(m)] =
            st.sigma() * dt_ * prof.value(nf * (m * h));
    }
    int nx = f.nx, ny = f.ny;
    dx_.resize(static_cast<std::size_t>(nx));
    dy_.resize(static_cast<std::size_t>(ny));
    for (int ix = 0; ix < nx; ++ix) {
      double kx = SpectralField::wavenumber(ix, nx);
      dx_[static_cast<std::size_t>(ix)] = std::exp(-0.5 * kappa_ * kx * kx * dt_);
    }
    for (int iy = 0; iy < ny; ++iy) {
      double ky = SpectralField::wavenumber(iy, ny);
      dy_[static_cast<std::size_t>(iy)] = std::exp(-0.5 * kappa_ * ky * ky * dt_);
    }
  }

  NormSums substep() {
    if (kappa_ != 0.0) half_diffusion_pass(1.0);
    if (amplitude_) {
      if (horizontal_) {
        fft_.inverse_y(f_.c.data());
        phase_rows_kx();
        fft_.forward_y(f_.c.data());
      } else {
        fft_.inverse_x(f_.c.data());
        phase_cols_ky();
        fft_.forward_x(f_.c.data());
      }
    }
    double scale = amplitude_ ? 1.0 / (horizontal_ ? f_.ny : f_.nx) : 1.0;
    return final_pass(scale);
  }

 private:
  void half_diffusion_pass(double scale) {
    for (int iy = 0; iy < f_.ny; ++iy) {
      double a = dy_[static_cast<std::size_t>(iy)] * scale;
      cplx* row = f_.c.data() + static_cast<std::size_t>(iy) * f_.nx;
      for (int ix = 0; ix < f_.nx; ++ix)
        row[ix] *= a * dx_[static_cast<std::size_t>(ix)];
    }
  }

  // Half diffusion + FFT normalization fused with the norm accumulation.
  NormSums final_pass(double scale) {
    std::vector<double> row_l2(static_cast<std::size_t>(f_.ny));
    std::vector<double> row_h1(static_cast<std::size_t>(f_.ny));
    for (int iy = 0; iy < f_.ny; ++iy) {
      double ky = SpectralField::wavenumber(iy, f_.ny);
      double a = dy_[static_cast<std::size_t>(iy)] * scale;
      cplx* row = f_.c.data() + static_cast<std::size_t>(iy) * f_.nx;
      double s = 0.0, sk = 0.0;
      for (int ix = 0; ix < f_.nx; ++ix) {
        cplx v = row[ix] * (a * dx_[static_cast<std::size_t>(ix)]);
        row[ix] = v;
        double kx = SpectralField::wavenumber(ix, f_.nx);
        double p = std::norm(v);
        s += p;
        sk += kx * kx * p;
      }
      row_l2[static_cast<std::size_t>(iy)] = s;
      row_h1[static_cast<std::size_t>(iy)] = sk + ky * ky * s;
    }
    return {pairwise_sum(row_l2), pairwise_sum(row_h1)};
  }

  // Horizontal stage, mixed rep (kx, y): row m holds all kx for y_m; multiply
  // by exp(i kx ang[m]) with an anchored unimodular recurrence.
  void phase_rows_kx() {
    int nx = f_.nx, ny = f_.ny;
    for (int m = 0; m < ny; ++m) {
      double ang = ang_[static_cast<std::size_t>(m)];
      cplx* row = f_.c.data() + static_cast<std::size_t>(m) * nx;
      cplx w(std::cos(ang), std::sin(ang));
      cplx z(1.0, 0.0);
      for (int ix = 0; ix <= nx / 2; ++ix) {
        if ((ix & 31) == 0) {  // re-anchor to kill recurrence drift
          double ph = ang * ix;
          z = cplx(std::cos(ph), std::sin(ph));
        }
        row[ix] *= z;
        z *= w;
      }
      z = std::conj(w);
      for (int ix = nx - 1; ix > nx / 2; --ix) {  // kx = ix - nx < 0
        int kx = ix - nx;
        if (((nx - ix) & 31) == 1) {
          double ph = ang * kx;
          z = cplx(std::cos(ph), std::sin(ph));
        }
        row[ix] *= z;
        z *= std::conj(w);
      }
    }
  }

  // Vertical stage, mixed rep (x, ky): row iy holds all x for wavenumber
  // ky(iy); multiply by exp(i ky ang[g]). Recurrence runs down the rows with
  // a full-width carry buffer so the traversal stays streaming.
  void phase_cols_ky() {
    int nx = f_.nx, ny = f_.ny;
    std::vector<cplx> w(static_cast<std::size_t>(nx)), z(static_cast<std::size_t>(nx));
    for (int g = 0; g < nx; ++g) {
      double ang = ang_[static_cast<std::size_t>(g)];
      w[static_cast<std::size_t>(g)] = cplx(std::cos(ang), std::sin(ang));
      z[static_cast<std::size_t>(g)] = cplx(1.0, 0.0);
    }
    for (int iy = 0; iy <= ny / 2; ++iy) {
      cplx* row = f_.c.data() + static_cast<std::size_t>(iy) * nx;
      if ((iy & 31) == 0)
        for (int g = 0; g < nx; ++g) {
          double ph = ang_[static_cast<std::size_t>(g)] * iy;
          z[static_cast<std::size_t>(g)] = cplx(std::cos(ph), std::sin(ph));
        }
      for (int g = 0; g < nx; ++g) {
        row[g] *= z[static_cast<std::size_t>(g)];
        z[static_cast<std::size_t>(g)] *= w[static_cast<std::size_t>(g)];
      }
    }
    for (int g = 0; g < nx; ++g)
      z[static_cast<std::size_t>(g)] = std::conj(w[static_cast<std::size_t>(g)]);
    for (int iy = ny - 1; iy > ny / 2; --iy) {
      int ky = iy - ny;
      cplx* row = f_.c.data() + static_cast<std::size_t>(iy) * nx;
      if (((ny - iy) & 31) == 1)
        for (int g = 0; g < nx; ++g) {
          double ph = ang_[static_cast<std::size_t>(g)] * ky;
          z[static_cast<std::size_t>(g)] = cplx(std::cos(ph), std::sin(ph));
        }
      for (int g = 0; g < nx; ++g) {
        row[g] *= z[static_cast<std::size_t>(g)];
        z[static_cast<std::size_t>(g)] *= std::conj(w[static_cast<std::size_t>(g)]);
      }
    }
  }

  SpectralField& f_;
  const Fft2D& fft_;
  double kappa_;
  double dt_;
  bool horizontal_;
  bool amplitude_;
  std::vector<double> ang_;
  std::vector<double> dx_, dy_;
};

void guard_stage(const Stage& st, const SolverConfig& cfg) {
  if (!st.active || cfg.zero_velocity) return;
  int n_shear = st.horizontal ? cfg.ny : cfg.nx;
  double limit = cfg.nyquist_fraction * (n_shear / 2.0);
  if (static_cast<double>(st.freq) > limit) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "stage %d shear frequency %lld exceeds %.3g * Nyquist at "
                  "grid %dx%d",
                  st.index, static_cast<long long>(st.freq),
                  cfg.nyquist_fraction, cfg.nx, cfg.ny);
    throw ResolutionError(msg);
  }
}

void advance_stage(SpectralField& f, const Stage& st, const SolverConfig& cfg,
                   LedgerBuilder* lb) {
  if (st.duration <= 0.0) return;
  guard_stage(st, cfg);
  StageStepper stepper(f, st, cfg.kappa, cfg.substeps_per_stage,
                       cfg.zero_velocity);
  double dt = st.duration / cfg.substeps_per_stage;
  double t0 = lb ? lb->time() : 0.0;
  for (int m = 1; m <= cfg.substeps_per_stage; ++m) {
    NormSums s = stepper.substep();
    if (lb) lb->substep(t0 + m * dt, f, s.l2sq, s.h1sq, dt);
  }
  if (lb) {
    lb->set_time(t0 + st.duration);
    lb->boundary(f);
  }
}

}  // namespace

void step_stage(SpectralField& f, const Stage& st, double kappa, int substeps) {
  if (substeps < 4) throw ConfigError("substeps_per_stage must be >= 4");
  if (st.duration <= 0.0) return;
  SolverConfig cfg;
  cfg.kappa = kappa;
  cfg.substeps_per_stage = substeps;
  cfg.nx = f.nx;
  cfg.ny = f.ny;
  guard_stage(st, cfg);
  StageStepper stepper(f, st, kappa, substeps, false);
  for (int m = 0; m < substeps; ++m) {
    NormSums s = stepper.substep();
    if (!std::isfinite(s.l2sq))
      throw NumericalError("solver produced non-finite field in stage " +
                           std::to_string(st.index));
  }
}

SpectralField embed_field(const SpectralField& f, int nx, int ny) {
  if (nx == f.nx && ny == f.ny) return f;
  SpectralField g(nx, ny);
  auto [sx, sy] = f.support(1e-300);
  if (2 * sx >= nx || 2 * sy >= ny)
    throw ResolutionError("field support does not fit the target grid");
  for (int iy = 0; iy < f.ny; ++iy)
    for (int ix = 0; ix < f.nx; ++ix) {
      cplx v = f.c[static_cast<std::size_t>(iy) * f.nx + ix];
      if (v == cplx(0.0, 0.0)) continue;
      int kx = SpectralField::wavenumber(ix, f.nx);
      int ky = SpectralField::wavenumber(iy, f.ny);
      g.at(kx, ky) = v;
    }
  g.mean_zero = f.mean_zero;
  return g;
}

RunResult run(const SpectralField& theta0, const StageSchedule& s,
              const SolverConfig& cfg, const StageCallback& on_stage_end) {
  if (cfg.substeps_per_stage < 4)
    throw ConfigError("substeps_per_stage must be >= 4");
  if (cfg.kappa < 0.0) throw ConfigError("kappa must be nonnegative");
  SpectralField f = embed_field(theta0, cfg.nx, cfg.ny);
  if (std::abs(f.c[0]) > 1e-12 * (f.l2() / two_pi + 1e-300))
    throw ConfigError("theta0 must be mean-zero");
  f.zero_mean();

  LedgerBuilder lb(cfg.kappa, cfg.ledger_stride, cfg);
  lb.start(f);
  for (const Stage& st : s.stages) {
    advance_stage(f, st, cfg, &lb);
    if (on_stage_end && st.duration > 0.0) on_stage_end(f, lb.time());
  }
  RunResult r{std::move(f), {}};
  r.ledger = lb.finish(r.field);
  return r;
}

void run_diffusion_interval(SpectralField& f, double kappa, double duration,
                            int samples, DissipationLedger* ledger) {
  if (duration <= 0.0) return;
  double t0 = ledger && !ledger->rows.empty() ? ledger->rows.back().t : 0.0;
  samples = std::max(1, samples);
  double dt = duration / samples;
  for (int m = 0; m < samples; ++m) {
    // exact chi increment: sum (2pi)^2 |c|^2 (1 - e^{-2 kappa k^2 dt}) / 2
    std::vector<double> row_d(static_cast<std::size_t>(f.ny));
    std::vector<double> row_h(static_cast<std::size_t>(f.ny));
    for (int iy = 0; iy < f.ny; ++iy) {
      double ky = SpectralField::wavenumber(iy, f.ny);
      cplx* row = f.c.data() + static_cast<std::size_t>(iy) * f.nx;
      double sd = 0.0, sh = 0.0;
      for (int ix = 0; ix < f.nx; ++ix) {
        double kx = SpectralField::wavenumber(ix, f.nx);
        double k2 = kx * kx + ky * ky;
        double g = std::exp(-kappa * k2 * dt);
        double a = std::norm(row[ix]);
        sd += 0.5 * a * (1.0 - g * g);
        row[ix] *= g;
        sh += k2 * a * g * g;
      }
      row_d[static_cast<std::size_t>(iy)] = sd;
      row_h[static_cast<std::size_t>(iy)] = sh;
    }
    double dchi = two_pi * two_pi * pairwise_sum(row_d);
    if (ledger) {
      LedgerRow r;
      FullNorms n = field_full_norms(f);
      double prev_chi = ledger->rows.empty() ? 0.0 : ledger->rows.back().chi;
      r.t = t0 + (m + 1) * dt;
      r.l2 = n.l2;
      r.h1 = n.h1;
      r.h2 = n.h2;
      r.hneg1 = n.hneg1;
      r.chi = prev_chi + dchi;
      double e0 = 0.5 * ledger->theta0_l2 * ledger->theta0_l2;
      r.residual = std::fabs(0.5 * n.l2 * n.l2 - e0 + r.chi);
      ledger->rows.push_back(r);
    }
  }
}

RunResult run_forward_reversed(const SpectralField& theta0,
                               const StageSchedule& s, const SolverConfig& cfg,
                               bool include_tail) {
  RunResult fwd = run(theta0, s, cfg);
  DissipationLedger ledger = std::move(fwd.ledger);
  SpectralField f = std::move(fwd.field);
  double t_end = s.total_time();
  // u(t) = -u_*(2 - t) mirrors the idle tail [T_end, 1] to [1, 2 - T_end]:
  // one pure-diffusion interval of twice the tail length, then the stages
  // run back in reverse order with flipped signs, ending at t = 2.
  double tail = include_tail ? 1.0 - t_end : 0.0;
  if (tail > 0.0) run_diffusion_interval(f, cfg.kappa, 2.0 * tail, 16, &ledger);

  std::vector<Stage> rev;
  for (auto it = s.stages.rbegin(); it != s.stages.rend(); ++it) {
    Stage st = *it;
    st.sign = 1 - st.sign;
    rev.push_back(st);
  }
  LedgerBuilder lb(cfg.kappa, cfg.ledger_stride, cfg);
  lb.start(f);  // re-anchors at the mirror point; rows merged below
  DissipationLedger back;
  for (const Stage& st : rev) advance_stage(f, st, cfg, &lb);
  back = lb.finish(f);

  double t_off = t_end + 2.0 * tail;
  double chi_off = ledger.final_chi();
  double e0 = 0.5 * ledger.theta0_l2 * ledger.theta0_l2;
  for (std::size_t i = 1; i < back.rows.size(); ++i) {  // skip duplicate row
    LedgerRow r = back.rows[i];
    r.t += t_off;
    r.chi += chi_off;
    r.residual = std::fabs(0.5 * r.l2 * r.l2 - e0 + r.chi);
    ledger.rows.push_back(r);
  }
  RunResult r{std::move(f), std::move(ledger)};
  return r;
}

std::vector<double> DissipationLedger::gradient_integral() const {
  std::vector<double> out(rows.size(), 0.0);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    double dt = rows[i].t - rows[i - 1].t;
    double a = rows[i - 1].h1, b = rows[i].h1;
    out[i] = out[i - 1] + 0.5 * dt * (a * a + b * b);
  }
  return out;
}

std::vector<H2RatioPoint> h2_ratio_trace(const DissipationLedger& viscous,
                                         const DissipationLedger& reference) {
  if (viscous.rows.size() != reference.rows.size())
    throw ConfigError("h2 ratio trace: ledgers have different sampling");
  std::vector<H2RatioPoint> out;
  out.reserve(viscous.rows.size());
  for (std::size_t i = 0; i < viscous.rows.size(); ++i) {
    const LedgerRow& v = viscous.rows[i];
    const LedgerRow& r = reference.rows[i];
    if (std::fabs(v.t - r.t) > 1e-12)
      throw ConfigError("h2 ratio trace: ledger times do not match");
    double h2_full = std::sqrt(v.l2 * v.l2 + v.h1 * v.h1 + v.h2 * v.h2);
    double h1_full_sq = r.l2 * r.l2 + r.h1 * r.h1;
    out.push_back({v.t, h2_full / h1_full_sq});
  }
  return out;
}

void write_ledger_csv(const DissipationLedger& l, std::ostream& out) {
  out << "t,l2,h1,h2,hneg1,chi,residual\n";
  char buf[256];
  for (const LedgerRow& r : l.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  r.t, r.l2, r.h1, r.h2, r.hneg1, r.chi, r.residual);
    out << buf;
  }
}

void write_ledger_csv_file(const DissipationLedger& l, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open for writing: " + path);
  write_ledger_csv(l, f);
}

}  // namespace shearlab
