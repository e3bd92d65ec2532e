#include "shearlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "shearlab/fft.hpp"

namespace shearlab {

double sobolev_norm(const SpectralField& f, double s) {
  if (s < 0.0) {
    double scale = f.l2() / two_pi;
    if (std::abs(f.c[0]) > 1e-12 * (scale + 1e-300))
      throw ConfigError("negative-order Sobolev norm needs mean-zero data");
  }
  return two_pi * std::sqrt(f.mode_sum(s));
}

namespace {

void check_aligned(const DissipationLedger& a, const DissipationLedger& b) {
  if (a.rows.size() != b.rows.size())
    throw ConfigError("criterion check: ledgers have different sampling");
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    if (std::fabs(a.rows[i].t - b.rows[i].t) > 1e-12)
      throw ConfigError("criterion check: ledger times do not match");
}

struct LineFit {
  double slope = 0.0, intercept = 0.0, rms = 0.0;
  int n = 0;
};

LineFit ols(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit f;
  f.n = static_cast<int>(x.size());
  if (f.n < 2) throw ConfigError("degenerate fit range");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < f.n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double det = f.n * sxx - sx * sx;
  if (det == 0.0) throw ConfigError("degenerate fit range");
  f.slope = (f.n * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / f.n;
  double ss = 0;
  for (int i = 0; i < f.n; ++i) {
    double r = y[i] - (f.slope * x[i] + f.intercept);
    ss += r * r;
  }
  f.rms = std::sqrt(ss / f.n);
  return f;
}

}  // namespace

CriterionReport criterion1_check(const DissipationLedger& inviscid,
                                 const DissipationLedger& viscous,
                                 double theta0_l2) {
  check_aligned(inviscid, viscous);
  CriterionReport rep;
  rep.id = 1;
  double inf_c = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < inviscid.rows.size(); ++i) {
    const LedgerRow& a = inviscid.rows[i];
    const LedgerRow& b = viscous.rows[i];
    double denom = (a.h2 + b.h2) * theta0_l2;
    if (denom <= 0.0) continue;
    double c = a.h1 * a.h1 / denom;
    rep.samples.push_back({a.t, c});
    inf_c = std::min(inf_c, c);
  }
  rep.constant = inf_c;
  rep.implied_bound = std::pow(0.5 * inf_c, 4) * theta0_l2 * theta0_l2;
  rep.hypothesis_ok = inf_c > 0.0 && inf_c < 1.0;

  // growth of int_0^t |grad theta|^2 against 1/(1-t) on the inviscid trace
  std::vector<double> I = inviscid.gradient_integral();
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < I.size(); ++i) {
    double t = inviscid.rows[i].t;
    if (I[i] <= 0.0 || t >= 1.0) continue;
    lx.push_back(std::log(1.0 / (1.0 - t)));
    ly.push_back(std::log(I[i]));
  }
  if (lx.size() >= 2) rep.growth_slope = ols(lx, ly).slope;
  return rep;
}

CriterionReport criterion2_check(const DissipationLedger& inviscid,
                                 double theta0_l2) {
  CriterionReport rep;
  rep.id = 2;
  double sup_c = 0.0;
  for (const LedgerRow& r : inviscid.rows) {
    double c = r.hneg1 * r.h1 / (theta0_l2 * theta0_l2);
    rep.samples.push_back({r.t, c});
    sup_c = std::max(sup_c, c);
  }
  rep.constant = sup_c;
  rep.implied_bound =
      sup_c > 0.0 ? theta0_l2 * theta0_l2 / (64.0 * sup_c * sup_c) : 0.0;
  rep.hypothesis_ok = sup_c >= 1.0 - 1e-9;  // interpolation forces C >= 1
  if (!rep.samples.empty() && rep.samples.front().value > 0.0)
    rep.growth_factor = rep.samples.back().value / rep.samples.front().value;
  return rep;
}

CriterionReport criterion3_check(const DissipationLedger& inviscid,
                                 const StageSchedule& schedule,
                                 double theta0_l2) {
  CriterionReport rep;
  rep.id = 3;
  double sup_h2 = 0.0, sup_h1low = 0.0, sup_gradu = 0.0;
  for (const LedgerRow& r : inviscid.rows) {
    if (r.h1 > 0.0) {
      sup_h2 = std::max(sup_h2, r.h2 * theta0_l2 / (r.h1 * r.h1));
      if (r.t < 1.0)
        sup_h1low = std::max(sup_h1low, theta0_l2 / ((1.0 - r.t) * r.h1));
    }
    int j = schedule.stage_at(r.t);
    double gu = 0.0;
    if (j >= 0)
      gu = schedule.stages[static_cast<std::size_t>(j - schedule.stages.front().index)]
               .grad_sup();
    rep.samples.push_back({r.t, (1.0 - r.t) * gu});
    sup_gradu = std::max(sup_gradu, (1.0 - r.t) * gu);
  }
  rep.c_h2 = sup_h2;
  rep.c_h1_lower = sup_h1low;
  rep.c_grad_u = sup_gradu;
  for (const Stage& st : schedule.stages) {
    if (!st.active) continue;
    double ratio = static_cast<double>(st.freq) * (1.0 - st.end());
    rep.grad_u_ratio.push_back({st.index, ratio});
  }
  // The ratio grows like 2^{alpha j}; call the budget bounded only when the
  // per-stage log-slope is flat (alpha = 0 limit), not merely short.
  if (rep.grad_u_ratio.size() >= 2) {
    std::vector<double> xs, ys;
    for (const auto& [j, ratio] : rep.grad_u_ratio) {
      xs.push_back(static_cast<double>(j));
      ys.push_back(std::log2(ratio));
    }
    double slope = ols(xs, ys).slope;
    rep.grad_u_bounded = slope < 0.1;
  } else {
    rep.grad_u_bounded = !rep.grad_u_ratio.empty();
  }
  rep.constant = std::max({sup_h2, sup_h1low, sup_gradu});
  rep.hypothesis_ok = rep.grad_u_bounded && sup_h2 < 1e6 && sup_h1low < 1e6;
  return rep;
}

void write_criterion_csv(const CriterionReport& r, std::ostream& out) {
  out << "t,value\n";
  char buf[96];
  for (const CriterionSample& s : r.samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", s.t, s.value);
    out << buf;
  }
}

void write_criterion_csv_file(const CriterionReport& r,
                              const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open for writing: " + path);
  write_criterion_csv(r, f);
}

namespace {

// Mean of |f(x + d) - f(x)|^p with the shift done by the exact spectral
// phase; g is the unshifted grid, reused across separations.
double increment_moment(const SpectralField& f, const GridField& g, double dx,
                        double dy, double p) {
  SpectralField sh = f;
  for (int iy = 0; iy < f.ny; ++iy) {
    double ky = SpectralField::wavenumber(iy, f.ny);
    for (int ix = 0; ix < f.nx; ++ix) {
      double kx = SpectralField::wavenumber(ix, f.nx);
      double ph = kx * dx + ky * dy;
      sh.c[static_cast<std::size_t>(iy) * f.nx + ix] *=
          std::complex<double>(std::cos(ph), std::sin(ph));
    }
  }
  GridField gs = field_to_grid(sh);
  return pairwise_sum_fn(g.v.size(), [&](std::size_t i) {
    return std::pow(std::fabs(gs.v[i] - g.v[i]), p);
  }) / static_cast<double>(g.v.size());
}

double increment_sup_one(const SpectralField& f, const GridField& g, double dx,
                         double dy) {
  SpectralField sh = f;
  for (int iy = 0; iy < f.ny; ++iy) {
    double ky = SpectralField::wavenumber(iy, f.ny);
    for (int ix = 0; ix < f.nx; ++ix) {
      double kx = SpectralField::wavenumber(ix, f.nx);
      double ph = kx * dx + ky * dy;
      sh.c[static_cast<std::size_t>(iy) * f.nx + ix] *=
          std::complex<double>(std::cos(ph), std::sin(ph));
    }
  }
  GridField gs = field_to_grid(sh);
  double m = 0.0;
  for (std::size_t i = 0; i < g.v.size(); ++i)
    m = std::max(m, std::fabs(gs.v[i] - g.v[i]));
  return m;
}

constexpr double inv_sqrt2 = 0.70710678118654752440;

}  // namespace

StructureTable structure_function(const SpectralField& f, double p,
                                  const std::vector<double>& ells) {
  if (p < 1.0) throw ConfigError("structure function requires p >= 1");
  GridField g = field_to_grid(f);
  StructureTable t;
  t.p = p;
  for (double ell : ells) {
    double s = increment_moment(f, g, ell, 0.0, p) +
               increment_moment(f, g, 0.0, ell, p) +
               increment_moment(f, g, ell * inv_sqrt2, ell * inv_sqrt2, p) +
               increment_moment(f, g, ell * inv_sqrt2, -ell * inv_sqrt2, p);
    t.ell.push_back(ell);
    t.sp.push_back(0.25 * s);
  }
  return t;
}

StructureTable structure_function_series(
    const std::vector<SpectralField>& fields,
    const std::vector<double>& weights, double p,
    const std::vector<double>& ells) {
  if (fields.empty() || fields.size() != weights.size())
    throw ConfigError("structure function series: bad weights");
  StructureTable acc;
  acc.p = p;
  acc.ell = ells;
  acc.sp.assign(ells.size(), 0.0);
  double wtot = 0.0;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    StructureTable t = structure_function(fields[i], p, ells);
    for (std::size_t k = 0; k < ells.size(); ++k)
      acc.sp[k] += weights[i] * t.sp[k];
    wtot += weights[i];
  }
  for (double& v : acc.sp) v /= wtot;
  return acc;
}

StructureTable structure_function_sampler(
    const std::function<double(double, double)>& f, int n, double p,
    const std::vector<double>& ells) {
  StructureTable t;
  t.p = p;
  double h = two_pi / n;
  for (double ell : ells) {
    const double dirs[4][2] = {{ell, 0.0},
                               {0.0, ell},
                               {ell * inv_sqrt2, ell * inv_sqrt2},
                               {ell * inv_sqrt2, -ell * inv_sqrt2}};
    double total = 0.0;
    for (const auto& d : dirs) {
      total += pairwise_sum_fn(static_cast<std::size_t>(n) * n,
                               [&](std::size_t i) {
                                 int ix = static_cast<int>(i) % n;
                                 int iy = static_cast<int>(i) / n;
                                 double x = ix * h, y = iy * h;
                                 double df = f(x + d[0], y + d[1]) - f(x, y);
                                 return std::pow(std::fabs(df), p);
                               }) /
               static_cast<double>(static_cast<std::size_t>(n) * n);
    }
    t.ell.push_back(ell);
    t.sp.push_back(0.25 * total);
  }
  return t;
}

void write_structure_csv(const StructureTable& t, std::ostream& out) {
  out << "ell,s" << t.p << "\n";
  char buf[80];
  for (std::size_t i = 0; i < t.ell.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", t.ell[i], t.sp[i]);
    out << buf;
  }
}

PowerLawFit fit_powerlaw(const StructureTable& t, double ell_lo, double ell_hi) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.ell.size(); ++i) {
    if (t.ell[i] < ell_lo || t.ell[i] > ell_hi) continue;
    if (t.sp[i] <= 0.0) continue;
    x.push_back(std::log(t.ell[i]));
    y.push_back(std::log(t.sp[i]));
  }
  LineFit lf = ols(x, y);
  PowerLawFit f;
  f.slope = lf.slope;
  f.intercept = lf.intercept;
  f.residual = lf.rms;
  f.ell_lo = ell_lo;
  f.ell_hi = ell_hi;
  f.points = lf.n;
  return f;
}

void write_fit_json(const PowerLawFit& f, std::ostream& out) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "{\"slope\": %.17g, \"intercept\": %.17g, \"residual\": %.17g, "
                "\"ell_lo\": %.17g, \"ell_hi\": %.17g, \"points\": %d}\n",
                f.slope, f.intercept, f.residual, f.ell_lo, f.ell_hi, f.points);
  out << buf;
}

std::vector<double> increment_sup(const SpectralField& f,
                                  const std::vector<double>& ells) {
  GridField g = field_to_grid(f);
  std::vector<double> out;
  for (double ell : ells) {
    double m = std::max(
        std::max(increment_sup_one(f, g, ell, 0.0),
                 increment_sup_one(f, g, 0.0, ell)),
        std::max(increment_sup_one(f, g, ell * inv_sqrt2, ell * inv_sqrt2),
                 increment_sup_one(f, g, ell * inv_sqrt2, -ell * inv_sqrt2)));
    out.push_back(m);
  }
  return out;
}

double holder_quotient(const SpectralField& f, double beta,
                       const std::vector<double>& ells) {
  std::vector<double> sup = increment_sup(f, ells);
  double q = 0.0;
  for (std::size_t i = 0; i < ells.size(); ++i)
    q = std::max(q, sup[i] / std::pow(ells[i], beta));
  return q;
}

double stage_velocity_holder(const Stage& st, double alpha,
                             const std::vector<double>& ells, int n) {
  if (!st.active) return 0.0;
  SawtoothProfile prof = st.profile();
  double nf = static_cast<double>(st.freq);
  double h = two_pi / n;
  double q = 0.0;
  for (double ell : ells) {
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
      double z = i * h;
      m = std::max(m, std::fabs(prof.value(nf * (z + ell)) - prof.value(nf * z)));
    }
    q = std::max(q, m / std::pow(ell, alpha));
  }
  return q;
}

OCBound obukhov_corrsin_bound(double alpha, double beta, double kappa,
                              double theta_cbeta, double u_l1_calpha,
                              double T) {
  if (!(alpha > 0.0 && alpha <= 1.0) || !(beta > 0.0 && beta <= 1.0) ||
      !(kappa > 0.0))
    throw ConfigError("obukhov-corrsin bound: alpha, beta in (0,1], kappa > 0");
  OCBound b;
  b.ell = std::pow(kappa, 1.0 / (alpha + 1.0));
  b.exponent = (alpha + 2.0 * beta - 1.0) / (alpha + 1.0);
  double cb2 = theta_cbeta * theta_cbeta;
  b.bound = std::pow(b.ell, alpha + 2.0 * beta - 1.0) * cb2 * u_l1_calpha +
            (kappa * T * std::pow(b.ell, 2.0 * (beta - 1.0)) +
             std::pow(b.ell, 2.0 * beta)) *
                cb2;
  return b;
}

}  // namespace shearlab
