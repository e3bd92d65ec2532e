#include <doctest.h>

#include <cmath>

#include "shearlab/inviscid.hpp"

using namespace shearlab;

namespace {

// test-side quadrature of a directional derivative (independent of the
// library's internal accumulation)
double dir_l2(const InitialData& d, const StageSchedule& s, int j, bool want_x,
              int nx, int ny) {
  double acc = 0.0;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      double gx, gy;
      evaluate_gradient(d, s, j, two_pi * ix / nx, two_pi * iy / ny, gx, gy);
      double g = want_x ? gx : gy;
      acc += g * g;
    }
  return two_pi * std::sqrt(acc / (static_cast<double>(nx) * ny));
}

StageSchedule one_horizontal_stage(double t, long long freq, double eps) {
  Stage st;
  st.duration = t;
  st.freq = freq;
  st.eps = eps;
  st.horizontal = true;
  st.sign = 0;
  return make_custom_schedule({st});
}

}  // namespace

TEST_CASE("backward map through identity stages") {
  StageSchedule s = build_universal(0.5, 2);  // everything inactive
  auto [px, py] = backward_map(s, 2, 1.3, 4.7);
  CHECK(px == 1.3);
  CHECK(py == 4.7);
}

TEST_CASE("single horizontal stage map matches the formula") {
  StageSchedule s = one_horizontal_stage(0.25, 8, 0.2);
  SawtoothProfile prof(0.2);
  for (double y : {0.3, 2.0, 5.5}) {
    auto [px, py] = backward_map(s, s.j_max, 1.0, y);
    CHECK(px == doctest::Approx(1.0 + 0.25 * prof.value(8.0 * y)).epsilon(1e-15));
    CHECK(py == y);
  }
}

TEST_CASE("composed map is volume preserving (finite-difference Jacobian)") {
  StageSchedule s = build_universal(0.5, 5);
  double h = 1e-6;
  for (int i = 0; i < 100; ++i) {
    double x = counter_rng_unit(11, 2 * i) * two_pi;
    double y = counter_rng_unit(11, 2 * i + 1) * two_pi;
    auto [xp, yp] = backward_map(s, 5, x + h, y);
    auto [xm, ym] = backward_map(s, 5, x - h, y);
    auto [xq, yq] = backward_map(s, 5, x, y + h);
    auto [xr, yr] = backward_map(s, 5, x, y - h);
    double j11 = (xp - xm) / (2 * h), j21 = (yp - ym) / (2 * h);
    double j12 = (xq - xr) / (2 * h), j22 = (yq - yr) / (2 * h);
    double det = j11 * j22 - j12 * j21;
    CHECK(std::fabs(det - 1.0) < 1e-6);
  }
}

TEST_CASE("analytic map derivative agrees with finite differences") {
  StageSchedule s = build_universal(0.5, 4);
  double h = 1e-6;
  for (int i = 0; i < 20; ++i) {
    double x = counter_rng_unit(13, 2 * i) * two_pi;
    double y = counter_rng_unit(13, 2 * i + 1) * two_pi;
    MapDerivative m = backward_map_derivative(s, 4, x, y);
    auto [xp, yp] = backward_map(s, 4, x + h, y);
    auto [xm, ym] = backward_map(s, 4, x - h, y);
    auto [xq, yq] = backward_map(s, 4, x, y + h);
    auto [xr, yr] = backward_map(s, 4, x, y - h);
    CHECK(std::fabs((xp - xm) / (2 * h) - m.m[0][0]) < 2e-5);
    CHECK(std::fabs((yp - ym) / (2 * h) - m.m[1][0]) < 2e-5);
    CHECK(std::fabs((xq - xr) / (2 * h) - m.m[0][1]) < 2e-5);
    CHECK(std::fabs((yq - yr) / (2 * h) - m.m[1][1]) < 2e-5);
  }
}

TEST_CASE("evaluate: identity stage returns theta0, one stage composes") {
  HarmonicData h;
  h.M = 2;
  h.L = 1;
  InitialData d(h);
  StageSchedule id = build_universal(0.5, 2);
  CHECK(evaluate(d, id, 2, 0.7, 1.9) ==
        doctest::Approx(h.value(0.7, 1.9)).epsilon(1e-15));

  StageSchedule s = one_horizontal_stage(0.25, 8, 0.2);
  SawtoothProfile prof(0.2);
  for (double x : {0.1, 3.3}) {
    for (double y : {0.8, 4.1}) {
      double expect =
          std::sin(2.0 * (x + 0.25 * prof.value(8.0 * y))) * std::sin(y);
      CHECK(evaluate(d, s, s.j_max, x, y) ==
            doctest::Approx(expect).epsilon(1e-14));
    }
  }
}

TEST_CASE("mid-stage evaluation uses the partial displacement") {
  HarmonicData h;
  InitialData d(h);
  StageSchedule s = one_horizontal_stage(0.25, 8, 0.2);
  SawtoothProfile prof(0.2);
  double tau = 0.1;
  double x = 1.2, y = 2.7;
  double expect = std::sin(x + tau * prof.value(8.0 * y)) * std::sin(y);
  CHECK(evaluate_at_time(d, s, tau, x, y) ==
        doctest::Approx(expect).epsilon(1e-14));
  CHECK(evaluate_at_time(d, s, 0.25 - 1e-15, x, y) ==
        doctest::Approx(evaluate(d, s, s.j_max, x, y)).epsilon(1e-10));
}

TEST_CASE("L2 is preserved by the composition (grid quadrature)") {
  HarmonicData h;
  InitialData d(h);
  StageSchedule s = build_universal(0.5, 5);
  GridField g = sample_grid_values(d, s, 5, 1024, 1024);
  CHECK(std::fabs(g.l2() / h.l2() - 1.0) < 1e-10);
}

TEST_CASE("L1 and Linf are preserved on dense grids") {
  HarmonicData h;
  InitialData d(h);
  StageSchedule s = build_universal(0.5, 4);
  int n = 1024;
  double l1 = 0.0, linf = 0.0;
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      double v = std::fabs(evaluate(d, s, 4, two_pi * ix / n, two_pi * iy / n));
      l1 += v;
      linf = std::max(linf, v);
    }
  l1 *= two_pi * two_pi / (static_cast<double>(n) * n);
  CHECK(std::fabs(l1 / 16.0 - 1.0) < 1e-5);  // int |sin sin| = 16
  CHECK(std::fabs(linf - 1.0) < 1e-3);
}

TEST_CASE("sample_grid basics") {
  HarmonicData h;
  InitialData d(h);
  StageSchedule id = build_universal(0.5, 2);
  SpectralField f = sample_grid(d, id, 2, 64, 64);
  int nonzero = 0;
  for (const auto& z : f.c)
    if (std::abs(z) > 1e-14) ++nonzero;
  CHECK(nonzero == 4);
  CHECK(f.mean_zero);

  // spectral mass concentrates inside the chirp + shear-harmonic band
  StageSchedule s = build_universal(0.5, 5);
  auto [nx, ny] = recommended_grid(d, s, 5);
  SpectralField f5 = sample_grid(d, s, 5, nx, ny);
  auto [bx, by] = support_bound(d, s, 5);
  auto [fx, fy] = shear_freq_bound(s, 5);
  double inside = 0.0, total = 0.0;
  for (int iy = 0; iy < f5.ny; ++iy)
    for (int ix = 0; ix < f5.nx; ++ix) {
      double kx = SpectralField::wavenumber(ix, f5.nx);
      double ky = SpectralField::wavenumber(iy, f5.ny);
      double m = std::norm(f5.c[static_cast<std::size_t>(iy) * f5.nx + ix]);
      total += m;
      if (std::fabs(kx) <= bx + 4 * fx && std::fabs(ky) <= by + 4 * fy)
        inside += m;
    }
  CHECK(inside / total > 0.99);
}

TEST_CASE("under-resolved sampling warns or throws") {
  HarmonicData h;
  InitialData d(h);
  StageSchedule s = build_universal(0.5, 6);
  SampleOptions strict;
  strict.strict = true;
  CHECK_THROWS_AS(sample_grid(d, s, 6, 64, 64, strict), ResolutionError);
}

TEST_CASE("bootstrap trace: ratios, growth and bounds (alpha = 0.5)") {
  HarmonicData h;
  StageSchedule s = build_universal(0.5, 5);
  BootstrapOptions bo;
  bo.max_grid = 1 << 12;
  bo.dense_factor = 2;  // unit-test scale; acceptance runs the spec factor
  BootstrapTrace tr = bootstrap_trace(h, s, bo);
  REQUIRE(tr.records.size() == 4);  // initial + stages 3..5
  const auto& first = tr.records[1];
  CHECK(first.j == 3);
  CHECK(first.a_ratio < 3.0 / 5.0);  // pure harmonic starts the bootstrap
  for (std::size_t i = 1; i < tr.records.size(); ++i) {
    const auto& r = tr.records[i];
    CHECK(r.a_ratio <= 2.0 * std::exp2(-0.5 * r.j));
    CHECK(r.a_ratio > 0.0);
    // interpolation |theta|_{H1}^2 <= |theta|_{L2} |theta|_{H2}
    CHECK(r.h1 * r.h1 <= tr.theta0_l2 * r.h2 * (1.0 + 1e-12));
    // per-stage upper bound with slack 1 + 1/(t_j N_j)
    const auto& prev = tr.records[i - 1];
    double tn = r.t * static_cast<double>(r.freq);
    CHECK(r.h1 <= tn * (1.0 + 1.0 / tn) * prev.h1 * (1.0 + 1e-9));
  }
  // single growth constant: h1 >= c 2^{alpha j(j+1)/2} h1(0) for all stages
  double c_min = 1e300, c_max = 0.0;
  for (std::size_t i = 1; i < tr.records.size(); ++i) {
    const auto& r = tr.records[i];
    double ratio = r.h1 / tr.theta0_h1 / std::exp2(0.25 * r.j * (r.j + 1));
    c_min = std::min(c_min, ratio);
    c_max = std::max(c_max, ratio);
  }
  CHECK(c_min > 0.05);
  CHECK(c_max <= std::exp(1.0 / (std::exp2(0.5) - 1.0)));
  // measured H2 control constant stays bounded across stages
  for (std::size_t i = 1; i < tr.records.size(); ++i) {
    const auto& r = tr.records[i];
    CHECK(r.h2 <= 10.0 * r.h1 * r.h1);
  }
}

TEST_CASE("orthogonal direction is conserved by a single stage (exact)") {
  HarmonicData h;
  h.M = 2;
  h.L = 1;
  InitialData d(h);
  StageSchedule s = one_horizontal_stage(0.25, 8, 0.2);
  // horizontal stage conserves |d_x theta|; theta0 row spectra are
  // band-limited so the shifted-row quadrature is exact
  double before = dir_l2(d, s, s.j_max - 1, true, 256, 256);
  double after = dir_l2(d, s, s.j_max, true, 256, 256);
  CHECK(std::fabs(after / before - 1.0) < 1e-12);
}

TEST_CASE("orthogonal direction conservation across composed stages") {
  // multi-stage: the uniform-grid quadrature carries the shear-harmonic
  // floor (~1e-5 relative); the identity itself is exact, and the spectral
  // solver test realizes it at machine precision
  HarmonicData h;
  InitialData d(h);
  StageSchedule s = build_universal(0.5, 4);
  double before = dir_l2(d, s, 3, true, 512, 1024);
  double after = dir_l2(d, s, 4, true, 512, 1024);
  CHECK(std::fabs(after / before - 1.0) < 1e-4);
}

TEST_CASE("adaptive program on a pure harmonic reproduces the universal one") {
  HarmonicData h;
  InitialData d(h);
  AdaptiveOptions ao;
  ao.max_grid = 1 << 10;
  StageSchedule s = build_adaptive(d, 0.5, 5, ao);
  CHECK(s.a0 == 1.0);
  StageSchedule u = build_universal(0.5, 5);
  REQUIRE(s.stages.size() == u.stages.size());
  for (std::size_t i = 0; i < s.stages.size(); ++i) {
    CHECK(s.stages[i].sign == 0);  // symmetric data ties to sign 0
    CHECK(s.stages[i].freq == u.stages[i].freq);
    CHECK(s.stages[i].eps == u.stages[i].eps);
    CHECK(s.stages[i].duration == u.stages[i].duration);
  }
}

TEST_CASE("adaptive program rejects zero data") {
  SpectralField z(64, 64);
  CHECK_THROWS_AS(InitialData{z}, ConfigError);
}

TEST_CASE("initial data from spectral mode list evaluates exactly") {
  HarmonicData h;
  h.kind = HarmonicKind::SinCos;
  h.M = 3;
  h.L = 2;
  h.amplitude = 0.6;
  SpectralField f = harmonic_field(h, 64, 64);
  InitialData d(f);
  for (int i = 0; i < 50; ++i) {
    double x = counter_rng_unit(5, 2 * i) * two_pi;
    double y = counter_rng_unit(5, 2 * i + 1) * two_pi;
    CHECK(d.value(x, y) == doctest::Approx(h.value(x, y)).epsilon(1e-12));
    double gx1, gy1, gx2, gy2;
    d.gradient(x, y, gx1, gy1);
    h.gradient(x, y, gx2, gy2);
    CHECK(gx1 == doctest::Approx(gx2).epsilon(1e-11));
    CHECK(gy1 == doctest::Approx(gy2).epsilon(1e-11));
  }
  CHECK(d.l2() == doctest::Approx(h.l2()).epsilon(1e-13));
}
