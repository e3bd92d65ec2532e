#include <doctest.h>

#include <cmath>
#include <sstream>

#include "shearlab/spectral_field.hpp"

using namespace shearlab;

TEST_CASE("harmonic field places exactly four coefficients") {
  HarmonicData h;  // sin(x) sin(y)
  SpectralField f = harmonic_field(h, 64, 64);
  int nonzero = 0;
  for (const auto& z : f.c)
    if (z != std::complex<double>(0.0, 0.0)) ++nonzero;
  CHECK(nonzero == 4);
  CHECK(f.at(1, 1) == std::complex<double>(-0.25, 0.0));
  CHECK(f.at(1, -1) == std::complex<double>(0.25, 0.0));
  CHECK(f.hermitian_defect() == 0.0);
  // |sin sin|_{L2} = pi on [0,2pi)^2
  CHECK(f.l2() == doctest::Approx(two_pi / 2.0).epsilon(1e-14));
  CHECK(f.l2() == doctest::Approx(h.l2()).epsilon(1e-14));
}

TEST_CASE("harmonic validation") {
  HarmonicData h;
  h.M = 0;  // sin(0 x) == 0
  CHECK_THROWS_AS(h.validate(), ConfigError);
  HarmonicData c;
  c.kind = HarmonicKind::CosCos;
  c.M = 0;
  c.L = 0;  // constant
  CHECK_THROWS_AS(c.validate(), ConfigError);
  HarmonicData ok;
  ok.kind = HarmonicKind::CosCos;
  ok.M = 0;
  ok.L = 2;  // cos(2y), mean-zero
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("grid transform round trip") {
  HarmonicData h;
  h.kind = HarmonicKind::SinCos;
  h.M = 3;
  h.L = 2;
  h.amplitude = 0.7;
  SpectralField f = harmonic_field(h, 128, 64);
  GridField g = field_to_grid(f);
  // grid values match the closed form
  double worst = 0.0;
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      worst = std::max(worst,
                       std::fabs(g.at(ix, iy) - h.value(g.x(ix), g.y(iy))));
  CHECK(worst < 1e-13);
  SpectralField f2 = field_from_grid(g);
  GridField g2 = field_to_grid(f2);
  worst = 0.0;
  for (std::size_t i = 0; i < g.v.size(); ++i)
    worst = std::max(worst, std::fabs(g.v[i] - g2.v[i]));
  CHECK(worst < 1e-13);
  // Parseval: grid L2 equals coefficient L2
  CHECK(g.l2() == doctest::Approx(f.l2()).epsilon(1e-13));
}

TEST_CASE("support reporting") {
  HarmonicData h;
  h.M = 5;
  h.L = 3;
  SpectralField f = harmonic_field(h, 64, 64);
  auto [sx, sy] = f.support();
  CHECK(sx == 5);
  CHECK(sy == 3);
}

TEST_CASE("field file round trip is bit exact") {
  HarmonicData h;
  h.M = 2;
  h.L = 1;
  h.amplitude = 1.25;
  SpectralField f = harmonic_field(h, 32, 32);
  std::ostringstream out(std::ios::binary);
  save_field(f, out);
  std::istringstream in(out.str(), std::ios::binary);
  SpectralField g = load_field(in);
  CHECK(g.nx == f.nx);
  CHECK(g.ny == f.ny);
  CHECK(g.mean_zero == f.mean_zero);
  CHECK(g.c == f.c);
}

TEST_CASE("mode sums match hand values for sin sin") {
  HarmonicData h;
  SpectralField f = harmonic_field(h, 64, 64);
  double l2 = f.l2();
  // |k|^2 = 2 on all four modes
  CHECK(two_pi * std::sqrt(f.mode_sum(1.0)) ==
        doctest::Approx(std::sqrt(2.0) * l2).epsilon(1e-14));
  CHECK(two_pi * std::sqrt(f.mode_sum(-1.0)) ==
        doctest::Approx(l2 / std::sqrt(2.0)).epsilon(1e-14));
}
