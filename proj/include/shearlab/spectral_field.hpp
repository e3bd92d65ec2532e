#ifndef SHEARLAB_SPECTRAL_FIELD_HPP
#define SHEARLAB_SPECTRAL_FIELD_HPP

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "shearlab/common.hpp"
#include "shearlab/grid_field.hpp"

namespace shearlab {

// Real periodic scalar on [0,2pi)^2 stored as full complex Fourier
// coefficients, row-major with rows indexed by ky and columns by kx:
//
//   theta(x,y) = sum_k c(kx,ky) exp(i(kx x + ky y)),
//   kx = ix for ix < nx/2, ix - nx otherwise (same for ky).
//
// Normalization: c_k = (1/(nx ny)) sum_grid theta exp(-ik.x), so Parseval
// reads  int |theta|^2 = (2pi)^2 sum_k |c_k|^2  and the file format records
// this convention as normalization tag 1. Hermitian symmetry
// c(-k) = conj(c(k)) holds for real fields; mean_zero pins c(0,0) = 0.
struct SpectralField {
  int nx = 0;
  int ny = 0;
  bool mean_zero = false;
  std::vector<std::complex<double>> c;

  SpectralField() = default;
  SpectralField(int nx_, int ny_);

  static int index_of(int k, int n);  // wavenumber -> storage index
  static int wavenumber(int idx, int n);

  std::complex<double>& at(int kx, int ky) {
    return c[static_cast<std::size_t>(index_of(ky, ny)) * nx + index_of(kx, nx)];
  }
  std::complex<double> at(int kx, int ky) const {
    return c[static_cast<std::size_t>(index_of(ky, ny)) * nx + index_of(kx, nx)];
  }

  double l2() const;             // |theta|_{L^2} = 2pi sqrt(sum |c|^2)
  double mode_sum(double s) const;  // sum |k|^{2s} |c|^2 over k != 0
  double hermitian_defect() const;  // max |c(-k) - conj(c(k))|
  void enforce_hermitian();
  void zero_mean();
  // Largest |kx|,|ky| carrying relative mass above tol.
  std::pair<int, int> support(double rel_tol = 1e-13) const;
};

SpectralField field_from_grid(const GridField& g, bool enforce_real = true);
GridField field_to_grid(const SpectralField& f);

// Trigonometric products of integer harmonics: the x factor is sin(Mx) or
// cos(Mx), the y factor sin(Ly) or cos(Ly).
enum class HarmonicKind { SinSin, SinCos, CosSin, CosCos };

struct HarmonicData {
  HarmonicKind kind = HarmonicKind::SinSin;
  int M = 1;
  int L = 1;
  double amplitude = 1.0;

  void validate() const;  // rejects the zero function and constants
  double value(double x, double y) const;
  void gradient(double x, double y, double& dx, double& dy) const;
  double l2() const;  // closed form on [0,2pi)^2
};

HarmonicKind parse_harmonic_kind(const std::string& name);
const char* harmonic_kind_name(HarmonicKind k);

// Exact coefficient placement of the harmonic on an (nx, ny) grid.
SpectralField harmonic_field(const HarmonicData& h, int nx, int ny);

// Coefficient-file format (little-endian): magic "SHLBFLD1", u32 nx, u32 ny,
// u32 flags (bit0 = mean_zero), u32 normalization tag (1), then nx*ny
// complex<double> in storage order.
void save_field(const SpectralField& f, std::ostream& out);
void save_field_file(const SpectralField& f, const std::string& path);
SpectralField load_field(std::istream& in);
SpectralField load_field_file(const std::string& path);

}  // namespace shearlab

#endif
