#ifndef SHEARLAB_FFT_HPP
#define SHEARLAB_FFT_HPP

#include <complex>

namespace shearlab {

// Cached FFTW plans for one (nx, ny) layout: row-major, rows indexed by y (or
// ky), columns by x (or kx). All transforms are unnormalized; callers divide
// by the transform length. Plans are created with FFTW_ESTIMATE|FFTW_UNALIGNED
// so planning is deterministic and any buffer may be passed.
class Fft2D {
 public:
  Fft2D(int nx, int ny);
  ~Fft2D();
  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;

  int nx() const { return nx_; }
  int ny() const { return ny_; }

  void forward2d(std::complex<double>* data) const;
  void inverse2d(std::complex<double>* data) const;
  // Batched 1D transforms along one axis (x: contiguous rows, y: strided
  // columns), leaving the other axis untouched.
  void forward_x(std::complex<double>* data) const;
  void inverse_x(std::complex<double>* data) const;
  void forward_y(std::complex<double>* data) const;
  void inverse_y(std::complex<double>* data) const;

 private:
  int nx_, ny_;
  void* fwd2_;
  void* inv2_;
  void* fwd_x_;
  void* inv_x_;
  void* fwd_y_;
  void* inv_y_;
};

// Process-lifetime plan cache (single-threaded use).
const Fft2D& fft_plans(int nx, int ny);

}  // namespace shearlab

#endif
