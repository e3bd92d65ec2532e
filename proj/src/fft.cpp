#include "shearlab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>

#include "shearlab/common.hpp"

namespace shearlab {

namespace {
fftw_complex* as_fftw(std::complex<double>* p) {
  return reinterpret_cast<fftw_complex*>(p);
}
constexpr unsigned kFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;
}  // namespace

Fft2D::Fft2D(int nx, int ny) : nx_(nx), ny_(ny) {
  if (!is_pow2(static_cast<std::size_t>(nx)) ||
      !is_pow2(static_cast<std::size_t>(ny)))
    throw ConfigError("grid sizes must be powers of two");
  std::vector<std::complex<double>> buf(static_cast<std::size_t>(nx) * ny);
  fftw_complex* b = as_fftw(buf.data());
  fwd2_ = fftw_plan_dft_2d(ny, nx, b, b, FFTW_FORWARD, kFlags);
  inv2_ = fftw_plan_dft_2d(ny, nx, b, b, FFTW_BACKWARD, kFlags);
  int n_x[1] = {nx}, n_y[1] = {ny};
  fwd_x_ = fftw_plan_many_dft(1, n_x, ny, b, nullptr, 1, nx, b, nullptr, 1, nx,
                              FFTW_FORWARD, kFlags);
  inv_x_ = fftw_plan_many_dft(1, n_x, ny, b, nullptr, 1, nx, b, nullptr, 1, nx,
                              FFTW_BACKWARD, kFlags);
  fwd_y_ = fftw_plan_many_dft(1, n_y, nx, b, nullptr, nx, 1, b, nullptr, nx, 1,
                              FFTW_FORWARD, kFlags);
  inv_y_ = fftw_plan_many_dft(1, n_y, nx, b, nullptr, nx, 1, b, nullptr, nx, 1,
                              FFTW_BACKWARD, kFlags);
}

Fft2D::~Fft2D() {
  fftw_destroy_plan(static_cast<fftw_plan>(fwd2_));
  fftw_destroy_plan(static_cast<fftw_plan>(inv2_));
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_x_));
  fftw_destroy_plan(static_cast<fftw_plan>(inv_x_));
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_y_));
  fftw_destroy_plan(static_cast<fftw_plan>(inv_y_));
}

void Fft2D::forward2d(std::complex<double>* d) const {
  fftw_execute_dft(static_cast<fftw_plan>(fwd2_), as_fftw(d), as_fftw(d));
}
void Fft2D::inverse2d(std::complex<double>* d) const {
  fftw_execute_dft(static_cast<fftw_plan>(inv2_), as_fftw(d), as_fftw(d));
}
void Fft2D::forward_x(std::complex<double>* d) const {
  fftw_execute_dft(static_cast<fftw_plan>(fwd_x_), as_fftw(d), as_fftw(d));
}
void Fft2D::inverse_x(std::complex<double>* d) const {
  fftw_execute_dft(static_cast<fftw_plan>(inv_x_), as_fftw(d), as_fftw(d));
}
void Fft2D::forward_y(std::complex<double>* d) const {
  fftw_execute_dft(static_cast<fftw_plan>(fwd_y_), as_fftw(d), as_fftw(d));
}
void Fft2D::inverse_y(std::complex<double>* d) const {
  fftw_execute_dft(static_cast<fftw_plan>(inv_y_), as_fftw(d), as_fftw(d));
}

const Fft2D& fft_plans(int nx, int ny) {
  static std::map<std::pair<int, int>, std::unique_ptr<Fft2D>> cache;
  auto key = std::make_pair(nx, ny);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<Fft2D>(nx, ny)).first;
  return *it->second;
}

}  // namespace shearlab
