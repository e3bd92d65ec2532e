#include "shearlab/spectral_field.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "shearlab/fft.hpp"

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian; big-endian hosts unsupported");

namespace shearlab {

SpectralField::SpectralField(int nx_, int ny_)
    : nx(nx_), ny(ny_), c(static_cast<std::size_t>(nx_) * ny_) {
  if (!is_pow2(static_cast<std::size_t>(nx)) ||
      !is_pow2(static_cast<std::size_t>(ny)))
    throw ConfigError("grid sizes must be powers of two");
}

int SpectralField::index_of(int k, int n) {
  int i = k % n;
  return i < 0 ? i + n : i;
}

int SpectralField::wavenumber(int idx, int n) {
  return idx < n / 2 ? idx : idx - n;
}

double SpectralField::l2() const {
  double s = pairwise_sum_fn(c.size(), [&](std::size_t i) {
    return std::norm(c[i]);
  });
  return two_pi * std::sqrt(s);
}

double SpectralField::mode_sum(double s) const {
  const int hx = nx, hy = ny;
  double acc = pairwise_sum_fn(c.size(), [&](std::size_t i) {
    int ix = static_cast<int>(i) % hx;
    int iy = static_cast<int>(i) / hx;
    double kx = wavenumber(ix, hx), ky = wavenumber(iy, hy);
    double k2 = kx * kx + ky * ky;
    if (k2 == 0.0) return 0.0;
    return std::pow(k2, s) * std::norm(c[i]);
  });
  return acc;
}

double SpectralField::hermitian_defect() const {
  double worst = 0.0;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      std::size_t i = static_cast<std::size_t>(iy) * nx + ix;
      std::size_t j =
          static_cast<std::size_t>(index_of(-wavenumber(iy, ny), ny)) * nx +
          index_of(-wavenumber(ix, nx), nx);
      worst = std::max(worst, std::abs(c[i] - std::conj(c[j])));
    }
  return worst;
}

void SpectralField::enforce_hermitian() {
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      std::size_t i = static_cast<std::size_t>(iy) * nx + ix;
      std::size_t j = static_cast<std::size_t>(index_of(-wavenumber(iy, ny), ny)) * nx +
                      index_of(-wavenumber(ix, nx), nx);
      if (j < i) continue;
      std::complex<double> avg = 0.5 * (c[i] + std::conj(c[j]));
      c[i] = avg;
      c[j] = std::conj(avg);
    }
}

void SpectralField::zero_mean() {
  c[0] = 0.0;
  mean_zero = true;
}

std::pair<int, int> SpectralField::support(double rel_tol) const {
  double total = pairwise_sum_fn(c.size(),
                                 [&](std::size_t i) { return std::norm(c[i]); });
  double thr = rel_tol * rel_tol * total;
  int mx = 0, my = 0;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      if (std::norm(c[static_cast<std::size_t>(iy) * nx + ix]) <= thr) continue;
      mx = std::max(mx, std::abs(wavenumber(ix, nx)));
      my = std::max(my, std::abs(wavenumber(iy, ny)));
    }
  return {mx, my};
}

SpectralField field_from_grid(const GridField& g, bool enforce_real) {
  SpectralField f(g.nx, g.ny);
  for (std::size_t i = 0; i < g.v.size(); ++i) f.c[i] = g.v[i];
  fft_plans(g.nx, g.ny).forward2d(f.c.data());
  double inv = 1.0 / (static_cast<double>(g.nx) * g.ny);
  for (auto& z : f.c) z *= inv;
  if (enforce_real) f.enforce_hermitian();
  return f;
}

GridField field_to_grid(const SpectralField& f) {
  std::vector<std::complex<double>> buf = f.c;
  fft_plans(f.nx, f.ny).inverse2d(buf.data());
  GridField g(f.nx, f.ny);
  for (std::size_t i = 0; i < buf.size(); ++i) g.v[i] = buf[i].real();
  return g;
}

void HarmonicData::validate() const {
  if (M < 0 || L < 0) throw ConfigError("harmonic indices must be nonnegative");
  bool x_sin = kind == HarmonicKind::SinSin || kind == HarmonicKind::SinCos;
  bool y_sin = kind == HarmonicKind::SinSin || kind == HarmonicKind::CosSin;
  if ((x_sin && M == 0) || (y_sin && L == 0))
    throw ConfigError("harmonic is identically zero");
  if (!x_sin && !y_sin && M == 0 && L == 0)
    throw ConfigError("harmonic is constant (not mean-zero)");
  if (amplitude == 0.0) throw ConfigError("harmonic amplitude must be nonzero");
}

double HarmonicData::value(double x, double y) const {
  bool x_sin = kind == HarmonicKind::SinSin || kind == HarmonicKind::SinCos;
  bool y_sin = kind == HarmonicKind::SinSin || kind == HarmonicKind::CosSin;
  double fx = x_sin ? std::sin(M * x) : std::cos(M * x);
  double fy = y_sin ? std::sin(L * y) : std::cos(L * y);
  return amplitude * fx * fy;
}

void HarmonicData::gradient(double x, double y, double& dx, double& dy) const {
  bool x_sin = kind == HarmonicKind::SinSin || kind == HarmonicKind::SinCos;
  bool y_sin = kind == HarmonicKind::SinSin || kind == HarmonicKind::CosSin;
  double fx = x_sin ? std::sin(M * x) : std::cos(M * x);
  double fy = y_sin ? std::sin(L * y) : std::cos(L * y);
  double gx = x_sin ? M * std::cos(M * x) : -M * std::sin(M * x);
  double gy = y_sin ? L * std::cos(L * y) : -L * std::sin(L * y);
  dx = amplitude * gx * fy;
  dy = amplitude * fx * gy;
}

double HarmonicData::l2() const {
  // int sin^2(Mx) dx = pi for M >= 1, int cos^2(Mx) dx = pi (2pi for M = 0)
  bool x_sin = kind == HarmonicKind::SinSin || kind == HarmonicKind::SinCos;
  bool y_sin = kind == HarmonicKind::SinSin || kind == HarmonicKind::CosSin;
  double ix = (!x_sin && M == 0) ? two_pi : two_pi / 2.0;
  double iy = (!y_sin && L == 0) ? two_pi : two_pi / 2.0;
  return std::fabs(amplitude) * std::sqrt(ix * iy);
}

HarmonicKind parse_harmonic_kind(const std::string& name) {
  if (name == "sinsin") return HarmonicKind::SinSin;
  if (name == "sincos") return HarmonicKind::SinCos;
  if (name == "cossin") return HarmonicKind::CosSin;
  if (name == "coscos") return HarmonicKind::CosCos;
  throw ConfigError("unknown harmonic kind: " + name);
}

const char* harmonic_kind_name(HarmonicKind k) {
  switch (k) {
    case HarmonicKind::SinSin: return "sinsin";
    case HarmonicKind::SinCos: return "sincos";
    case HarmonicKind::CosSin: return "cossin";
    case HarmonicKind::CosCos: return "coscos";
  }
  return "?";
}

SpectralField harmonic_field(const HarmonicData& h, int nx, int ny) {
  h.validate();
  SpectralField f(nx, ny);
  if (h.M >= nx / 2 || h.L >= ny / 2)
    throw ResolutionError("harmonic frequency at or above Nyquist");
  struct Mode {
    int k;
    std::complex<double> w;
  };
  auto factor = [](bool is_sin, int m) {
    std::vector<Mode> modes;
    if (is_sin) {
      modes.push_back({m, {0.0, -0.5}});
      modes.push_back({-m, {0.0, 0.5}});
    } else if (m == 0) {
      modes.push_back({0, {1.0, 0.0}});
    } else {
      modes.push_back({m, {0.5, 0.0}});
      modes.push_back({-m, {0.5, 0.0}});
    }
    return modes;
  };
  bool x_sin = h.kind == HarmonicKind::SinSin || h.kind == HarmonicKind::SinCos;
  bool y_sin = h.kind == HarmonicKind::SinSin || h.kind == HarmonicKind::CosSin;
  for (const Mode& mx : factor(x_sin, h.M))
    for (const Mode& my : factor(y_sin, h.L))
      f.at(mx.k, my.k) += h.amplitude * mx.w * my.w;
  f.mean_zero = true;
  return f;
}

namespace {
constexpr char kMagic[9] = "SHLBFLD1";

template <typename T>
void write_raw(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <typename T>
void read_raw(std::istream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof v);
}
}  // namespace

void save_field(const SpectralField& f, std::ostream& out) {
  out.write(kMagic, 8);
  write_raw(out, static_cast<std::uint32_t>(f.nx));
  write_raw(out, static_cast<std::uint32_t>(f.ny));
  write_raw(out, static_cast<std::uint32_t>(f.mean_zero ? 1 : 0));
  write_raw(out, static_cast<std::uint32_t>(1));  // normalization tag
  out.write(reinterpret_cast<const char*>(f.c.data()),
            static_cast<std::streamsize>(f.c.size() * sizeof(f.c[0])));
  if (!out) throw ConfigError("field write failed");
}

void save_field_file(const SpectralField& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open field file for writing: " + path);
  save_field(f, out);
}

SpectralField load_field(std::istream& in) {
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw ConfigError("field file: bad magic");
  std::uint32_t nx = 0, ny = 0, flags = 0, tag = 0;
  read_raw(in, nx);
  read_raw(in, ny);
  read_raw(in, flags);
  read_raw(in, tag);
  if (tag != 1) throw ConfigError("field file: unknown normalization tag");
  SpectralField f(static_cast<int>(nx), static_cast<int>(ny));
  in.read(reinterpret_cast<char*>(f.c.data()),
          static_cast<std::streamsize>(f.c.size() * sizeof(f.c[0])));
  if (!in) throw ConfigError("field file: truncated");
  f.mean_zero = (flags & 1u) != 0;
  return f;
}

SpectralField load_field_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open field file: " + path);
  return load_field(in);
}

}  // namespace shearlab
