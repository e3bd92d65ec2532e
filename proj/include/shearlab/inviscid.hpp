#ifndef SHEARLAB_INVISCID_HPP
#define SHEARLAB_INVISCID_HPP

#include <optional>
#include <string>
#include <vector>

#include "shearlab/schedule.hpp"
#include "shearlab/spectral_field.hpp"

namespace shearlab {

enum class Axis { X, Y };

// Initial scalar data: a closed-form trigonometric harmonic, or band-limited
// spectral data evaluated off-grid by exact trigonometric interpolation
// (cost O(modes) per point; modes are compacted to the nonzero half-spectrum).
class InitialData {
 public:
  explicit InitialData(const HarmonicData& h);
  explicit InitialData(const SpectralField& f);

  double value(double x, double y) const;
  void gradient(double x, double y, double& dx, double& dy) const;
  double l2() const { return l2_; }
  bool is_harmonic() const { return h_.has_value(); }
  const HarmonicData* harmonic() const { return h_ ? &*h_ : nullptr; }
  int max_kx() const { return max_kx_; }
  int max_ky() const { return max_ky_; }
  std::size_t mode_count() const;

 private:
  std::optional<HarmonicData> h_;
  struct Mode {
    double kx, ky;
    std::complex<double> c;
  };
  std::vector<Mode> modes_;  // half-spectrum; field = 2 Re sum
  double l2_ = 0.0;
  int max_kx_ = 0, max_ky_ = 0;
};

// The exact solution operator of stages first_active..j applied backwards:
// the deepest stage acts on the point first, the earliest active stage last.
// Each stage shifts the advected coordinate by sigma * t * S_eps(N * other).
std::pair<double, double> backward_map(const StageSchedule& s, int j, double x,
                                       double y);
// Same with the deepest stage cut at elapsed time t - start (t inside the
// program); used to reference mid-stage times.
std::pair<double, double> backward_map_at_time(const StageSchedule& s, double t,
                                               double x, double y);

// 2x2 derivative of the composed backward map (analytic chain rule).
struct MapDerivative {
  double m[2][2];
};
MapDerivative backward_map_derivative(const StageSchedule& s, int j, double x,
                                      double y);

// theta_j(x,y) = theta0(U_j(x,y)), machine-exact for harmonic data.
double evaluate(const InitialData& d, const StageSchedule& s, int j, double x,
                double y);
double evaluate_at_time(const InitialData& d, const StageSchedule& s, double t,
                        double x, double y);
// grad theta_j = (grad theta0)(U p) . DU(p).
void evaluate_gradient(const InitialData& d, const StageSchedule& s, int j,
                       double x, double y, double& dx, double& dy);

// Dominant frequency support of theta_j propagated per axis (the shear chirp
// bound): a horizontal stage adds t_j N_j * kx to the y-support and vice
// versa. Beyond this bound the spectrum carries harmonics of the shear
// frequencies (the profile's quasi-kinks), which decay algebraically; grids
// pad for them separately.
std::pair<double, double> support_bound(const InitialData& d,
                                        const StageSchedule& s, int j);
// Largest shear frequency acting along each axis up to stage j.
std::pair<double, double> shear_freq_bound(const StageSchedule& s, int j);
// Power-of-two grid with Nyquist >= margin * chirp bound + pad * shear
// frequency per axis, clamped to [min_n, max_n]; (0,0) on overflow.
std::pair<int, int> recommended_grid(const InitialData& d,
                                     const StageSchedule& s, int j,
                                     double margin = 1.3, int min_n = 64,
                                     int max_n = 1 << 14, int pad = 4);

struct SampleOptions {
  bool strict = false;      // under-resolution: warn vs throw
  double margin = 2.0;      // Nyquist guard factor for the warning
  bool quiet = false;
};

// Pointwise samples of theta_j on the (nx, ny) grid, transformed to
// coefficients (mean pinned to zero after a 1e-12 relative check).
SpectralField sample_grid(const InitialData& d, const StageSchedule& s, int j,
                          int nx, int ny, const SampleOptions& opts = {});
GridField sample_grid_values(const InitialData& d, const StageSchedule& s,
                             int j, int nx, int ny);

struct BootstrapRecord {
  int j = 0;
  bool initial = false;   // the record before the first active stage
  Axis amp_axis = Axis::Y;  // direction whose derivative the stage amplified
  double dir_norm = 0.0;  // |d_amp theta_j|_{L2}
  double a_ratio = 0.0;   // |d_amp theta_{j-1}| / |d_amp theta_j| (NaN initial)
  double r_ratio = 0.0;   // |theta_j|_{W^{1,inf}} / |d_amp theta_j|_{L2}
  double h1 = 0.0, h2 = 0.0, w1inf = 0.0;
  int nx = 0, ny = 0;
  double t = 0.0, eps = 0.0;
  long long freq = 0;
  bool horizontal = false;
  int sign = 0;
};

struct BootstrapTrace {
  std::vector<BootstrapRecord> records;
  double theta0_l2 = 0.0;
  double theta0_h1 = 0.0;
};

struct BootstrapOptions {
  int max_grid = 1 << 13;
  int dense_factor = 4;  // W^{1,inf} grid refinement over the L2 grid
  int dense_cap = 1 << 14;
  double margin = 1.3;
  int pad = 4;           // shear-harmonic padding multiple
  bool strict = true;    // under-resolved stages stop the trace
};

// Per-stage directional norms, bootstrap ratios A_j, R_j and the Sobolev /
// sup norms of the exact inviscid evolution of a pure harmonic. Directional
// L2 norms and H1 integrate the analytic chain-rule gradient on the stage
// grid (the shear profiles make that quadrature essentially exact, where
// spectral differentiation of the sampled field would carry the aliased
// harmonic tails); H2 is spectral at the stage grid and is reported as the
// resolved-band value. W^{1,inf} is the dense-grid max of the analytic
// gradient at dense_factor x resolution (a lower bound on the true sup).
BootstrapTrace bootstrap_trace(const HarmonicData& h, const StageSchedule& s,
                               const BootstrapOptions& opts = {});

void write_bootstrap_csv(const BootstrapTrace& tr, std::ostream& out);
void write_bootstrap_csv_file(const BootstrapTrace& tr, const std::string& path);

struct AdaptiveOptions {
  int max_grid = 1 << 12;  // cap for the per-stage greedy selection grids
  double margin = 1.3;
  int pad = 4;
  double a0_min = 0x1p-40;
  BuildOptions build;
};

// Data-adaptive program: a0 halves from 1 until the first active stage's
// bootstrap ratio drops below 1, and each sign is chosen greedily to maximize
// the amplified directional L2 norm (ties resolve to sign 0).
StageSchedule build_adaptive(const InitialData& theta0, double alpha, int j_max,
                             const AdaptiveOptions& opts = {});

}  // namespace shearlab

#endif
