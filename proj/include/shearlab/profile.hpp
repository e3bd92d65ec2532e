#ifndef SHEARLAB_PROFILE_HPP
#define SHEARLAB_PROFILE_HPP

#include "shearlab/common.hpp"

namespace shearlab {

// Smoothed 2*pi-periodic sawtooth: odd about 0, even about pi/2, equal to x on
// [0, pi/2 - eps] and capped by a parabola of curvature -1/eps on
// (pi/2 - eps, pi/2]. W^{2,inf} with |S'| <= 1, |S''| <= 1/eps.
//
// Evaluation folds the argument into [0, pi/2] by the two symmetries instead of
// tabulating; the inviscid evaluator composes many stages and needs the branch
// values exact. At the two curvature kinks the left-limit value of S'' is
// returned (a.e. quantity; only sup bounds and quadrature consume it).
class SawtoothProfile {
 public:
  explicit SawtoothProfile(double eps) : eps_(eps) {
    if (!(eps > 0.0) || !(eps < half_pi))
      throw ConfigError("sawtooth smoothing width must lie in (0, pi/2)");
  }

  double epsilon() const { return eps_; }

  double value(double x) const {
    Folded f = fold(x);
    return f.odd_sign * base_value(f.x);
  }

  // dS/dx. Each reflection flips the inner derivative once, so the outer sign
  // odd_sign cancels against its own reflection and only the even fold
  // survives: d/dx[-S(2pi-x)] = S'(2pi-x), d/dx[S(pi-x)] = -S'(pi-x).
  double slope(double x) const {
    Folded f = fold(x);
    return f.even_sign * base_slope(f.x);
  }

  double curvature(double x) const {
    Folded f = fold(x);
    return f.odd_sign * base_curvature(f.x);
  }

 private:
  struct Folded {
    double x;          // in [0, pi/2]
    double odd_sign;   // -1 if reflected about 0
    double even_sign;  // -1 if reflected about pi/2
  };

  Folded fold(double x) const {
    double y = wrap_torus(x);
    Folded f{y, 1.0, 1.0};
    if (f.x > two_pi / 2.0) {  // odd about 0 (== 2*pi)
      f.x = two_pi - f.x;
      f.odd_sign = -1.0;
    }
    if (f.x > half_pi) {  // even about pi/2
      f.x = two_pi / 2.0 - f.x;
      f.even_sign = -1.0;
    }
    return f;
  }

  double base_value(double x) const {
    if (x <= half_pi - eps_) return x;
    double d = x - (half_pi - eps_);
    return x - d * d / (2.0 * eps_);
  }

  double base_slope(double x) const {
    if (x <= half_pi - eps_) return 1.0;
    return 1.0 - (x - (half_pi - eps_)) / eps_;
  }

  double base_curvature(double x) const {
    if (x <= half_pi - eps_) return 0.0;
    return -1.0 / eps_;
  }

  double eps_;
};

}  // namespace shearlab

#endif
