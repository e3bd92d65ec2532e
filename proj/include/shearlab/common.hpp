#ifndef SHEARLAB_COMMON_HPP
#define SHEARLAB_COMMON_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace shearlab {

inline constexpr double two_pi = 6.283185307179586476925286766559;
inline constexpr double half_pi = 1.5707963267948966192313216916398;

// Error taxonomy maps onto the CLI exit codes: config -> 2, resolution -> 3,
// numerical -> 4.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reduce to [0, 2*pi).
inline double wrap_torus(double x) {
  double y = std::fmod(x, two_pi);
  return y < 0.0 ? y + two_pi : y;
}

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Pairwise (cascade) summation. Fixed reduction tree, so results are identical
// from run to run and accurate to ~eps*log(n).
template <typename F>
double pairwise_sum_range(const F& term, std::size_t lo, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += term(lo + i);
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum_range(term, lo, h) + pairwise_sum_range(term, lo + h, n - h);
}

template <typename F>
double pairwise_sum_fn(std::size_t n, const F& term) {
  return pairwise_sum_range(term, 0, n);
}

inline double pairwise_sum(std::span<const double> v) {
  return pairwise_sum_fn(v.size(), [&](std::size_t i) { return v[i]; });
}

// SplitMix64 evaluated at (seed, counter). Stateless, bit-reproducible on any
// platform; this is the generator the docs promise for perturbation draws.
inline std::uint64_t counter_rng_u64(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Uniform in [0,1) with 53 random bits.
inline double counter_rng_unit(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(counter_rng_u64(seed, counter) >> 11) * 0x1.0p-53;
}

// FNV-1a over bytes; used to content-hash configs and inputs next to outputs.
inline std::uint64_t fnv1a(const void* data, std::size_t n,
                           std::uint64_t h = 0xCBF29CE484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline std::uint64_t fnv1a(const std::string& s,
                           std::uint64_t h = 0xCBF29CE484222325ULL) {
  return fnv1a(s.data(), s.size(), h);
}

}  // namespace shearlab

#endif
