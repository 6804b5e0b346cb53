#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace floc {

/// splitmix64 step; used for seed derivation and stateless hashing so
/// results do not depend on the standard library's distribution code.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from a master seed and a tag.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
  return splitmix64(master ^ splitmix64(tag));
}

inline double u64_to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Deterministic Gaussian stream (mt19937_64 + Box-Muller). Avoids
/// std::normal_distribution, whose output is implementation defined.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

  double sample(double mean = 0.0, double stddev = 1.0) {
    if (has_spare_) {
      has_spare_ = false;
      return mean + stddev * spare_;
    }
    double u1 = 0.0;
    do {
      u1 = u64_to_unit(engine_());
    } while (u1 <= 0.0);
    const double u2 = u64_to_unit(engine_());
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return mean + stddev * radius * std::cos(angle);
  }

  double uniform() { return u64_to_unit(engine_()); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Stateless standard normal value keyed by (seed, cell). Two integer
/// coordinates identify a lattice cell.
inline double lattice_gaussian(std::uint64_t seed, std::int64_t ix, std::int64_t iy) {
  const std::uint64_t h1 = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(ix) * 0x9e3779b97f4a7c15ULL ^
                                                        static_cast<std::uint64_t>(iy)));
  const std::uint64_t h2 = splitmix64(h1);
  double u1 = u64_to_unit(h1);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double u2 = u64_to_unit(h2);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

/// Smooth spatially-correlated Gaussian field with unit marginal
/// variance: bilinear blend of lattice gaussians, renormalized so the
/// variance is exactly 1 everywhere (weights w_i sum-of-squares).
class SpatialGaussianField {
 public:
  SpatialGaussianField(std::uint64_t seed, double correlation_length)
      : seed_(seed), scale_(correlation_length > 0 ? correlation_length : 1.0) {}

  double at(double x, double y) const {
    const double gx = x / scale_;
    const double gy = y / scale_;
    const double fx = std::floor(gx);
    const double fy = std::floor(gy);
    const auto ix = static_cast<std::int64_t>(fx);
    const auto iy = static_cast<std::int64_t>(fy);
    const double tx = gx - fx;
    const double ty = gy - fy;
    const double w00 = (1.0 - tx) * (1.0 - ty);
    const double w10 = tx * (1.0 - ty);
    const double w01 = (1.0 - tx) * ty;
    const double w11 = tx * ty;
    const double value = w00 * lattice_gaussian(seed_, ix, iy) +
                         w10 * lattice_gaussian(seed_, ix + 1, iy) +
                         w01 * lattice_gaussian(seed_, ix, iy + 1) +
                         w11 * lattice_gaussian(seed_, ix + 1, iy + 1);
    const double norm = std::sqrt(w00 * w00 + w10 * w10 + w01 * w01 + w11 * w11);
    return value / norm;
  }

 private:
  std::uint64_t seed_;
  double scale_;
};

}  // namespace floc
