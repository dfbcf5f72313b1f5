#ifndef LANDSCAPE_RNG_HPP
#define LANDSCAPE_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

#include <Eigen/Core>

namespace landscape {

// SplitMix64 finalizer; used to whiten seed material before feeding mt19937_64.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic stream id from a base seed plus arbitrary tags.
// stream(base, i) != stream(base, j) for i != j with overwhelming probability.
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x2545f4914f6cdd1dULL;
  for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p));
  return h;
}

inline std::mt19937_64 make_stream(std::initializer_list<std::uint64_t> parts) {
  return std::mt19937_64(mix_seed(parts));
}

// Uniform direction on the unit sphere in R^n (normalized standard normal draw).
inline Eigen::VectorXd sample_unit_direction(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd d(n);
  double norm = 0.0;
  do {
    for (int i = 0; i < n; ++i) d[i] = gauss(rng);
    norm = d.norm();
  } while (norm == 0.0);
  return d / norm;
}

}  // namespace landscape

#endif
