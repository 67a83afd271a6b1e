#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

namespace lens {

// Deterministic splitmix64 stream. Every randomized check in the library draws
// from one of these seeded explicitly, so reports are reproducible bit for bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform in [-1,1]
  double symmetric() { return 2.0 * uniform() - 1.0; }

  double normal() {
    // Box-Muller, one value per draw pair; deterministic given the stream
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  Eigen::VectorXd vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = symmetric();
    return v;
  }

  Eigen::VectorXd normal_vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  // derive an independent child stream deterministically
  Rng child(std::uint64_t tag) {
    Rng r(state_ ^ (0x632be59bd9b4e019ULL * (tag + 1)));
    r.next_u64();
    return r;
  }

 private:
  std::uint64_t state_;
};

}  // namespace lens
