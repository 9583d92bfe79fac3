#pragma once

#include <cstdint>
#include <vector>

namespace bic {

// Counter-based generator: output n is mix64(key + n * 2^64/phi). mix64 is the
// SplitMix64 finalizer (constants 0x9e3779b97f4a7c15, 0xbf58476d1ce4e5b9,
// 0x94d049bb133111eb). Streams are derived by hashing (master, tag, index), so
// replicas and replays agree bit-for-bit regardless of execution order.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : key_(key) {}

  static std::uint64_t mix64(std::uint64_t z);
  static Rng stream(std::uint64_t master, std::uint64_t tag, std::uint64_t index);

  std::uint64_t next();
  double uniform();  // [0, 1), 53-bit
  bool bernoulli(double p) { return uniform() < p; }
  std::uint64_t below(std::uint64_t n);  // unbiased uniform in [0, n)
  double normal();
  double gamma(double shape);  // Marsaglia-Tsang, any shape > 0
  double beta(double a, double b);
  // index into `weights` (need not be normalized)
  std::size_t categorical(const std::vector<double>& weights);
  std::vector<int> permutation(int n);  // Fisher-Yates

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
};

}  // namespace bic
