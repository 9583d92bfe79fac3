#include "bicbandit/rng.hpp"

#include <cmath>

#include "bicbandit/errors.hpp"

namespace bic {

std::uint64_t Rng::mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

Rng Rng::stream(std::uint64_t master, std::uint64_t tag, std::uint64_t index) {
  std::uint64_t k = mix64(master ^ mix64(tag * 0x9e3779b97f4a7c15ULL + 1));
  k = mix64(k ^ mix64(index + 0x632be59bd9b4e019ULL));
  return Rng(k);
}

std::uint64_t Rng::next() {
  std::uint64_t n = ctr_++;
  return mix64(key_ + n * 0x9e3779b97f4a7c15ULL);
}

double Rng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
  require(n > 0, ErrorKind::Validation, "below(0)");
  std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    std::uint64_t r = next();
    if (r >= threshold) return r % n;
  }
}

double Rng::normal() {
  // Box-Muller, cosine branch only; one normal per two uniforms keeps the
  // stream position independent of call history.
  double u1 = uniform();
  double u2 = uniform();
  if (u1 <= 0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

double Rng::gamma(double shape) {
  require(shape > 0, ErrorKind::Validation, "gamma shape must be positive");
  if (shape < 1.0) {
    double u = uniform();
    if (u <= 0) u = 0x1.0p-53;
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0) continue;
    v = v * v * v;
    double u = uniform();
    if (u <= 0) u = 0x1.0p-53;
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Rng::beta(double a, double b) {
  double x = gamma(a);
  double y = gamma(b);
  double s = x + y;
  if (s <= 0) return 0.5;  // both underflowed; only reachable for tiny shapes
  return x / s;
}

std::size_t Rng::categorical(const std::vector<double>& weights) {
  double total = 0;
  for (double w : weights) total += w;
  require(total > 0, ErrorKind::Validation, "categorical: zero total weight");
  double u = uniform() * total;
  double acc = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  return weights.size() - 1;
}

std::vector<int> Rng::permutation(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(below(static_cast<std::uint64_t>(i) + 1));
    std::swap(p[i], p[j]);
  }
  return p;
}

}  // namespace bic
