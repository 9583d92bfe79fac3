#pragma once

#include <vector>

#include "bicbandit/math.hpp"

namespace bic {

struct Atom {
  double value = 0;
  double prob = 0;
};

// Finite distribution on the reals: atoms sorted ascending, values within
// merge_tol collapsed, probabilities normalized to 1.
class DiscreteDist {
 public:
  DiscreteDist() = default;
  static DiscreteDist from_atoms(std::vector<Atom> atoms, double merge_tol = 1e-12);
  static DiscreteDist point(double v) { return from_atoms({{v, 1.0}}); }

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double mean() const;
  double variance() const;
  double min() const { return atoms_.front().value; }
  double max() const { return atoms_.back().value; }

  double cdf(double x) const;         // Pr[X <= x + 1e-12]
  double cdf_strict(double x) const;  // Pr[X <  x - 1e-12]

  DiscreteDist scaled(double w) const;  // law of w*X (w >= 0)

  // If the support after convolution exceeds `regrid_threshold`, mass is
  // re-binned onto `regrid_points` equispaced values, splitting each atom
  // between its two bracketing grid points so the mean is preserved exactly.
  DiscreteDist convolve(const DiscreteDist& other, std::size_t regrid_threshold = 0,
                        int regrid_points = 0) const;

 private:
  std::vector<Atom> atoms_;
};

// E[(Y - X)_+] for independent X, Y.
double expected_positive_diff(const DiscreteDist& y, const DiscreteDist& x);

// E[X * 1{Y > w*X + R}] for independent X, R, Y. Subgradient building block
// for minimizing E[(Y - mu_q)_+] over the simplex.
double cross_moment_indicator(const DiscreteDist& x, double w, const DiscreteDist& r,
                              const DiscreteDist& y);

// Law of sum_i w_i X_i for independent X_i.
DiscreteDist weighted_sum(const std::vector<const DiscreteDist*>& dists,
                          const std::vector<double>& weights,
                          std::size_t regrid_threshold = 200000,
                          int regrid_points = 8192);

}  // namespace bic
