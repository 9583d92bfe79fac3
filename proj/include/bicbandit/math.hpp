#pragma once

#include <cstdint>
#include <vector>

namespace bic {

using i64 = std::int64_t;

double log_choose(i64 n, i64 k);
double log_beta_fn(double a, double b);

// Regularized incomplete beta I_x(a,b) = Pr[Beta(a,b) <= x].
double beta_reg_inc(double a, double b, double x);
inline double beta_cdf(double a, double b, double x) { return beta_reg_inc(a, b, x); }

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Euclidean projection onto the probability simplex.
void project_to_simplex(std::vector<double>& v);

}  // namespace bic
