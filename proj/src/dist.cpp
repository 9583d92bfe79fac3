#include "bicbandit/dist.hpp"

#include <algorithm>
#include <cmath>

#include "bicbandit/errors.hpp"

namespace bic {

DiscreteDist DiscreteDist::from_atoms(std::vector<Atom> atoms, double merge_tol) {
  require(!atoms.empty(), ErrorKind::Validation, "distribution needs at least one atom");
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.value < b.value; });
  DiscreteDist d;
  double total = 0;
  for (const Atom& a : atoms) {
    require(a.prob >= -1e-15, ErrorKind::Validation, "negative atom probability");
    if (a.prob <= 0) continue;
    total += a.prob;
    if (!d.atoms_.empty() && a.value - d.atoms_.back().value <= merge_tol) {
      // merge keeps the mean exact: value becomes the mass-weighted average
      Atom& last = d.atoms_.back();
      double p = last.prob + a.prob;
      last.value = (last.value * last.prob + a.value * a.prob) / p;
      last.prob = p;
    } else {
      d.atoms_.push_back(a);
    }
  }
  require(!d.atoms_.empty(), ErrorKind::Validation, "distribution has zero mass");
  for (Atom& a : d.atoms_) a.prob /= total;
  return d;
}

double DiscreteDist::mean() const {
  double m = 0;
  for (const Atom& a : atoms_) m += a.value * a.prob;
  return m;
}

double DiscreteDist::variance() const {
  double m = mean(), v = 0;
  for (const Atom& a : atoms_) v += (a.value - m) * (a.value - m) * a.prob;
  return v;
}

double DiscreteDist::cdf(double x) const {
  double c = 0;
  for (const Atom& a : atoms_) {
    if (a.value <= x + 1e-12) c += a.prob;
    else break;
  }
  return c;
}

double DiscreteDist::cdf_strict(double x) const {
  double c = 0;
  for (const Atom& a : atoms_) {
    if (a.value < x - 1e-12) c += a.prob;
    else break;
  }
  return c;
}

DiscreteDist DiscreteDist::scaled(double w) const {
  require(w >= 0, ErrorKind::Validation, "scaled: negative weight");
  DiscreteDist d;
  if (w == 0) return point(0.0);
  d.atoms_ = atoms_;
  for (Atom& a : d.atoms_) a.value *= w;
  return d;
}

namespace {

DiscreteDist regrid(const std::vector<Atom>& atoms, int points) {
  double lo = atoms.front().value, hi = atoms.front().value;
  for (const Atom& a : atoms) {
    lo = std::min(lo, a.value);
    hi = std::max(hi, a.value);
  }
  if (hi - lo < 1e-12) return DiscreteDist::from_atoms({{lo, 1.0}});
  double step = (hi - lo) / double(points - 1);
  std::vector<double> mass(points, 0.0);
  for (const Atom& a : atoms) {
    double pos = (a.value - lo) / step;
    int k = std::min(points - 2, std::max(0, int(std::floor(pos))));
    double frac = pos - k;  // split preserves the mean exactly
    mass[k] += a.prob * (1.0 - frac);
    mass[k + 1] += a.prob * frac;
  }
  std::vector<Atom> out;
  out.reserve(points);
  for (int k = 0; k < points; ++k)
    if (mass[k] > 0) out.push_back({lo + k * step, mass[k]});
  return DiscreteDist::from_atoms(std::move(out));
}

}  // namespace

DiscreteDist DiscreteDist::convolve(const DiscreteDist& other, std::size_t regrid_threshold,
                                    int regrid_points) const {
  std::vector<Atom> out;
  out.reserve(atoms_.size() * other.atoms_.size());
  for (const Atom& a : atoms_)
    for (const Atom& b : other.atoms_)
      out.push_back({a.value + b.value, a.prob * b.prob});
  if (regrid_threshold > 0 && out.size() > regrid_threshold)
    return regrid(out, regrid_points);
  return from_atoms(std::move(out));
}

double expected_positive_diff(const DiscreteDist& y, const DiscreteDist& x) {
  // E[(Y-X)_+] = sum_y p_y * (y*F_X(y) - M1_X(y)) with prefix sums over x < y.
  const auto& xa = x.atoms();
  std::vector<double> pref_p(xa.size() + 1, 0.0), pref_m(xa.size() + 1, 0.0);
  for (std::size_t i = 0; i < xa.size(); ++i) {
    pref_p[i + 1] = pref_p[i] + xa[i].prob;
    pref_m[i + 1] = pref_m[i] + xa[i].prob * xa[i].value;
  }
  double total = 0;
  for (const Atom& ay : y.atoms()) {
    // atoms with value < ay.value contribute; equal values contribute zero
    std::size_t k = std::lower_bound(xa.begin(), xa.end(), ay.value,
                                     [](const Atom& a, double v) { return a.value < v; }) -
                    xa.begin();
    total += ay.prob * (ay.value * pref_p[k] - pref_m[k]);
  }
  return total;
}

double cross_moment_indicator(const DiscreteDist& x, double w, const DiscreteDist& r,
                              const DiscreteDist& y) {
  double total = 0;
  for (const Atom& ax : x.atoms()) {
    double inner = 0;
    for (const Atom& ar : r.atoms()) {
      inner += ar.prob * (1.0 - y.cdf(w * ax.value + ar.value));
    }
    total += ax.prob * ax.value * inner;
  }
  return total;
}

DiscreteDist weighted_sum(const std::vector<const DiscreteDist*>& dists,
                          const std::vector<double>& weights,
                          std::size_t regrid_threshold, int regrid_points) {
  require(dists.size() == weights.size(), ErrorKind::Validation, "weighted_sum: size mismatch");
  DiscreteDist acc = DiscreteDist::point(0.0);
  for (std::size_t i = 0; i < dists.size(); ++i) {
    if (weights[i] == 0) continue;
    acc = acc.convolve(dists[i]->scaled(weights[i]), regrid_threshold, regrid_points);
  }
  return acc;
}

}  // namespace bic
