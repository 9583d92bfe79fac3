#include "bicbandit/lp.hpp"

#include <cmath>
#include <cstddef>

#include "bicbandit/errors.hpp"

namespace bic {

namespace {

// Tableau layout: rows 0..m-1 are constraints, row m is the phase objective.
// Columns 0..n_total-1 are variables, column n_total is the RHS.
class Tableau {
 public:
  Tableau(std::size_t m, std::size_t n) : m_(m), n_(n), t_(m + 1, std::vector<double>(n + 1, 0.0)) {}

  std::vector<double>& row(std::size_t i) { return t_[i]; }
  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }

  void pivot(std::size_t pr, std::size_t pc) {
    double piv = t_[pr][pc];
    for (double& v : t_[pr]) v /= piv;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == pr) continue;
      double f = t_[i][pc];
      if (f == 0.0) continue;
      for (std::size_t j2 = 0; j2 <= n_; ++j2) t_[i][j2] -= f * t_[pr][j2];
    }
  }

  // returns false when unbounded. Dantzig pivoting for speed; after a long
  // stall it falls back to Bland's rule, which cannot cycle.
  bool run_simplex(std::vector<std::size_t>& basis, double tol) {
    const std::size_t stall_limit = 2000 + 4 * (m_ + n_);
    std::size_t iters = 0;
    for (;;) {
      ++iters;
      bool bland = iters > stall_limit;
      std::size_t pc = n_;
      if (bland) {
        for (std::size_t j2 = 0; j2 < n_; ++j2) {
          if (t_[m_][j2] < -tol) {
            pc = j2;
            break;
          }
        }
      } else {
        double most = -tol;
        for (std::size_t j2 = 0; j2 < n_; ++j2) {
          if (t_[m_][j2] < most) {
            most = t_[m_][j2];
            pc = j2;
          }
        }
      }
      if (pc == n_) return true;
      std::size_t pr = m_;
      double best_ratio = 0;
      for (std::size_t i = 0; i < m_; ++i) {
        if (t_[i][pc] > tol) {
          double ratio = t_[i][n_] / t_[i][pc];
          if (pr == m_ || ratio < best_ratio - tol ||
              (ratio < best_ratio + tol && basis[i] < basis[pr])) {
            pr = i;
            best_ratio = ratio;
          }
        }
      }
      if (pr == m_) return false;
      pivot(pr, pc);
      basis[pr] = pc;
      require(iters < 500000, ErrorKind::TooLarge, "simplex iteration cap exceeded");
    }
  }

 private:
  std::size_t m_, n_;
  std::vector<std::vector<double>> t_;
};

}  // namespace

LpResult lp_solve(const LpProblem& p, double tol) {
  std::size_t m = p.rows.size();
  std::size_t n = p.c.size();
  for (const auto& r : p.rows)
    require(r.size() == n, ErrorKind::Validation, "lp row width mismatch");

  // count slack/surplus and artificial columns
  std::size_t n_slack = 0, n_art = 0;
  for (std::size_t i = 0; i < m; ++i) {
    bool neg = p.b[i] < 0;
    LpProblem::Rel rel = p.rels[i];
    // after sign-normalizing the row so b >= 0
    LpProblem::Rel eff = rel;
    if (neg) eff = (rel == LpProblem::Rel::Le) ? LpProblem::Rel::Ge
              : (rel == LpProblem::Rel::Ge) ? LpProblem::Rel::Le
                                            : LpProblem::Rel::Eq;
    if (eff != LpProblem::Rel::Eq) ++n_slack;
    if (eff != LpProblem::Rel::Le) ++n_art;
  }
  std::size_t n_total = n + n_slack + n_art;
  Tableau tab(m, n_total);
  std::vector<std::size_t> basis(m);
  std::size_t slack_at = n, art_at = n + n_slack;
  std::vector<bool> is_art(n_total, false);

  for (std::size_t i = 0; i < m; ++i) {
    auto& row = tab.row(i);
    double sgn = (p.b[i] < 0) ? -1.0 : 1.0;
    for (std::size_t j2 = 0; j2 < n; ++j2) row[j2] = sgn * p.rows[i][j2];
    row[n_total] = sgn * p.b[i];
    LpProblem::Rel rel = p.rels[i];
    LpProblem::Rel eff = rel;
    if (sgn < 0)
      eff = (rel == LpProblem::Rel::Le) ? LpProblem::Rel::Ge
            : (rel == LpProblem::Rel::Ge) ? LpProblem::Rel::Le
                                          : LpProblem::Rel::Eq;
    if (eff == LpProblem::Rel::Le) {
      row[slack_at] = 1.0;
      basis[i] = slack_at++;
    } else if (eff == LpProblem::Rel::Ge) {
      row[slack_at] = -1.0;
      ++slack_at;
      row[art_at] = 1.0;
      is_art[art_at] = true;
      basis[i] = art_at++;
    } else {
      row[art_at] = 1.0;
      is_art[art_at] = true;
      basis[i] = art_at++;
    }
  }

  LpResult res;

  // phase 1: minimize the sum of artificials
  if (n_art > 0) {
    auto& obj = tab.row(m);
    for (std::size_t j2 = 0; j2 < n_total; ++j2) obj[j2] = is_art[j2] ? 1.0 : 0.0;
    obj[n_total] = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (is_art[basis[i]]) {
        for (std::size_t j2 = 0; j2 <= n_total; ++j2) obj[j2] -= tab.row(i)[j2];
      }
    }
    if (!tab.run_simplex(basis, tol)) {
      res.status = LpResult::Status::Unbounded;
      return res;
    }
    if (tab.row(m)[n_total] < -tol) {
      res.status = LpResult::Status::Infeasible;
      return res;
    }
    // drive leftover artificials out of the basis when possible
    for (std::size_t i = 0; i < m; ++i) {
      if (is_art[basis[i]]) {
        std::size_t pc = n_total;
        for (std::size_t j2 = 0; j2 < n + n_slack; ++j2) {
          if (std::fabs(tab.row(i)[j2]) > tol) {
            pc = j2;
            break;
          }
        }
        if (pc != n_total) {
          tab.pivot(i, pc);
          basis[i] = pc;
        }
      }
    }
  }

  // phase 2: original objective (artificial columns pinned at zero cost and
  // excluded from entering by their +inf cost trick: zero them instead)
  {
    auto& obj = tab.row(m);
    for (std::size_t j2 = 0; j2 <= n_total; ++j2) obj[j2] = 0.0;
    for (std::size_t j2 = 0; j2 < n; ++j2) obj[j2] = p.c[j2];
    for (std::size_t i = 0; i < m; ++i) {
      double cb = (basis[i] < n) ? p.c[basis[i]] : 0.0;
      if (cb != 0.0) {
        for (std::size_t j2 = 0; j2 <= n_total; ++j2) obj[j2] -= cb * tab.row(i)[j2];
      }
    }
    // forbid re-entering artificials (basic ones keep reduced cost 0)
    std::vector<bool> in_basis(n_total, false);
    for (std::size_t i = 0; i < m; ++i) in_basis[basis[i]] = true;
    for (std::size_t j2 = 0; j2 < n_total; ++j2)
      if (is_art[j2] && !in_basis[j2]) obj[j2] = 1.0;
    if (!tab.run_simplex(basis, tol)) {
      res.status = LpResult::Status::Unbounded;
      return res;
    }
  }

  res.status = LpResult::Status::Optimal;
  res.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = tab.row(i)[n_total];
  res.objective = 0;
  for (std::size_t j2 = 0; j2 < n; ++j2) res.objective += p.c[j2] * res.x[j2];
  return res;
}

}  // namespace bic
