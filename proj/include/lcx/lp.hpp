#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lcx/rational.hpp"

namespace lcx {

// max c^T x  s.t.  A x <= b, x >= 0, with b >= 0 so the slack basis is feasible.
// Columns are sparse; the basis inverse is dense and refactored periodically.
struct SparseColumn {
  std::vector<int> rows;
  std::vector<double> vals;
};

struct LpProblem {
  int rows = 0;
  std::vector<double> b;
  std::vector<double> c;
  std::vector<SparseColumn> cols;
};

struct LpResult {
  std::vector<double> x;     // structural values
  std::vector<double> dual;  // y >= 0 per row
  double objective = 0;
  long iterations = 0;
};

namespace detail {

// Dense inverse of the basis by Gauss-Jordan with partial pivoting.
inline bool invert(std::vector<double>& a, int n, std::vector<double>& inv) {
  inv.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i) * n + i] = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(a[static_cast<std::size_t>(col) * n + col]);
    for (int r = col + 1; r < n; ++r) {
      double v = std::abs(a[static_cast<std::size_t>(r) * n + col]);
      if (v > best) best = v, piv = r;
    }
    if (best < 1e-14) return false;
    if (piv != col) {
      for (int k = 0; k < n; ++k) {
        std::swap(a[static_cast<std::size_t>(piv) * n + k], a[static_cast<std::size_t>(col) * n + k]);
        std::swap(inv[static_cast<std::size_t>(piv) * n + k], inv[static_cast<std::size_t>(col) * n + k]);
      }
    }
    double p = a[static_cast<std::size_t>(col) * n + col];
    for (int k = 0; k < n; ++k) {
      a[static_cast<std::size_t>(col) * n + k] /= p;
      inv[static_cast<std::size_t>(col) * n + k] /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a[static_cast<std::size_t>(r) * n + col];
      if (f == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        a[static_cast<std::size_t>(r) * n + k] -= f * a[static_cast<std::size_t>(col) * n + k];
        inv[static_cast<std::size_t>(r) * n + k] -= f * inv[static_cast<std::size_t>(col) * n + k];
      }
    }
  }
  return true;
}

}  // namespace detail

class RevisedSimplex {
 public:
  explicit RevisedSimplex(const LpProblem& p) : p_(p), m_(p.rows), ncols_(static_cast<int>(p.cols.size())) {
    if (static_cast<int>(p.b.size()) != m_ || static_cast<int>(p.c.size()) != ncols_)
      throw Error(ErrorKind::structural, "LP dimension mismatch");
    for (double v : p.b)
      if (v < 0) throw Error(ErrorKind::precondition, "LP right-hand side must be nonnegative");
  }

  LpResult solve() {
    basis_.resize(m_);
    for (int r = 0; r < m_; ++r) basis_[r] = ncols_ + r;
    refactor();
    const long max_iter = 200L * (m_ + ncols_) + 1000;
    long degenerate_run = 0;
    long it = 0;
    std::vector<double> y(m_), w(m_);
    for (; it < max_iter; ++it) {
      if (it % 64 == 63) refactor();
      compute_duals(y);
      bool bland = degenerate_run > 50;
      int enter = -1;
      double best = kPriceTol;
      for (int j = 0; j < ncols_ + m_; ++j) {
        if (in_basis(j)) continue;
        double d = reduced_cost(j, y);
        if (d > best) {
          enter = j;
          best = d;
          if (bland) break;
        }
      }
      if (enter < 0) break;
      column_times_inverse(enter, w);
      int leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m_; ++r) {
        if (w[r] <= kPivotTol) continue;
        double t = std::max(0.0, xb_[r]) / w[r];
        bool take = false;
        if (t < ratio - 1e-12) {
          take = true;
        } else if (t <= ratio + 1e-12 && leave >= 0) {
          take = bland ? basis_[r] < basis_[leave] : w[r] > w[leave];
        }
        if (take) {
          ratio = t;
          leave = r;
        }
      }
      if (leave < 0) throw Error(ErrorKind::non_convergence, "LP unbounded along column " + std::to_string(enter));
      degenerate_run = ratio <= 1e-12 ? degenerate_run + 1 : 0;
      pivot(leave, enter, w, ratio);
    }
    if (it >= max_iter) throw Error(ErrorKind::non_convergence, "simplex iteration limit reached");
    refactor();
    compute_duals(y);

    LpResult res;
    res.iterations = it;
    res.x.assign(ncols_, 0.0);
    for (int r = 0; r < m_; ++r)
      if (basis_[r] < ncols_) res.x[basis_[r]] = std::max(0.0, xb_[r]);
    res.dual = y;
    for (int j = 0; j < ncols_; ++j) res.objective += p_.c[j] * res.x[j];
    return res;
  }

 private:
  static constexpr double kPriceTol = 1e-11;
  static constexpr double kPivotTol = 1e-9;

  bool in_basis(int j) const {
    if (pos_.empty()) return false;
    return pos_[j] >= 0;
  }

  double& inv(int r, int k) { return binv_[static_cast<std::size_t>(r) * m_ + k]; }

  void refactor() {
    std::vector<double> B(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      int j = basis_[r];
      if (j >= ncols_) {
        B[static_cast<std::size_t>(j - ncols_) * m_ + r] = 1.0;
      } else {
        const auto& col = p_.cols[j];
        for (std::size_t k = 0; k < col.rows.size(); ++k) B[static_cast<std::size_t>(col.rows[k]) * m_ + r] = col.vals[k];
      }
    }
    if (!detail::invert(B, m_, binv_)) throw Error(ErrorKind::non_convergence, "singular basis during refactorization");
    xb_.assign(m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      double s = 0;
      for (int k = 0; k < m_; ++k) s += inv(r, k) * p_.b[k];
      xb_[r] = s;
    }
    pos_.assign(ncols_ + m_, -1);
    for (int r = 0; r < m_; ++r) pos_[basis_[r]] = r;
  }

  // y = c_B B^{-1}
  void compute_duals(std::vector<double>& y) {
    std::fill(y.begin(), y.end(), 0.0);
    for (int r = 0; r < m_; ++r) {
      int j = basis_[r];
      double cj = j < ncols_ ? p_.c[j] : 0.0;
      if (cj == 0.0) continue;
      for (int k = 0; k < m_; ++k) y[k] += cj * inv(r, k);
    }
  }

  double reduced_cost(int j, const std::vector<double>& y) const {
    if (j >= ncols_) return -y[j - ncols_];
    const auto& col = p_.cols[j];
    double d = p_.c[j];
    for (std::size_t k = 0; k < col.rows.size(); ++k) d -= y[col.rows[k]] * col.vals[k];
    return d;
  }

  void column_times_inverse(int j, std::vector<double>& w) {
    std::fill(w.begin(), w.end(), 0.0);
    if (j >= ncols_) {
      int k = j - ncols_;
      for (int r = 0; r < m_; ++r) w[r] = inv(r, k);
      return;
    }
    const auto& col = p_.cols[j];
    for (int r = 0; r < m_; ++r) {
      double s = 0;
      for (std::size_t k = 0; k < col.rows.size(); ++k) s += inv(r, col.rows[k]) * col.vals[k];
      w[r] = s;
    }
  }

  void pivot(int leave, int enter, const std::vector<double>& w, double theta) {
    const double p = w[leave];
    for (int k = 0; k < m_; ++k) inv(leave, k) /= p;
    for (int r = 0; r < m_; ++r) {
      if (r == leave || w[r] == 0.0) continue;
      const double f = w[r];
      double* row = &binv_[static_cast<std::size_t>(r) * m_];
      const double* lrow = &binv_[static_cast<std::size_t>(leave) * m_];
      for (int k = 0; k < m_; ++k) row[k] -= f * lrow[k];
    }
    for (int r = 0; r < m_; ++r) xb_[r] -= theta * w[r];
    xb_[leave] = theta;
    pos_[basis_[leave]] = -1;
    basis_[leave] = enter;
    pos_[enter] = leave;
  }

  const LpProblem& p_;
  int m_;
  int ncols_;
  std::vector<int> basis_;
  std::vector<int> pos_;
  std::vector<double> binv_;
  std::vector<double> xb_;
};

// Geometric row/column equilibration with power-of-two factors, so scaling
// is exact; the solution is mapped back to the original problem.
inline LpResult solve_lp(const LpProblem& p) {
  LpProblem q = p;
  std::vector<double> rs(q.rows, 1.0), cs(q.cols.size(), 1.0);
  auto pow2_near = [](double x) { return std::exp2(std::round(std::log2(x))); };
  for (int pass = 0; pass < 6; ++pass) {
    std::vector<double> lo(q.rows, std::numeric_limits<double>::infinity()), hi(q.rows, 0.0);
    for (const auto& col : q.cols)
      for (std::size_t k = 0; k < col.rows.size(); ++k) {
        double a = std::abs(col.vals[k]);
        if (a == 0) continue;
        lo[col.rows[k]] = std::min(lo[col.rows[k]], a);
        hi[col.rows[k]] = std::max(hi[col.rows[k]], a);
      }
    for (int r = 0; r < q.rows; ++r) {
      if (hi[r] == 0) continue;
      double f = pow2_near(1.0 / std::sqrt(lo[r] * hi[r]));
      rs[r] *= f;
      q.b[r] *= f;
    }
    for (std::size_t j = 0; j < q.cols.size(); ++j) {
      auto& col = q.cols[j];
      const auto& orig = p.cols[j];
      double clo = std::numeric_limits<double>::infinity(), chi = 0;
      for (std::size_t k = 0; k < col.rows.size(); ++k) {
        col.vals[k] = orig.vals[k] * rs[col.rows[k]] * cs[j];
        double a = std::abs(col.vals[k]);
        if (a == 0) continue;
        clo = std::min(clo, a);
        chi = std::max(chi, a);
      }
      if (chi == 0) continue;
      double f = pow2_near(1.0 / std::sqrt(clo * chi));
      cs[j] *= f;
      for (std::size_t k = 0; k < col.rows.size(); ++k) col.vals[k] = orig.vals[k] * rs[col.rows[k]] * cs[j];
    }
  }
  for (std::size_t j = 0; j < q.cols.size(); ++j) q.c[j] = p.c[j] * cs[j];
  LpResult r = RevisedSimplex(q).solve();
  for (std::size_t j = 0; j < r.x.size(); ++j) r.x[j] *= cs[j];
  for (int k = 0; k < q.rows; ++k) r.dual[k] *= rs[k];
  r.objective = 0;
  for (std::size_t j = 0; j < r.x.size(); ++j) r.objective += p.c[j] * r.x[j];
  return r;
}

}  // namespace lcx
