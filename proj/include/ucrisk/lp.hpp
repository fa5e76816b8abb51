#ifndef UCRISK_LP_HPP
#define UCRISK_LP_HPP

// Small dense linear programs in standard form:  min c·x  s.t.  A x = b, x >= 0.
// Two independent solvers: exhaustive enumeration of basic feasible solutions
// (exact up to the linear solves, for a handful of columns) and a two-phase
// tableau simplex with Bland's rule.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ucrisk::lp {

struct Problem {
  Eigen::MatrixXd a;  // rows x cols
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

struct Solution {
  double value = 0.0;
  Eigen::VectorXd x;
};

inline constexpr double kFeasTol = 1e-9;

/// Minimum over every basic feasible solution. Empty when infeasible.
/// Cost grows as 2^cols; intended for cols <= 16.
inline std::optional<Solution> solve_by_enumeration(const Problem& pr, double feas_tol = kFeasTol) {
  const auto rows = pr.a.rows();
  const auto cols = pr.a.cols();
  if (cols > 24) throw std::length_error("basis enumeration is limited to 24 columns");

  std::optional<Solution> best;
  if (pr.b.cwiseAbs().maxCoeff() <= feas_tol) best = Solution{0.0, Eigen::VectorXd::Zero(cols)};

  const std::uint32_t subsets = 1u << cols;
  std::vector<Eigen::Index> idx;
  for (std::uint32_t mask = 1; mask < subsets; ++mask) {
    idx.clear();
    for (Eigen::Index j = 0; j < cols; ++j)
      if (mask & (1u << j)) idx.push_back(j);
    if (static_cast<Eigen::Index>(idx.size()) > rows) continue;

    Eigen::MatrixXd ab(rows, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) ab.col(static_cast<Eigen::Index>(k)) = pr.a.col(idx[k]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(ab);
    qr.setThreshold(1e-10);
    if (qr.rank() < static_cast<Eigen::Index>(idx.size())) continue;
    Eigen::VectorXd xb = qr.solve(pr.b);
    if ((ab * xb - pr.b).cwiseAbs().maxCoeff() > feas_tol) continue;
    if (xb.minCoeff() < -feas_tol) continue;

    Eigen::VectorXd x = Eigen::VectorXd::Zero(cols);
    double value = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      x(idx[k]) = std::max(0.0, xb(static_cast<Eigen::Index>(k)));
      value += pr.c(idx[k]) * x(idx[k]);
    }
    if (!best || value < best->value) best = Solution{value, std::move(x)};
  }
  return best;
}

namespace detail {

// Dense tableau; the last column holds the right-hand side.
class Tableau {
public:
  Tableau(Eigen::MatrixXd t, std::vector<Eigen::Index> basis) : t_(std::move(t)), basis_(std::move(basis)) {}

  // Minimizes `cost` over the current basis, entering columns < `usable`.
  // Returns false on unboundedness.
  bool optimize(const Eigen::VectorXd& cost, Eigen::Index usable, double tol) {
    const auto rows = t_.rows();
    for (int iter = 0; iter < 100000; ++iter) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < usable && enter < 0; ++j) {
        if (is_basic(j)) continue;
        double reduced = cost(j);
        for (Eigen::Index r = 0; r < rows; ++r) reduced -= cost(basis_[r]) * t_(r, j);
        if (reduced < -tol) enter = j;
      }
      if (enter < 0) return true;

      Eigen::Index leave = -1;
      double best_ratio = 0.0;
      for (Eigen::Index r = 0; r < rows; ++r) {
        if (t_(r, enter) <= tol) continue;
        double ratio = rhs(r) / t_(r, enter);
        if (leave < 0 || ratio < best_ratio - tol ||
            (std::abs(ratio - best_ratio) <= tol && basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw std::runtime_error("simplex iteration limit reached");
  }

  void pivot(Eigen::Index r, Eigen::Index j) {
    t_.row(r) /= t_(r, j);
    for (Eigen::Index k = 0; k < t_.rows(); ++k)
      if (k != r && t_(k, j) != 0.0) t_.row(k) -= t_(k, j) * t_.row(r);
    basis_[r] = j;
  }

  void drop_row(Eigen::Index r) {
    Eigen::MatrixXd keep(t_.rows() - 1, t_.cols());
    for (Eigen::Index k = 0, out = 0; k < t_.rows(); ++k)
      if (k != r) keep.row(out++) = t_.row(k);
    t_ = std::move(keep);
    basis_.erase(basis_.begin() + r);
  }

  bool is_basic(Eigen::Index j) const { return std::find(basis_.begin(), basis_.end(), j) != basis_.end(); }
  double rhs(Eigen::Index r) const { return t_(r, t_.cols() - 1); }
  double at(Eigen::Index r, Eigen::Index j) const { return t_(r, j); }
  Eigen::Index rows() const { return t_.rows(); }
  const std::vector<Eigen::Index>& basis() const { return basis_; }

private:
  Eigen::MatrixXd t_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace detail

/// Two-phase simplex with Bland's anti-cycling rule. Empty when infeasible.
inline std::optional<Solution> solve_by_simplex(const Problem& pr, double feas_tol = kFeasTol,
                                                double pivot_tol = 1e-12) {
  const auto rows = pr.a.rows();
  const auto cols = pr.a.cols();

  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(rows, cols + rows + 1);
  for (Eigen::Index r = 0; r < rows; ++r) {
    double sign = pr.b(r) < 0.0 ? -1.0 : 1.0;
    t.row(r).head(cols) = sign * pr.a.row(r);
    t(r, cols + r) = 1.0;
    t(r, cols + rows) = sign * pr.b(r);
  }
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(rows));
  for (Eigen::Index r = 0; r < rows; ++r) basis[static_cast<std::size_t>(r)] = cols + r;
  detail::Tableau tab(std::move(t), std::move(basis));

  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(cols + rows);
  phase1.tail(rows).setOnes();
  tab.optimize(phase1, cols + rows, pivot_tol);

  double infeas = 0.0;
  for (Eigen::Index r = 0; r < tab.rows(); ++r)
    if (tab.basis()[static_cast<std::size_t>(r)] >= cols) infeas += tab.rhs(r);
  if (infeas > feas_tol) return std::nullopt;

  // Drive remaining artificials out of the basis; drop redundant rows.
  for (Eigen::Index r = 0; r < tab.rows();) {
    if (tab.basis()[static_cast<std::size_t>(r)] < cols) {
      ++r;
      continue;
    }
    Eigen::Index j = 0;
    while (j < cols && (tab.is_basic(j) || std::abs(tab.at(r, j)) <= 1e-9)) ++j;
    if (j < cols) {
      tab.pivot(r, j);
      ++r;
    } else {
      tab.drop_row(r);
    }
  }

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(cols + rows);
  cost.head(cols) = pr.c;
  if (!tab.optimize(cost, cols, pivot_tol)) throw std::runtime_error("linear program is unbounded");

  Solution sol{0.0, Eigen::VectorXd::Zero(cols)};
  for (Eigen::Index r = 0; r < tab.rows(); ++r) {
    auto j = tab.basis()[static_cast<std::size_t>(r)];
    if (j < cols) sol.x(j) = std::max(0.0, tab.rhs(r));
  }
  sol.value = pr.c.dot(sol.x);
  if ((pr.a * sol.x - pr.b).cwiseAbs().maxCoeff() > 10 * feas_tol) return std::nullopt;
  return sol;
}

}  // namespace ucrisk::lp

#endif  // UCRISK_LP_HPP
