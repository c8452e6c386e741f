#include "clp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace clp {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kRatioTol = 1e-10;
constexpr int kRefactorEvery = 50;
constexpr int kBlandAfterStalls = 200;

struct CanonicalLE {
  // User problem rewritten as: optimize cost over  A x <= b, x >= 0,
  // with `maximize` recording the orientation.
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd cost;  // internal max orientation
  bool user_max = true;
};

CanonicalLE to_le_form(const FiniteLP& lp) {
  CanonicalLE f;
  f.user_max = lp.sense == FiniteLP::Sense::Maximize;
  f.cost = f.user_max ? lp.cost : Eigen::VectorXd(-lp.cost);
  if (lp.row_sense == FiniteLP::RowSense::LessEqual) {
    f.a = lp.a;
    f.b = lp.rhs;
  } else {
    f.a = -lp.a;
    f.b = -lp.rhs;
  }
  return f;
}

// User-space diagnostics shared by both solvers.
void finalize(LPSolution& sol, const FiniteLP& lp, const Eigen::VectorXd& x,
              const Eigen::VectorXd& y) {
  sol.primal = x;
  sol.dual = y;
  sol.objective = lp.cost.dot(x);

  const bool le = lp.row_sense == FiniteLP::RowSense::LessEqual;
  const Eigen::VectorXd ax = lp.a * x;
  double pviol = 0.0;
  for (Eigen::Index i = 0; i < ax.size(); ++i) {
    const double v = le ? ax(i) - lp.rhs(i) : lp.rhs(i) - ax(i);
    pviol = std::max(pviol, v);
  }
  for (Eigen::Index j = 0; j < x.size(); ++j) pviol = std::max(pviol, -x(j));
  sol.primal_residual = std::max(0.0, pviol);

  const Eigen::VectorXd aty = lp.a.transpose() * y;
  double dviol = 0.0;
  for (Eigen::Index j = 0; j < aty.size(); ++j) {
    const double v = le ? lp.cost(j) - aty(j) : aty(j) - lp.cost(j);
    dviol = std::max(dviol, v);
  }
  for (Eigen::Index i = 0; i < y.size(); ++i) dviol = std::max(dviol, -y(i));
  sol.dual_residual = std::max(0.0, dviol);

  sol.duality_gap = std::fabs(sol.objective - lp.rhs.dot(y));

  double comp = 0.0;
  for (Eigen::Index i = 0; i < ax.size(); ++i)
    comp = std::max(comp, std::fabs(y(i) * (lp.rhs(i) - ax(i))));
  for (Eigen::Index j = 0; j < x.size(); ++j)
    comp = std::max(comp, std::fabs(x(j) * (lp.cost(j) - aty(j))));
  sol.complementarity = comp;
}

class RevisedSimplex {
 public:
  explicit RevisedSimplex(const FiniteLP& lp) : lp_(lp), le_(to_le_form(lp)) {}

  LPSolution run() {
    LPSolution sol;
    const std::size_t n = static_cast<std::size_t>(le_.a.cols());
    const std::size_t m = static_cast<std::size_t>(le_.a.rows());

    if (n == 0) {
      sol.status = SolveStatus::Optimal;
      finalize(sol, lp_, Eigen::VectorXd::Zero(0), Eigen::VectorXd::Zero(le_.a.rows()));
      return sol;
    }
    if (m == 0) {
      for (Eigen::Index j = 0; j < le_.cost.size(); ++j) {
        if (le_.cost(j) > kPivotTol) {
          sol.status = SolveStatus::Unbounded;
          sol.note = "improving ray on variable " + std::to_string(j);
          return sol;
        }
      }
      sol.status = SolveStatus::Optimal;
      finalize(sol, lp_, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)),
               Eigen::VectorXd::Zero(0));
      return sol;
    }

    build_internal();
    // Phase 1: minimize the artificial sum when any row needed one.
    if (num_art_ > 0) {
      phase_ = 1;
      const SolveStatus st = iterate();
      if (st != SolveStatus::Optimal) {
        sol.status = st == SolveStatus::Unbounded ? SolveStatus::NumericalFailure : st;
        sol.iterations = iterations_;
        sol.note = note_.empty() ? "phase 1 did not converge" : note_;
        return sol;
      }
      const double z1 = current_objective();
      if (z1 > 1e-8 * (1.0 + b_.lpNorm<Eigen::Infinity>())) {
        sol.status = SolveStatus::Infeasible;
        sol.iterations = iterations_;
        return sol;
      }
      drive_out_artificials();
    }

    phase_ = 2;
    stall_count_ = 0;
    bland_ = false;
    const SolveStatus st = iterate();
    sol.status = st;
    sol.iterations = iterations_;
    if (st != SolveStatus::Optimal) {
      sol.note = note_;
      return sol;
    }

    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const int col = basis_[r];
      if (col < static_cast<int>(n)) x(col) = xb_(static_cast<Eigen::Index>(r));
    }
    // Equality-form multipliers -> user-space row duals.
    Eigen::VectorXd cb(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) cb(static_cast<Eigen::Index>(r)) = cost2_(basis_[r]);
    const Eigen::VectorXd yhat = binv_.transpose() * cb;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(le_.a.rows());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      y(static_cast<Eigen::Index>(rows_[r])) = -scale_[r] * yhat(static_cast<Eigen::Index>(r));
    }
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = std::max(y(i), 0.0);
    finalize(sol, lp_, x, y);
    return sol;
  }

 private:
  void build_internal() {
    const std::size_t n = static_cast<std::size_t>(le_.a.cols());
    const std::size_t m = static_cast<std::size_t>(le_.a.rows());
    rows_.resize(m);
    scale_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      rows_[i] = i;
      scale_[i] = le_.b(static_cast<Eigen::Index>(i)) >= 0.0 ? 1.0 : -1.0;
    }
    num_art_ = 0;
    for (std::size_t i = 0; i < m; ++i)
      if (scale_[i] < 0.0) ++num_art_;

    const std::size_t ncols = n + m + num_art_;
    a_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(ncols));
    b_ = Eigen::VectorXd(static_cast<Eigen::Index>(m));
    cost1_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ncols));
    cost2_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ncols));
    first_art_ = n + m;

    std::size_t art = 0;
    basis_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const Eigen::Index ei = static_cast<Eigen::Index>(i);
      a_.row(ei).head(static_cast<Eigen::Index>(n)) = scale_[i] * le_.a.row(ei);
      a_(ei, static_cast<Eigen::Index>(n + i)) = scale_[i];
      b_(ei) = scale_[i] * le_.b(ei);
      if (scale_[i] < 0.0) {
        const std::size_t col = first_art_ + art;
        a_(ei, static_cast<Eigen::Index>(col)) = 1.0;
        cost1_(static_cast<Eigen::Index>(col)) = 1.0;
        basis_[i] = static_cast<int>(col);
        ++art;
      } else {
        basis_[i] = static_cast<int>(n + i);
      }
    }
    // Phase 2 minimizes the negated max-orientation cost.
    cost2_.head(static_cast<Eigen::Index>(n)) = -le_.cost;

    binv_ = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    xb_ = b_;
    iterations_ = 0;
    pivots_since_refactor_ = 0;
  }

  const Eigen::VectorXd& cost() const { return phase_ == 1 ? cost1_ : cost2_; }

  double current_objective() const {
    double z = 0.0;
    for (std::size_t r = 0; r < basis_.size(); ++r)
      z += cost()(basis_[r]) * xb_(static_cast<Eigen::Index>(r));
    return z;
  }

  bool column_allowed(std::size_t j) const {
    if (phase_ == 2 && j >= first_art_) return false;
    return true;
  }

  SolveStatus iterate() {
    const std::size_t m = basis_.size();
    const std::size_t ncols = static_cast<std::size_t>(a_.cols());
    std::vector<char> in_basis(ncols, 0);
    for (int c : basis_) in_basis[static_cast<std::size_t>(c)] = 1;

    const int max_iters = 50000 + 100 * static_cast<int>(m + ncols);
    double prev_obj = current_objective();

    for (int it = 0; it < max_iters; ++it) {
      Eigen::VectorXd cb(static_cast<Eigen::Index>(m));
      for (std::size_t r = 0; r < m; ++r) cb(static_cast<Eigen::Index>(r)) = cost()(basis_[r]);
      const Eigen::VectorXd y = binv_.transpose() * cb;
      const Eigen::VectorXd rc = cost() - a_.transpose() * y;

      int entering = -1;
      double best_rc = -kPivotTol;
      for (std::size_t j = 0; j < ncols; ++j) {
        if (in_basis[j] || !column_allowed(j)) continue;
        const double r = rc(static_cast<Eigen::Index>(j));
        if (bland_) {
          if (r < -kPivotTol) {
            entering = static_cast<int>(j);
            break;
          }
        } else if (r < best_rc) {
          best_rc = r;
          entering = static_cast<int>(j);
        }
      }
      if (entering < 0) return SolveStatus::Optimal;

      const Eigen::VectorXd d = binv_ * a_.col(entering);
      int leaving = -1;
      double theta = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < m; ++r) {
        const double dr = d(static_cast<Eigen::Index>(r));
        if (dr > kRatioTol) {
          const double ratio = std::max(xb_(static_cast<Eigen::Index>(r)), 0.0) / dr;
          if (ratio < theta - 1e-12 ||
              (ratio < theta + 1e-12 && leaving >= 0 && basis_[r] < basis_[leaving])) {
            theta = ratio;
            leaving = static_cast<int>(r);
          }
        }
      }
      if (leaving < 0) {
        if (phase_ == 1) {
          note_ = "phase 1 direction unbounded (numerical breakdown)";
          return SolveStatus::NumericalFailure;
        }
        return SolveStatus::Unbounded;
      }

      // Pivot: exchange basis column, eta-update the inverse and solution.
      in_basis[static_cast<std::size_t>(basis_[leaving])] = 0;
      in_basis[static_cast<std::size_t>(entering)] = 1;
      basis_[static_cast<std::size_t>(leaving)] = entering;
      const double pivot = d(leaving);
      xb_ -= theta * d;
      xb_(leaving) = theta;
      binv_.row(leaving) /= pivot;
      for (std::size_t r = 0; r < m; ++r) {
        if (static_cast<int>(r) == leaving) continue;
        const double dr = d(static_cast<Eigen::Index>(r));
        if (dr != 0.0) binv_.row(static_cast<Eigen::Index>(r)) -= dr * binv_.row(leaving);
      }
      ++iterations_;

      if (++pivots_since_refactor_ >= kRefactorEvery) refactor();

      const double obj = current_objective();
      if (prev_obj - obj < 1e-13 * (1.0 + std::fabs(obj))) {
        if (++stall_count_ >= kBlandAfterStalls) bland_ = true;
      } else {
        stall_count_ = 0;
      }
      prev_obj = obj;

      if (!xb_.allFinite() || !binv_.allFinite()) {
        note_ = "basis inverse lost precision, condition estimate " +
                std::to_string(condition_estimate());
        return SolveStatus::NumericalFailure;
      }
    }
    note_ = "iteration limit reached, condition estimate " + std::to_string(condition_estimate());
    return SolveStatus::NumericalFailure;
  }

  void refactor() {
    const std::size_t m = basis_.size();
    Eigen::MatrixXd basis_matrix(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t r = 0; r < m; ++r) basis_matrix.col(static_cast<Eigen::Index>(r)) = a_.col(basis_[r]);
    binv_ = basis_matrix.partialPivLu().inverse();
    xb_ = binv_ * b_;
    pivots_since_refactor_ = 0;
  }

  double condition_estimate() const {
    const std::size_t m = basis_.size();
    Eigen::MatrixXd basis_matrix(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t r = 0; r < m; ++r) basis_matrix.col(static_cast<Eigen::Index>(r)) = a_.col(basis_[r]);
    return basis_matrix.lpNorm<Eigen::Infinity>() * binv_.lpNorm<Eigen::Infinity>();
  }

  // After phase 1, swap zero-level artificials for structural columns; drop
  // rows that prove linearly dependent.
  void drive_out_artificials() {
    for (std::size_t r = 0; r < basis_.size(); ++r) {
      if (static_cast<std::size_t>(basis_[r]) < first_art_) continue;
      const Eigen::VectorXd row = binv_.row(static_cast<Eigen::Index>(r)) * a_;
      int replacement = -1;
      for (std::size_t j = 0; j < first_art_; ++j) {
        bool basic = false;
        for (int c : basis_)
          if (c == static_cast<int>(j)) {
            basic = true;
            break;
          }
        if (basic) continue;
        if (std::fabs(row(static_cast<Eigen::Index>(j))) > 1e-7) {
          replacement = static_cast<int>(j);
          break;
        }
      }
      if (replacement >= 0) {
        const Eigen::VectorXd d = binv_ * a_.col(replacement);
        const double pivot = d(static_cast<Eigen::Index>(r));
        basis_[r] = replacement;
        binv_.row(static_cast<Eigen::Index>(r)) /= pivot;
        for (std::size_t i = 0; i < basis_.size(); ++i) {
          if (i == r) continue;
          const double di = d(static_cast<Eigen::Index>(i));
          if (di != 0.0)
            binv_.row(static_cast<Eigen::Index>(i)) -= di * binv_.row(static_cast<Eigen::Index>(r));
        }
        xb_ = binv_ * b_;
      } else {
        drop_row(r);
        --r;
      }
    }
    refactor();
  }

  void drop_row(std::size_t r) {
    const std::size_t m = basis_.size();
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < m; ++i)
      if (i != r) keep.push_back(i);

    Eigen::MatrixXd a2(static_cast<Eigen::Index>(keep.size()), a_.cols());
    Eigen::VectorXd b2(static_cast<Eigen::Index>(keep.size()));
    std::vector<std::size_t> rows2(keep.size());
    std::vector<double> scale2(keep.size());
    std::vector<int> basis2(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
      a2.row(static_cast<Eigen::Index>(i)) = a_.row(static_cast<Eigen::Index>(keep[i]));
      b2(static_cast<Eigen::Index>(i)) = b_(static_cast<Eigen::Index>(keep[i]));
      rows2[i] = rows_[keep[i]];
      scale2[i] = scale_[keep[i]];
      basis2[i] = basis_[keep[i]];
    }
    a_ = std::move(a2);
    b_ = std::move(b2);
    rows_ = std::move(rows2);
    scale_ = std::move(scale2);
    basis_ = std::move(basis2);
    binv_.resize(static_cast<Eigen::Index>(basis_.size()), static_cast<Eigen::Index>(basis_.size()));
    refactor();
  }

  const FiniteLP& lp_;
  CanonicalLE le_;

  Eigen::MatrixXd a_;       // internal equality system
  Eigen::VectorXd b_;       // nonnegative right-hand side
  Eigen::VectorXd cost1_;   // phase-1 cost (artificial sum)
  Eigen::VectorXd cost2_;   // phase-2 cost (negated max orientation)
  std::vector<std::size_t> rows_;  // internal row -> user row
  std::vector<double> scale_;      // +-1 applied to reach b >= 0
  std::vector<int> basis_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  std::size_t first_art_ = 0;
  std::size_t num_art_ = 0;
  int phase_ = 2;
  int iterations_ = 0;
  int pivots_since_refactor_ = 0;
  int stall_count_ = 0;
  bool bland_ = false;
  std::string note_;
};

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

LPSolution solve(const FiniteLP& lp) {
  if (!lp.cost.allFinite() || !lp.a.allFinite() || !lp.rhs.allFinite())
    throw std::invalid_argument("solve: non-finite problem data");
  RevisedSimplex worker(lp);
  return worker.run();
}

LPSolution brute_force_solve(const FiniteLP& lp) {
  const std::size_t n = lp.num_vars();
  const std::size_t m = lp.num_rows();
  if (n + m > 14)
    throw std::invalid_argument("brute_force_solve: refusing instances above 14 vars+rows");

  const CanonicalLE le = to_le_form(lp);
  const std::size_t ncols = n + m;
  Eigen::MatrixXd ext(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(ncols));
  if (m > 0) {
    ext.leftCols(static_cast<Eigen::Index>(n)) = le.a;
    ext.rightCols(static_cast<Eigen::Index>(m)) =
        Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  }
  Eigen::VectorXd cext = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ncols));
  cext.head(static_cast<Eigen::Index>(n)) = le.cost;

  LPSolution sol;
  bool any_feasible = false;
  bool have_best = false;
  bool unbounded = false;
  double best_internal = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x, best_y;
  const double feas_tol = 1e-10 * (1.0 + (m > 0 ? le.b.lpNorm<Eigen::Infinity>() : 0.0));

  if (m == 0) {
    for (Eigen::Index j = 0; j < cext.size(); ++j)
      if (cext(j) > 1e-9) unbounded = true;
    any_feasible = true;
    best_x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    best_y = Eigen::VectorXd::Zero(0);
  } else {
    std::vector<std::size_t> pick(m);
    for (std::size_t i = 0; i < m; ++i) pick[i] = i;
    const auto advance = [&]() {
      std::size_t i = m;
      while (i-- > 0) {
        if (pick[i] + (m - i) < ncols) {
          ++pick[i];
          for (std::size_t k = i + 1; k < m; ++k) pick[k] = pick[k - 1] + 1;
          return true;
        }
      }
      return false;
    };

    do {
      Eigen::MatrixXd basis(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
      for (std::size_t r = 0; r < m; ++r)
        basis.col(static_cast<Eigen::Index>(r)) = ext.col(static_cast<Eigen::Index>(pick[r]));
      Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
      if (!lu.isInvertible()) continue;
      const Eigen::VectorXd xb = lu.solve(le.b);
      if (xb.minCoeff() < -feas_tol) continue;
      any_feasible = true;

      Eigen::VectorXd cb(static_cast<Eigen::Index>(m));
      for (std::size_t r = 0; r < m; ++r) cb(static_cast<Eigen::Index>(r)) = cext(static_cast<Eigen::Index>(pick[r]));
      const Eigen::MatrixXd binv = lu.inverse();
      const Eigen::VectorXd y = binv.transpose() * cb;

      // Improving recession direction from this vertex?
      for (std::size_t j = 0; j < ncols && !unbounded; ++j) {
        bool basic = false;
        for (std::size_t r = 0; r < m; ++r)
          if (pick[r] == j) {
            basic = true;
            break;
          }
        if (basic) continue;
        const double rc = cext(static_cast<Eigen::Index>(j)) - y.dot(ext.col(static_cast<Eigen::Index>(j)));
        if (rc > 1e-9) {
          const Eigen::VectorXd d = binv * ext.col(static_cast<Eigen::Index>(j));
          if ((d.array() <= 1e-12).all()) unbounded = true;
        }
      }

      double internal_obj = 0.0;
      Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
      for (std::size_t r = 0; r < m; ++r) {
        if (pick[r] < n) x(static_cast<Eigen::Index>(pick[r])) = std::max(xb(static_cast<Eigen::Index>(r)), 0.0);
      }
      internal_obj = le.cost.dot(x);
      if (!have_best || internal_obj > best_internal + 1e-14) {
        have_best = true;
        best_internal = internal_obj;
        best_x = x;
        best_y = y;
      }
    } while (advance());
  }

  if (unbounded) {
    sol.status = SolveStatus::Unbounded;
    return sol;
  }
  if (!any_feasible) {
    sol.status = SolveStatus::Infeasible;
    return sol;
  }
  sol.status = SolveStatus::Optimal;
  Eigen::VectorXd y_user = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  if (m > 0 && best_y.size() == static_cast<Eigen::Index>(m)) {
    for (Eigen::Index i = 0; i < y_user.size(); ++i) y_user(i) = std::max(best_y(i), 0.0);
  }
  finalize(sol, lp, best_x, y_user);
  return sol;
}

}  // namespace clp
