#pragma once

// Dense revised simplex for
//     max c.a  subject to  A a <= b,  a free,
// solved through its dual  min b.y  subject to  A^T y = c,  y >= 0.
// The dual form has one row per variable of the original problem, which is
// small here, and one column per constraint. Changing c only moves the right
// hand side of the dual, so a previous optimal basis stays dual feasible and
// a few dual simplex pivots restore optimality.

#include "cube/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

namespace cube {

struct LpResult {
    double optimum = 0.0;
    std::vector<double> solution;
};

class DualFormSimplex {
public:
    /// `rows` is A (constraints x variables), `bounds` is b.
    DualFormSimplex(const Eigen::MatrixXd& rows, const Eigen::VectorXd& bounds, double tol = 1e-9)
        : k_(static_cast<int>(rows.cols())), m_(static_cast<int>(rows.rows())), tol_(tol) {
        if (bounds.size() != rows.rows()) throw DimensionError("lp: constraint and bound counts differ");
        if (k_ < 1) throw DimensionError("lp: no variables");
        cols_.resize(k_, m_ + k_);
        cols_.leftCols(m_) = rows.transpose();
        cols_.rightCols(k_).setZero();
        cost_ = Eigen::VectorXd::Zero(m_ + k_);
        cost_.head(m_) = bounds;
        basis_.assign(static_cast<std::size_t>(k_), -1);
        in_basis_.assign(static_cast<std::size_t>(m_ + k_), false);
    }

    int variables() const { return k_; }
    int pivots() const { return pivots_; }

    /// Two-phase primal simplex from the artificial basis.
    void solve_cold(const Eigen::VectorXd& c) {
        check_rhs(c);
        rhs_ = c;
        std::fill(in_basis_.begin(), in_basis_.end(), false);
        binv_ = Eigen::MatrixXd::Zero(k_, k_);
        for (int i = 0; i < k_; ++i) {
            const double s = c(i) < 0 ? -1.0 : 1.0;
            cols_.col(m_ + i).setZero();
            cols_(i, m_ + i) = s;
            binv_(i, i) = s;
            set_basic(i, m_ + i);
        }
        y_ = binv_ * rhs_;

        Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(m_ + k_);
        phase1.tail(k_).setOnes();
        primal(phase1, m_ + k_);
        const double infeas = basic_cost(phase1);
        if (infeas > tol_ * (1.0 + c.cwiseAbs().sum())) throw NumericError("lp: unbounded objective");
        drive_out_artificials();
        primal(cost_, m_);
        since_refactor_ = 0;
    }

    /// Re-optimize for a new objective starting from the current basis.
    void solve_warm(const Eigen::VectorXd& c) {
        check_rhs(c);
        if (basis_[0] < 0) {
            solve_cold(c);
            return;
        }
        rhs_ = c;
        y_ = binv_ * rhs_;
        dual();
    }

    double optimum() const { return basic_cost(cost_); }

    /// Maximizer of the original problem, i.e. the dual prices of the basis.
    std::vector<double> solution() const {
        Eigen::VectorXd pi = prices(cost_);
        return {pi.data(), pi.data() + pi.size()};
    }

private:
    void check_rhs(const Eigen::VectorXd& c) const {
        if (c.size() != k_) throw DimensionError("lp: objective length differs from variable count");
    }

    void set_basic(int row, int col) {
        if (basis_[static_cast<std::size_t>(row)] >= 0) in_basis_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(row)])] = false;
        basis_[static_cast<std::size_t>(row)] = col;
        in_basis_[static_cast<std::size_t>(col)] = true;
    }

    double basic_cost(const Eigen::VectorXd& cost) const {
        double v = 0.0;
        for (int i = 0; i < k_; ++i) v += cost(basis_[static_cast<std::size_t>(i)]) * y_(i);
        return v;
    }

    Eigen::VectorXd prices(const Eigen::VectorXd& cost) const {
        Eigen::VectorXd cb(k_);
        for (int i = 0; i < k_; ++i) cb(i) = cost(basis_[static_cast<std::size_t>(i)]);
        return binv_.transpose() * cb;
    }

    void pivot(int row, int col) {
        const Eigen::VectorXd d = binv_ * cols_.col(col);
        const double p = d(row);
        binv_.row(row) /= p;
        y_(row) /= p;
        for (int i = 0; i < k_; ++i) {
            if (i == row || d(i) == 0.0) continue;
            binv_.row(i) -= d(i) * binv_.row(row);
            y_(i) -= d(i) * y_(row);
        }
        set_basic(row, col);
        ++pivots_;
        if (++since_refactor_ >= kRefactorEvery) refactor();
    }

    void refactor() {
        Eigen::MatrixXd b(k_, k_);
        for (int i = 0; i < k_; ++i) b.col(i) = cols_.col(basis_[static_cast<std::size_t>(i)]);
        binv_ = b.partialPivLu().inverse();
        y_ = binv_ * rhs_;
        since_refactor_ = 0;
    }

    /// Primal simplex with Bland's rule over columns [0, limit).
    void primal(const Eigen::VectorXd& cost, int limit) {
        for (int iter = 0; iter < kMaxIterations; ++iter) {
            const Eigen::VectorXd pi = prices(cost);
            int enter = -1;
            for (int j = 0; j < limit; ++j) {
                if (in_basis_[static_cast<std::size_t>(j)]) continue;
                if (cost(j) - pi.dot(cols_.col(j)) < -tol_) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return;
            const Eigen::VectorXd d = binv_ * cols_.col(enter);
            int leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < k_; ++i) {
                if (d(i) <= tol_) continue;
                const double ratio = std::max(0.0, y_(i)) / d(i);
                if (leave < 0 || ratio < best - tol_) {
                    best = ratio;
                    leave = i;
                } else if (ratio <= best + tol_ && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)]) {
                    leave = i;
                }
            }
            if (leave < 0) throw NumericError("lp: infeasible constraints");
            pivot(leave, enter);
        }
        throw NumericError("lp: iteration limit");
    }

    /// Dual simplex with Bland's rule; assumes the basis is dual feasible.
    void dual() {
        for (int iter = 0; iter < kMaxIterations; ++iter) {
            int leave = -1;
            for (int i = 0; i < k_; ++i) {
                if (y_(i) < -tol_ && (leave < 0 || basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) leave = i;
            }
            if (leave < 0) return;
            const Eigen::VectorXd pi = prices(cost_);
            const Eigen::RowVectorXd alpha = binv_.row(leave) * cols_.leftCols(m_);
            int enter = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int j = 0; j < m_; ++j) {
                if (in_basis_[static_cast<std::size_t>(j)] || alpha(j) >= -tol_) continue;
                const double reduced = std::max(0.0, cost_(j) - pi.dot(cols_.col(j)));
                const double ratio = reduced / -alpha(j);
                if (ratio < best - tol_) {
                    best = ratio;
                    enter = j;
                }
            }
            if (enter < 0) throw NumericError("lp: unbounded objective");
            pivot(leave, enter);
        }
        throw NumericError("lp: iteration limit");
    }

    void drive_out_artificials() {
        for (int i = 0; i < k_; ++i) {
            if (basis_[static_cast<std::size_t>(i)] < m_) continue;
            const Eigen::RowVectorXd alpha = binv_.row(i) * cols_.leftCols(m_);
            int enter = -1;
            for (int j = 0; j < m_; ++j) {
                if (!in_basis_[static_cast<std::size_t>(j)] && std::abs(alpha(j)) > 1e-7) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) throw NumericError("lp: constraint rows do not span the variables");
            pivot(i, enter);
        }
        refactor();
    }

    static constexpr int kRefactorEvery = 64;
    static constexpr int kMaxIterations = 100000;

    int k_;
    int m_;
    double tol_;
    Eigen::MatrixXd cols_;
    Eigen::VectorXd cost_;
    Eigen::MatrixXd binv_;
    Eigen::VectorXd y_;
    Eigen::VectorXd rhs_;
    std::vector<int> basis_;
    std::vector<bool> in_basis_;
    int since_refactor_ = 0;
    int pivots_ = 0;
};

/// max c.a subject to A a <= b. The feasible region must be bounded and
/// contain 0.
inline LpResult lp_maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                            double tol = 1e-9) {
    if (a.cols() != c.size()) throw DimensionError("lp: objective length differs from variable count");
    detail::require_domain((b.array() >= 0).all(), "lp: bounds must be nonnegative");
    DualFormSimplex lp(a, b, tol);
    lp.solve_cold(c);
    return {lp.optimum(), lp.solution()};
}

}  // namespace cube
