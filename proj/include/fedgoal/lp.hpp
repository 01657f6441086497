#pragma once

#include "fedgoal/errors.hpp"

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <numeric>
#include <vector>

namespace fedgoal {

/// min c.x  s.t.  A x = b,  x >= 0
struct LinearProgram {
    std::vector<double> objective;
    std::vector<std::vector<double>> constraint_matrix;
    std::vector<double> rhs;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    std::vector<double> x;
    double objective_value = 0.0;
    LpStatus status = LpStatus::Optimal;
};

namespace detail {

constexpr double kPivotTol = 1e-9;

class SimplexTableau {
public:
    SimplexTableau(const LinearProgram &lp, bool verbose) : verbose_(verbose) {
        m_ = lp.constraint_matrix.size();
        n_ = lp.objective.size();
        if (m_ == 0 || n_ == 0) throw MalformedProgram("empty program");
        if (lp.rhs.size() != m_) throw MalformedProgram("rhs size mismatch");
        for (double c : lp.objective)
            if (!std::isfinite(c)) throw MalformedProgram("non-finite objective");
        rows_.assign(m_, std::vector<double>(n_ + m_, 0.0));
        rhs_.resize(m_);
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            if (lp.constraint_matrix[i].size() != n_)
                throw MalformedProgram("constraint row size mismatch");
            const double sign = lp.rhs[i] < 0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n_; ++j) {
                const double a = lp.constraint_matrix[i][j];
                if (!std::isfinite(a)) throw MalformedProgram("non-finite constraint entry");
                rows_[i][j] = sign * a;
            }
            if (!std::isfinite(lp.rhs[i])) throw MalformedProgram("non-finite rhs");
            rhs_[i] = sign * lp.rhs[i];
            rows_[i][n_ + i] = 1.0; // artificial
            basis_[i] = n_ + i;
        }
    }

    LpStatus run(const std::vector<double> &objective) {
        // phase 1: minimize the artificial sum
        std::vector<double> phase1(n_ + m_, 0.0);
        for (std::size_t j = n_; j < n_ + m_; ++j) phase1[j] = 1.0;
        if (iterate(phase1, false) == LpStatus::Unbounded)
            throw SimplexStall("phase 1 reported unbounded");
        if (current_objective(phase1) > 1e-7) return LpStatus::Infeasible;
        expel_artificials();

        std::vector<double> phase2(n_ + m_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) phase2[j] = objective[j];
        return iterate(phase2, true);
    }

    std::vector<double> extract() const {
        std::vector<double> x(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) x[basis_[i]] = rhs_[i];
        return x;
    }

private:
    double current_objective(const std::vector<double> &c) const {
        double z = 0.0;
        for (std::size_t i = 0; i < m_; ++i) z += c[basis_[i]] * rhs_[i];
        return z;
    }

    // Bland: entering = lowest-index column with negative reduced cost,
    // leaving = min ratio with ties broken by lowest basis variable index.
    LpStatus iterate(const std::vector<double> &c, bool block_artificials) {
        const std::size_t cols = block_artificials ? n_ : n_ + m_;
        const std::size_t cap = 10 * (m_ + n_) * (m_ + n_);
        for (std::size_t iter = 0;; ++iter) {
            if (iter > cap) throw SimplexStall("iteration cap exceeded");
            std::size_t enter = cols;
            for (std::size_t j = 0; j < cols; ++j) {
                double reduced = c[j];
                for (std::size_t i = 0; i < m_; ++i) reduced -= c[basis_[i]] * rows_[i][j];
                if (reduced < -kPivotTol) {
                    enter = j;
                    break;
                }
            }
            if (enter == cols) return LpStatus::Optimal;

            std::size_t leave = m_;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                if (rows_[i][enter] <= kPivotTol) continue;
                const double ratio = rhs_[i] / rows_[i][enter];
                if (ratio < best_ratio - kPivotTol ||
                    (std::abs(ratio - best_ratio) <= kPivotTol &&
                     (leave == m_ || basis_[i] < basis_[leave]))) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
            if (leave == m_) return LpStatus::Unbounded;
            pivot(leave, enter);
            if (verbose_) dump(enter);
        }
    }

    void pivot(std::size_t row, std::size_t col) {
        const double p = rows_[row][col];
        for (auto &v : rows_[row]) v /= p;
        rhs_[row] /= p;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == row) continue;
            const double f = rows_[i][col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < rows_[i].size(); ++j) rows_[i][j] -= f * rows_[row][j];
            rhs_[i] -= f * rhs_[row];
        }
        basis_[row] = col;
    }

    // Pivot zero-valued artificials out of the basis where a structural
    // column allows it; redundant rows keep their artificial at zero and
    // phase 2 blocks it from re-entering.
    void expel_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            for (std::size_t j = 0; j < n_; ++j) {
                if (std::abs(rows_[i][j]) > kPivotTol) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }

    void dump(std::size_t entered) const {
        std::fprintf(stderr, "[simplex] entered x%zu, basis:", entered);
        for (std::size_t b : basis_) std::fprintf(stderr, " x%zu", b);
        std::fprintf(stderr, "\n");
    }

    std::size_t m_ = 0, n_ = 0;
    std::vector<std::vector<double>> rows_;
    std::vector<double> rhs_;
    std::vector<std::size_t> basis_;
    bool verbose_ = false;
};

} // namespace detail

/// Two-phase primal simplex with Bland's anti-cycling rule.
inline LpSolution solve_lp(const LinearProgram &lp, bool verbose = false) {
    detail::SimplexTableau tableau(lp, verbose);
    LpSolution sol;
    sol.status = tableau.run(lp.objective);
    if (sol.status == LpStatus::Optimal) {
        sol.x = tableau.extract();
        sol.objective_value =
            std::inner_product(sol.x.begin(), sol.x.end(), lp.objective.begin(), 0.0);
    }
    return sol;
}

} // namespace fedgoal
