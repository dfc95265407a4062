#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace odmts {

// Small dense linear programs over nonnegative variables. Row senses are
// '<' (at most), '>' (at least), '=' (exact).
struct LpRow {
    std::vector<std::pair<int, double>> coeffs;  // (variable, coefficient)
    char sense = '<';
    double rhs = 0.0;
};

struct LinearProgram {
    bool maximize = true;
    std::vector<double> objective;
    std::vector<LpRow> rows;

    int add_var(double obj_coeff) {
        objective.push_back(obj_coeff);
        return static_cast<int>(objective.size()) - 1;
    }
    void add_row(std::vector<std::pair<int, double>> coeffs, char sense, double rhs) {
        rows.push_back({std::move(coeffs), sense, rhs});
    }
    int num_vars() const { return static_cast<int>(objective.size()); }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    double objective = 0.0;
    std::vector<double> x;
};

namespace lp_detail {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-7;

// Two-phase tableau simplex, Bland's rule throughout, so it cannot cycle.
// Sizes here are tiny (hundreds of columns at the very most), dense is fine.
class Tableau {
public:
    Tableau(const LinearProgram& lp) {
        const int n = lp.num_vars();
        m_ = static_cast<int>(lp.rows.size());

        // count extra columns: one slack per inequality, one artificial per
        // '>=' or '=' row (after flipping rows to nonnegative rhs)
        int slacks = 0, arts = 0;
        std::vector<char> sense(m_);
        for (int i = 0; i < m_; ++i) {
            const LpRow& row = lp.rows[i];
            char s = row.sense;
            if (row.rhs < 0) s = s == '<' ? '>' : s == '>' ? '<' : '=';
            sense[i] = s;
            if (s != '=') ++slacks;
            if (s != '<') ++arts;
        }
        cols_ = n + slacks + arts;
        art_begin_ = n + slacks;
        a_.assign(m_, std::vector<double>(cols_ + 1, 0.0));
        basis_.assign(m_, -1);

        int slack_at = n, art_at = art_begin_;
        for (int i = 0; i < m_; ++i) {
            const LpRow& row = lp.rows[i];
            const double flip = row.rhs < 0 ? -1.0 : 1.0;
            for (auto [v, c] : row.coeffs) a_[i][v] += flip * c;
            a_[i][cols_] = flip * row.rhs;
            if (sense[i] == '<') {
                a_[i][slack_at] = 1.0;
                basis_[i] = slack_at++;
            } else if (sense[i] == '>') {
                a_[i][slack_at++] = -1.0;
                a_[i][art_at] = 1.0;
                basis_[i] = art_at++;
            } else {
                a_[i][art_at] = 1.0;
                basis_[i] = art_at++;
            }
        }

        // phase 1: maximize minus the artificial total
        obj_.assign(cols_ + 1, 0.0);
        for (int i = 0; i < m_; ++i)
            if (basis_[i] >= art_begin_)
                for (int j = 0; j <= cols_; ++j) obj_[j] -= a_[i][j];
        for (int j = art_begin_; j < cols_; ++j) obj_[j] += 1.0;
        run();
        feasible_ = obj_[cols_] >= -kFeasTol;
        if (!feasible_) return;
        purge_artificials();

        // phase 2: the real objective
        const double dir = lp.maximize ? 1.0 : -1.0;
        obj_.assign(cols_ + 1, 0.0);
        for (int j = 0; j < n; ++j) obj_[j] = -dir * lp.objective[j];
        for (int i = 0; i < m_; ++i) {
            const int b = basis_[i];
            if (b < n) {
                const double cb = dir * lp.objective[b];
                if (cb != 0.0)
                    for (int j = 0; j <= cols_; ++j) obj_[j] += cb * a_[i][j];
            }
        }
        bounded_ = run();
        if (!lp.maximize) obj_[cols_] = -obj_[cols_];
    }

    LpSolution solution(const LinearProgram& lp) const {
        LpSolution s;
        if (!feasible_) {
            s.status = LpStatus::infeasible;
            return s;
        }
        if (!bounded_) {
            s.status = LpStatus::unbounded;
            return s;
        }
        s.status = LpStatus::optimal;
        s.x.assign(lp.num_vars(), 0.0);
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < lp.num_vars()) s.x[basis_[i]] = a_[i][cols_];
        s.objective = obj_[cols_];
        return s;
    }

private:
    // Bland: smallest improving column enters, smallest basis index leaves.
    // Returns false when an improving column has no blocking row (unbounded).
    // Artificial columns never enter; they start basic and leave for good.
    bool run() {
        for (;;) {
            int pc = -1;
            for (int j = 0; j < art_begin_; ++j)
                if (obj_[j] < -kPivotTol) { pc = j; break; }
            if (pc < 0) return true;
            int pr = -1;
            double best = 0.0;
            for (int i = 0; i < m_; ++i) {
                if (a_[i][pc] <= kPivotTol) continue;
                const double ratio = a_[i][cols_] / a_[i][pc];
                if (pr < 0 || ratio < best - kPivotTol
                    || (ratio < best + kPivotTol && basis_[i] < basis_[pr])) {
                    pr = i;
                    best = ratio;
                }
            }
            if (pr < 0) return false;
            pivot(pr, pc);
        }
    }

    void pivot(int pr, int pc) {
        const double p = a_[pr][pc];
        for (int j = 0; j <= cols_; ++j) a_[pr][j] /= p;
        for (int i = 0; i < m_; ++i) {
            if (i == pr) continue;
            const double f = a_[i][pc];
            if (f == 0.0) continue;
            for (int j = 0; j <= cols_; ++j) a_[i][j] -= f * a_[pr][j];
        }
        const double f = obj_[pc];
        if (f != 0.0)
            for (int j = 0; j <= cols_; ++j) obj_[j] -= f * a_[pr][j];
        basis_[pr] = pc;
    }

    // swap any basic artificial (necessarily at level zero) for a structural
    // column; a row with nothing to pivot on is redundant and stays inert
    void purge_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < art_begin_) continue;
            int pc = -1;
            for (int j = 0; j < art_begin_; ++j)
                if (std::abs(a_[i][j]) > kPivotTol) { pc = j; break; }
            if (pc >= 0) pivot(i, pc);
        }
    }

    int m_ = 0, cols_ = 0, art_begin_ = 0;
    std::vector<std::vector<double>> a_;
    std::vector<double> obj_;
    std::vector<int> basis_;
    bool feasible_ = false, bounded_ = true;
};

} // namespace lp_detail

inline LpSolution solve_lp(const LinearProgram& lp) {
    lp_detail::Tableau t(lp);
    return t.solution(lp);
}

} // namespace odmts
