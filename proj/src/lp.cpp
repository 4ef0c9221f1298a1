#include "gptv/lp.hpp"

#include <cmath>
#include <cstddef>

#include "gptv/errors.hpp"

namespace gptv {

namespace {

// Tableau rows are [A | b] in standard form A y = b, y >= 0, b >= 0.
// Column layout: u_0..u_{n-1}, v_0..v_{n-1} (x = u - v), one slack per
// inequality, one artificial per row.
struct Tableau {
    std::size_t rows, cols; // cols excludes the rhs column
    std::vector<std::vector<double>> t;
    std::vector<std::size_t> basis;

    double& a(std::size_t i, std::size_t j) { return t[i][j]; }
    double& b(std::size_t i) { return t[i][cols]; }
};

void pivot(Tableau& tab, std::size_t r, std::size_t c) {
    const double piv = tab.a(r, c);
    for (std::size_t j = 0; j <= tab.cols; ++j) tab.t[r][j] /= piv;
    for (std::size_t i = 0; i < tab.rows; ++i) {
        if (i == r) continue;
        const double f = tab.a(i, c);
        if (f == 0.0) continue;
        for (std::size_t j = 0; j <= tab.cols; ++j) tab.t[i][j] -= f * tab.t[r][j];
    }
    tab.basis[r] = c;
}

// Reduced costs for the objective c given the current basis.
std::vector<double> reduced_costs(const Tableau& tab, const std::vector<double>& c,
                                  std::size_t active_cols) {
    std::vector<double> r(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(active_cols));
    for (std::size_t i = 0; i < tab.rows; ++i) {
        const double cb = c[tab.basis[i]];
        if (cb == 0.0) continue;
        for (std::size_t j = 0; j < active_cols; ++j) r[j] -= cb * tab.t[i][j];
    }
    return r;
}

// Bland's rule: lowest-index improving column, lowest-index tie-broken row.
// Returns false on optimality; throws on unboundedness via the out-param.
bool simplex_step(Tableau& tab, const std::vector<double>& c,
                  std::size_t active_cols, double tol, bool& unbounded) {
    const auto r = reduced_costs(tab, c, active_cols);
    std::size_t enter = active_cols;
    for (std::size_t j = 0; j < active_cols; ++j) {
        if (r[j] > tol) { enter = j; break; }
    }
    if (enter == active_cols) return false;

    std::size_t leave = tab.rows;
    double best = 0.0;
    for (std::size_t i = 0; i < tab.rows; ++i) {
        const double aij = tab.a(i, enter);
        if (aij <= tol) continue;
        const double ratio = tab.b(i) / aij;
        if (leave == tab.rows || ratio < best - tol ||
            (ratio < best + tol && tab.basis[i] < tab.basis[leave])) {
            leave = i;
            best = ratio;
        }
    }
    if (leave == tab.rows) {
        unbounded = true;
        return false;
    }
    pivot(tab, leave, enter);
    return true;
}

void run_simplex(Tableau& tab, const std::vector<double>& c,
                 std::size_t active_cols, double tol, bool& unbounded) {
    unbounded = false;
    for (int iter = 0; iter < 200000; ++iter) {
        if (!simplex_step(tab, c, active_cols, tol, unbounded)) return;
    }
    throw InternalInconsistencyError("simplex failed to terminate");
}

} // namespace

LpSolution lp_solve(const std::vector<double>& objective,
                    const std::vector<LinearConstraint>& equalities,
                    const std::vector<LinearConstraint>& inequalities,
                    double tol) {
    const std::size_t n = objective.size();
    if (n == 0) throw ValidationError("objective has no variables");
    for (double v : objective)
        if (!std::isfinite(v)) throw ValidationError("objective has a non-finite entry");
    auto check_rows = [&](const std::vector<LinearConstraint>& rows) {
        for (const auto& row : rows) {
            if (row.a.size() != n)
                throw ValidationError("constraint arity does not match the objective");
            if (!std::isfinite(row.rhs)) throw ValidationError("non-finite constraint rhs");
            for (double v : row.a)
                if (!std::isfinite(v)) throw ValidationError("non-finite constraint entry");
        }
    };
    check_rows(equalities);
    check_rows(inequalities);

    const std::size_t m = equalities.size() + inequalities.size();
    const std::size_t n_slack = inequalities.size();
    const std::size_t first_slack = 2 * n;
    const std::size_t first_art = first_slack + n_slack;
    const std::size_t cols = first_art + m;

    Tableau tab;
    tab.rows = m;
    tab.cols = cols;
    tab.t.assign(m, std::vector<double>(cols + 1, 0.0));
    tab.basis.resize(m);

    std::size_t row = 0;
    auto fill_row = [&](const LinearConstraint& src, bool with_slack) {
        double sign = src.rhs < 0.0 ? -1.0 : 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            tab.a(row, k) = sign * src.a[k];
            tab.a(row, n + k) = -sign * src.a[k];
        }
        if (with_slack) tab.a(row, first_slack + row - equalities.size()) = sign;
        tab.a(row, first_art + row) = 1.0;
        tab.b(row) = sign * src.rhs;
        tab.basis[row] = first_art + row;
        ++row;
    };
    for (const auto& src : equalities) fill_row(src, false);
    for (const auto& src : inequalities) fill_row(src, true);

    // Phase 1: maximize -(sum of artificials).
    std::vector<double> c1(cols, 0.0);
    for (std::size_t j = first_art; j < cols; ++j) c1[j] = -1.0;
    bool unbounded = false;
    run_simplex(tab, c1, cols, tol, unbounded);

    double art_sum = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        if (tab.basis[i] >= first_art) art_sum += tab.b(i);
    if (art_sum > tol) return {LpStatus::Infeasible};

    // Drive leftover zero-valued artificials out of the basis; a row with
    // no eligible column is redundant and its artificial stays pinned at 0
    // (phase 2 never lets it re-enter: columns past first_art are ignored).
    for (std::size_t i = 0; i < m; ++i) {
        if (tab.basis[i] < first_art) continue;
        for (std::size_t j = 0; j < first_art; ++j) {
            if (std::fabs(tab.a(i, j)) > tol) {
                pivot(tab, i, j);
                break;
            }
        }
    }

    // Phase 2: the real objective on the split variables.
    std::vector<double> c2(cols, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        c2[k] = objective[k];
        c2[n + k] = -objective[k];
    }
    run_simplex(tab, c2, first_art, tol, unbounded);
    if (unbounded) return {LpStatus::Unbounded};

    std::vector<double> y(cols, 0.0);
    for (std::size_t i = 0; i < m; ++i) y[tab.basis[i]] = tab.b(i);
    LpSolution sol{LpStatus::Optimal, 0.0, std::vector<double>(n, 0.0)};
    for (std::size_t k = 0; k < n; ++k) {
        sol.x[k] = y[k] - y[n + k];
        sol.value += objective[k] * sol.x[k];
    }
    return sol;
}

std::optional<std::vector<double>> lp_feasible(
    std::size_t n,
    const std::vector<LinearConstraint>& equalities,
    const std::vector<LinearConstraint>& inequalities,
    double tol) {
    const auto sol =
        lp_solve(std::vector<double>(n, 0.0), equalities, inequalities, tol);
    if (sol.status != LpStatus::Optimal) return std::nullopt;
    return sol.x;
}

} // namespace gptv
