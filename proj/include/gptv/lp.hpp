#ifndef GPTV_LP_HPP
#define GPTV_LP_HPP

#include <optional>
#include <vector>

namespace gptv {

/// Pivoting / feasibility tolerance of the simplex engine.
inline constexpr double kLpTol = 1e-9;

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// One row a.x (= or <=) rhs; which one depends on the list it is passed in.
struct LinearConstraint {
    std::vector<double> a;
    double rhs;
};

struct LpSolution {
    LpStatus status;
    double value = 0.0;     ///< objective at the witness (Optimal only)
    std::vector<double> x;  ///< witness point (Optimal only)
};

/// Maximize objective.x over free x in R^n subject to
///   eq[i].a . x  =  eq[i].rhs      and      ub[i].a . x <= ub[i].rhs.
///
/// Dense two-phase simplex on the split x = u - v, u,v >= 0, with Bland's
/// anti-cycling rule. Sized for desk-scale problems (tens of variables,
/// a couple hundred constraints); every call is independent, so parallel
/// sweeps over instances are safe.
LpSolution lp_solve(const std::vector<double>& objective,
                    const std::vector<LinearConstraint>& equalities,
                    const std::vector<LinearConstraint>& inequalities,
                    double tol = kLpTol);

/// Feasibility-only wrapper (zero objective): a witness point, or empty.
std::optional<std::vector<double>> lp_feasible(
    std::size_t n,
    const std::vector<LinearConstraint>& equalities,
    const std::vector<LinearConstraint>& inequalities,
    double tol = kLpTol);

} // namespace gptv

#endif
