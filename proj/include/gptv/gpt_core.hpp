#ifndef GPTV_GPT_CORE_HPP
#define GPTV_GPT_CORE_HPP

#include <optional>
#include <utility>
#include <vector>

#include "gptv/lp.hpp"
#include "gptv/numeric.hpp"
#include "gptv/tables.hpp"

namespace gptv {

/// A polytopal theory: states are the convex hull of `vertices` (the
/// deterministic pure states), effects are all dual vectors valid on that
/// hull (no-restriction), and `unit_effect` evaluates to 1 on every vertex.
class ConvexStateSpace {
public:
    ConvexStateSpace(std::vector<std::vector<double>> vertices,
                     std::vector<double> unit_effect, double eps = kProbEps);

    int dim() const { return static_cast<int>(unit_effect_.size()); }
    int num_vertices() const { return static_cast<int>(vertices_.size()); }
    const std::vector<std::vector<double>>& vertices() const { return vertices_; }
    const std::vector<double>& vertex(int i) const {
        return vertices_[static_cast<std::size_t>(i)];
    }
    const std::vector<double>& unit_effect() const { return unit_effect_; }

private:
    std::vector<std::vector<double>> vertices_;
    std::vector<double> unit_effect_;
};

/// normalization caches <e|coords>; 1 for deterministic states, in (0,1]
/// for subnormalized ones (assemblage members).
struct StateVector {
    std::vector<double> coords;
    double normalization = 1.0;
};

struct EffectVector {
    std::vector<double> coords;
};

struct TestSpec {
    std::vector<EffectVector> effects;
};

/// A binary complete test together with witness states satisfying
/// <a_i|alpha_j> = delta_ij (present once verified).
struct Proposition {
    TestSpec test;
    std::optional<std::pair<StateVector, StateVector>> witnesses;
};

double dot(const std::vector<double>& a, const std::vector<double>& b);
double evaluate(const EffectVector& a, const StateVector& s);

/// <e|coords>.
double effect_weight(const ConvexStateSpace& space,
                     const std::vector<double>& coords);

/// coords scaled to a deterministic state; <e|coords> must exceed eps.
StateVector normalized_state(const ConvexStateSpace& space,
                             std::vector<double> coords,
                             double eps = kProbEps);

/// 0 <= <a|v> <= 1 on every vertex.
bool is_valid_effect(const ConvexStateSpace& space, const EffectVector& a,
                     double eps = kProbEps);

/// coords/normalization lies in the hull of the vertices (one LP).
bool contains_state(const ConvexStateSpace& space, const StateVector& s,
                    double eps = kProbEps);

/// All effects valid and summing to the unit effect componentwise.
bool is_complete_test(const ConvexStateSpace& space,
                      const std::vector<EffectVector>& effects,
                      double eps = kProbEps);

/// Every effect of every listed proposition evaluates to 0 or 1 on the
/// state. The state must be deterministic.
bool is_sharp_state(const StateVector& s, const std::vector<Proposition>& props,
                    double eps = kProbEps);

/// A state sharp for all props with the prescribed first-effect values
/// (pattern[i] = value of props[i]'s first effect), or empty. One LP.
std::optional<StateVector> common_sharp_state_with_pattern(
    const ConvexStateSpace& space, const std::vector<Proposition>& props,
    const std::vector<int>& pattern, double eps = kProbEps);

/// Sweeps all 2^N sign patterns (descending lexicographic, all-ones
/// first) and returns the first witness. N capped at 12.
std::optional<StateVector> find_common_sharp_state(
    const ConvexStateSpace& space, const std::vector<Proposition>& props,
    double eps = kProbEps);

/// Witness states (alpha_0, alpha_1) with <a_i|alpha_j> = delta_ij, or
/// empty when the binary complete test admits none.
std::optional<std::pair<StateVector, StateVector>> is_proposition(
    const ConvexStateSpace& space, const TestSpec& test, double eps = kProbEps);

/// is_proposition with the witnesses stamped on; throws ValidationError
/// when the test is not a proposition.
Proposition make_proposition(const ConvexStateSpace& space, const TestSpec& test,
                             double eps = kProbEps);

/// No common sharp state. Both inputs must be propositions.
bool are_complementary(const ConvexStateSpace& space, const Proposition& a,
                       const Proposition& b, double eps = kProbEps);

/// Collapses a family with no common sharp state to a complementary pair:
/// finds the largest subset phi admitting a common sharp state, averages
/// its tests (orienting each member so the two witness patterns are
/// all-ones / all-zeros), and pairs the average with a member outside phi.
std::pair<Proposition, Proposition> reduce_to_two(
    const ConvexStateSpace& space, const std::vector<Proposition>& props,
    double eps = kProbEps);

/// Best effect vanishing on alpha0: maximizes <a|alpha1> subject to
/// <a|alpha0> = 0 and effect validity. Empty when the optimum is <= eps;
/// a value of 1 means perfect discrimination.
std::optional<std::pair<EffectVector, double>> conclusive_discrimination(
    const ConvexStateSpace& space, const StateVector& alpha0,
    const StateVector& alpha1, double eps = kProbEps);

// ---- Built-in spaces -------------------------------------------------

/// n-outcome classical system: standard-basis vertices, all-ones unit.
ConvexStateSpace classical_simplex(int n);
ConvexStateSpace classical_bit();

/// Square state space (gbit): vertices (1, ±1, ±1), unit (1,0,0).
ConvexStateSpace square_space();

/// Octahedral inscription of the qubit state ball: vertices (1, ±e_k),
/// unit (1,0,0,0). Coordinate tests on it are propositions.
ConvexStateSpace bloch_octahedron();

/// Indicator effect of vertex i on a classical simplex.
EffectVector classical_indicator(const ConvexStateSpace& space, int i);
TestSpec indicator_test(const ConvexStateSpace& space, int i);

/// {(e + x_axis)/2, (e - x_axis)/2} on a space with unit effect
/// (1, 0, ..., 0); axis counts from the first non-unit coordinate.
TestSpec coordinate_test(const ConvexStateSpace& space, int axis);

/// Table of a two-bit classical state (weights w_kl, row-major) under
/// binary tests on each bit: p_ij = sum_kl w_kl A_i[k] B_j[l]. Purity is
/// stamped DeclaredPure exactly when the weight vector is a vertex.
JointTable bipartite_classical_table(const std::vector<double>& weights,
                                     const TestSpec& test_a,
                                     const TestSpec& test_b,
                                     double eps = kProbEps);

} // namespace gptv

#endif
