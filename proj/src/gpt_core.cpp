#include "gptv/gpt_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gptv/errors.hpp"

namespace gptv {

ConvexStateSpace::ConvexStateSpace(std::vector<std::vector<double>> vertices,
                                   std::vector<double> unit_effect, double eps)
    : vertices_(std::move(vertices)), unit_effect_(std::move(unit_effect)) {
    if (unit_effect_.empty()) throw ValidationError("empty unit effect");
    if (vertices_.empty()) throw ValidationError("state space needs at least one vertex");
    for (const auto& v : vertices_) {
        if (v.size() != unit_effect_.size())
            throw ValidationError("vertex dimension does not match the unit effect");
        if (std::fabs(dot(unit_effect_, v) - 1.0) > eps)
            throw ValidationError("unit effect must evaluate to 1 on every vertex");
    }
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        for (std::size_t j = i + 1; j < vertices_.size(); ++j) {
            double d = 0.0;
            for (std::size_t k = 0; k < unit_effect_.size(); ++k)
                d = std::max(d, std::fabs(vertices_[i][k] - vertices_[j][k]));
            if (d <= eps) throw ValidationError("duplicate vertices");
        }
    }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw ValidationError("dimension mismatch in pairing");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double evaluate(const EffectVector& a, const StateVector& s) {
    return dot(a.coords, s.coords);
}

double effect_weight(const ConvexStateSpace& space,
                     const std::vector<double>& coords) {
    return dot(space.unit_effect(), coords);
}

StateVector normalized_state(const ConvexStateSpace& space,
                             std::vector<double> coords, double eps) {
    const double n = effect_weight(space, coords);
    if (n <= eps)
        throw PreconditionError("cannot normalize a state of weight <= eps");
    for (double& c : coords) c /= n;
    return {std::move(coords), 1.0};
}

bool is_valid_effect(const ConvexStateSpace& space, const EffectVector& a,
                     double eps) {
    for (const auto& v : space.vertices()) {
        const double val = dot(a.coords, v);
        if (val < -eps || val > 1.0 + eps) return false;
    }
    return true;
}

namespace {

// Constraints putting hull weights t (one per vertex) on a valid state:
// sum_j t_j = 1 plus t_j >= 0 rows; callers append pairing equalities.
void hull_constraints(const ConvexStateSpace& space,
                      std::vector<LinearConstraint>& eq,
                      std::vector<LinearConstraint>& ub) {
    const std::size_t nv = static_cast<std::size_t>(space.num_vertices());
    eq.push_back({std::vector<double>(nv, 1.0), 1.0});
    for (std::size_t j = 0; j < nv; ++j) {
        std::vector<double> row(nv, 0.0);
        row[j] = -1.0;
        ub.push_back({std::move(row), 0.0});
    }
}

std::vector<double> hull_point(const ConvexStateSpace& space,
                               const std::vector<double>& t) {
    std::vector<double> coords(static_cast<std::size_t>(space.dim()), 0.0);
    for (int j = 0; j < space.num_vertices(); ++j)
        for (int k = 0; k < space.dim(); ++k)
            coords[static_cast<std::size_t>(k)] +=
                t[static_cast<std::size_t>(j)] *
                space.vertex(j)[static_cast<std::size_t>(k)];
    return coords;
}

void require_binary_complete(const ConvexStateSpace& space, const TestSpec& test,
                             double eps, const char* what) {
    if (test.effects.size() != 2)
        throw PreconditionError(std::string(what) + ": test is not binary");
    if (!is_complete_test(space, test.effects, eps))
        throw PreconditionError(std::string(what) + ": test is not complete");
}

bool witnesses_check(const Proposition& p, double eps) {
    if (!p.witnesses) return false;
    const StateVector* w[2] = {&p.witnesses->first, &p.witnesses->second};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double want = i == j ? 1.0 : 0.0;
            if (std::fabs(evaluate(p.test.effects[static_cast<std::size_t>(i)],
                                   *w[j]) - want) > eps)
                return false;
        }
    return true;
}

Proposition ensure_proposition(const ConvexStateSpace& space,
                               const Proposition& p, double eps,
                               const char* what) {
    if (witnesses_check(p, eps)) return p;
    auto found = is_proposition(space, p.test, eps);
    if (!found)
        throw ValidationError(std::string(what) + ": input test is not a proposition");
    return {p.test, std::move(found)};
}

} // namespace

bool contains_state(const ConvexStateSpace& space, const StateVector& s,
                    double eps) {
    if (s.coords.size() != static_cast<std::size_t>(space.dim()))
        throw ValidationError("state dimension does not match the space");
    if (s.normalization <= eps) return false;
    std::vector<LinearConstraint> eq, ub;
    hull_constraints(space, eq, ub);
    const std::size_t nv = static_cast<std::size_t>(space.num_vertices());
    for (int k = 0; k < space.dim(); ++k) {
        std::vector<double> row(nv);
        for (std::size_t j = 0; j < nv; ++j)
            row[j] = space.vertex(static_cast<int>(j))[static_cast<std::size_t>(k)];
        eq.push_back({std::move(row),
                      s.coords[static_cast<std::size_t>(k)] / s.normalization});
    }
    return lp_feasible(nv, eq, ub, eps).has_value();
}

bool is_complete_test(const ConvexStateSpace& space,
                      const std::vector<EffectVector>& effects, double eps) {
    if (effects.empty()) return false;
    std::vector<double> sum(static_cast<std::size_t>(space.dim()), 0.0);
    for (const auto& a : effects) {
        if (a.coords.size() != sum.size())
            throw ValidationError("effect dimension does not match the space");
        if (!is_valid_effect(space, a, eps)) return false;
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += a.coords[k];
    }
    for (std::size_t k = 0; k < sum.size(); ++k)
        if (std::fabs(sum[k] - space.unit_effect()[k]) > eps) return false;
    return true;
}

bool is_sharp_state(const StateVector& s, const std::vector<Proposition>& props,
                    double eps) {
    if (std::fabs(s.normalization - 1.0) > eps)
        throw ValidationError("sharpness is defined on deterministic states");
    for (const auto& p : props) {
        for (const auto& a : p.test.effects) {
            const double val = evaluate(a, s);
            if (std::fabs(val) > eps && std::fabs(val - 1.0) > eps) return false;
        }
    }
    return true;
}

std::optional<StateVector> common_sharp_state_with_pattern(
    const ConvexStateSpace& space, const std::vector<Proposition>& props,
    const std::vector<int>& pattern, double eps) {
    if (pattern.size() != props.size())
        throw ValidationError("pattern size does not match the proposition count");
    for (const auto& p : props)
        require_binary_complete(space, p.test, eps, "sharp-state search");

    std::vector<LinearConstraint> eq, ub;
    hull_constraints(space, eq, ub);
    const std::size_t nv = static_cast<std::size_t>(space.num_vertices());
    for (std::size_t i = 0; i < props.size(); ++i) {
        // <a_0^(i)|state> pinned to the pattern bit; the complete-test
        // identity pins the partner effect to the complementary value.
        std::vector<double> row(nv);
        for (std::size_t j = 0; j < nv; ++j)
            row[j] = dot(props[i].test.effects[0].coords,
                         space.vertex(static_cast<int>(j)));
        eq.push_back({std::move(row), static_cast<double>(pattern[i])});
    }
    auto t = lp_feasible(nv, eq, ub, eps);
    if (!t) return std::nullopt;
    return StateVector{hull_point(space, *t), 1.0};
}

std::optional<StateVector> find_common_sharp_state(
    const ConvexStateSpace& space, const std::vector<Proposition>& props,
    double eps) {
    const std::size_t n = props.size();
    if (n > 12)
        throw PreconditionError("sharp-pattern enumeration capped at 12 propositions");
    if (n == 0) throw ValidationError("no propositions given");
    std::vector<int> pattern(n);
    for (long mask = (1L << n) - 1; mask >= 0; --mask) {
        for (std::size_t i = 0; i < n; ++i)
            pattern[i] = static_cast<int>((mask >> (n - 1 - i)) & 1);
        if (auto s = common_sharp_state_with_pattern(space, props, pattern, eps))
            return s;
    }
    return std::nullopt;
}

std::optional<std::pair<StateVector, StateVector>> is_proposition(
    const ConvexStateSpace& space, const TestSpec& test, double eps) {
    require_binary_complete(space, test, eps, "proposition check");
    Proposition bare{test, std::nullopt};
    auto w0 = common_sharp_state_with_pattern(space, {bare}, {1}, eps);
    if (!w0) return std::nullopt;
    auto w1 = common_sharp_state_with_pattern(space, {bare}, {0}, eps);
    if (!w1) return std::nullopt;
    return std::make_pair(std::move(*w0), std::move(*w1));
}

Proposition make_proposition(const ConvexStateSpace& space, const TestSpec& test,
                             double eps) {
    auto w = is_proposition(space, test, eps);
    if (!w) throw ValidationError("test admits no witness states");
    return {test, std::move(w)};
}

bool are_complementary(const ConvexStateSpace& space, const Proposition& a,
                       const Proposition& b, double eps) {
    const Proposition pa = ensure_proposition(space, a, eps, "complementarity");
    const Proposition pb = ensure_proposition(space, b, eps, "complementarity");
    return !find_common_sharp_state(space, {pa, pb}, eps).has_value();
}

namespace {

// Lexicographically next size-|c| subset of {0..m-1}.
bool next_combination(std::vector<int>& c, int m) {
    const int k = static_cast<int>(c.size());
    for (int i = k - 1; i >= 0; --i) {
        if (c[static_cast<std::size_t>(i)] < m - (k - i)) {
            ++c[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j)
                c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
            return true;
        }
    }
    return false;
}

} // namespace

std::pair<Proposition, Proposition> reduce_to_two(
    const ConvexStateSpace& space, const std::vector<Proposition>& props,
    double eps) {
    const int m = static_cast<int>(props.size());
    if (m < 2) throw PreconditionError("need at least two propositions");
    if (m > 12)
        throw PreconditionError("sharp-pattern enumeration capped at 12 propositions");
    std::vector<Proposition> family;
    for (const auto& p : props)
        family.push_back(ensure_proposition(space, p, eps, "reduction"));
    if (find_common_sharp_state(space, family, eps))
        throw PreconditionError("family has a common sharp state; nothing to reduce");

    for (int k = m - 1; k >= 1; --k) {
        bool any_feasible = false;
        std::vector<int> phi(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) phi[static_cast<std::size_t>(i)] = i;
        do {
            std::vector<Proposition> sub;
            for (int idx : phi) sub.push_back(family[static_cast<std::size_t>(idx)]);

            // Memoized feasibility per sign pattern of this subset.
            std::vector<std::optional<std::optional<StateVector>>> memo(
                static_cast<std::size_t>(1L << k));
            auto feasible = [&](long mask) -> const std::optional<StateVector>& {
                auto& slot = memo[static_cast<std::size_t>(mask)];
                if (!slot) {
                    std::vector<int> pattern(static_cast<std::size_t>(k));
                    for (int i = 0; i < k; ++i)
                        pattern[static_cast<std::size_t>(i)] =
                            static_cast<int>((mask >> (k - 1 - i)) & 1);
                    slot = common_sharp_state_with_pattern(space, sub, pattern, eps);
                }
                return *slot;
            };

            const long full = (1L << k) - 1;
            for (long mask = full; mask >= 0; --mask) {
                if (!feasible(mask)) continue;
                any_feasible = true;
                const long comp = full & ~mask;
                if (!feasible(comp)) continue;

                // Orient each member so the witness patterns become
                // all-ones / all-zeros, then average the oriented tests.
                const std::size_t dim = static_cast<std::size_t>(space.dim());
                EffectVector a0{std::vector<double>(dim, 0.0)};
                EffectVector a1{std::vector<double>(dim, 0.0)};
                for (int i = 0; i < k; ++i) {
                    const int bit = static_cast<int>((mask >> (k - 1 - i)) & 1);
                    const auto& eff = sub[static_cast<std::size_t>(i)].test.effects;
                    const auto& lead = eff[static_cast<std::size_t>(1 - bit)];
                    const auto& rest = eff[static_cast<std::size_t>(bit)];
                    for (std::size_t d = 0; d < dim; ++d) {
                        a0.coords[d] += lead.coords[d] / k;
                        a1.coords[d] += rest.coords[d] / k;
                    }
                }
                Proposition averaged{TestSpec{{a0, a1}},
                                     std::make_pair(*feasible(mask), *feasible(comp))};

                int l = 0;
                while (std::find(phi.begin(), phi.end(), l) != phi.end()) ++l;
                Proposition other = family[static_cast<std::size_t>(l)];

                if (!witnesses_check(averaged, 1e-6) ||
                    !are_complementary(space, averaged, other, eps))
                    throw InternalInconsistencyError(
                        "reduction produced a non-complementary pair");
                return {std::move(averaged), std::move(other)};
            }
        } while (next_combination(phi, m));
        if (any_feasible)
            throw InternalInconsistencyError(
                "maximal shared-sharp-state subset admits no opposite witness pair");
    }
    throw InternalInconsistencyError("no singleton subset admits a sharp state");
}

std::optional<std::pair<EffectVector, double>> conclusive_discrimination(
    const ConvexStateSpace& space, const StateVector& alpha0,
    const StateVector& alpha1, double eps) {
    for (const StateVector* s : {&alpha0, &alpha1}) {
        if (std::fabs(s->normalization - 1.0) > eps)
            throw PreconditionError("discrimination needs deterministic states");
        if (!contains_state(space, *s, eps))
            throw ValidationError("state lies outside the space");
    }
    std::vector<LinearConstraint> eq, ub;
    eq.push_back({alpha0.coords, 0.0});
    for (const auto& v : space.vertices()) {
        ub.push_back({v, 1.0});
        std::vector<double> neg(v);
        for (double& x : neg) x = -x;
        ub.push_back({std::move(neg), 0.0});
    }
    const auto sol = lp_solve(alpha1.coords, eq, ub);
    if (sol.status != LpStatus::Optimal)
        throw InternalInconsistencyError(
            "discrimination program must be feasible and bounded");
    if (sol.value <= eps) return std::nullopt;
    return std::make_pair(EffectVector{sol.x}, sol.value);
}

// ---- Built-in spaces -------------------------------------------------

ConvexStateSpace classical_simplex(int n) {
    if (n < 1) throw ValidationError("simplex needs at least one outcome");
    std::vector<std::vector<double>> vertices;
    for (int i = 0; i < n; ++i) {
        std::vector<double> v(static_cast<std::size_t>(n), 0.0);
        v[static_cast<std::size_t>(i)] = 1.0;
        vertices.push_back(std::move(v));
    }
    return ConvexStateSpace(std::move(vertices),
                            std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

ConvexStateSpace classical_bit() { return classical_simplex(2); }

ConvexStateSpace square_space() {
    return ConvexStateSpace(
        {{1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {1, -1, -1}}, {1, 0, 0});
}

ConvexStateSpace bloch_octahedron() {
    return ConvexStateSpace({{1, 1, 0, 0},
                             {1, -1, 0, 0},
                             {1, 0, 1, 0},
                             {1, 0, -1, 0},
                             {1, 0, 0, 1},
                             {1, 0, 0, -1}},
                            {1, 0, 0, 0});
}

EffectVector classical_indicator(const ConvexStateSpace& space, int i) {
    if (i < 0 || i >= space.dim())
        throw ValidationError("indicator index out of range");
    for (double u : space.unit_effect())
        if (u != 1.0)
            throw PreconditionError("indicator effects live on classical simplices");
    EffectVector a{std::vector<double>(static_cast<std::size_t>(space.dim()), 0.0)};
    a.coords[static_cast<std::size_t>(i)] = 1.0;
    return a;
}

TestSpec indicator_test(const ConvexStateSpace& space, int i) {
    const EffectVector a = classical_indicator(space, i);
    EffectVector rest{space.unit_effect()};
    for (std::size_t k = 0; k < rest.coords.size(); ++k)
        rest.coords[k] -= a.coords[k];
    return TestSpec{{a, rest}};
}

TestSpec coordinate_test(const ConvexStateSpace& space, int axis) {
    const auto& e = space.unit_effect();
    if (e[0] != 1.0)
        throw PreconditionError("coordinate tests need a (1,0,...,0) unit effect");
    for (std::size_t k = 1; k < e.size(); ++k)
        if (e[k] != 0.0)
            throw PreconditionError("coordinate tests need a (1,0,...,0) unit effect");
    if (axis < 0 || axis >= space.dim() - 1)
        throw ValidationError("axis out of range");
    EffectVector plus{std::vector<double>(e.size(), 0.0)};
    plus.coords[0] = 0.5;
    plus.coords[static_cast<std::size_t>(1 + axis)] = 0.5;
    EffectVector minus{std::vector<double>(e.size(), 0.0)};
    minus.coords[0] = 0.5;
    minus.coords[static_cast<std::size_t>(1 + axis)] = -0.5;
    return TestSpec{{plus, minus}};
}

JointTable bipartite_classical_table(const std::vector<double>& weights,
                                     const TestSpec& test_a,
                                     const TestSpec& test_b, double eps) {
    if (weights.size() != 4)
        throw ValidationError("two-bit weights must have four entries");
    std::vector<double> w = weights;
    double sum = 0.0;
    for (double& x : w) {
        if (x < -eps) throw ValidationError("negative weight");
        x = clamp_probability(x, eps);
        sum += x;
    }
    if (std::fabs(sum - 1.0) > kNormTol)
        throw ValidationError("weights must sum to one");
    for (double& x : w) x /= sum;

    const ConvexStateSpace bit = classical_bit();
    require_binary_complete(bit, test_a, eps, "two-bit table");
    require_binary_complete(bit, test_b, eps, "two-bit table");

    double p[2][2] = {{0, 0}, {0, 0}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    p[i][j] += w[static_cast<std::size_t>(k * 2 + l)] *
                               test_a.effects[static_cast<std::size_t>(i)]
                                   .coords[static_cast<std::size_t>(k)] *
                               test_b.effects[static_cast<std::size_t>(j)]
                                   .coords[static_cast<std::size_t>(l)];

    const double wmax = *std::max_element(w.begin(), w.end());
    const Purity purity =
        wmax >= 1.0 - eps ? Purity::DeclaredPure : Purity::DeclaredMixed;
    return JointTable(p[0][0], p[0][1], p[1][0], p[1][1], purity, eps);
}

} // namespace gptv
