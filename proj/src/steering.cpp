#include "gptv/steering.hpp"

#include <cmath>

#include "gptv/errors.hpp"

namespace gptv {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double trace_distance(const Cmat& a, const Cmat& b) {
    Eigen::SelfAdjointEigenSolver<Cmat> es(a - b);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

void validate_steered(const SteeredState& s, double eps) {
    std::visit(
        overloaded{
            [&](const Cmat& m) {
                if (m.rows() == 0 || m.rows() != m.cols())
                    throw ValidationError("steered operator must be square");
                if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
                    throw ValidationError("steered operator is not Hermitian");
                Eigen::SelfAdjointEigenSolver<Cmat> es(m);
                if (es.eigenvalues().minCoeff() < -kPsdTol)
                    throw ValidationError("steered operator has a negative eigenvalue");
            },
            [&](const StateVector& v) {
                if (v.coords.empty())
                    throw ValidationError("steered state has no coordinates");
                if (v.normalization < -eps || v.normalization > 1.0 + eps)
                    throw ValidationError("steered state weight outside [0,1]");
            },
            [&](const TableColumn& c) {
                if (c.p0 < -eps || c.p1 < -eps)
                    throw ValidationError("negative table column entry");
            }},
        s);
}

} // namespace

double steered_weight(const SteeredState& s) {
    return std::visit(overloaded{[](const Cmat& m) { return m.trace().real(); },
                                 [](const StateVector& v) { return v.normalization; },
                                 [](const TableColumn& c) { return c.p0 + c.p1; }},
                      s);
}

Assemblage::Assemblage(std::vector<SteeredState> elements, double eps)
    : elements_(std::move(elements)) {
    if (elements_.empty()) throw ValidationError("empty assemblage");
    double sum = 0.0;
    for (const auto& s : elements_) {
        validate_steered(s, eps);
        const double w = steered_weight(s);
        if (w < -eps || w > 1.0 + eps)
            throw ValidationError("assemblage element weight outside [0,1]");
        sum += w;
    }
    if (std::fabs(sum - 1.0) > kNormTol)
        throw ValidationError("assemblage weights do not sum to one");
}

Ensemble::Ensemble(std::vector<EnsembleEntry> entries, double eps)
    : entries_(std::move(entries)) {
    if (entries_.empty()) throw ValidationError("empty ensemble");
    double sum = 0.0;
    for (const auto& en : entries_) {
        if (en.weight <= 0.0 || en.weight > 1.0 + eps)
            throw ValidationError("ensemble weight outside (0,1]");
        validate_steered(en.state, eps);
        if (std::fabs(steered_weight(en.state) - 1.0) > kNormTol)
            throw ValidationError("ensemble states must be deterministic");
        sum += en.weight;
    }
    if (std::fabs(sum - 1.0) > kNormTol)
        throw ValidationError("ensemble weights do not sum to one");
}

Assemblage steer(const QuantumScenario& s) {
    std::vector<SteeredState> elements;
    for (auto& op : steered_operators(s)) elements.emplace_back(std::move(op));
    return Assemblage(std::move(elements));
}

Assemblage assemblage_from_table(const JointTable& t) {
    return Assemblage({TableColumn{t.p00(), t.p10()},
                       TableColumn{t.p01(), t.p11()}});
}

NormalizedAssemblage normalize_assemblage(const Assemblage& a, double eps) {
    std::vector<EnsembleEntry> entries;
    std::vector<std::size_t> dropped;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double w = a.weight(i);
        if (w <= eps) {
            dropped.push_back(i);
            continue;
        }
        SteeredState normalized = std::visit(
            overloaded{[&](const Cmat& m) { return SteeredState(Cmat(m / w)); },
                       [&](const StateVector& v) {
                           StateVector out{v.coords, 1.0};
                           for (double& c : out.coords) c /= w;
                           return SteeredState(std::move(out));
                       },
                       [&](const TableColumn& c) {
                           return SteeredState(TableColumn{c.p0 / w, c.p1 / w});
                       }},
            a.element(i));
        entries.push_back({w, std::move(normalized)});
    }
    if (entries.empty())
        throw ValidationError("degenerate assemblage: every weight is <= eps");
    return {Ensemble(std::move(entries)), std::move(dropped)};
}

namespace {

// Distinctness of two deterministic steered states; the space pointer is
// only needed for polytopal entries.
bool states_differ(const SteeredState& x, const SteeredState& y,
                   const ConvexStateSpace* space, double eps) {
    if (x.index() != y.index())
        throw ValidationError("ensemble mixes state formalisms");
    if (std::holds_alternative<Cmat>(x))
        return trace_distance(std::get<Cmat>(x), std::get<Cmat>(y)) > eps;
    if (std::holds_alternative<TableColumn>(x))
        return std::fabs(std::get<TableColumn>(x).p0 -
                         std::get<TableColumn>(y).p0) > eps;
    if (!space)
        throw PreconditionError(
            "polytopal ensembles need their state space for comparison");
    const auto& sx = std::get<StateVector>(x);
    const auto& sy = std::get<StateVector>(y);
    // A valid effect separating the states; the effect set is closed
    // under a -> e-a, so maximizing one signed difference suffices.
    std::vector<double> diff(sx.coords.size());
    for (std::size_t k = 0; k < diff.size(); ++k)
        diff[k] = sx.coords[k] - sy.coords[k];
    std::vector<LinearConstraint> ub;
    for (const auto& v : space->vertices()) {
        ub.push_back({v, 1.0});
        std::vector<double> neg(v);
        for (double& c : neg) c = -c;
        ub.push_back({std::move(neg), 0.0});
    }
    const auto sol = lp_solve(diff, {}, ub);
    if (sol.status != LpStatus::Optimal)
        throw InternalInconsistencyError("effect polytope must be bounded");
    return sol.value > eps;
}

bool nontrivial_impl(const Ensemble& e, const ConvexStateSpace* space,
                     double eps) {
    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < e.size(); ++i)
        if (e.entry(i).weight > eps && e.entry(i).weight < 1.0 - eps)
            usable.push_back(i);
    if (usable.size() < 2) return false;
    for (std::size_t i = 0; i < usable.size(); ++i)
        for (std::size_t j = i + 1; j < usable.size(); ++j)
            if (states_differ(e.entry(usable[i]).state,
                              e.entry(usable[j]).state, space, eps))
                return true;
    return false;
}

} // namespace

bool is_nontrivial(const Ensemble& e, double eps) {
    return nontrivial_impl(e, nullptr, eps);
}

bool is_nontrivial(const Ensemble& e, const ConvexStateSpace& space,
                   double eps) {
    return nontrivial_impl(e, &space, eps);
}

double test_effect_value(const BinaryTest& test, int i, const SteeredState& s) {
    if (i < 0 || i > 1) throw ValidationError("binary tests have effects 0 and 1");
    if (std::holds_alternative<Povm>(test) && std::holds_alternative<Cmat>(s)) {
        const Povm& p = std::get<Povm>(test);
        if (p.size() != 2) throw ValidationError("test is not binary");
        return (p.effect(static_cast<std::size_t>(i)) * std::get<Cmat>(s))
            .trace()
            .real();
    }
    if (std::holds_alternative<TestSpec>(test) &&
        std::holds_alternative<StateVector>(s)) {
        const TestSpec& t = std::get<TestSpec>(test);
        if (t.effects.size() != 2) throw ValidationError("test is not binary");
        return dot(t.effects[static_cast<std::size_t>(i)].coords,
                   std::get<StateVector>(s).coords);
    }
    if (std::holds_alternative<TabularTest>(test) &&
        std::holds_alternative<TableColumn>(s)) {
        const auto& c = std::get<TableColumn>(s);
        return i == 0 ? c.p0 : c.p1;
    }
    throw ValidationError("test and state formalisms differ");
}

void validate_certificate(const SteeringCertificate& c, double eps) {
    if (std::fabs(c.w) <= eps || std::fabs(c.w) > 1.0 + 1e-9)
        throw InternalInconsistencyError("certificate w outside (0,1]");
    if (std::fabs(c.det - c.p0 * c.p1 * c.w) > 1e-9)
        throw InternalInconsistencyError("certificate violates det = p0*p1*w");
    if (std::fabs(c.difference * c.p0 * c.p1 - c.det) > 1e-9)
        throw InternalInconsistencyError("certificate difference mismatch");
    if (std::fabs(spooky_determinant(c.source_table) - c.det) > 1e-9)
        throw InternalInconsistencyError("certificate table determinant mismatch");
}

SteeringCertificate certify_from_ensemble(const Ensemble& e,
                                          const BinaryTest& a_test,
                                          double eps) {
    if (e.size() != 2)
        throw PreconditionError("certification needs exactly two ensemble entries");
    const double p0 = e.entry(0).weight;
    const double p1 = e.entry(1).weight;
    if (p0 <= eps || p0 >= 1.0 - eps || p1 <= eps || p1 >= 1.0 - eps)
        throw PreconditionError("ensemble weights are degenerate");

    double ev[2][2];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            ev[i][j] = test_effect_value(a_test, i,
                                         e.entry(static_cast<std::size_t>(j)).state);
    for (int j = 0; j < 2; ++j)
        if (std::fabs(ev[0][j] + ev[1][j] - 1.0) > kNormTol)
            throw ValidationError("test is not complete on the steered states");

    const double w = ev[0][0] - ev[0][1];
    if (std::fabs(w) <= eps)
        throw PreconditionError(
            "effect evaluates equally on both states; try another effect");
    if (std::fabs(w) > 1.0 + 1e-9)
        throw InternalInconsistencyError("effect difference above one");

    JointTable table(p0 * ev[0][0], p1 * ev[0][1], p0 * ev[1][0], p1 * ev[1][1]);
    const double det = spooky_determinant(table);
    return {a_test,
            w,
            p0,
            p1,
            e.entry(0).state,
            e.entry(1).state,
            table,
            det,
            det / (p0 * p1),
            std::fabs(det) <= 1e-6};
}

SteeringCertificate certify_from_table(const JointTable& t, double eps) {
    const double det = spooky_determinant(t);
    if (std::fabs(det) <= eps)
        throw PreconditionError("table factorizes; nothing to certify");
    const double n0 = t.p00() + t.p10();
    const double n1 = t.p01() + t.p11();
    if (n0 <= eps || n1 <= eps)
        throw InternalInconsistencyError(
            "zero steered weight next to a non-vanishing determinant");
    const TableColumn a0{t.p00() / n0, t.p10() / n0};
    const TableColumn a1{t.p01() / n1, t.p11() / n1};
    const double w = a0.p0 - a1.p0;
    const double difference = det / (n0 * n1);
    const bool near_degenerate = std::fabs(det) <= 1e-6;
    if (!near_degenerate && std::fabs(w - difference) > 1e-9)
        throw InternalInconsistencyError("difference identity failed on a table");
    return {TabularTest{}, w,   n0,  n1,        a0,
            a1,            t,   det, difference, near_degenerate};
}

SteeringCertificate certify_from_scenario(const QuantumScenario& s, double eps) {
    const JointTable t = born_table(s);
    const double det = spooky_determinant(t);
    if (std::fabs(det) <= eps)
        throw PreconditionError("table factorizes; nothing to certify");
    const auto ops = steered_operators(s);
    const double n0 = ops[0].trace().real();
    const double n1 = ops[1].trace().real();
    if (n0 <= eps || n1 <= eps)
        throw InternalInconsistencyError(
            "zero steered weight next to a non-vanishing determinant");
    const Cmat alpha0 = ops[0] / n0;
    const Cmat alpha1 = ops[1] / n1;
    const double w =
        ((s.povm_a().effect(0) * alpha0).trace() -
         (s.povm_a().effect(0) * alpha1).trace())
            .real();
    const double difference = det / (n0 * n1);
    const bool near_degenerate = std::fabs(det) <= 1e-6;
    if (!near_degenerate && std::fabs(w - difference) > 1e-9)
        throw InternalInconsistencyError("difference identity failed on a scenario");
    return {BinaryTest{s.povm_a()}, w,   n0,  n1,        SteeredState{alpha0},
            SteeredState{alpha1},   t,   det, difference, near_degenerate};
}

EquivalenceConditions equivalence_conditions(const QuantumScenario& s,
                                             std::uint64_t grid_seed,
                                             int extra_tests, double eps) {
    std::mt19937_64 eng(grid_seed);
    std::vector<std::pair<Povm, Povm>> grid;
    grid.emplace_back(s.povm_a(), s.povm_b());
    for (int k = 0; k < extra_tests; ++k)
        grid.emplace_back(random_projective_binary(s.da(), eng),
                          random_projective_binary(s.db(), eng));

    EquivalenceConditions out{false, false, false};
    for (const auto& [pa, pb] : grid) {
        QuantumScenario probe(s.da(), s.db(), s.joint(), pa, pb, {"0", "1"},
                              {"0", "1"});
        const JointTable t = born_table(probe);
        if (std::fabs(spooky_determinant(t)) > eps) out.determinant = true;
        if (spooky_verdict(t, eps) == SpookyVerdict::Spooky) out.spooky = true;
        const auto na = normalize_assemblage(steer(probe), eps);
        if (is_nontrivial(na.ensemble, eps)) out.steerable = true;
        if (out.spooky && out.steerable && out.determinant) break;
    }
    return out;
}

EquivalenceSweepReport equivalence_sweep(int samples, std::uint64_t seed,
                                         ExecMode mode, double eps) {
    if (samples < 1) throw PreconditionError("sweep needs at least one sample");
    std::vector<std::uint64_t> scenario_seeds(static_cast<std::size_t>(samples));
    std::vector<unsigned char> divergent(static_cast<std::size_t>(samples), 0);
    std::vector<unsigned char> spooky(static_cast<std::size_t>(samples), 0);
    parallel_for(static_cast<std::size_t>(samples), mode, [&](std::size_t i) {
        const std::uint64_t scen_seed = task_seed(seed, i);
        scenario_seeds[i] = scen_seed;
        const QuantumScenario s = random_two_qubit_scenario(scen_seed);
        const auto c = equivalence_conditions(s, task_seed(scen_seed, 1), 7, eps);
        divergent[i] = (c.spooky == c.steerable && c.steerable == c.determinant)
                           ? 0
                           : 1;
        spooky[i] = c.spooky ? 1 : 0;
    });
    EquivalenceSweepReport report{samples, 0, 0, {}};
    for (std::size_t i = 0; i < static_cast<std::size_t>(samples); ++i) {
        if (divergent[i]) {
            ++report.divergences;
            report.divergent_seeds.push_back(scenario_seeds[i]);
        }
        if (spooky[i]) ++report.spooky_count;
    }
    return report;
}

namespace {

std::optional<DiscriminationSteeringResult> chain_certificate(
    const Ensemble& e, const BinaryTest& induced, double value, bool swapped,
    double eps) {
    SteeringCertificate cert = certify_from_ensemble(e, induced, eps);
    validate_certificate(cert, eps);
    return DiscriminationSteeringResult{value, swapped, std::move(cert)};
}

} // namespace

std::optional<DiscriminationSteeringResult> discriminable_steering_check(
    const Ensemble& e, double eps) {
    if (e.size() != 2 || !is_nontrivial(e, eps))
        throw PreconditionError("needs a nontrivial two-entry ensemble");
    if (!std::holds_alternative<Cmat>(e.entry(0).state))
        throw PreconditionError(
            "bare table columns carry no discrimination structure; "
            "use the state-space overload for polytopal ensembles");
    const DensityMatrix rho0(std::get<Cmat>(e.entry(0).state));
    const DensityMatrix rho1(std::get<Cmat>(e.entry(1).state));
    const int d = rho0.dim();
    const Cmat id = Cmat::Identity(d, d);
    if (auto hit = quantum_conclusive_discrimination(rho0, rho1, eps)) {
        // Effect vanishes on entry 0: lead with its complement so the
        // certificate's first effect favors entry 0.
        Povm induced({id - hit->first, hit->first});
        return chain_certificate(e, BinaryTest{std::move(induced)}, hit->second,
                                 false, eps);
    }
    if (auto hit = quantum_conclusive_discrimination(rho1, rho0, eps)) {
        Povm induced({hit->first, id - hit->first});
        return chain_certificate(e, BinaryTest{std::move(induced)}, hit->second,
                                 true, eps);
    }
    return std::nullopt;
}

std::optional<DiscriminationSteeringResult> discriminable_steering_check(
    const Ensemble& e, const ConvexStateSpace& space, double eps) {
    if (e.size() != 2 || !is_nontrivial(e, space, eps))
        throw PreconditionError("needs a nontrivial two-entry ensemble");
    if (!std::holds_alternative<StateVector>(e.entry(0).state))
        throw PreconditionError("this overload expects polytopal states");
    const auto& s0 = std::get<StateVector>(e.entry(0).state);
    const auto& s1 = std::get<StateVector>(e.entry(1).state);
    auto complement = [&](const EffectVector& a) {
        EffectVector out{space.unit_effect()};
        for (std::size_t k = 0; k < out.coords.size(); ++k)
            out.coords[k] -= a.coords[k];
        return out;
    };
    if (auto hit = conclusive_discrimination(space, s0, s1, eps)) {
        TestSpec induced{{complement(hit->first), hit->first}};
        return chain_certificate(e, BinaryTest{std::move(induced)}, hit->second,
                                 false, eps);
    }
    if (auto hit = conclusive_discrimination(space, s1, s0, eps)) {
        TestSpec induced{{hit->first, complement(hit->first)}};
        return chain_certificate(e, BinaryTest{std::move(induced)}, hit->second,
                                 true, eps);
    }
    return std::nullopt;
}

} // namespace gptv
