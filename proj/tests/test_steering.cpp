#include <doctest.h>

#include <cmath>
#include <random>

#include "gptv/errors.hpp"
#include "gptv/quantum.hpp"
#include "gptv/steering.hpp"
#include "gptv/tables.hpp"

using namespace gptv;

namespace {

JointTable random_table(std::mt19937_64& eng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double v[4] = {u(eng), u(eng), u(eng), u(eng)};
    double s = v[0] + v[1] + v[2] + v[3];
    return JointTable(v[0] / s, v[1] / s, v[2] / s, v[3] / s);
}

Cvec ket2(std::complex<double> a, std::complex<double> b) {
    Cvec v(2);
    v << a, b;
    return v;
}

// Rebuild p_ij = p_j * <a_i|alpha_j> from a certificate and compare with
// its source table entry by entry.
double reconstruction_gap(const SteeringCertificate& c) {
    const JointTable& t = c.source_table;
    double orig[2][2] = {{t.p00(), t.p01()}, {t.p10(), t.p11()}};
    double gap = 0.0;
    for (int i = 0; i < 2; ++i) {
        double r0 = c.p0 * test_effect_value(c.test, i, c.alpha0);
        double r1 = c.p1 * test_effect_value(c.test, i, c.alpha1);
        gap = std::max(gap, std::fabs(r0 - orig[i][0]));
        gap = std::max(gap, std::fabs(r1 - orig[i][1]));
    }
    return gap;
}

} // namespace

TEST_CASE("table columns steer: worked values for the two cat tables") {
    JointTable corr(0.5, 0.0, 0.0, 0.5, Purity::DeclaredPure);
    SteeringCertificate c = certify_from_table(corr);
    validate_certificate(c);
    CHECK(c.w == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.p0 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.p1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.det == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(c.difference == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(c.near_degenerate);
    CHECK(reconstruction_gap(c) <= 1e-12);

    JointTable overlap(0.5, 0.25, 0.0, 0.25, Purity::DeclaredPure);
    SteeringCertificate d = certify_from_table(overlap);
    validate_certificate(d);
    CHECK(d.w == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d.det == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(d.difference == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(reconstruction_gap(d) <= 1e-12);
}

TEST_CASE("factorizing tables cannot be certified") {
    JointTable prod(0.06, 0.24, 0.14, 0.56);
    CHECK_THROWS_AS(certify_from_table(prod), PreconditionError);
}

TEST_CASE("swapping B outcomes flips the sign of w but not the strength") {
    JointTable t(0.5, 0.25, 0.0, 0.25);
    SteeringCertificate c = certify_from_table(t);
    SteeringCertificate cs = certify_from_table(t.swap_b_outcomes());
    CHECK(cs.w == doctest::Approx(-c.w).epsilon(1e-12));
    CHECK(cs.det == doctest::Approx(-c.det).epsilon(1e-12));
    CHECK(std::fabs(cs.difference) ==
          doctest::Approx(std::fabs(c.difference)).epsilon(1e-12));
}

TEST_CASE("table -> assemblage -> ensemble -> certificate round trip") {
    std::mt19937_64 eng(2026);
    int certified = 0;
    for (int it = 0; it < 400; ++it) {
        JointTable t = random_table(eng);
        double n0 = t.p00() + t.p10();
        double n1 = t.p01() + t.p11();
        if (std::fabs(spooky_determinant(t)) <= 1e-6) continue;
        if (n0 <= 1e-3 || n0 >= 1.0 - 1e-3 || n1 <= 1e-3 || n1 >= 1.0 - 1e-3)
            continue;
        Assemblage a = assemblage_from_table(t);
        CHECK(a.weight(0) == doctest::Approx(n0).epsilon(1e-12));
        NormalizedAssemblage na = normalize_assemblage(a);
        CHECK(na.dropped.empty());
        SteeringCertificate c = certify_from_ensemble(na.ensemble, TabularTest{});
        validate_certificate(c);
        CHECK(c.det == doctest::Approx(spooky_determinant(t)).epsilon(1e-10));
        CHECK(reconstruction_gap(c) <= 1e-12);
        // Same answer as the direct table route.
        SteeringCertificate direct = certify_from_table(t);
        CHECK(c.w == doctest::Approx(direct.w).epsilon(1e-10));
        ++certified;
    }
    CHECK(certified >= 200);
}

TEST_CASE("quantum scenarios certify with the difference identity") {
    int hits = 0;
    for (int k = 0; k < 150; ++k) {
        QuantumScenario s = random_two_qubit_scenario(9000 + static_cast<std::uint64_t>(k));
        JointTable t = born_table(s);
        if (std::fabs(spooky_determinant(t)) <= 1e-6) continue;
        SteeringCertificate c = certify_from_scenario(s);
        validate_certificate(c);
        CHECK(std::fabs(c.difference - c.det / (c.p0 * c.p1)) <= 1e-9);
        CHECK(reconstruction_gap(c) <= 1e-12);
        CHECK(std::fabs(c.w) > 0.0);
        CHECK(std::fabs(c.w) <= 1.0 + 1e-12);
        ++hits;
    }
    CHECK(hits >= 50);
}

TEST_CASE("steered quantum cat scenarios produce the advertised ensembles") {
    CatScenarios cs = cat_scenarios();

    NormalizedAssemblage na2 = normalize_assemblage(steer(cs.v2));
    REQUIRE(na2.ensemble.size() == 2);
    CHECK(na2.ensemble.entry(0).weight == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(is_nontrivial(na2.ensemble));
    SteeringCertificate c2 = certify_from_scenario(cs.v2);
    CHECK(c2.w == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(c2.det == doctest::Approx(0.25).epsilon(1e-10));

    NormalizedAssemblage na3 = normalize_assemblage(steer(cs.v3));
    REQUIRE(na3.ensemble.size() == 2);
    CHECK(na3.ensemble.entry(0).weight == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(na3.ensemble.entry(1).weight == doctest::Approx(0.5).epsilon(1e-10));
    const double s = 1.0 / std::sqrt(2.0);
    Cmat alive = projector(ket2(1.0, 0.0));
    Cmat psi_plus = projector(ket2(s, s));
    CHECK((std::get<Cmat>(na3.ensemble.entry(0).state) - alive).norm() <= 1e-10);
    CHECK((std::get<Cmat>(na3.ensemble.entry(1).state) - psi_plus).norm() <= 1e-10);
    SteeringCertificate c3 = certify_from_scenario(cs.v3);
    CHECK(c3.w == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(c3.difference == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("identical steered states cannot be told apart") {
    Cmat alive = projector(ket2(1.0, 0.0));
    Ensemble e({{0.5, SteeredState{alive}}, {0.5, SteeredState{alive}}});
    Povm z({projector(ket2(1.0, 0.0)), projector(ket2(0.0, 1.0))});
    CHECK_FALSE(is_nontrivial(e));
    CHECK_THROWS_AS(certify_from_ensemble(e, BinaryTest{z}), PreconditionError);
}

TEST_CASE("degenerate ensemble weights are rejected for certification") {
    Cmat alive = projector(ket2(1.0, 0.0));
    Cmat dead = projector(ket2(0.0, 1.0));
    Povm z({alive, dead});
    Ensemble e({{1.0 - 1e-12, SteeredState{alive}}, {1e-12, SteeredState{dead}}});
    CHECK_THROWS_AS(certify_from_ensemble(e, BinaryTest{z}), PreconditionError);
}

TEST_CASE("normalization drops vanishing members and reports them") {
    Assemblage a({TableColumn{0.5, 0.5}, TableColumn{0.0, 0.0}});
    NormalizedAssemblage na = normalize_assemblage(a);
    CHECK(na.ensemble.size() == 1);
    REQUIRE(na.dropped.size() == 1);
    CHECK(na.dropped[0] == 1);

    Assemblage b({TableColumn{0.25, 0.25}, TableColumn{0.25, 0.25}});
    CHECK_THROWS_AS(normalize_assemblage(b, 0.6), ValidationError);
}

TEST_CASE("assemblage and ensemble validation") {
    CHECK_THROWS_AS(Assemblage({TableColumn{-0.2, 0.5}, TableColumn{0.3, 0.4}}),
                    ValidationError);
    // Weights must sum to one.
    CHECK_THROWS_AS(Assemblage({TableColumn{0.1, 0.1}, TableColumn{0.1, 0.1}}),
                    ValidationError);
    Cmat alive = projector(ket2(1.0, 0.0));
    // Ensemble states must be deterministic.
    CHECK_THROWS_AS(Ensemble({{0.5, SteeredState{Cmat(0.5 * alive)}},
                              {0.5, SteeredState{alive}}}),
                    ValidationError);
    CHECK_THROWS_AS(Ensemble({{0.3, SteeredState{alive}},
                              {0.3, SteeredState{alive}}}),
                    ValidationError);
}

TEST_CASE("product scenarios steer only trivially") {
    std::mt19937_64 eng(31);
    Cvec a = random_pure_state(2, eng);
    Cvec b = random_pure_state(2, eng);
    QuantumScenario s(2, 2, DensityMatrix(tensor(projector(a), projector(b))),
                      random_projective_binary(2, eng),
                      random_projective_binary(2, eng), {"0", "1"}, {"0", "1"});
    NormalizedAssemblage na = normalize_assemblage(steer(s));
    CHECK_FALSE(is_nontrivial(na.ensemble));
}

TEST_CASE("tampered certificates are caught") {
    SteeringCertificate c = certify_from_table(JointTable(0.5, 0.25, 0.0, 0.25));
    validate_certificate(c);
    SteeringCertificate bad = c;
    bad.w = -bad.w;
    CHECK_THROWS_AS(validate_certificate(bad), InternalInconsistencyError);
    bad = c;
    bad.det += 1e-3;
    CHECK_THROWS_AS(validate_certificate(bad), InternalInconsistencyError);
    bad = c;
    bad.difference = 0.0;
    CHECK_THROWS_AS(validate_certificate(bad), InternalInconsistencyError);
}

TEST_CASE("conclusive discrimination chains into a steering certificate") {
    CatScenarios cs = cat_scenarios();
    Ensemble e = normalize_assemblage(steer(cs.v3)).ensemble;
    auto res = discriminable_steering_check(e);
    REQUIRE(res.has_value());
    CHECK(res->value == doctest::Approx(0.5).epsilon(1e-9));
    CHECK_FALSE(res->swapped);
    // The discriminating effect annihilates the first member: it is the
    // projector onto the dead state, stored as effect 1 of the test.
    const Povm& induced = std::get<Povm>(res->certificate.test);
    Cmat p_dead = projector(ket2(0.0, 1.0));
    CHECK((induced.effect(1) - p_dead).norm() <= 1e-9);
    CHECK(res->certificate.det == doctest::Approx(0.125).epsilon(1e-9));
    validate_certificate(res->certificate);

    // Identical members are a precondition failure, not "no effect".
    Cmat alive = projector(ket2(1.0, 0.0));
    Ensemble same({{0.5, SteeredState{alive}}, {0.5, SteeredState{alive}}});
    CHECK_THROWS_AS(discriminable_steering_check(same), PreconditionError);
}

TEST_CASE("overlapping mixed members may admit no conclusive effect") {
    Cmat alive = projector(ket2(1.0, 0.0));
    Cmat mixed = 0.5 * Cmat::Identity(2, 2);
    Ensemble e({{0.5, SteeredState{alive}}, {0.5, SteeredState{mixed}}});
    REQUIRE(is_nontrivial(e));
    // Full-rank second member: no effect vanishes on it, and nothing
    // vanishes on the pure member while seeing the mixed one... except
    // the dead projector, which does vanish on |alive>.
    auto res = discriminable_steering_check(e);
    REQUIRE(res.has_value());
    CHECK(res->value == doctest::Approx(0.5).epsilon(1e-9));

    // Two full-rank members: genuinely no conclusive effect either way.
    Cmat tilted(2, 2);
    tilted << 0.75, 0.25, 0.25, 0.25;
    Ensemble f({{0.5, SteeredState{mixed}}, {0.5, SteeredState{Cmat(tilted)}}});
    REQUIRE(is_nontrivial(f));
    CHECK_FALSE(discriminable_steering_check(f).has_value());
}

TEST_CASE("classically correlated socks: certificate without spookiness") {
    JointTable socks(0.5, 0.0, 0.0, 0.5, Purity::DeclaredMixed);
    SteeringCertificate c = certify_from_table(socks);
    validate_certificate(c);
    CHECK(c.det == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(spooky_verdict(socks) == SpookyVerdict::Inconclusive);
}

TEST_CASE("equivalence conditions agree on a small serial sweep") {
    EquivalenceSweepReport r = equivalence_sweep(40, 5, ExecMode::Serial);
    CHECK(r.samples == 40);
    CHECK(r.divergences == 0);
    CHECK(r.divergent_seeds.empty());
    CHECK(r.spooky_count > 0);
    CHECK_THROWS_AS(equivalence_sweep(0, 1), PreconditionError);
}
