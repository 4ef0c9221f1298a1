#include <doctest.h>

#include <cmath>
#include <random>

#include "gptv/behavior.hpp"
#include "gptv/errors.hpp"
#include "gptv/hvt.hpp"
#include "gptv/tables.hpp"

using namespace gptv;

namespace {

Behavior product_behavior(double q0, double r0) {
    return behavior_from_table(
        JointTable(q0 * r0, q0 * (1 - r0), (1 - q0) * r0, (1 - q0) * (1 - r0)));
}

JointTable random_table(std::mt19937_64& eng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double a = u(eng), b = u(eng), c = u(eng), d = u(eng);
    double s = a + b + c + d;
    return JointTable(a / s, b / s, c / s, d / s);
}

} // namespace

TEST_CASE("single-valued wrapper reproduces the behavior exactly") {
    for (const Behavior& b :
         {behavior_from_table(JointTable(0.5, 0.0, 0.0, 0.5)),
          behavior_from_table(JointTable(0.25, 0.25, 0.25, 0.25)), pr_box()}) {
        HvtModel m = single_valued(b);
        CHECK(m.num_lambdas() == 1);
        CHECK(reconstruct(m).max_difference(b) == 0.0);
        CHECK(check_lambda_independence(m));
        auto sig = is_descriptively_significant(m);
        CHECK(sig.status == SignificanceStatus::NoWitness);
    }
}

TEST_CASE("deterministic local model of the correlated table") {
    JointTable t(0.5, 0.0, 0.0, 0.5);
    HvtModel m = deterministic_local_model(t);
    CHECK(m.num_lambdas() == 2); // zero-weight entries dropped
    CHECK(m.prior_is_shared());
    CHECK(m.shared_prior()[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(reconstruct(m).max_difference(behavior_from_table(t)) == 0.0);
    CHECK(check_lambda_independence(m));
    CHECK(check_parameter_independence(m));
    CHECK(check_outcome_independence(m, OiForm::Factorized));
    CHECK(check_outcome_independence(m, OiForm::Conditional));
    // Distinct deterministic conditionals make the hidden variable matter.
    auto sig = is_descriptively_significant(m);
    REQUIRE(sig.status == SignificanceStatus::Witness);
    CHECK(sig.witness->value_a == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sig.witness->value_b == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("deterministic local model label counts") {
    CHECK(deterministic_local_model(JointTable(1.0, 0.0, 0.0, 0.0)).num_lambdas() == 1);
    HvtModel uniform = deterministic_local_model(JointTable(0.25, 0.25, 0.25, 0.25));
    CHECK(uniform.num_lambdas() == 4);
    for (double w : uniform.shared_prior()) {
        CHECK(w == doctest::Approx(0.25).epsilon(1e-15));
    }
}

TEST_CASE("deterministic local model on random tables") {
    std::mt19937_64 eng(5);
    for (int it = 0; it < 200; ++it) {
        JointTable t = random_table(eng);
        HvtModel m = deterministic_local_model(t);
        CHECK(reconstruct(m).max_difference(behavior_from_table(t)) <= 1e-12);
        CHECK(check_lambda_independence(m));
        CHECK(check_parameter_independence(m));
        CHECK(check_outcome_independence(m, OiForm::Factorized));
        CHECK(check_outcome_independence(m, OiForm::Conditional));
    }
}

TEST_CASE("two-lambda mixture model for the correlated table") {
    Behavior b00 = product_behavior(1.0, 1.0);
    Behavior b11 = product_behavior(0.0, 0.0);
    HvtModel m({"l0", "l1"}, {b00, b11}, std::vector<double>{0.5, 0.5});
    Behavior target = behavior_from_table(JointTable(0.5, 0.0, 0.0, 0.5));
    CHECK(reconstruct(m).max_difference(target) <= 1e-15);
    auto sig = is_descriptively_significant(m);
    REQUIRE(sig.status == SignificanceStatus::Witness);
    CHECK(std::abs(sig.witness->value_a - sig.witness->value_b) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("identical conditionals admit no significance witness") {
    Behavior b = product_behavior(0.3, 0.6);
    HvtModel m({"l0", "l1"}, {b, b}, std::vector<double>{0.5, 0.5});
    CHECK(is_descriptively_significant(m).status == SignificanceStatus::NoWitness);
}

TEST_CASE("reconstruction is linear in the prior") {
    Behavior c0 = product_behavior(0.9, 0.2);
    Behavior c1 = product_behavior(0.1, 0.7);
    HvtModel m25({"a", "b"}, {c0, c1}, std::vector<double>{0.25, 0.75});
    HvtModel m75({"a", "b"}, {c0, c1}, std::vector<double>{0.75, 0.25});
    Behavior r25 = reconstruct(m25);
    Behavior r75 = reconstruct(m75);
    // Equal mixture of the two priors = prior (0.5, 0.5).
    HvtModel mixed({"a", "b"}, {c0, c1}, std::vector<double>{0.5, 0.5});
    Behavior target = reconstruct(mixed);
    for (const auto& tuple : target.test_tuples()) {
        const auto& d25 = r25.outcome_distribution(tuple);
        const auto& d75 = r75.outcome_distribution(tuple);
        const auto& dm = target.outcome_distribution(tuple);
        for (std::size_t i = 0; i < dm.size(); ++i) {
            CHECK(0.5 * (d25[i] + d75[i]) == doctest::Approx(dm[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("outcome independence separates spooky from uniform conditionals") {
    HvtModel spooky = single_valued(behavior_from_table(JointTable(0.5, 0.0, 0.0, 0.5)));
    CHECK_FALSE(check_outcome_independence(spooky, OiForm::Factorized));
    CHECK_FALSE(check_outcome_independence(spooky, OiForm::Conditional));

    HvtModel uniform = single_valued(behavior_from_table(JointTable(0.25, 0.25, 0.25, 0.25)));
    CHECK(check_outcome_independence(uniform, OiForm::Factorized));
    CHECK(check_outcome_independence(uniform, OiForm::Conditional));
}

TEST_CASE("per-test priors break lambda independence when they differ") {
    Behavior c0 = product_behavior(1.0, 1.0);
    Behavior c1 = product_behavior(0.0, 0.0);
    std::map<std::vector<int>, std::vector<double>> prior;
    prior[{0, 0}] = {0.5, 0.5};
    HvtModel same({"l0", "l1"}, {c0, c1}, prior);
    CHECK(check_lambda_independence(same)); // single test tuple: nothing varies

    Behavior two_tests = pr_box();
    HvtModel sig = build_deterministic_signaling(two_tests);
    CHECK(reconstruct(sig).max_difference(two_tests) <= 1e-15);
    CHECK_FALSE(check_lambda_independence(sig));
}

TEST_CASE("deterministic signaling model is exact on single-test behaviors too") {
    std::mt19937_64 eng(17);
    for (int it = 0; it < 50; ++it) {
        Behavior b = behavior_from_table(random_table(eng));
        HvtModel m = build_deterministic_signaling(b);
        CHECK(reconstruct(m).max_difference(b) <= 1e-15);
        // One test tuple means the prior cannot vary with tests.
        CHECK(check_lambda_independence(m));
    }
}

TEST_CASE("pr box is no-signaling but not outcome independent") {
    Behavior pr = pr_box();
    CHECK(check_no_signaling(pr).empty());
    HvtModel m = single_valued(pr);
    CHECK(check_parameter_independence(m));
    CHECK_FALSE(check_outcome_independence(m, OiForm::Factorized));
}

TEST_CASE("constructed signaling behavior is caught") {
    // A's marginal is (0.6, 0.4) under B-test 0 and (0.5, 0.5) under B-test 1.
    std::map<std::vector<int>, std::vector<double>> prob;
    prob[{0, 0}] = {0.6, 0.0, 0.0, 0.4};
    prob[{0, 1}] = {0.25, 0.25, 0.25, 0.25};
    Behavior b({"A", "B"}, {{"a0"}, {"b0", "b1"}}, {{2}, {2, 2}}, prob);
    // One violation per differing outcome: 0.6 vs 0.5 and 0.4 vs 0.5.
    auto violations = check_no_signaling(b);
    REQUIRE(violations.size() == 2);
    CHECK(violations[0].party == 0);
    CHECK(violations[1].party == 0);
    CHECK(violations[0].outcome == 0);
    CHECK(violations[1].outcome == 1);
    CHECK(std::fabs(violations[0].prob_a - violations[0].prob_b) ==
          doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("significance is not applicable without the independence hypotheses") {
    HvtModel sig = build_deterministic_signaling(pr_box());
    CHECK(is_descriptively_significant(sig).status == SignificanceStatus::NotApplicable);
}

TEST_CASE("both outcome-independence formulations agree on positive models") {
    OiSweepReport r = oi_equivalence_sweep(600, 2024, ExecMode::Serial);
    CHECK(r.samples == 600);
    CHECK(r.disagreements == 0);
    CHECK(r.factorized_true > 100);
    CHECK(r.factorized_true < 500);
}
