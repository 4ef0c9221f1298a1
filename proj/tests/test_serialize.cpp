#include <doctest.h>

#include <cmath>
#include <string>

#include "gptv/errors.hpp"
#include "gptv/hvt.hpp"
#include "gptv/serialize.hpp"

using namespace gptv;

TEST_CASE("table json round trip keeps entries and purity") {
    JointTable t(1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0, Purity::DeclaredPure);
    Json j = table_to_json(t);
    JointTable back = table_from_json(j);
    CHECK(back.p00() == t.p00());
    CHECK(back.p01() == t.p01());
    CHECK(back.p10() == t.p10());
    CHECK(back.p11() == t.p11());
    CHECK(back.purity() == Purity::DeclaredPure);

    // emit -> parse -> emit is a fixed point.
    std::string text = dump_json(j);
    CHECK(dump_json(parse_json(text)) == text);

    // Purity is optional on input and defaults to unknown.
    Json bare;
    bare["table"] = {{0.25, 0.25}, {0.25, 0.25}};
    CHECK(table_from_json(bare).purity() == Purity::Unknown);

    Json bad = j;
    bad["purity"] = "entangled";
    CHECK_THROWS_AS(table_from_json(bad), ValidationError);
    Json ragged;
    ragged["table"] = {{0.5, 0.5}, {0.0}};
    CHECK_THROWS_AS(table_from_json(ragged), ValidationError);
}

TEST_CASE("syntax errors carry a line number") {
    try {
        parse_json("{\n  \"table\": [[0.5, 0.5],\n  oops\n}");
        FAIL("expected a parse failure");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("line") != std::string::npos);
    }
}

TEST_CASE("behavior json round trip") {
    Behavior b = pr_box();
    Behavior back = behavior_from_json(behavior_to_json(b));
    CHECK(back.same_structure(b));
    CHECK(back.max_difference(b) == 0.0);
    std::string text = dump_json(behavior_to_json(b));
    CHECK(dump_json(parse_json(text)) == text);
}

TEST_CASE("model json round trip, shared and per-test priors") {
    JointTable t(0.5, 0.1, 0.1, 0.3);
    HvtModel shared = deterministic_local_model(t);
    HvtModel back = model_from_json(model_to_json(shared));
    CHECK(back.prior_is_shared());
    REQUIRE(back.num_lambdas() == shared.num_lambdas());
    CHECK(back.shared_prior() == shared.shared_prior());
    for (std::size_t k = 0; k < back.num_lambdas(); ++k)
        CHECK(back.conditional(k).max_difference(shared.conditional(k)) == 0.0);
    CHECK(reconstruct(back).max_difference(reconstruct(shared)) == 0.0);

    HvtModel signaling = build_deterministic_signaling(pr_box());
    HvtModel back2 = model_from_json(model_to_json(signaling));
    CHECK_FALSE(back2.prior_is_shared());
    CHECK(back2.per_test_priors() == signaling.per_test_priors());
    CHECK(reconstruct(back2).max_difference(pr_box()) <= 1e-15);
}

TEST_CASE("a shared prior key must stand alone") {
    JointTable t(0.5, 0.1, 0.1, 0.3);
    Json j = model_to_json(deterministic_local_model(t));
    j["prior"]["0,0"] = j["prior"]["any"];
    CHECK_THROWS_AS(model_from_json(j), ValidationError);
}

TEST_CASE("state space and test json round trips") {
    for (const ConvexStateSpace& space : {square_space(), bloch_octahedron()}) {
        ConvexStateSpace back = theory_from_json(theory_to_json(space));
        CHECK(back.dim() == space.dim());
        REQUIRE(back.vertices().size() == space.vertices().size());
        for (std::size_t i = 0; i < back.vertices().size(); ++i)
            CHECK(back.vertices()[i] == space.vertices()[i]);
        CHECK(back.unit_effect() == space.unit_effect());
    }

    Json bad;
    bad["dim"] = 3;
    bad["vertices"] = {{1.0, 1.0, 1.0}, {1.0, -1.0}};
    bad["unit_effect"] = {1.0, 0.0, 0.0};
    CHECK_THROWS_AS(theory_from_json(bad), ValidationError);

    TestSpec x = coordinate_test(square_space(), 1);
    TestSpec back = test_from_json(test_to_json(x));
    REQUIRE(back.effects.size() == x.effects.size());
    for (std::size_t i = 0; i < back.effects.size(); ++i)
        CHECK(back.effects[i].coords == x.effects[i].coords);
}

TEST_CASE("complex matrix round trip and shape checks") {
    Cmat m(2, 2);
    m << std::complex<double>(0.5, 0.0), std::complex<double>(0.1, -0.2),
        std::complex<double>(0.1, 0.2), std::complex<double>(0.5, 0.0);
    Cmat back = matrix_from_json(matrix_to_json(m));
    CHECK((back - m).norm() == 0.0);

    Json bad;
    bad["re"] = {{1.0, 0.0}, {0.0, 1.0}};
    bad["im"] = {{0.0, 0.0}};
    CHECK_THROWS_AS(matrix_from_json(bad), ValidationError);
}

TEST_CASE("quantum scenario json round trip") {
    QuantumScenario s = cat_scenarios().v3;
    QuantumScenario back = scenario_from_json(scenario_to_json(s));
    CHECK(back.da() == s.da());
    CHECK(back.db() == s.db());
    CHECK((back.joint().matrix() - s.joint().matrix()).norm() == 0.0);
    CHECK(back.labels_a() == s.labels_a());
    CHECK(back.labels_b() == s.labels_b());
    JointTable t = born_table(back);
    CHECK(t.p00() == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(t.p01() == doctest::Approx(0.25).epsilon(1e-10));
    std::string text = dump_json(scenario_to_json(s));
    CHECK(dump_json(parse_json(text)) == text);
}

TEST_CASE("certificates serialize with their provenance") {
    SteeringCertificate table_cert =
        certify_from_table(JointTable(0.5, 0.25, 0.0, 0.25));
    Json j = certificate_to_json(table_cert);
    CHECK(j["a0"] == "table-columns");
    CHECK(j["w"] == 0.5);
    CHECK(j["det"] == 0.125);
    CHECK(j["difference"] == 0.5);
    CHECK(j["near_degenerate"] == false);
    CHECK(table_from_json(j["source_table"]).p00() == 0.5);

    SteeringCertificate scenario_cert = certify_from_scenario(cat_scenarios().v2);
    Json k = certificate_to_json(scenario_cert);
    REQUIRE(k["a0"].is_object());
    Cmat a0 = matrix_from_json(k["a0"]);
    CHECK(a0.rows() == 2);
    CHECK(std::abs(a0(0, 0).real() - 1.0) <= 1e-12);
}

TEST_CASE("csv output uses fixed columns") {
    std::vector<ParaboloidPoint> pts = paraboloid_sample(4);
    std::string csv = paraboloid_csv(pts);
    CHECK(csv.rfind("p00,p01,p10,residual\n", 0) == 0);
    std::size_t rows = 0;
    for (char c : csv)
        if (c == '\n') ++rows;
    CHECK(rows == pts.size() + 1);
}

TEST_CASE("file io reports the offending path") {
    CHECK_THROWS_AS(load_json("/nonexistent/not-there.json"), ValidationError);
    try {
        load_json("/nonexistent/not-there.json");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("not-there.json") != std::string::npos);
    }
}
