#include <doctest.h>

#include <cmath>
#include <random>

#include "gptv/errors.hpp"
#include "gptv/tables.hpp"

using namespace gptv;

namespace {

// Reference rank check for a 2x2 nonnegative matrix, independent of the
// determinant formula under test: rank <= 1 iff every 2x2 minor vanishes,
// scaled against the largest entry.
bool rank_one_oracle(double a, double b, double c, double d, double eps) {
    double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d), 1.0});
    return std::abs(a * d - b * c) <= eps * scale;
}

JointTable random_table(std::mt19937_64& eng, bool force_product) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (force_product) {
        double q = u(eng), r = u(eng);
        return JointTable(q * r, q * (1 - r), (1 - q) * r, (1 - q) * (1 - r));
    }
    double a = u(eng), b = u(eng), c = u(eng), d = u(eng);
    double s = a + b + c + d;
    return JointTable(a / s, b / s, c / s, d / s);
}

} // namespace

TEST_CASE("determinant of the worked tables") {
    CHECK(spooky_determinant(JointTable(0.5, 0.0, 0.0, 0.5)) ==
          doctest::Approx(0.25).epsilon(1e-12));
    CHECK(spooky_determinant(JointTable(0.06, 0.14, 0.24, 0.56)) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(spooky_determinant(JointTable(0.5, 0.25, 0.0, 0.25)) ==
          doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("verdict depends on declared purity") {
    JointTable correlated(0.5, 0.0, 0.0, 0.5);
    CHECK(spooky_verdict(correlated.with_purity(Purity::DeclaredPure)) ==
          SpookyVerdict::Spooky);
    CHECK(spooky_verdict(correlated.with_purity(Purity::DeclaredMixed)) ==
          SpookyVerdict::Inconclusive);
    CHECK(spooky_verdict(correlated) == SpookyVerdict::Inconclusive);
    JointTable product(0.06, 0.14, 0.24, 0.56);
    CHECK(spooky_verdict(product.with_purity(Purity::DeclaredPure)) ==
          SpookyVerdict::NotSpookyWitnessed);
    CHECK(spooky_verdict(product.with_purity(Purity::DeclaredMixed)) ==
          SpookyVerdict::NotSpookyWitnessed);
}

TEST_CASE("factorize recovers marginals or reports the deviation") {
    auto f = factorize(JointTable(0.06, 0.14, 0.24, 0.56));
    REQUIRE(f.has_value());
    CHECK(f->q0 == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(f->q1 == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(f->r0 == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(f->r1 == doctest::Approx(0.7).epsilon(1e-12));

    CHECK_FALSE(factorize(JointTable(0.5, 0.0, 0.0, 0.5)).has_value());

    auto uniform = factorize(JointTable(0.25, 0.25, 0.25, 0.25));
    REQUIRE(uniform.has_value());
    CHECK(uniform->q0 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(uniform->r0 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("entrywise deviation from the marginal product equals |det|") {
    std::mt19937_64 eng(7);
    for (int it = 0; it < 200; ++it) {
        JointTable t = random_table(eng, false);
        double det = spooky_determinant(t);
        double q0 = t.p00() + t.p01();
        double r0 = t.p00() + t.p10();
        CHECK(std::abs(t.p00() - q0 * r0) == doctest::Approx(std::abs(det)).epsilon(1e-9));
    }
}

TEST_CASE("factorize iff small determinant iff rank one, on random tables") {
    std::mt19937_64 eng(42);
    int product_count = 0;
    for (int it = 0; it < 1200; ++it) {
        JointTable t = random_table(eng, it % 3 == 0);
        bool fact = factorize(t).has_value();
        bool small_det = std::abs(spooky_determinant(t)) <= kProbEps;
        bool rank1 = rank_one_oracle(t.p00(), t.p01(), t.p10(), t.p11(), kProbEps);
        CHECK(fact == small_det);
        CHECK(small_det == rank1);
        if (fact) ++product_count;
    }
    CHECK(product_count >= 400); // the forced-product third really factorizes
}

TEST_CASE("determinant symmetries") {
    std::mt19937_64 eng(99);
    for (int it = 0; it < 100; ++it) {
        JointTable t = random_table(eng, false);
        double det = spooky_determinant(t);
        CHECK(spooky_determinant(t.transpose()) == doctest::Approx(det).epsilon(1e-12));
        CHECK(spooky_determinant(t.relabel_both()) == doctest::Approx(det).epsilon(1e-12));
        CHECK(spooky_determinant(t.swap_b_outcomes()) ==
              doctest::Approx(-det).epsilon(1e-12));
    }
}

TEST_CASE("table validation") {
    CHECK_THROWS_AS(JointTable(-0.1, 0.4, 0.4, 0.3), ValidationError);
    CHECK_THROWS_AS(JointTable(0.5, 0.5, 0.5, 0.5), ValidationError);
    // Tiny normalization slack is renormalized, not rejected.
    JointTable t(0.25 + 2e-7, 0.25, 0.25, 0.25);
    CHECK(t.p00() + t.p01() + t.p10() + t.p11() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("paraboloid residuals at the named points") {
    CHECK(paraboloid_residual(1.0, 0.0, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(paraboloid_residual(0.0, 1.0, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(paraboloid_residual(0.0, 0.0, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(paraboloid_residual(0.0, 0.0, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(paraboloid_residual(0.25, 0.25, 0.25) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(paraboloid_residual(0.5, 0.0, 0.0) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("paraboloid grid contains the vertices and stays in the tetrahedron") {
    auto pts = paraboloid_sample(8);
    int vertices_seen = 0;
    int on_surface = 0;
    for (const auto& pt : pts) {
        CHECK(in_tetrahedron(pt.p00, pt.p01, pt.p10));
        CHECK(pt.residual ==
              doctest::Approx(paraboloid_residual(pt.p00, pt.p01, pt.p10))
                  .epsilon(1e-15));
        bool vertex = (pt.p00 == 1.0 && pt.p01 == 0.0 && pt.p10 == 0.0) ||
                      (pt.p00 == 0.0 && pt.p01 == 1.0 && pt.p10 == 0.0) ||
                      (pt.p00 == 0.0 && pt.p01 == 0.0 && pt.p10 == 1.0) ||
                      (pt.p00 == 0.0 && pt.p01 == 0.0 && pt.p10 == 0.0);
        if (vertex) {
            ++vertices_seen;
            CHECK(std::abs(pt.residual) <= 1e-12);
        }
        if (std::abs(pt.residual) <= kProbEps) {
            ++on_surface;
            CHECK(spooky_verdict(table_from_point(pt)) ==
                  SpookyVerdict::NotSpookyWitnessed);
        }
    }
    CHECK(vertices_seen == 4);
    CHECK(on_surface >= 4);
}

TEST_CASE("paraboloid sample rejects degenerate grids") {
    CHECK_THROWS_AS(paraboloid_sample(1), PreconditionError);
}
