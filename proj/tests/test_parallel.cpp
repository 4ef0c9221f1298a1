#include <doctest.h>

#include <cstring>

#include "gptv/hvt.hpp"
#include "gptv/parallel.hpp"
#include "gptv/steering.hpp"
#include "gptv/tables.hpp"

using namespace gptv;

TEST_CASE("paraboloid sampling is mode-independent bit for bit") {
    auto serial = paraboloid_sample(24, ExecMode::Serial);
    auto parallel = paraboloid_sample(24, ExecMode::Parallel);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(std::memcmp(&serial[i].p00, &parallel[i].p00, sizeof(double)) == 0);
        CHECK(std::memcmp(&serial[i].p01, &parallel[i].p01, sizeof(double)) == 0);
        CHECK(std::memcmp(&serial[i].p10, &parallel[i].p10, sizeof(double)) == 0);
        CHECK(std::memcmp(&serial[i].residual, &parallel[i].residual,
                          sizeof(double)) == 0);
    }
}

TEST_CASE("outcome-independence sweep is mode-independent") {
    OiSweepReport serial = oi_equivalence_sweep(250, 99, ExecMode::Serial);
    OiSweepReport parallel = oi_equivalence_sweep(250, 99, ExecMode::Parallel);
    CHECK(serial.samples == parallel.samples);
    CHECK(serial.disagreements == parallel.disagreements);
    CHECK(serial.factorized_true == parallel.factorized_true);
}

TEST_CASE("equivalence sweep is mode-independent") {
    EquivalenceSweepReport serial = equivalence_sweep(30, 7, ExecMode::Serial);
    EquivalenceSweepReport parallel = equivalence_sweep(30, 7, ExecMode::Parallel);
    CHECK(serial.samples == parallel.samples);
    CHECK(serial.divergences == parallel.divergences);
    CHECK(serial.spooky_count == parallel.spooky_count);
    CHECK(serial.divergent_seeds == parallel.divergent_seeds);
}
