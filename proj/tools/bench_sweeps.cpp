// Times the three batch kernels in serial and OpenMP mode and checks the
// results agree, so the parallel paths never drift from the reference.
#include <chrono>
#include <cstdio>

#include "gptv/hvt.hpp"
#include "gptv/parallel.hpp"
#include "gptv/steering.hpp"
#include "gptv/tables.hpp"

using namespace gptv;
using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double time_ms(F&& f) {
    auto t0 = Clock::now();
    f();
    auto t1 = Clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms, bool match) {
    std::printf("%-22s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   %s\n",
                name, serial_ms, parallel_ms, serial_ms / parallel_ms,
                match ? "results match" : "RESULTS DIFFER");
}

} // namespace

int main() {
    std::printf("threads available: %d\n\n", max_threads());

    {
        std::vector<ParaboloidPoint> s, p;
        double ts = time_ms([&] { s = paraboloid_sample(256, ExecMode::Serial); });
        double tp = time_ms([&] { p = paraboloid_sample(256, ExecMode::Parallel); });
        bool match = s.size() == p.size();
        for (std::size_t i = 0; match && i < s.size(); ++i) {
            match = s[i].p00 == p[i].p00 && s[i].p01 == p[i].p01 &&
                    s[i].p10 == p[i].p10 && s[i].residual == p[i].residual;
        }
        report("paraboloid_sample", ts, tp, match);
    }

    {
        OiSweepReport s{}, p{};
        double ts = time_ms([&] { s = oi_equivalence_sweep(12000, 11, ExecMode::Serial); });
        double tp = time_ms([&] { p = oi_equivalence_sweep(12000, 11, ExecMode::Parallel); });
        report("oi_equivalence_sweep", ts, tp,
               s.samples == p.samples && s.disagreements == p.disagreements &&
                   s.factorized_true == p.factorized_true);
    }

    {
        EquivalenceSweepReport s{}, p{};
        double ts = time_ms([&] { s = equivalence_sweep(3000, 11, ExecMode::Serial); });
        double tp = time_ms([&] { p = equivalence_sweep(3000, 11, ExecMode::Parallel); });
        report("equivalence_sweep", ts, tp,
               s.samples == p.samples && s.divergences == p.divergences &&
                   s.spooky_count == p.spooky_count &&
                   s.divergent_seeds == p.divergent_seeds);
    }

    return 0;
}
