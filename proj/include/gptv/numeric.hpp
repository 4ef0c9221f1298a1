#ifndef GPTV_NUMERIC_HPP
#define GPTV_NUMERIC_HPP

#include <cmath>
#include <cstdint>
#include <limits>

namespace gptv {

/// Tolerance for internal probability algebra (comparisons, clamping).
inline constexpr double kProbEps = 1e-9;

/// Tolerance for user-supplied normalization; inputs passing this check
/// are renormalized exactly before use.
inline constexpr double kNormTol = 1e-6;

inline bool approx(double a, double b, double eps = kProbEps) {
    return std::fabs(a - b) <= eps;
}

/// Clamps floating-point dust: values in [-eps, 0) become 0, values in
/// (1, 1+eps] become 1. Values further out are left for validation to
/// reject.
inline double clamp_probability(double p, double eps = kProbEps) {
    if (p < 0.0 && p >= -eps) return 0.0;
    if (p > 1.0 && p <= 1.0 + eps) return 1.0;
    return p;
}

// --- deterministic seeding helpers -------------------------------------
//
// Batch sweeps hand every task its own seed so that serial and parallel
// execution produce identical results.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed for the k-th task of a sweep started from `base`.
inline std::uint64_t task_seed(std::uint64_t base, std::uint64_t k) {
    return splitmix64(base + 0x9E3779B97F4A7C15ULL * (k + 1));
}

/// Uniform double in [0,1) from raw engine output (53 mantissa bits).
template <typename Engine>
double uniform_unit(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller; two engine draws per call.
template <typename Engine>
double gaussian(Engine& eng) {
    double u1 = uniform_unit(eng);
    double u2 = uniform_unit(eng);
    if (u1 <= 0.0) u1 = std::numeric_limits<double>::min();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

} // namespace gptv

#endif
