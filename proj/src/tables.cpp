#include "gptv/tables.hpp"

#include <cmath>
#include <string>

#include "gptv/errors.hpp"

namespace gptv {

namespace {

double checked_entry(double p, double eps, const char* name) {
    if (!std::isfinite(p) || p < -eps || p > 1.0 + eps)
        throw ValidationError(std::string("table entry ") + name +
                              " outside [0,1]: " + std::to_string(p));
    return clamp_probability(p, eps);
}

} // namespace

JointTable::JointTable(double p00, double p01, double p10, double p11,
                       Purity purity, double eps)
    : p_{checked_entry(p00, eps, "p00"), checked_entry(p01, eps, "p01"),
         checked_entry(p10, eps, "p10"), checked_entry(p11, eps, "p11")},
      purity_(purity) {
    const double sum = p_[0] + p_[1] + p_[2] + p_[3];
    if (std::fabs(sum - 1.0) > kNormTol)
        throw ValidationError("table entries sum to " + std::to_string(sum) +
                              ", expected 1 within " + std::to_string(kNormTol));
    for (double& p : p_) p /= sum;
}

JointTable JointTable::with_purity(Purity purity) const {
    JointTable t = *this;
    t.purity_ = purity;
    return t;
}

JointTable JointTable::swap_b_outcomes() const {
    return JointTable(p_[1], p_[0], p_[3], p_[2], purity_);
}

JointTable JointTable::relabel_both() const {
    return JointTable(p_[3], p_[2], p_[1], p_[0], purity_);
}

JointTable JointTable::transpose() const {
    return JointTable(p_[0], p_[2], p_[1], p_[3], purity_);
}

double spooky_determinant(const JointTable& t) {
    return t.p00() * t.p11() - t.p01() * t.p10();
}

SpookyVerdict spooky_verdict(const JointTable& t, double eps) {
    const double det = spooky_determinant(t);
    if (std::fabs(det) <= eps) return SpookyVerdict::NotSpookyWitnessed;
    return t.purity() == Purity::DeclaredPure ? SpookyVerdict::Spooky
                                              : SpookyVerdict::Inconclusive;
}

std::optional<Factorization> factorize(const JointTable& t, double eps) {
    // For a normalized 2x2 table the entrywise deviation from the product
    // of marginals equals |det| at every entry, so one comparison decides.
    if (std::fabs(spooky_determinant(t)) > eps) return std::nullopt;
    return Factorization{t.p00() + t.p01(), t.p10() + t.p11(),
                         t.p00() + t.p10(), t.p01() + t.p11()};
}

bool in_tetrahedron(double p00, double p01, double p10, double eps) {
    const double p11 = 1.0 - p00 - p01 - p10;
    return p00 >= -eps && p01 >= -eps && p10 >= -eps && p11 >= -eps;
}

double paraboloid_residual(double p00, double p01, double p10) {
    const double p11 = 1.0 - p00 - p01 - p10;
    return p00 * p11 - p01 * p10;
}

bool on_paraboloid(const ParaboloidPoint& pt, double eps) {
    return std::fabs(pt.residual) <= eps;
}

std::vector<ParaboloidPoint> paraboloid_sample(int grid_n, ExecMode mode) {
    if (grid_n < 2) throw PreconditionError("paraboloid_sample requires grid_n >= 2");
    const int g = grid_n;

    // Points per leading index i: pairs (j,k) with j+k <= g-i.
    std::vector<std::size_t> offset(static_cast<std::size_t>(g) + 2, 0);
    for (int i = 0; i <= g; ++i) {
        const std::size_t m = static_cast<std::size_t>(g - i + 1);
        offset[static_cast<std::size_t>(i) + 1] =
            offset[static_cast<std::size_t>(i)] + m * (m + 1) / 2;
    }

    std::vector<ParaboloidPoint> out(offset[static_cast<std::size_t>(g) + 1]);
    parallel_for(static_cast<std::size_t>(g) + 1, mode, [&](std::size_t ii) {
        const int i = static_cast<int>(ii);
        std::size_t pos = offset[ii];
        for (int j = 0; i + j <= g; ++j) {
            for (int k = 0; i + j + k <= g; ++k) {
                const double p00 = static_cast<double>(i) / g;
                const double p01 = static_cast<double>(j) / g;
                const double p10 = static_cast<double>(k) / g;
                out[pos++] = ParaboloidPoint{p00, p01, p10,
                                             paraboloid_residual(p00, p01, p10)};
            }
        }
    });
    return out;
}

JointTable table_from_point(const ParaboloidPoint& pt, Purity purity) {
    return JointTable(pt.p00, pt.p01, pt.p10, 1.0 - pt.p00 - pt.p01 - pt.p10,
                      purity);
}

} // namespace gptv
