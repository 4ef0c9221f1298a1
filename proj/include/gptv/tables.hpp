#ifndef GPTV_TABLES_HPP
#define GPTV_TABLES_HPP

#include <array>
#include <optional>
#include <vector>

#include "gptv/numeric.hpp"
#include "gptv/parallel.hpp"

namespace gptv {

/// Caller-supplied provenance of the state behind a table. Tables alone
/// cannot encode purity; producers (quantum scenarios, polytopal spaces)
/// stamp it.
enum class Purity { DeclaredPure, DeclaredMixed, Unknown };

/// 2x2 joint probability table p_ij for one binary test per party.
/// Entries are clamped against floating-point dust and renormalized to
/// sum exactly to one; construction rejects anything worse than kNormTol.
class JointTable {
public:
    JointTable(double p00, double p01, double p10, double p11,
               Purity purity = Purity::Unknown, double eps = kProbEps);

    double p(int i, int j) const { return p_[static_cast<std::size_t>(i * 2 + j)]; }
    double p00() const { return p_[0]; }
    double p01() const { return p_[1]; }
    double p10() const { return p_[2]; }
    double p11() const { return p_[3]; }
    Purity purity() const { return purity_; }

    /// Same entries, different provenance stamp.
    JointTable with_purity(Purity purity) const;

    /// Swap the column (B-outcome) labels.
    JointTable swap_b_outcomes() const;
    /// Swap rows and columns (relabel both parties' outcomes).
    JointTable relabel_both() const;
    /// Transpose (swap the roles of A and B).
    JointTable transpose() const;

private:
    std::array<double, 4> p_;
    Purity purity_;
};

/// det p = p00*p11 - p01*p10.  |det| > eps is the spookiness constraint;
/// det == 0 is exactly entrywise factorizability.
double spooky_determinant(const JointTable& t);

enum class SpookyVerdict {
    Spooky,              ///< |det| > eps on a declared-pure state
    NotSpookyWitnessed,  ///< |det| <= eps: this table proves nothing spooky
    Inconclusive         ///< |det| > eps but the state is not declared pure
};

SpookyVerdict spooky_verdict(const JointTable& t, double eps = kProbEps);

struct Factorization {
    double q0, q1; ///< A-marginals
    double r0, r1; ///< B-marginals
};

/// Returns the marginals iff p_ij == q_i * r_j entrywise within eps
/// (equivalently |det| <= eps); empty otherwise.
std::optional<Factorization> factorize(const JointTable& t, double eps = kProbEps);

/// Point of the probability tetrahedron (p11 implied by normalization)
/// with its surface residual p00*p11 - p01*p10.
struct ParaboloidPoint {
    double p00, p01, p10;
    double residual;
};

bool in_tetrahedron(double p00, double p01, double p10, double eps = kProbEps);
double paraboloid_residual(double p00, double p01, double p10);
bool on_paraboloid(const ParaboloidPoint& pt, double eps = kProbEps);

/// Regular grid {(i,j,k)/grid_n : i+j+k <= grid_n} over the tetrahedron,
/// lexicographically ordered, with the residual attached to every point.
/// The four tetrahedron vertices are always on the grid.
std::vector<ParaboloidPoint> paraboloid_sample(int grid_n,
                                               ExecMode mode = ExecMode::Serial);

JointTable table_from_point(const ParaboloidPoint& pt,
                            Purity purity = Purity::Unknown);

} // namespace gptv

#endif
