#ifndef GPTV_QUANTUM_HPP
#define GPTV_QUANTUM_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gptv/tables.hpp"

namespace gptv {

using Cmat = Eigen::MatrixXcd;
using Cvec = Eigen::VectorXcd;

/// Hermiticity / trace / POVM-sum tolerance.
inline constexpr double kHermTol = 1e-10;
/// Smallest admissible eigenvalue: numerical dust from tensor and
/// partial-trace chains sits just below zero.
inline constexpr double kPsdTol = 1e-9;

Cmat tensor(const Cmat& x, const Cmat& y);
Cvec tensor(const Cvec& x, const Cvec& y);
/// Trace out A (returns db x db) / trace out B (returns da x da).
Cmat partial_trace_a(const Cmat& m, int da, int db);
Cmat partial_trace_b(const Cmat& m, int da, int db);
/// Rank-1 projector onto the (normalized) vector.
Cmat projector(const Cvec& v);

class DensityMatrix {
public:
    explicit DensityMatrix(Cmat m);
    int dim() const { return static_cast<int>(m_.rows()); }
    const Cmat& matrix() const { return m_; }

private:
    Cmat m_;
};

/// trace(rho^2) = 1 within eps.
bool is_pure(const DensityMatrix& rho, double eps = kProbEps);

class Povm {
public:
    explicit Povm(std::vector<Cmat> effects);
    int dim() const { return static_cast<int>(effects_[0].rows()); }
    std::size_t size() const { return effects_.size(); }
    const Cmat& effect(std::size_t i) const { return effects_[i]; }
    const std::vector<Cmat>& effects() const { return effects_; }

private:
    std::vector<Cmat> effects_;
};

/// Every effect idempotent within tol.
bool is_projective(const Povm& p, double tol = kPsdTol);

/// Bipartite state with one binary-capable test per side and outcome
/// labels; dimensions capped at 4 per side.
class QuantumScenario {
public:
    QuantumScenario(int da, int db, DensityMatrix joint, Povm povm_a,
                    Povm povm_b, std::vector<std::string> labels_a,
                    std::vector<std::string> labels_b);

    int da() const { return da_; }
    int db() const { return db_; }
    const DensityMatrix& joint() const { return joint_; }
    const Povm& povm_a() const { return povm_a_; }
    const Povm& povm_b() const { return povm_b_; }
    const std::vector<std::string>& labels_a() const { return labels_a_; }
    const std::vector<std::string>& labels_b() const { return labels_b_; }

private:
    int da_, db_;
    DensityMatrix joint_;
    Povm povm_a_, povm_b_;
    std::vector<std::string> labels_a_, labels_b_;
};

/// p_ij = trace[(A_i ⊗ B_j) rho], clamped, purity stamped from the joint
/// state. Both POVMs must be binary.
JointTable born_table(const QuantumScenario& s);

/// Subnormalized steered operators: alpha~_j = tr_B[(I ⊗ B_j) rho].
/// Their sum is the reduced state of A.
std::vector<Cmat> steered_operators(const QuantumScenario& s);

/// The two support projectors of a binary projective test; a state is
/// sharp for the test iff its support sits inside one of them.
struct SharpSupports {
    Cmat p0, p1;
};
std::optional<SharpSupports> quantum_sharp_states(const Povm& prop);

bool is_sharp_for(const DensityMatrix& rho, const SharpSupports& s,
                  double eps = kProbEps);

/// No common sharp state: all four pattern-wise support intersections
/// are trivial. Both tests must be binary projective.
bool are_complementary(const Povm& a, const Povm& b, double eps = kProbEps);

/// Best effect vanishing on alpha0: the projector onto ker(alpha0), with
/// value trace(P alpha1). Empty when the value is <= eps; value 1 means
/// perfect discrimination.
std::optional<std::pair<Cmat, double>> quantum_conclusive_discrimination(
    const DensityMatrix& alpha0, const DensityMatrix& alpha1,
    double eps = kProbEps);

/// A single-system complementary pair of binary projective tests.
struct SingleSystemPair {
    Povm first, second;
    std::vector<std::string> labels_first, labels_second;
};

/// The three built-in constructions on a cat (A) and an electron (B):
/// v1 is the single-system pair {alive,dead} vs {psi+,psi-}; v2 and v3
/// carry joint states measured in the z basis on the electron side.
struct CatScenarios {
    SingleSystemPair v1;
    QuantumScenario v2, v3;
};
CatScenarios cat_scenarios();

Cvec random_pure_state(int dim, std::mt19937_64& eng);
Povm random_projective_binary(int dim, std::mt19937_64& eng);
QuantumScenario random_two_qubit_scenario(std::uint64_t seed);

} // namespace gptv

#endif
