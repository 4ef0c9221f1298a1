#ifndef GPTV_STEERING_HPP
#define GPTV_STEERING_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "gptv/gpt_core.hpp"
#include "gptv/parallel.hpp"
#include "gptv/quantum.hpp"
#include "gptv/tables.hpp"

namespace gptv {

/// A steered state in "bare table" mode: just its two effect values
/// (p0, p1) under the A-side test. The proof of the table-to-steering
/// direction uses exactly and only these numbers.
struct TableColumn {
    double p0, p1;
};

/// One steered state, in whichever formalism produced it.
using SteeredState = std::variant<Cmat, StateVector, TableColumn>;

/// <e|state>: trace / cached normalization / entry sum.
double steered_weight(const SteeredState& s);

/// The family of subnormalized states remote outcomes prepare; weights
/// sum to one.
class Assemblage {
public:
    explicit Assemblage(std::vector<SteeredState> elements,
                        double eps = kProbEps);
    std::size_t size() const { return elements_.size(); }
    const SteeredState& element(std::size_t i) const { return elements_[i]; }
    double weight(std::size_t i) const { return steered_weight(elements_[i]); }

private:
    std::vector<SteeredState> elements_;
};

struct EnsembleEntry {
    double weight;      ///< in (0, 1]
    SteeredState state; ///< deterministic (weight divided out)
};

class Ensemble {
public:
    explicit Ensemble(std::vector<EnsembleEntry> entries, double eps = kProbEps);
    std::size_t size() const { return entries_.size(); }
    const EnsembleEntry& entry(std::size_t i) const { return entries_[i]; }

private:
    std::vector<EnsembleEntry> entries_;
};

/// Steered states of a quantum scenario, as an assemblage.
Assemblage steer(const QuantumScenario& s);
/// Columns of a table as bare two-effect steered states.
Assemblage assemblage_from_table(const JointTable& t);

struct NormalizedAssemblage {
    Ensemble ensemble;
    std::vector<std::size_t> dropped; ///< indices with weight <= eps
};

/// Divides each element by its weight. Elements of weight <= eps are
/// dropped and reported; an assemblage with nothing left is an error.
NormalizedAssemblage normalize_assemblage(const Assemblage& a,
                                          double eps = kProbEps);

/// At least two weights in (eps, 1-eps) and two states that actually
/// differ (trace distance for quantum states, the stored effect values
/// for table columns). Polytopal entries need the space overload, which
/// searches for a separating valid effect by LP.
bool is_nontrivial(const Ensemble& e, double eps = kProbEps);
bool is_nontrivial(const Ensemble& e, const ConvexStateSpace& space,
                   double eps = kProbEps);

/// The A-side binary test in whichever formalism matches the states;
/// TabularTest means "read the stored column entries".
struct TabularTest {};
using BinaryTest = std::variant<Povm, TestSpec, TabularTest>;

/// <effect i of test | state>.
double test_effect_value(const BinaryTest& test, int i, const SteeredState& s);

/// Output of either constructive direction: the distinguishing effect
/// lives at index 0 of `test`; w = <a0|alpha0> - <a0|alpha1> with
/// 0 < |w| <= 1; det(source_table) = p0*p1*w.
struct SteeringCertificate {
    BinaryTest test;
    double w;
    double p0, p1;
    SteeredState alpha0, alpha1;
    JointTable source_table;
    double det;
    double difference;    ///< det / (p0*p1)
    bool near_degenerate; ///< eps < |det| <= 1e-6: conditioning flagged
};

/// Throws InternalInconsistencyError unless the certificate identities
/// (w range, det = p0*p1*w, difference consistency) hold.
void validate_certificate(const SteeringCertificate& c, double eps = kProbEps);

/// Steering-to-table direction: a nontrivial 2-entry ensemble plus a
/// caller-chosen binary test whose first effect tells the states apart
/// yields a table with det = p0*p1*w != 0. Equal evaluations are a
/// precondition error (try another effect).
SteeringCertificate certify_from_ensemble(const Ensemble& e,
                                          const BinaryTest& a_test,
                                          double eps = kProbEps);

/// Table-to-steering direction, bare-table mode: the columns are the
/// steered states, their sums the weights, and the normalized first
/// effect values differ by det/(p0*p1). det <= eps is a precondition
/// error; a zero column weight alongside det > eps signals a bug.
SteeringCertificate certify_from_table(const JointTable& t,
                                       double eps = kProbEps);

/// Table-to-steering direction on a quantum scenario: steered states
/// come from the partial trace, the distinguishing effect is the first
/// A-POVM element, and the same difference identity is verified.
SteeringCertificate certify_from_scenario(const QuantumScenario& s,
                                          double eps = kProbEps);

/// The three per-scenario verdicts the equivalence sweep compares:
/// spooky: some sampled test pair gives verdict Spooky;
/// steerable: some sampled B-test steers a nontrivial ensemble;
/// determinant: some sampled test pair has |det| > eps.
struct EquivalenceConditions {
    bool spooky;
    bool steerable;
    bool determinant;
};
EquivalenceConditions equivalence_conditions(const QuantumScenario& s,
                                             std::uint64_t grid_seed,
                                             int extra_tests = 7,
                                             double eps = kProbEps);

struct EquivalenceSweepReport {
    int samples;
    int divergences;
    int spooky_count;
    std::vector<std::uint64_t> divergent_seeds;
};

/// Checks the spooky <=> steerable <=> determinant equivalence on random
/// pure two-qubit scenarios; expected divergence count is zero.
EquivalenceSweepReport equivalence_sweep(int samples, std::uint64_t seed,
                                         ExecMode mode = ExecMode::Serial,
                                         double eps = kProbEps);

struct DiscriminationSteeringResult {
    double value;  ///< <a|alpha1> of the discriminating effect
    bool swapped;  ///< effect discriminates alpha0 from alpha1 instead
    SteeringCertificate certificate;
};

/// Conclusive discrimination chained into a certificate: when an effect
/// vanishing on one state and positive on the other exists, the induced
/// binary test must certify spookiness of the steering table.
std::optional<DiscriminationSteeringResult> discriminable_steering_check(
    const Ensemble& e, double eps = kProbEps);
std::optional<DiscriminationSteeringResult> discriminable_steering_check(
    const Ensemble& e, const ConvexStateSpace& space, double eps = kProbEps);

} // namespace gptv

#endif
