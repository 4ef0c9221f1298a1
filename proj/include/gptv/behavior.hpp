#ifndef GPTV_BEHAVIOR_HPP
#define GPTV_BEHAVIOR_HPP

#include <map>
#include <string>
#include <vector>

#include "gptv/numeric.hpp"
#include "gptv/tables.hpp"

namespace gptv {

/// Multi-party conditional probability family: one outcome distribution
/// per tuple of local test choices. Immutable after construction.
///
/// Outcome tuples are flattened row-major in party order; distributions
/// are validated (>= -eps entries, unit sum within kNormTol) and then
/// renormalized exactly.
class Behavior {
public:
    Behavior(std::vector<std::string> parties,
             std::vector<std::vector<std::string>> test_labels,
             std::vector<std::vector<int>> outcome_counts,
             std::map<std::vector<int>, std::vector<double>> prob,
             double eps = kProbEps);

    int num_parties() const { return static_cast<int>(parties_.size()); }
    const std::vector<std::string>& parties() const { return parties_; }
    int num_tests(int party) const {
        return static_cast<int>(test_labels_[static_cast<std::size_t>(party)].size());
    }
    const std::string& test_label(int party, int test) const {
        return test_labels_[static_cast<std::size_t>(party)][static_cast<std::size_t>(test)];
    }
    int outcome_count(int party, int test) const {
        return outcome_counts_[static_cast<std::size_t>(party)][static_cast<std::size_t>(test)];
    }

    /// All test tuples in lexicographic order.
    const std::vector<std::vector<int>>& test_tuples() const { return tuples_; }

    const std::vector<double>& outcome_distribution(const std::vector<int>& tests) const;
    double prob(const std::vector<int>& tests, const std::vector<int>& outcomes) const;

    int num_outcome_tuples(const std::vector<int>& tests) const;
    int outcome_index(const std::vector<int>& tests, const std::vector<int>& outcomes) const;
    std::vector<int> outcome_tuple(const std::vector<int>& tests, int index) const;

    /// Distribution of one party's outcome under a test tuple.
    std::vector<double> marginal(const std::vector<int>& tests, int party) const;
    /// Joint distribution of all parties except `party`.
    std::vector<double> marginal_excluding(const std::vector<int>& tests, int party) const;

    /// Identical parties, tests, and outcome counts.
    bool same_structure(const Behavior& other) const;

    /// Largest pointwise probability difference over all test tuples.
    double max_difference(const Behavior& other) const;

private:
    std::vector<std::string> parties_;
    std::vector<std::vector<std::string>> test_labels_;
    std::vector<std::vector<int>> outcome_counts_;
    std::vector<std::vector<int>> tuples_;
    std::map<std::vector<int>, std::vector<double>> prob_;
};

/// Single-test bipartite behavior holding the four table entries.
Behavior behavior_from_table(const JointTable& t);

/// The behavior of a single-test bipartite scenario as a table.
/// Requires 2 parties, 1 test each, 2 outcomes each.
JointTable table_from_behavior(const Behavior& b, Purity purity = Purity::Unknown);

/// PR box: two parties, two binary tests each, p(a xor b = x.y) = 1 split
/// uniformly over the consistent outcome pairs.
Behavior pr_box();

/// Marginal mismatch found while checking parameter independence at the
/// behavior level: `party`'s outcome distribution under its own test
/// differs between two choices of the other parties' tests.
struct NoSignalingViolation {
    int party;
    std::vector<int> tests_a; ///< full test tuple (party's own entry equal in both)
    std::vector<int> tests_b;
    int outcome;
    double prob_a, prob_b;
};

/// Empty iff every party's marginal is independent of the other parties'
/// test choices within eps.
std::vector<NoSignalingViolation> check_no_signaling(const Behavior& b,
                                                     double eps = kProbEps);

} // namespace gptv

#endif
