#ifndef GPTV_HVT_HPP
#define GPTV_HVT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gptv/behavior.hpp"
#include "gptv/parallel.hpp"

namespace gptv {

/// Cap on the hidden-variable label count explored by the exhaustive
/// significance search.
inline constexpr std::size_t kMaxLambdas = 10'000;

/// Hidden-variable refinement of a behavior: a finite label set, a prior
/// over labels (either one shared prior or one per test tuple), and one
/// conditional behavior per label. All conditionals must share structure.
///
/// A shared prior makes lambda-independence structural; per-test priors
/// keep the predicate checkable on adversarial inputs.
class HvtModel {
public:
    HvtModel(std::vector<std::string> lambdas,
             std::vector<Behavior> conditionals,
             std::vector<double> shared_prior,
             double eps = kProbEps);
    HvtModel(std::vector<std::string> lambdas,
             std::vector<Behavior> conditionals,
             std::map<std::vector<int>, std::vector<double>> per_test_prior,
             double eps = kProbEps);

    std::size_t num_lambdas() const { return lambdas_.size(); }
    const std::vector<std::string>& lambdas() const { return lambdas_; }
    const Behavior& conditional(std::size_t k) const { return conditionals_[k]; }
    const std::vector<Behavior>& conditionals() const { return conditionals_; }

    bool prior_is_shared() const { return shared_prior_.has_value(); }
    const std::vector<double>& prior(const std::vector<int>& tests) const;
    const std::vector<double>& shared_prior() const;
    const std::map<std::vector<int>, std::vector<double>>& per_test_priors() const {
        return per_test_prior_;
    }

private:
    void validate(double eps);

    std::vector<std::string> lambdas_;
    std::vector<Behavior> conditionals_;
    std::optional<std::vector<double>> shared_prior_;
    std::map<std::vector<int>, std::vector<double>> per_test_prior_;
};

/// The behavior the model refines: per test tuple, the prior-weighted sum
/// of the conditionals.
Behavior reconstruct(const HvtModel& m);

/// Prior identical (within eps) across all test tuples.
bool check_lambda_independence(const HvtModel& m, double eps = kProbEps);

/// Every conditional behavior is no-signaling.
bool check_parameter_independence(const HvtModel& m, double eps = kProbEps);

enum class OiForm {
    Factorized, ///< per-lambda joints factor into products of party marginals
    Conditional ///< conditioning any party on the others' outcomes changes nothing
};

/// Outcome independence in either formulation. The conditional form skips
/// constraints whose conditioning event has probability <= eps.
bool check_outcome_independence(const HvtModel& m, OiForm form,
                                double eps = kProbEps);

struct SignificanceWitness {
    std::size_t lambda_a, lambda_b;
    std::vector<int> tests;
    std::vector<int> outcomes;
    double value_a, value_b; ///< value_a > eps and |value_a - value_b| > eps
};

enum class SignificanceStatus {
    Witness,      ///< conditionals genuinely vary with lambda
    NoWitness,    ///< exhaustive search found no differing pair
    NotApplicable ///< lambda-independence or parameter independence fails
};

struct SignificanceResult {
    SignificanceStatus status;
    std::optional<SignificanceWitness> witness;
};

/// Exhaustive search over (lambda, lambda', tests, outcomes). Applicable
/// only to models passing lambda-independence and parameter independence.
SignificanceResult is_descriptively_significant(const HvtModel& m,
                                                double eps = kProbEps);

/// |Lambda| = 1 wrapper; reconstructs b exactly and is never significant.
HvtModel single_valued(const Behavior& b);

/// Mixture of deterministic product tables with weights p_ij: one label
/// per non-zero entry. Reconstructs t exactly and satisfies all three
/// independence predicates.
HvtModel deterministic_local_model(const JointTable& t);

/// Deterministic model with one label per outcome tuple and a
/// test-dependent prior equal to the behavior itself. Reconstructs b
/// exactly; lambda-independence fails whenever b varies with tests.
HvtModel build_deterministic_signaling(const Behavior& b);

/// Batch check of the two outcome-independence formulations over random
/// strictly positive models; returns the number of disagreements.
struct OiSweepReport {
    int samples;
    int disagreements;
    int factorized_true;
};
OiSweepReport oi_equivalence_sweep(int samples, std::uint64_t seed,
                                   ExecMode mode = ExecMode::Serial,
                                   double eps = kProbEps);

} // namespace gptv

#endif
