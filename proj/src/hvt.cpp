#include "gptv/hvt.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "gptv/errors.hpp"

namespace gptv {

namespace {

void validate_prior_vector(std::vector<double>& prior, std::size_t n_lambdas,
                           double eps, const char* what) {
    if (prior.size() != n_lambdas)
        throw ValidationError(std::string(what) + ": prior size does not match label count");
    double sum = 0.0;
    for (double& w : prior) {
        if (!std::isfinite(w) || w < -eps)
            throw ValidationError(std::string(what) + ": negative prior weight");
        w = clamp_probability(w, eps);
        sum += w;
    }
    if (std::fabs(sum - 1.0) > kNormTol)
        throw ValidationError(std::string(what) + ": prior sums to " + std::to_string(sum));
    for (double& w : prior) w /= sum;
}

} // namespace

void HvtModel::validate(double eps) {
    if (lambdas_.empty()) throw ValidationError("model has no hidden-variable labels");
    if (conditionals_.size() != lambdas_.size())
        throw ValidationError("conditional count does not match label count");
    for (std::size_t k = 1; k < conditionals_.size(); ++k)
        if (!conditionals_[k].same_structure(conditionals_[0]))
            throw ValidationError("conditionals do not share party/test/outcome structure");

    if (shared_prior_) {
        validate_prior_vector(*shared_prior_, lambdas_.size(), eps, "shared prior");
    } else {
        const auto& tuples = conditionals_[0].test_tuples();
        if (per_test_prior_.size() != tuples.size())
            throw ValidationError("per-test prior does not cover every test tuple");
        for (const auto& tuple : tuples) {
            auto it = per_test_prior_.find(tuple);
            if (it == per_test_prior_.end())
                throw ValidationError("per-test prior missing a test tuple");
            validate_prior_vector(it->second, lambdas_.size(), eps, "per-test prior");
        }
    }
}

HvtModel::HvtModel(std::vector<std::string> lambdas,
                   std::vector<Behavior> conditionals,
                   std::vector<double> shared_prior, double eps)
    : lambdas_(std::move(lambdas)),
      conditionals_(std::move(conditionals)),
      shared_prior_(std::move(shared_prior)) {
    validate(eps);
}

HvtModel::HvtModel(std::vector<std::string> lambdas,
                   std::vector<Behavior> conditionals,
                   std::map<std::vector<int>, std::vector<double>> per_test_prior,
                   double eps)
    : lambdas_(std::move(lambdas)),
      conditionals_(std::move(conditionals)),
      per_test_prior_(std::move(per_test_prior)) {
    validate(eps);
}

const std::vector<double>& HvtModel::prior(const std::vector<int>& tests) const {
    if (shared_prior_) return *shared_prior_;
    return per_test_prior_.at(tests);
}

const std::vector<double>& HvtModel::shared_prior() const {
    if (!shared_prior_)
        throw ValidationError("model stores per-test priors, not a shared one");
    return *shared_prior_;
}

Behavior reconstruct(const HvtModel& m) {
    const Behavior& ref = m.conditional(0);
    std::map<std::vector<int>, std::vector<double>> prob;
    for (const auto& tuple : ref.test_tuples()) {
        const auto& prior = m.prior(tuple);
        std::vector<double> dist(ref.outcome_distribution(tuple).size(), 0.0);
        for (std::size_t k = 0; k < m.num_lambdas(); ++k) {
            const auto& cond = m.conditional(k).outcome_distribution(tuple);
            for (std::size_t i = 0; i < dist.size(); ++i)
                dist[i] += prior[k] * cond[i];
        }
        prob[tuple] = std::move(dist);
    }
    std::vector<std::vector<std::string>> test_labels;
    std::vector<std::vector<int>> outcome_counts;
    for (int p = 0; p < ref.num_parties(); ++p) {
        std::vector<std::string> labels;
        std::vector<int> counts;
        for (int t = 0; t < ref.num_tests(p); ++t) {
            labels.push_back(ref.test_label(p, t));
            counts.push_back(ref.outcome_count(p, t));
        }
        test_labels.push_back(std::move(labels));
        outcome_counts.push_back(std::move(counts));
    }
    return Behavior(ref.parties(), std::move(test_labels),
                    std::move(outcome_counts), std::move(prob));
}

bool check_lambda_independence(const HvtModel& m, double eps) {
    if (m.prior_is_shared()) return true;
    const auto& tuples = m.conditional(0).test_tuples();
    const auto& ref = m.prior(tuples[0]);
    for (std::size_t t = 1; t < tuples.size(); ++t) {
        const auto& p = m.prior(tuples[t]);
        for (std::size_t k = 0; k < ref.size(); ++k)
            if (std::fabs(p[k] - ref[k]) > eps) return false;
    }
    return true;
}

bool check_parameter_independence(const HvtModel& m, double eps) {
    for (std::size_t k = 0; k < m.num_lambdas(); ++k)
        if (!check_no_signaling(m.conditional(k), eps).empty()) return false;
    return true;
}

namespace {

bool joint_factorizes(const Behavior& b, const std::vector<int>& tests,
                      double eps) {
    const auto& dist = b.outcome_distribution(tests);
    std::vector<std::vector<double>> margs;
    for (int p = 0; p < b.num_parties(); ++p) margs.push_back(b.marginal(tests, p));
    for (int idx = 0; idx < static_cast<int>(dist.size()); ++idx) {
        const auto tuple = b.outcome_tuple(tests, idx);
        double prod = 1.0;
        for (int p = 0; p < b.num_parties(); ++p)
            prod *= margs[static_cast<std::size_t>(p)]
                         [static_cast<std::size_t>(tuple[static_cast<std::size_t>(p)])];
        if (std::fabs(dist[static_cast<std::size_t>(idx)] - prod) > eps) return false;
    }
    return true;
}

bool conditionals_insensitive(const Behavior& b, const std::vector<int>& tests,
                              double eps) {
    // For every party: distribution of its outcome conditioned on the other
    // parties' outcomes equals its unconditioned marginal, whenever the
    // conditioning event has probability > eps.
    for (int party = 0; party < b.num_parties(); ++party) {
        const auto own_marginal = b.marginal(tests, party);
        const auto rest = b.marginal_excluding(tests, party);
        const auto& dist = b.outcome_distribution(tests);
        for (int idx = 0; idx < static_cast<int>(dist.size()); ++idx) {
            const auto tuple = b.outcome_tuple(tests, idx);
            int rest_idx = 0;
            for (int p = 0; p < b.num_parties(); ++p) {
                if (p == party) continue;
                rest_idx = rest_idx * b.outcome_count(p, tests[static_cast<std::size_t>(p)]) +
                           tuple[static_cast<std::size_t>(p)];
            }
            const double cond_event = rest[static_cast<std::size_t>(rest_idx)];
            if (cond_event <= eps) continue;
            const double conditioned = dist[static_cast<std::size_t>(idx)] / cond_event;
            const double own =
                own_marginal[static_cast<std::size_t>(tuple[static_cast<std::size_t>(party)])];
            if (std::fabs(conditioned - own) > eps) return false;
        }
    }
    return true;
}

} // namespace

bool check_outcome_independence(const HvtModel& m, OiForm form, double eps) {
    for (std::size_t k = 0; k < m.num_lambdas(); ++k) {
        const Behavior& cond = m.conditional(k);
        for (const auto& tuple : cond.test_tuples()) {
            const bool ok = form == OiForm::Factorized
                                ? joint_factorizes(cond, tuple, eps)
                                : conditionals_insensitive(cond, tuple, eps);
            if (!ok) return false;
        }
    }
    return true;
}

SignificanceResult is_descriptively_significant(const HvtModel& m, double eps) {
    if (m.num_lambdas() > kMaxLambdas)
        throw PreconditionError("significance search capped at 10^4 labels");
    if (!check_lambda_independence(m, eps) || !check_parameter_independence(m, eps))
        return {SignificanceStatus::NotApplicable, std::nullopt};

    const auto& tuples = m.conditional(0).test_tuples();
    for (std::size_t a = 0; a < m.num_lambdas(); ++a) {
        for (std::size_t b = a + 1; b < m.num_lambdas(); ++b) {
            for (const auto& tuple : tuples) {
                const auto& da = m.conditional(a).outcome_distribution(tuple);
                const auto& db = m.conditional(b).outcome_distribution(tuple);
                for (std::size_t o = 0; o < da.size(); ++o) {
                    if (std::fabs(da[o] - db[o]) <= eps) continue;
                    const auto outcomes =
                        m.conditional(a).outcome_tuple(tuple, static_cast<int>(o));
                    if (da[o] > eps)
                        return {SignificanceStatus::Witness,
                                SignificanceWitness{a, b, tuple, outcomes, da[o], db[o]}};
                    if (db[o] > eps)
                        return {SignificanceStatus::Witness,
                                SignificanceWitness{b, a, tuple, outcomes, db[o], da[o]}};
                }
            }
        }
    }
    return {SignificanceStatus::NoWitness, std::nullopt};
}

HvtModel single_valued(const Behavior& b) {
    return HvtModel({"l0"}, {b}, std::vector<double>{1.0});
}

namespace {

Behavior deterministic_product_table(int i, int j) {
    std::vector<double> dist(4, 0.0);
    dist[static_cast<std::size_t>(i * 2 + j)] = 1.0;
    std::map<std::vector<int>, std::vector<double>> prob;
    prob[{0, 0}] = std::move(dist);
    return Behavior({"A", "B"}, {{"a"}, {"b"}}, {{2}, {2}}, std::move(prob));
}

} // namespace

HvtModel deterministic_local_model(const JointTable& t) {
    std::vector<std::string> lambdas;
    std::vector<Behavior> conditionals;
    std::vector<double> weights;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double w = t.p(i, j);
            if (w == 0.0) continue; // dead labels add nothing
            std::ostringstream name;
            name << "(" << i << "," << j << ")";
            lambdas.push_back(name.str());
            conditionals.push_back(deterministic_product_table(i, j));
            weights.push_back(w);
        }
    }
    return HvtModel(std::move(lambdas), std::move(conditionals), std::move(weights));
}

HvtModel build_deterministic_signaling(const Behavior& b) {
    // One label per outcome tuple of the per-party maximal outcome counts;
    // under test tuples with fewer outcomes the deterministic conditional
    // clamps, and the prior gives those labels zero weight.
    std::vector<int> max_counts(static_cast<std::size_t>(b.num_parties()), 0);
    for (int p = 0; p < b.num_parties(); ++p)
        for (int t = 0; t < b.num_tests(p); ++t)
            max_counts[static_cast<std::size_t>(p)] =
                std::max(max_counts[static_cast<std::size_t>(p)], b.outcome_count(p, t));

    std::vector<std::vector<int>> labels;
    {
        std::vector<int> cur(max_counts.size(), 0);
        for (;;) {
            labels.push_back(cur);
            int pos = static_cast<int>(cur.size()) - 1;
            while (pos >= 0) {
                if (++cur[static_cast<std::size_t>(pos)] <
                    max_counts[static_cast<std::size_t>(pos)]) break;
                cur[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
        }
    }

    std::vector<std::vector<std::string>> test_labels;
    std::vector<std::vector<int>> outcome_counts;
    for (int p = 0; p < b.num_parties(); ++p) {
        std::vector<std::string> tl;
        std::vector<int> oc;
        for (int t = 0; t < b.num_tests(p); ++t) {
            tl.push_back(b.test_label(p, t));
            oc.push_back(b.outcome_count(p, t));
        }
        test_labels.push_back(std::move(tl));
        outcome_counts.push_back(std::move(oc));
    }

    std::vector<std::string> lambda_names;
    std::vector<Behavior> conditionals;
    for (const auto& label : labels) {
        std::ostringstream name;
        name << "(";
        for (std::size_t p = 0; p < label.size(); ++p)
            name << (p ? "," : "") << label[p];
        name << ")";
        lambda_names.push_back(name.str());

        std::map<std::vector<int>, std::vector<double>> prob;
        for (const auto& tuple : b.test_tuples()) {
            std::vector<int> clamped = label;
            for (int p = 0; p < b.num_parties(); ++p) {
                const int c = b.outcome_count(p, tuple[static_cast<std::size_t>(p)]);
                clamped[static_cast<std::size_t>(p)] =
                    std::min(clamped[static_cast<std::size_t>(p)], c - 1);
            }
            std::vector<double> dist(
                static_cast<std::size_t>(b.num_outcome_tuples(tuple)), 0.0);
            dist[static_cast<std::size_t>(b.outcome_index(tuple, clamped))] = 1.0;
            prob[tuple] = std::move(dist);
        }
        conditionals.emplace_back(b.parties(), test_labels, outcome_counts,
                                  std::move(prob));
    }

    std::map<std::vector<int>, std::vector<double>> prior;
    for (const auto& tuple : b.test_tuples()) {
        std::vector<double> weights(labels.size(), 0.0);
        for (std::size_t k = 0; k < labels.size(); ++k) {
            bool valid = true;
            for (int p = 0; p < b.num_parties(); ++p)
                if (labels[k][static_cast<std::size_t>(p)] >=
                    b.outcome_count(p, tuple[static_cast<std::size_t>(p)]))
                    valid = false;
            if (valid) weights[k] = b.prob(tuple, labels[k]);
        }
        prior[tuple] = std::move(weights);
    }

    return HvtModel(std::move(lambda_names), std::move(conditionals),
                    std::move(prior));
}

namespace {

HvtModel random_positive_model(std::uint64_t seed, double eps) {
    std::mt19937_64 eng(seed);
    const int n_parties = 2 + static_cast<int>(eng() % 2);
    const std::size_t n_lambdas = 1 + eng() % 3;
    const bool factorized = (eng() % 2) == 0;

    std::vector<std::string> parties;
    std::vector<std::vector<std::string>> test_labels;
    std::vector<std::vector<int>> outcome_counts;
    for (int p = 0; p < n_parties; ++p) {
        parties.push_back(std::string(1, static_cast<char>('A' + p)));
        const int n_tests = 1 + static_cast<int>(eng() % 2);
        std::vector<std::string> tl;
        std::vector<int> oc;
        for (int t = 0; t < n_tests; ++t) {
            tl.push_back("t" + std::to_string(t));
            oc.push_back(2 + static_cast<int>(eng() % 2));
        }
        test_labels.push_back(std::move(tl));
        outcome_counts.push_back(std::move(oc));
    }

    const Behavior skeleton = [&] {
        // dummy uniform behavior used only for tuple enumeration helpers
        std::map<std::vector<int>, std::vector<double>> prob;
        Behavior tmp(parties, test_labels, outcome_counts,
                     [&] {
                         std::vector<int> test_counts;
                         for (const auto& tl : test_labels)
                             test_counts.push_back(static_cast<int>(tl.size()));
                         std::map<std::vector<int>, std::vector<double>> pr;
                         std::vector<int> cur(test_counts.size(), 0);
                         for (;;) {
                             int n = 1;
                             for (int p = 0; p < n_parties; ++p)
                                 n *= outcome_counts[static_cast<std::size_t>(p)]
                                                    [static_cast<std::size_t>(
                                                        cur[static_cast<std::size_t>(p)])];
                             pr[cur] = std::vector<double>(
                                 static_cast<std::size_t>(n), 1.0 / n);
                             int pos = static_cast<int>(cur.size()) - 1;
                             while (pos >= 0) {
                                 if (++cur[static_cast<std::size_t>(pos)] <
                                     test_counts[static_cast<std::size_t>(pos)]) break;
                                 cur[static_cast<std::size_t>(pos)] = 0;
                                 --pos;
                             }
                             if (pos < 0) break;
                         }
                         return pr;
                     }());
        return tmp;
    }();

    std::vector<Behavior> conditionals;
    for (std::size_t k = 0; k < n_lambdas; ++k) {
        std::map<std::vector<int>, std::vector<double>> prob;
        for (const auto& tuple : skeleton.test_tuples()) {
            const int n = skeleton.num_outcome_tuples(tuple);
            std::vector<double> dist(static_cast<std::size_t>(n));
            if (factorized) {
                std::vector<std::vector<double>> margs;
                for (int p = 0; p < n_parties; ++p) {
                    const int c = skeleton.outcome_count(
                        p, tuple[static_cast<std::size_t>(p)]);
                    std::vector<double> marg(static_cast<std::size_t>(c));
                    double sum = 0.0;
                    for (double& x : marg) {
                        x = 0.05 + uniform_unit(eng);
                        sum += x;
                    }
                    for (double& x : marg) x /= sum;
                    margs.push_back(std::move(marg));
                }
                for (int idx = 0; idx < n; ++idx) {
                    const auto tup = skeleton.outcome_tuple(tuple, idx);
                    double prod = 1.0;
                    for (int p = 0; p < n_parties; ++p)
                        prod *= margs[static_cast<std::size_t>(p)]
                                     [static_cast<std::size_t>(
                                         tup[static_cast<std::size_t>(p)])];
                    dist[static_cast<std::size_t>(idx)] = prod;
                }
            } else {
                double sum = 0.0;
                for (double& x : dist) {
                    x = 0.05 + uniform_unit(eng);
                    sum += x;
                }
                for (double& x : dist) x /= sum;
            }
            prob[tuple] = std::move(dist);
        }
        conditionals.emplace_back(parties, test_labels, outcome_counts,
                                  std::move(prob), eps);
    }

    std::vector<std::string> names;
    std::vector<double> weights(n_lambdas);
    double wsum = 0.0;
    for (std::size_t k = 0; k < n_lambdas; ++k) {
        names.push_back("l" + std::to_string(k));
        weights[k] = 0.1 + uniform_unit(eng);
        wsum += weights[k];
    }
    for (double& w : weights) w /= wsum;
    return HvtModel(std::move(names), std::move(conditionals), std::move(weights));
}

} // namespace

OiSweepReport oi_equivalence_sweep(int samples, std::uint64_t seed,
                                   ExecMode mode, double eps) {
    if (samples < 1) throw PreconditionError("sweep needs at least one sample");
    std::vector<unsigned char> fact(static_cast<std::size_t>(samples));
    std::vector<unsigned char> cond(static_cast<std::size_t>(samples));
    parallel_for(static_cast<std::size_t>(samples), mode, [&](std::size_t i) {
        const HvtModel m = random_positive_model(task_seed(seed, i), eps);
        fact[i] = check_outcome_independence(m, OiForm::Factorized, eps) ? 1 : 0;
        cond[i] = check_outcome_independence(m, OiForm::Conditional, eps) ? 1 : 0;
    });
    OiSweepReport report{samples, 0, 0};
    for (int i = 0; i < samples; ++i) {
        if (fact[static_cast<std::size_t>(i)] != cond[static_cast<std::size_t>(i)])
            ++report.disagreements;
        if (fact[static_cast<std::size_t>(i)]) ++report.factorized_true;
    }
    return report;
}

} // namespace gptv
