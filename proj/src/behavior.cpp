#include "gptv/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gptv/errors.hpp"

namespace gptv {

namespace {

std::string tuple_str(const std::vector<int>& t) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
    os << ")";
    return os.str();
}

std::vector<std::vector<int>> enumerate_tuples(const std::vector<int>& counts) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(counts.size(), 0);
    for (;;) {
        out.push_back(cur);
        int pos = static_cast<int>(counts.size()) - 1;
        while (pos >= 0) {
            if (++cur[static_cast<std::size_t>(pos)] < counts[static_cast<std::size_t>(pos)]) break;
            cur[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return out;
}

} // namespace

Behavior::Behavior(std::vector<std::string> parties,
                   std::vector<std::vector<std::string>> test_labels,
                   std::vector<std::vector<int>> outcome_counts,
                   std::map<std::vector<int>, std::vector<double>> prob,
                   double eps)
    : parties_(std::move(parties)),
      test_labels_(std::move(test_labels)),
      outcome_counts_(std::move(outcome_counts)),
      prob_(std::move(prob)) {
    const std::size_t n = parties_.size();
    if (n == 0) throw ValidationError("behavior needs at least one party");
    if (test_labels_.size() != n || outcome_counts_.size() != n)
        throw ValidationError("per-party test/outcome lists do not match party count");

    std::vector<int> test_counts(n);
    for (std::size_t p = 0; p < n; ++p) {
        if (test_labels_[p].empty())
            throw ValidationError("party " + parties_[p] + " has no tests");
        if (outcome_counts_[p].size() != test_labels_[p].size())
            throw ValidationError("party " + parties_[p] +
                                  ": outcome counts do not match test labels");
        for (int c : outcome_counts_[p])
            if (c < 1) throw ValidationError("party " + parties_[p] +
                                             " has a test with no outcomes");
        test_counts[p] = static_cast<int>(test_labels_[p].size());
    }
    tuples_ = enumerate_tuples(test_counts);

    for (const auto& tuple : tuples_) {
        auto it = prob_.find(tuple);
        if (it == prob_.end())
            throw ValidationError("missing distribution for test tuple " + tuple_str(tuple));
        auto& dist = it->second;
        if (static_cast<int>(dist.size()) != num_outcome_tuples(tuple))
            throw ValidationError("distribution size mismatch for test tuple " +
                                  tuple_str(tuple));
        double sum = 0.0;
        for (double& p : dist) {
            if (!std::isfinite(p) || p < -eps)
                throw ValidationError("negative probability in test tuple " +
                                      tuple_str(tuple));
            p = clamp_probability(p, eps);
            sum += p;
        }
        if (std::fabs(sum - 1.0) > kNormTol)
            throw ValidationError("outcome probabilities for test tuple " +
                                  tuple_str(tuple) + " sum to " + std::to_string(sum));
        for (double& p : dist) p /= sum;
    }
    if (prob_.size() != tuples_.size())
        throw ValidationError("distributions supplied for unknown test tuples");
}

const std::vector<double>&
Behavior::outcome_distribution(const std::vector<int>& tests) const {
    auto it = prob_.find(tests);
    if (it == prob_.end())
        throw ValidationError("unknown test tuple " + tuple_str(tests));
    return it->second;
}

int Behavior::num_outcome_tuples(const std::vector<int>& tests) const {
    int n = 1;
    for (int p = 0; p < num_parties(); ++p)
        n *= outcome_count(p, tests[static_cast<std::size_t>(p)]);
    return n;
}

int Behavior::outcome_index(const std::vector<int>& tests,
                            const std::vector<int>& outcomes) const {
    int idx = 0;
    for (int p = 0; p < num_parties(); ++p) {
        const int c = outcome_count(p, tests[static_cast<std::size_t>(p)]);
        const int o = outcomes[static_cast<std::size_t>(p)];
        if (o < 0 || o >= c)
            throw ValidationError("outcome out of range for test tuple " +
                                  tuple_str(tests));
        idx = idx * c + o;
    }
    return idx;
}

std::vector<int> Behavior::outcome_tuple(const std::vector<int>& tests,
                                         int index) const {
    std::vector<int> out(static_cast<std::size_t>(num_parties()));
    for (int p = num_parties() - 1; p >= 0; --p) {
        const int c = outcome_count(p, tests[static_cast<std::size_t>(p)]);
        out[static_cast<std::size_t>(p)] = index % c;
        index /= c;
    }
    return out;
}

double Behavior::prob(const std::vector<int>& tests,
                      const std::vector<int>& outcomes) const {
    return outcome_distribution(tests)[static_cast<std::size_t>(
        outcome_index(tests, outcomes))];
}

std::vector<double> Behavior::marginal(const std::vector<int>& tests,
                                       int party) const {
    const auto& dist = outcome_distribution(tests);
    std::vector<double> m(static_cast<std::size_t>(
        outcome_count(party, tests[static_cast<std::size_t>(party)])), 0.0);
    for (int idx = 0; idx < static_cast<int>(dist.size()); ++idx) {
        const auto tuple = outcome_tuple(tests, idx);
        m[static_cast<std::size_t>(tuple[static_cast<std::size_t>(party)])] +=
            dist[static_cast<std::size_t>(idx)];
    }
    return m;
}

std::vector<double> Behavior::marginal_excluding(const std::vector<int>& tests,
                                                 int party) const {
    const auto& dist = outcome_distribution(tests);
    const int own = outcome_count(party, tests[static_cast<std::size_t>(party)]);
    std::vector<double> m(dist.size() / static_cast<std::size_t>(own), 0.0);
    for (int idx = 0; idx < static_cast<int>(dist.size()); ++idx) {
        auto tuple = outcome_tuple(tests, idx);
        // index of the tuple with `party` removed, row-major over the rest
        int rest = 0;
        for (int p = 0; p < num_parties(); ++p) {
            if (p == party) continue;
            rest = rest * outcome_count(p, tests[static_cast<std::size_t>(p)]) +
                   tuple[static_cast<std::size_t>(p)];
        }
        m[static_cast<std::size_t>(rest)] += dist[static_cast<std::size_t>(idx)];
    }
    return m;
}

bool Behavior::same_structure(const Behavior& other) const {
    return parties_ == other.parties_ && test_labels_ == other.test_labels_ &&
           outcome_counts_ == other.outcome_counts_;
}

double Behavior::max_difference(const Behavior& other) const {
    if (!same_structure(other))
        throw ValidationError("behaviors have different structure");
    double d = 0.0;
    for (const auto& tuple : tuples_) {
        const auto& a = outcome_distribution(tuple);
        const auto& b = other.outcome_distribution(tuple);
        for (std::size_t i = 0; i < a.size(); ++i)
            d = std::max(d, std::fabs(a[i] - b[i]));
    }
    return d;
}

Behavior behavior_from_table(const JointTable& t) {
    std::map<std::vector<int>, std::vector<double>> prob;
    prob[{0, 0}] = {t.p00(), t.p01(), t.p10(), t.p11()};
    return Behavior({"A", "B"}, {{"a"}, {"b"}}, {{2}, {2}}, std::move(prob));
}

JointTable table_from_behavior(const Behavior& b, Purity purity) {
    if (b.num_parties() != 2 || b.num_tests(0) != 1 || b.num_tests(1) != 1 ||
        b.outcome_count(0, 0) != 2 || b.outcome_count(1, 0) != 2)
        throw ValidationError("behavior is not a single binary test per party");
    const auto& d = b.outcome_distribution({0, 0});
    return JointTable(d[0], d[1], d[2], d[3], purity);
}

Behavior pr_box() {
    std::map<std::vector<int>, std::vector<double>> prob;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            std::vector<double> dist(4, 0.0);
            for (int a = 0; a < 2; ++a)
                for (int bo = 0; bo < 2; ++bo)
                    if ((a ^ bo) == (x & y))
                        dist[static_cast<std::size_t>(a * 2 + bo)] = 0.5;
            prob[{x, y}] = dist;
        }
    return Behavior({"A", "B"}, {{"x0", "x1"}, {"y0", "y1"}},
                    {{2, 2}, {2, 2}}, std::move(prob));
}

std::vector<NoSignalingViolation> check_no_signaling(const Behavior& b,
                                                     double eps) {
    std::vector<NoSignalingViolation> report;
    for (int party = 0; party < b.num_parties(); ++party) {
        for (int own = 0; own < b.num_tests(party); ++own) {
            // All test tuples with this party's test fixed; the first one
            // is the reference context.
            std::vector<const std::vector<int>*> contexts;
            for (const auto& tuple : b.test_tuples())
                if (tuple[static_cast<std::size_t>(party)] == own)
                    contexts.push_back(&tuple);
            if (contexts.size() < 2) continue;
            const auto ref = b.marginal(*contexts[0], party);
            for (std::size_t c = 1; c < contexts.size(); ++c) {
                const auto m = b.marginal(*contexts[c], party);
                for (std::size_t o = 0; o < m.size(); ++o) {
                    if (std::fabs(m[o] - ref[o]) > eps) {
                        report.push_back(NoSignalingViolation{
                            party, *contexts[0], *contexts[c],
                            static_cast<int>(o), ref[o], m[o]});
                    }
                }
            }
        }
    }
    return report;
}

} // namespace gptv
