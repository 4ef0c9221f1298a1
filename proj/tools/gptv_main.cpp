#include <charconv>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "gptv/errors.hpp"
#include "gptv/gpt_core.hpp"
#include "gptv/hvt.hpp"
#include "gptv/numeric.hpp"
#include "gptv/quantum.hpp"
#include "gptv/serialize.hpp"
#include "gptv/steering.hpp"
#include "gptv/tables.hpp"

using namespace gptv;

namespace {

struct Config {
    double tolerance = kProbEps;
    std::uint64_t seed = 1;
    int samples = 500;
    int grid = 50;
    std::string out;
    std::string input;
    std::vector<std::string> inputs;
};

void check_config(const Config& c) {
    if (!(c.tolerance >= 1e-14 && c.tolerance <= 1e-3)) {
        throw ValidationError("tolerance must lie in [1e-14, 1e-3]");
    }
    if (c.samples < 1 || c.samples > 1'000'000) {
        throw ValidationError("samples must lie in [1, 1000000]");
    }
    if (c.grid < 1 || c.grid > 256) {
        throw ValidationError("grid must lie in [1, 256]");
    }
}

// Shortest round-trip decimal rendering; keeps reports byte-stable.
std::string fmt(double x) {
    char buf[40];
    auto r = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, r.ptr);
}

std::string entry_text(const std::complex<double>& z) {
    if (z.imag() == 0.0) return fmt(z.real());
    return fmt(z.real()) + (z.imag() < 0.0 ? "-" : "+") + fmt(std::abs(z.imag())) + "i";
}

std::string matrix_text(const Cmat& m) {
    std::string out = "[";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        out += r ? ", [" : "[";
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out += ", ";
            out += entry_text(m(r, c));
        }
        out += "]";
    }
    return out + "]";
}

std::string join_text(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out;
}

std::string vector_text(const std::vector<double>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += fmt(v[i]);
    }
    return out + "]";
}

std::string table_text(const JointTable& t) {
    return "[[" + fmt(t.p00()) + ", " + fmt(t.p01()) + "], [" + fmt(t.p10()) +
           ", " + fmt(t.p11()) + "]]";
}

std::string purity_text(Purity p) {
    switch (p) {
        case Purity::DeclaredPure: return "declared pure";
        case Purity::DeclaredMixed: return "declared mixed";
        default: return "purity unknown";
    }
}

std::string state_text(const SteeredState& s) {
    if (const auto* m = std::get_if<Cmat>(&s)) return matrix_text(*m);
    if (const auto* v = std::get_if<StateVector>(&s)) return vector_text(v->coords);
    const auto& col = std::get<TableColumn>(s);
    return "[" + fmt(col.p0) + ", " + fmt(col.p1) + "]";
}

std::string verdict_text(SpookyVerdict v) {
    switch (v) {
        case SpookyVerdict::Spooky:
            return "Spooky — nonzero determinant on a declared-pure table";
        case SpookyVerdict::NotSpookyWitnessed:
            return "NotSpookyWitnessed — determinant within tolerance; this table "
                   "proves nothing spooky";
        default:
            return "Inconclusive — nonzero determinant, but without declared purity "
                   "a classical mixture explains the table";
    }
}

void emit_artifact(const Config& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        save_text(cfg.out, text);
    }
}

void run_spooky_check(const Config& cfg) {
    JointTable t = table_from_json(load_json(cfg.input));
    std::cout << "table: " << table_text(t) << " (" << purity_text(t.purity()) << ")\n";
    double det = spooky_determinant(t);
    std::cout << "det = " << fmt(det) << "\n";
    if (auto f = factorize(t, cfg.tolerance)) {
        std::cout << "factorization: A-marginals [" << fmt(f->q0) << ", " << fmt(f->q1)
                  << "], B-marginals [" << fmt(f->r0) << ", " << fmt(f->r1) << "]\n";
    } else {
        std::cout << "factorization: none (each entry deviates from the marginal "
                     "product by " << fmt(std::abs(det)) << ")\n";
    }
    std::cout << "verdict: " << verdict_text(spooky_verdict(t, cfg.tolerance)) << "\n";
}

void print_certificate_trace(const SteeringCertificate& c) {
    double v0 = test_effect_value(c.test, 0, c.alpha0);
    double v1 = test_effect_value(c.test, 0, c.alpha1);
    std::cout << "ensemble: weight p0 = " << fmt(c.p0) << " prepares "
              << state_text(c.alpha0) << ",\n          weight p1 = " << fmt(c.p1)
              << " prepares " << state_text(c.alpha1) << "\n";
    std::cout << "witness effect values: <a0|alpha0> = " << fmt(v0)
              << ", <a0|alpha1> = " << fmt(v1) << "\n";
    std::cout << "effect difference: w = " << fmt(c.w) << "\n";
    std::cout << "assembled table: " << table_text(c.source_table) << "\n";
    std::cout << "determinant identity: det = p0 * p1 * w = " << fmt(c.det) << "\n";
    std::cout << "conditioning difference: det / (p0 * p1) = " << fmt(c.difference)
              << "\n";
    if (c.near_degenerate) {
        std::cout << "note: |det| <= 1e-06 — near-degenerate, conditioning on this "
                     "witness is numerically delicate\n";
    }
}

void run_steer(const Config& cfg) {
    Json j = load_json(cfg.input);
    SteeringCertificate c = [&] {
        if (j.contains("joint")) {
            QuantumScenario s = scenario_from_json(j);
            std::cout << "scenario: dA = " << s.da() << ", dB = " << s.db()
                      << ", measuring B steers A\n";
            return certify_from_scenario(s, cfg.tolerance);
        }
        if (j.contains("table")) {
            JointTable t = table_from_json(j);
            std::cout << "bare table: " << table_text(t)
                      << " — columns become the steered states\n";
            return certify_from_table(t, cfg.tolerance);
        }
        throw ValidationError("input is neither a scenario (no \"joint\" field) "
                              "nor a table (no \"table\" field)");
    }();
    print_certificate_trace(c);
    std::cout << "verdict: " << verdict_text(spooky_verdict(c.source_table, cfg.tolerance))
              << "\n";
    std::string artifact = dump_json(certificate_to_json(c));
    if (cfg.out.empty()) {
        std::cout << "certificate:\n" << artifact;
    } else {
        save_text(cfg.out, artifact);
        std::cout << "certificate: written to " << cfg.out << "\n";
    }
}

void run_hvt_check(const Config& cfg) {
    Json j = load_json(cfg.input);
    HvtModel m = model_from_json(j);
    Behavior rec = reconstruct(m);
    if (j.contains("behavior")) {
        Behavior ref = behavior_from_json(j.at("behavior"));
        if (!rec.same_structure(ref)) {
            std::cout << "equivalence: no — reference behavior has a different "
                         "test/outcome structure\n";
        } else {
            double dev = rec.max_difference(ref);
            std::cout << "equivalence: "
                      << (dev <= cfg.tolerance ? "yes — model reconstructs the "
                                                 "reference behavior"
                                               : "no — reconstruction differs from "
                                                 "the reference")
                      << " (max deviation " << fmt(dev) << ")\n";
        }
    } else {
        std::cout << "equivalence: reconstruction computed; no reference behavior "
                     "supplied\n";
    }
    bool li = check_lambda_independence(m, cfg.tolerance);
    bool pi = check_parameter_independence(m, cfg.tolerance);
    std::cout << "lambda-independence: " << (li ? "holds" : "fails") << "\n";
    std::cout << "parameter-independence: " << (pi ? "holds" : "fails") << "\n";
    bool oi_f = check_outcome_independence(m, OiForm::Factorized, cfg.tolerance);
    bool oi_c = check_outcome_independence(m, OiForm::Conditional, cfg.tolerance);
    if (oi_f == oi_c) {
        std::cout << "outcome-independence: " << (oi_f ? "holds" : "fails")
                  << " (factorized and conditional forms agree)\n";
    } else {
        std::cout << "outcome-independence: factorized form "
                  << (oi_f ? "holds" : "fails") << ", conditional form "
                  << (oi_c ? "holds" : "fails") << "\n";
    }
    SignificanceResult sig = is_descriptively_significant(m, cfg.tolerance);
    switch (sig.status) {
        case SignificanceStatus::Witness: {
            const auto& w = *sig.witness;
            std::cout << "significance: witness — conditionals genuinely vary with "
                         "lambda\n";
            std::cout << "  lambda \"" << m.lambdas()[w.lambda_a] << "\" vs \""
                      << m.lambdas()[w.lambda_b] << "\" at tests ("
                      << join_text(w.tests) << ") outcomes (" << join_text(w.outcomes)
                      << "): " << fmt(w.value_a) << " vs " << fmt(w.value_b) << "\n";
            break;
        }
        case SignificanceStatus::NoWitness:
            std::cout << "significance: no witness — exhaustive search found no "
                         "lambda pair that predicts differently\n";
            break;
        default:
            std::cout << "significance: not applicable — requires lambda-independence "
                         "and parameter independence\n";
    }
}

void run_local_model(const Config& cfg) {
    JointTable t = table_from_json(load_json(cfg.input));
    emit_artifact(cfg, dump_json(model_to_json(deterministic_local_model(t))));
}

void run_complementarity(const Config& cfg) {
    ConvexStateSpace space = theory_from_json(load_json(cfg.inputs[0]));
    Proposition a = make_proposition(space, test_from_json(load_json(cfg.inputs[1])),
                                     cfg.tolerance);
    Proposition b = make_proposition(space, test_from_json(load_json(cfg.inputs[2])),
                                     cfg.tolerance);
    std::cout << "both inputs are propositions (value-1 and value-0 witness states "
                 "exist)\n";
    auto witness = find_common_sharp_state(space, {a, b}, cfg.tolerance);
    if (!witness) {
        std::cout << "verdict: complementary — no state is sharp for both tests\n";
    } else {
        std::cout << "verdict: not complementary\n";
        std::cout << "witness: common sharp state " << vector_text(witness->coords)
                  << " (first-effect values "
                  << fmt(evaluate(a.test.effects[0], *witness)) << ", "
                  << fmt(evaluate(b.test.effects[0], *witness)) << ")\n";
    }
}

void run_reduce(const Config& cfg) {
    ConvexStateSpace space = theory_from_json(load_json(cfg.inputs[0]));
    std::vector<Proposition> props;
    for (std::size_t i = 1; i < cfg.inputs.size(); ++i) {
        props.push_back(make_proposition(space, test_from_json(load_json(cfg.inputs[i])),
                                         cfg.tolerance));
    }
    auto [first, second] = reduce_to_two(space, props, cfg.tolerance);
    std::cout << "input family: " << props.size()
              << " propositions with no common sharp state\n";
    std::cout << "reduced pair is complementary\n";
    Json artifact;
    artifact["first"] = test_to_json(first.test);
    artifact["second"] = test_to_json(second.test);
    std::string text = dump_json(artifact);
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        save_text(cfg.out, text);
        std::cout << "pair written to " << cfg.out << "\n";
    }
}

void print_scenario_report(const QuantumScenario& s, const Config& cfg) {
    JointTable t = born_table(s);
    std::cout << "born table: " << table_text(t) << " (" << purity_text(t.purity())
              << ")\n";
    std::cout << "det = " << fmt(spooky_determinant(t)) << "\n";
    std::cout << "verdict: " << verdict_text(spooky_verdict(t, cfg.tolerance)) << "\n";
    Assemblage asm_ = steer(s);
    for (std::size_t i = 0; i < asm_.size(); ++i) {
        std::cout << "steered operator " << i << " (outcome \"" << s.labels_b()[i]
                  << "\", weight " << fmt(asm_.weight(i))
                  << "): " << state_text(asm_.element(i)) << "\n";
    }
    SteeringCertificate c = certify_from_scenario(s, cfg.tolerance);
    std::cout << "certificate: w = " << fmt(c.w) << ", det = " << fmt(c.det)
              << ", difference = " << fmt(c.difference) << "\n";
    auto norm = normalize_assemblage(asm_, cfg.tolerance);
    if (auto d = discriminable_steering_check(norm.ensemble, cfg.tolerance)) {
        std::cout << "conclusive discrimination: value " << fmt(d->value)
                  << " (witness effect vanishes on member " << (d->swapped ? 1 : 0)
                  << "); induced certificate det = " << fmt(d->certificate.det)
                  << "\n";
    } else {
        std::cout << "conclusive discrimination: none — no effect separates the "
                     "members conclusively\n";
    }
}

void run_cat(const Config& cfg) {
    CatScenarios cs = cat_scenarios();
    std::cout << "== variant 1: single-system pair ==\n";
    std::cout << "first test outcomes: {" << cs.v1.labels_first[0] << ", "
              << cs.v1.labels_first[1] << "}\n";
    std::cout << "second test outcomes: {" << cs.v1.labels_second[0] << ", "
              << cs.v1.labels_second[1] << "}\n";
    std::cout << "complementary: "
              << (are_complementary(cs.v1.first, cs.v1.second) ? "yes" : "no")
              << " (support intersections of all four outcome pairs are trivial)\n";
    std::cout << "\n== variant 2: entangled pair, orthogonal branches ==\n";
    print_scenario_report(cs.v2, cfg);
    std::cout << "\n== variant 3: entangled pair, overlapping branches ==\n";
    print_scenario_report(cs.v3, cfg);
}

void run_figure(const Config& cfg) {
    emit_artifact(cfg, paraboloid_csv(paraboloid_sample(cfg.grid, ExecMode::Parallel)));
}

void run_sweep(const Config& cfg) {
    EquivalenceSweepReport r = equivalence_sweep(cfg.samples, cfg.seed,
                                                 ExecMode::Parallel, cfg.tolerance);
    std::ostringstream os;
    os << "samples: " << r.samples << "\n";
    os << "seed: " << cfg.seed << "\n";
    os << "spooky scenarios: " << r.spooky_count << "\n";
    os << r.divergences << " divergences\n";
    for (std::uint64_t s : r.divergent_seeds) {
        os << "divergent scenario seed: " << s << "\n";
    }
    emit_artifact(cfg, os.str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spookiness, steering and complementarity checks for "
                 "finite probabilistic theories"};
    app.require_subcommand(1);
    Config cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--tolerance", cfg.tolerance,
                        "numeric tolerance (default 1e-09)")
            ->envname("GPTV_TOLERANCE");
        sub->add_option("--out", cfg.out, "write the artifact to this file");
        return sub;
    };

    auto wrap = [&](auto fn) {
        return [&, fn] {
            check_config(cfg);
            fn(cfg);
        };
    };

    auto* spooky = add_common(app.add_subcommand(
        "spooky-check", "determinant criterion on a joint table"));
    spooky->add_option("input", cfg.input, "table JSON")->required();
    spooky->callback(wrap(run_spooky_check));

    auto* steer_cmd = add_common(app.add_subcommand(
        "steer", "steering certificate from a scenario or a bare table"));
    steer_cmd->add_option("input", cfg.input, "scenario or table JSON")->required();
    steer_cmd->callback(wrap(run_steer));

    auto* hvt = add_common(app.add_subcommand(
        "hvt-check", "hidden-variable model predicates and significance"));
    hvt->add_option("input", cfg.input, "model JSON")->required();
    hvt->callback(wrap(run_hvt_check));

    auto* local = add_common(app.add_subcommand(
        "local-model", "deterministic local model for a factorizable table"));
    local->add_option("input", cfg.input, "table JSON")->required();
    local->callback(wrap(run_local_model));

    auto* comp = add_common(app.add_subcommand(
        "complementarity", "no-common-sharp-state check for two propositions"));
    comp->add_option("inputs", cfg.inputs, "theory JSON, then two test JSONs")
        ->required()
        ->expected(3);
    comp->callback(wrap(run_complementarity));

    auto* reduce = add_common(app.add_subcommand(
        "reduce", "collapse a proposition family to a complementary pair"));
    reduce->add_option("inputs", cfg.inputs, "theory JSON, then two or more test JSONs")
        ->required()
        ->expected(-3);
    reduce->callback(wrap(run_reduce));

    auto* cat = add_common(app.add_subcommand(
        "cat", "the three built-in cat-and-electron constructions"));
    cat->callback(wrap(run_cat));

    auto* figure = add_common(app.add_subcommand(
        "figure", "CSV of determinant residuals over the probability tetrahedron"));
    figure->add_option("--grid", cfg.grid, "grid resolution (default 50)");
    figure->callback(wrap(run_figure));

    auto* sweep = add_common(app.add_subcommand(
        "sweep", "spooky/steerable/determinant equivalence on random scenarios"));
    sweep->add_option("--samples", cfg.samples, "scenario count (default 500)");
    sweep->add_option("--seed", cfg.seed, "base seed (default 1)");
    sweep->callback(wrap(run_sweep));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const InternalInconsistencyError& e) {
        std::cerr << "internal inconsistency (please report): " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
