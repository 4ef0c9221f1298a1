#include "gptv/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gptv/errors.hpp"

namespace gptv {

namespace {

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw ValidationError(std::string("missing field '") + key + "'");
    }
    return j.at(key);
}

double as_double(const Json& j, const char* what) {
    if (!j.is_number()) {
        throw ValidationError(std::string(what) + " must be a number");
    }
    return j.get<double>();
}

int as_int(const Json& j, const char* what) {
    if (!j.is_number_integer()) {
        throw ValidationError(std::string(what) + " must be an integer");
    }
    return j.get<int>();
}

std::string as_string(const Json& j, const char* what) {
    if (!j.is_string()) {
        throw ValidationError(std::string(what) + " must be a string");
    }
    return j.get<std::string>();
}

std::vector<double> vec_from_json(const Json& j, const char* what) {
    if (!j.is_array()) {
        throw ValidationError(std::string(what) + " must be an array");
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& x : j) out.push_back(as_double(x, what));
    return out;
}

std::vector<std::vector<double>> rows_from_json(const Json& j, const char* what) {
    if (!j.is_array()) {
        throw ValidationError(std::string(what) + " must be an array of rows");
    }
    std::vector<std::vector<double>> out;
    out.reserve(j.size());
    for (const auto& r : j) out.push_back(vec_from_json(r, what));
    return out;
}

std::vector<std::string> strings_from_json(const Json& j, const char* what) {
    if (!j.is_array()) {
        throw ValidationError(std::string(what) + " must be an array");
    }
    std::vector<std::string> out;
    out.reserve(j.size());
    for (const auto& s : j) out.push_back(as_string(s, what));
    return out;
}

std::vector<int> ints_from_json(const Json& j, const char* what) {
    if (!j.is_array()) {
        throw ValidationError(std::string(what) + " must be an array");
    }
    std::vector<int> out;
    out.reserve(j.size());
    for (const auto& x : j) out.push_back(as_int(x, what));
    return out;
}

std::string purity_to_string(Purity p) {
    switch (p) {
        case Purity::DeclaredPure: return "pure";
        case Purity::DeclaredMixed: return "mixed";
        default: return "unknown";
    }
}

Purity purity_from_string(const std::string& s) {
    if (s == "pure") return Purity::DeclaredPure;
    if (s == "mixed") return Purity::DeclaredMixed;
    if (s == "unknown") return Purity::Unknown;
    throw ValidationError("purity must be \"pure\", \"mixed\" or \"unknown\", got \"" + s + "\"");
}

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

std::vector<int> split_ints(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t pos = 0;
            int v = std::stoi(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ValidationError("prior key '" + s + "' is not a comma-separated test tuple");
        }
    }
    if (out.empty()) {
        throw ValidationError("prior key '" + s + "' is empty");
    }
    return out;
}

} // namespace

Json table_to_json(const JointTable& t) {
    Json j;
    j["table"] = {{t.p00(), t.p01()}, {t.p10(), t.p11()}};
    j["purity"] = purity_to_string(t.purity());
    return j;
}

JointTable table_from_json(const Json& j) {
    auto rows = rows_from_json(field(j, "table"), "table entry");
    if (rows.size() != 2 || rows[0].size() != 2 || rows[1].size() != 2) {
        throw ValidationError("table must be a 2x2 array");
    }
    Purity purity = Purity::Unknown;
    if (j.contains("purity")) {
        purity = purity_from_string(as_string(j.at("purity"), "purity"));
    }
    return JointTable(rows[0][0], rows[0][1], rows[1][0], rows[1][1], purity);
}

Json behavior_to_json(const Behavior& b) {
    Json j;
    j["parties"] = b.parties();
    Json tests = Json::array();
    Json counts = Json::array();
    for (int p = 0; p < b.num_parties(); ++p) {
        Json labels = Json::array();
        Json cnt = Json::array();
        for (int t = 0; t < b.num_tests(p); ++t) {
            labels.push_back(b.test_label(p, t));
            cnt.push_back(b.outcome_count(p, t));
        }
        tests.push_back(labels);
        counts.push_back(cnt);
    }
    j["tests"] = tests;
    j["outcome_counts"] = counts;
    Json probs = Json::array();
    for (const auto& tuple : b.test_tuples()) {
        Json entry;
        entry["tests"] = tuple;
        entry["dist"] = b.outcome_distribution(tuple);
        probs.push_back(entry);
    }
    j["probabilities"] = probs;
    return j;
}

Behavior behavior_from_json(const Json& j) {
    auto parties = strings_from_json(field(j, "parties"), "parties");

    const Json& tests = field(j, "tests");
    if (!tests.is_array()) throw ValidationError("tests must be an array");
    std::vector<std::vector<std::string>> test_labels;
    for (const auto& per_party : tests) {
        test_labels.push_back(strings_from_json(per_party, "test label"));
    }

    const Json& counts = field(j, "outcome_counts");
    if (!counts.is_array()) throw ValidationError("outcome_counts must be an array");
    std::vector<std::vector<int>> outcome_counts;
    for (const auto& per_party : counts) {
        outcome_counts.push_back(ints_from_json(per_party, "outcome count"));
    }

    const Json& probs = field(j, "probabilities");
    if (!probs.is_array()) throw ValidationError("probabilities must be an array");
    std::map<std::vector<int>, std::vector<double>> prob;
    for (const auto& entry : probs) {
        auto tuple = ints_from_json(field(entry, "tests"), "test index");
        auto dist = vec_from_json(field(entry, "dist"), "probability");
        if (!prob.emplace(std::move(tuple), std::move(dist)).second) {
            throw ValidationError("duplicate probability entry for a test tuple");
        }
    }
    return Behavior(std::move(parties), std::move(test_labels),
                    std::move(outcome_counts), std::move(prob));
}

Json model_to_json(const HvtModel& m) {
    Json j;
    j["lambdas"] = m.lambdas();
    Json prior;
    if (m.prior_is_shared()) {
        prior["any"] = m.shared_prior();
    } else {
        for (const auto& [tuple, weights] : m.per_test_priors()) {
            prior[join_ints(tuple)] = weights;
        }
    }
    j["prior"] = prior;
    Json conds = Json::array();
    for (const auto& c : m.conditionals()) conds.push_back(behavior_to_json(c));
    j["conditionals"] = conds;
    return j;
}

HvtModel model_from_json(const Json& j) {
    auto lambdas = strings_from_json(field(j, "lambdas"), "lambda label");

    const Json& conds = field(j, "conditionals");
    if (!conds.is_array()) throw ValidationError("conditionals must be an array");
    std::vector<Behavior> conditionals;
    conditionals.reserve(conds.size());
    for (const auto& c : conds) conditionals.push_back(behavior_from_json(c));

    const Json& prior = field(j, "prior");
    if (!prior.is_object() || prior.empty()) {
        throw ValidationError("prior must be a non-empty object");
    }
    if (prior.contains("any")) {
        if (prior.size() != 1) {
            throw ValidationError("prior with \"any\" key cannot list per-test entries");
        }
        return HvtModel(std::move(lambdas), std::move(conditionals),
                        vec_from_json(prior.at("any"), "prior weight"));
    }
    std::map<std::vector<int>, std::vector<double>> per_test;
    for (const auto& [key, weights] : prior.items()) {
        per_test[split_ints(key)] = vec_from_json(weights, "prior weight");
    }
    return HvtModel(std::move(lambdas), std::move(conditionals), std::move(per_test));
}

Json theory_to_json(const ConvexStateSpace& s) {
    Json j;
    j["dim"] = s.dim();
    j["vertices"] = s.vertices();
    j["unit_effect"] = s.unit_effect();
    return j;
}

ConvexStateSpace theory_from_json(const Json& j) {
    auto vertices = rows_from_json(field(j, "vertices"), "vertex coordinate");
    auto unit = vec_from_json(field(j, "unit_effect"), "unit effect coordinate");
    ConvexStateSpace space(std::move(vertices), std::move(unit));
    if (j.contains("dim")) {
        int dim = as_int(j.at("dim"), "dim");
        if (dim != space.dim()) {
            throw ValidationError("dim does not match the unit effect length");
        }
    }
    return space;
}

Json test_to_json(const TestSpec& t) {
    Json effects = Json::array();
    for (const auto& e : t.effects) effects.push_back(e.coords);
    Json j;
    j["effects"] = effects;
    return j;
}

TestSpec test_from_json(const Json& j) {
    auto rows = rows_from_json(field(j, "effects"), "effect coordinate");
    if (rows.empty()) throw ValidationError("test needs at least one effect");
    TestSpec t;
    for (auto& r : rows) t.effects.push_back(EffectVector{std::move(r)});
    return t;
}

Json matrix_to_json(const Cmat& m) {
    Json re = Json::array();
    Json im = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json re_row = Json::array();
        Json im_row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            re_row.push_back(m(r, c).real());
            im_row.push_back(m(r, c).imag());
        }
        re.push_back(re_row);
        im.push_back(im_row);
    }
    Json j;
    j["re"] = re;
    j["im"] = im;
    return j;
}

Cmat matrix_from_json(const Json& j) {
    auto re = rows_from_json(field(j, "re"), "matrix entry");
    auto im = rows_from_json(field(j, "im"), "matrix entry");
    if (re.empty() || re.size() != im.size()) {
        throw ValidationError("re and im must have the same nonzero shape");
    }
    const std::size_t cols = re[0].size();
    for (std::size_t r = 0; r < re.size(); ++r) {
        if (re[r].size() != cols || im[r].size() != cols) {
            throw ValidationError("re and im must have the same nonzero shape");
        }
    }
    Cmat m(static_cast<Eigen::Index>(re.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < re.size(); ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = {re[r][c], im[r][c]};
        }
    }
    return m;
}

Json scenario_to_json(const QuantumScenario& s) {
    Json j;
    j["dA"] = s.da();
    j["dB"] = s.db();
    j["joint"] = matrix_to_json(s.joint().matrix());
    Json pa = Json::array();
    for (const auto& e : s.povm_a().effects()) pa.push_back(matrix_to_json(e));
    Json pb = Json::array();
    for (const auto& e : s.povm_b().effects()) pb.push_back(matrix_to_json(e));
    j["povmA"] = pa;
    j["povmB"] = pb;
    j["labels"] = Json{{"A", s.labels_a()}, {"B", s.labels_b()}};
    return j;
}

QuantumScenario scenario_from_json(const Json& j) {
    int da = as_int(field(j, "dA"), "dA");
    int db = as_int(field(j, "dB"), "dB");
    DensityMatrix joint(matrix_from_json(field(j, "joint")));

    auto povm_from = [](const Json& arr, const char* what) {
        if (!arr.is_array() || arr.empty()) {
            throw ValidationError(std::string(what) + " must be a non-empty array of matrices");
        }
        std::vector<Cmat> effects;
        effects.reserve(arr.size());
        for (const auto& e : arr) effects.push_back(matrix_from_json(e));
        return Povm(std::move(effects));
    };
    Povm povm_a = povm_from(field(j, "povmA"), "povmA");
    Povm povm_b = povm_from(field(j, "povmB"), "povmB");

    const Json& labels = field(j, "labels");
    auto labels_a = strings_from_json(field(labels, "A"), "label");
    auto labels_b = strings_from_json(field(labels, "B"), "label");
    return QuantumScenario(da, db, std::move(joint), std::move(povm_a),
                           std::move(povm_b), std::move(labels_a), std::move(labels_b));
}

Json certificate_to_json(const SteeringCertificate& c) {
    Json j;
    if (const auto* povm = std::get_if<Povm>(&c.test)) {
        j["a0"] = matrix_to_json(povm->effect(0));
    } else if (const auto* test = std::get_if<TestSpec>(&c.test)) {
        j["a0"] = test->effects[0].coords;
    } else {
        j["a0"] = "table-columns";
    }
    j["w"] = c.w;
    j["p0"] = c.p0;
    j["p1"] = c.p1;
    j["det"] = c.det;
    j["difference"] = c.difference;
    j["near_degenerate"] = c.near_degenerate;
    j["source_table"] = table_to_json(c.source_table);
    return j;
}

std::string paraboloid_csv(const std::vector<ParaboloidPoint>& points) {
    std::string out = "p00,p01,p10,residual\n";
    char buf[128];
    for (const auto& pt : points) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g\n",
                      pt.p00, pt.p01, pt.p10, pt.residual);
        out += buf;
    }
    return out;
}

std::string dump_json(const Json& j) {
    return j.dump(2) + "\n";
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::string msg = e.what();
        if (msg.find("line") == std::string::npos) {
            // Older parser messages carry only a byte offset; recover the line.
            std::size_t line = 1, col = 1;
            for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
                if (text[i] == '\n') {
                    ++line;
                    col = 1;
                } else {
                    ++col;
                }
            }
            msg = "parse error at line " + std::to_string(line) + ", column " +
                  std::to_string(col) + ": " + msg;
        }
        throw ValidationError(msg);
    }
}

Json load_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_json(ss.str());
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot open '" + path + "' for writing");
    }
    out << text;
    if (!out) {
        throw ValidationError("failed writing '" + path + "'");
    }
}

} // namespace gptv
