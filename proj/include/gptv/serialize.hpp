#ifndef GPTV_SERIALIZE_HPP
#define GPTV_SERIALIZE_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "gptv/behavior.hpp"
#include "gptv/gpt_core.hpp"
#include "gptv/hvt.hpp"
#include "gptv/quantum.hpp"
#include "gptv/steering.hpp"
#include "gptv/tables.hpp"

namespace gptv {

using Json = nlohmann::json;

// Parsers throw ValidationError with a line/column-numbered message for
// syntax problems and a field-naming message for schema problems.
// Emitters produce 2-space-indented JSON whose emit -> parse -> emit
// cycle is a fixed point (doubles use shortest round-trip rendering).

Json table_to_json(const JointTable& t);
JointTable table_from_json(const Json& j);

Json behavior_to_json(const Behavior& b);
Behavior behavior_from_json(const Json& j);

Json model_to_json(const HvtModel& m);
HvtModel model_from_json(const Json& j);

Json theory_to_json(const ConvexStateSpace& s);
ConvexStateSpace theory_from_json(const Json& j);

Json test_to_json(const TestSpec& t);
TestSpec test_from_json(const Json& j);

Json matrix_to_json(const Cmat& m);
Cmat matrix_from_json(const Json& j);

Json scenario_to_json(const QuantumScenario& s);
QuantumScenario scenario_from_json(const Json& j);

Json certificate_to_json(const SteeringCertificate& c);

/// Columns p00,p01,p10,residual at 12 significant digits.
std::string paraboloid_csv(const std::vector<ParaboloidPoint>& points);

std::string dump_json(const Json& j);
Json parse_json(const std::string& text);
Json load_json(const std::string& path);
void save_text(const std::string& path, const std::string& text);

} // namespace gptv

#endif
