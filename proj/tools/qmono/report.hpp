#pragma once

#include <json.hpp>

#include "qmono/oracle.hpp"
#include "qmono/randqmt.hpp"
#include "qmono/reconstruct.hpp"
#include "qmono/selftest.hpp"
#include "qmono/transform.hpp"

namespace qmono::cli {

nlohmann::json to_json(const RandQMTReport& r);
nlohmann::json to_json(const ReplacementPlan& plan, const ReconstructedCircuit& rc);
nlohmann::json to_json(const ExpandedPolynomial& p);
nlohmann::json provenance_json(const ReconstructedCircuit& rc);
nlohmann::json to_json(const std::vector<SelfTestResult>& results);

}  // namespace qmono::cli
