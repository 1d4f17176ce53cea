#include "report.hpp"

namespace qmono::cli {

using nlohmann::json;

json to_json(const RandQMTReport& r) {
  json j;
  j["decision"] = r.decision ? "yes" : "no";
  j["iterations_executed"] = r.iterations_executed;
  j["first_hit_iteration"] =
      r.first_hit_iteration ? json(*r.first_hit_iteration) : json(nullptr);
  j["restart_index"] = r.restart_index ? json(*r.restart_index) : json(nullptr);
  j["field_degree"] = r.field_degree;
  j["wall_time"] = r.wall_time.count();
  return j;
}

json to_json(const ReplacementPlan& plan, const ReconstructedCircuit& rc) {
  json rows = json::array();
  for (std::size_t i = 0; i < rc.x_variables.size(); ++i) {
    const auto& copies = rc.x_occurrences.at(rc.x_variables[i]);
    for (std::size_t j = 0; j < copies.size(); ++j) {
      const std::size_t row = plan.row_index(i, j);
      std::string bits;
      for (std::size_t l = 0; l < plan.row_length(); ++l) bits += plan.bit(row, l) ? '1' : '0';
      rows.push_back({{"variable", rc.x_variables[i]}, {"occurrence", copies[j]}, {"bits", bits}});
    }
  }
  return {{"q", plan.q()}, {"y_vars", plan.y_vars()}, {"rows", rows}};
}

json to_json(const ExpandedPolynomial& p) {
  json terms = json::array();
  for (const auto& [m, c] : p.terms()) {
    terms.push_back({{"coefficient", c.str()}, {"monomial", m.exponents()}});
  }
  return terms;
}

json provenance_json(const ReconstructedCircuit& rc) {
  json z = json::array();
  for (const auto& zp : rc.z_vars) {
    json e{{"name", zp.name}, {"attached_to", zp.attached_to}};
    if (zp.site == ZProvenance::Site::kMulGate) {
      e["site"] = "mul_gate";
    } else {
      e["site"] = "terminal_edge";
      e["consumer"] = zp.consumer;
    }
    z.push_back(std::move(e));
  }
  return {{"x_variables", rc.x_variables}, {"x_occurrences", rc.x_occurrences}, {"z_vars", z}};
}

json to_json(const std::vector<SelfTestResult>& results) {
  json out = json::array();
  for (const auto& r : results) {
    out.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  }
  return out;
}

}  // namespace qmono::cli
