#include "core/serialize.hpp"

namespace musielak {

using nlohmann::json;

json json_of(const PhiValidationReport& report) {
  json j{{"pass", report.pass}, {"checked", report.checked}};
  if (report.first_violation) {
    const auto& v = *report.first_violation;
    j["first_violation"] = {{"property", v.property}, {"x", v.x},     {"s", v.s},
                            {"t", v.t},               {"lhs", v.lhs}, {"rhs", v.rhs}};
  }
  return j;
}

json json_of(const ConditionReport& report) {
  return {{"condition", report.condition},
          {"verdict", to_string(report.verdict)},
          {"witness", report.witness},
          {"resolution", report.resolution}};
}

json json_of(const NormResult& result) {
  return {{"value", result.value},
          {"bracket", {result.bracket_lo, result.bracket_hi}},
          {"modular_at_value", result.modular_at_value},
          {"iterations", result.iterations}};
}

json json_of(const ConjugateResult& result) {
  return {{"value", result.value}, {"argmax", result.argmax}, {"bracket_width", result.bracket_width}};
}

json json_of(const YoungReport& report) {
  return {{"pass", report.pass},
          {"count", report.count},
          {"worst_margin", report.worst_margin},
          {"worst",
           {{"x", report.worst.x}, {"u", report.worst.u}, {"v", report.worst.v}, {"lhs", report.worst_lhs},
            {"rhs", report.worst_rhs}}}};
}

json json_of(const HolderReport& report) {
  return {{"pass", report.pass},
          {"lhs", report.lhs},
          {"norm_u", report.norm_u},
          {"norm_v_conjugate", report.norm_v_conjugate},
          {"rhs", report.rhs},
          {"margin", report.margin}};
}

json json_of(const BiconjugateAudit& audit) {
  return {{"pass", audit.pass}, {"supremum", audit.supremum}, {"target", audit.target}};
}

json json_of(const PoincareReport& report) {
  json j{{"test_id", report.test_id},
         {"m", report.m},
         {"tol", report.tol},
         {"c", report.c_used},
         {"lhs_modular", report.lhs_modular},
         {"rhs_modular", report.rhs_modular},
         {"ratio", report.ratio},
         {"modular_verdict", to_string(report.modular_verdict)}};
  if (report.has_norm_side) {
    j["lhs_norm_sum"] = report.lhs_norm_sum;
    j["rhs_norm_sum"] = report.rhs_norm_sum;
    j["C_m_omega"] = report.C_m_omega;
    j["norm_verdict"] = to_string(report.norm_verdict);
  }
  return j;
}

json json_of(const SearchReport& report) {
  json curves = json::array();
  for (const auto& [id, points] : report.curves) {
    json rows = json::array();
    for (const auto& p : points)
      rows.push_back({{"scaling", p.scaling}, {"lhs", p.lhs}, {"rhs", p.rhs}, {"ratio", p.ratio}});
    curves.push_back({{"test_function", id}, {"points", rows}});
  }
  return {{"c", report.c_used},
          {"sup_ratio", report.sup_ratio},
          {"argmax", {{"test_function", report.argmax_id}, {"scaling", report.argmax_scaling}}},
          {"curves", curves}};
}

json json_of(const SweepReport& report, bool include_cells) {
  json j{{"m", report.m},
         {"c", report.c_used},
         {"C_m_omega", report.C_m_omega},
         {"modular_tol", report.modular_tol},
         {"norm_tol", report.norm_tol},
         {"with_norms", report.with_norms},
         {"cells_total", report.cells.size()},
         {"modular_pass", report.modular_pass},
         {"norm_pass", report.norm_pass},
         {"errors", report.errors},
         {"worst_ratio", report.worst_ratio},
         {"worst_norm_ratio", report.worst_norm_ratio},
         {"seconds", report.seconds}};
  if (include_cells) {
    json cells = json::array();
    for (const auto& cell : report.cells) {
      json c{{"phi", cell.phi_name},
             {"test_function", cell.bump_id},
             {"scaling", cell.scaling},
             {"lhs_modular", cell.lhs_modular},
             {"rhs_modular", cell.rhs_modular},
             {"ratio", cell.ratio},
             {"modular_verdict", to_string(cell.modular_verdict)},
             {"seconds", cell.seconds}};
      if (cell.has_norm_side) {
        c["lhs_norm_sum"] = cell.lhs_norm_sum;
        c["rhs_norm_sum"] = cell.rhs_norm_sum;
        c["norm_ratio"] = cell.norm_ratio;
        c["norm_verdict"] = to_string(cell.norm_verdict);
      }
      if (!cell.error.empty()) c["error"] = cell.error;
      cells.push_back(std::move(c));
    }
    j["cells"] = std::move(cells);
  }
  return j;
}

}  // namespace musielak
