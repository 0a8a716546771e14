#include "core/runner.hpp"

#include "core/config.hpp"
#include "core/conjugate.hpp"
#include "core/errors.hpp"
#include "core/serialize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace musielak {

namespace {

using nlohmann::json;

[[noreturn]] void bad_config(const std::string& what) { raise(ErrorCode::config_error, what); }

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::string sanitize_name(const std::string& name) {
  std::string s;
  for (char c : name) s += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return s;
}

struct Tolerances {
  double modular = 1e-8;
  double norm = 1e-6;
  double solver = 1e-10;
  double young = 1e-9;
};

struct Workspace {
  std::shared_ptr<const Domain> dom;
  std::vector<PhiFunction> phis;
  std::map<std::string, std::size_t> phi_index;
  json test_function_specs;  // name -> spec
  Tolerances tol;
  int threads = 0;
  unsigned seed = 0;
  std::string out_dir;
  bool stamp = true;

  const PhiFunction& phi(const std::string& name) const {
    auto it = phi_index.find(name);
    if (it == phi_index.end()) bad_config("unknown phi '" + name + "'");
    return phis[it->second];
  }

  GridFunction test_function(const std::string& name) const {
    auto it = test_function_specs.find(name);
    if (it == test_function_specs.end()) bad_config("unknown test function '" + name + "'");
    return parse_test_function(*it, dom);
  }

  std::vector<std::string> phi_names(const json& task) const {
    std::vector<std::string> names;
    if (!task.contains("phi")) {
      for (const auto& p : phis) names.push_back(p.name());
      return names;
    }
    const json& sel = task["phi"];
    if (sel.is_string()) {
      names.push_back(sel.get<std::string>());
    } else if (sel.is_array()) {
      for (const auto& e : sel) names.push_back(e.get<std::string>());
    } else {
      bad_config("task 'phi' must be a name or a list of names");
    }
    for (const auto& n : names) phi(n);  // existence check
    return names;
  }
};

double task_number(const json& task, const char* key, double fallback) {
  auto it = task.find(key);
  if (it == task.end()) return fallback;
  return it->get<double>();
}

std::vector<double> scalings_of(const json& task) {
  if (!task.contains("scalings")) return {1.0};
  const json& s = task["scalings"];
  if (s.is_string() && s.get<std::string>() == "default") return default_scalings();
  std::vector<double> out;
  for (const auto& e : s) out.push_back(e.get<double>());
  if (out.empty()) bad_config("scalings must not be empty");
  return out;
}

// Named test functions from the config, or the stock bump family.
std::vector<std::pair<std::string, GridFunction>> resolve_test_functions(const Workspace& ws, const json& task) {
  std::vector<std::pair<std::string, GridFunction>> out;
  const json sel = task.contains("test_functions") ? task["test_functions"] : json("default");
  if (sel.is_string() && sel.get<std::string>() == "default") {
    for (const auto& spec : default_test_functions()) out.emplace_back(spec.id, spec.build(ws.dom));
    return out;
  }
  if (!sel.is_array()) bad_config("task 'test_functions' must be \"default\" or a list of names");
  for (const auto& e : sel) {
    const std::string name = e.get<std::string>();
    out.emplace_back(name, ws.test_function(name));
  }
  return out;
}

struct TaskOutcome {
  std::string status = "pass";  // pass | fail | inconclusive | none | error
  bool theorem_check = false;
  bool required = false;
  json report;
  // extra csv outputs: (filename, contents)
  std::vector<std::pair<std::string, std::string>> csv_files;
};

TaskOutcome run_validate_phi(const Workspace& ws, const json& task) {
  TaskOutcome out;
  std::vector<std::vector<double>> points;
  if (task.contains("sample_points")) {
    for (const auto& p : task["sample_points"]) points.push_back(p.get<std::vector<double>>());
  } else {
    const int per_axis = 5;
    std::vector<int> idx(static_cast<std::size_t>(ws.dom->dim()), 0);
    for (;;) {
      std::vector<double> x(static_cast<std::size_t>(ws.dom->dim()));
      for (int a = 0; a < ws.dom->dim(); ++a)
        x[static_cast<std::size_t>(a)] =
            ws.dom->lower(a) +
            (ws.dom->upper(a) - ws.dom->lower(a)) * static_cast<double>(idx[static_cast<std::size_t>(a)]) /
                static_cast<double>(per_axis - 1);
      points.push_back(std::move(x));
      int a = ws.dom->dim() - 1;
      for (; a >= 0; --a) {
        if (++idx[static_cast<std::size_t>(a)] < per_axis) break;
        idx[static_cast<std::size_t>(a)] = 0;
      }
      if (a < 0) break;
    }
  }
  json reports = json::array();
  bool all_pass = true;
  for (const auto& name : ws.phi_names(task)) {
    const auto report = validate_phi(ws.phi(name), points);
    all_pass = all_pass && report.pass;
    json j = json_of(report);
    j["phi"] = name;
    reports.push_back(std::move(j));
  }
  out.status = all_pass ? "pass" : "fail";
  out.report = {{"reports", reports}};
  return out;
}

TaskOutcome run_check_conditions(const Workspace& ws, const json& task) {
  TaskOutcome out;
  out.required = task.value("required", false);
  std::vector<std::string> checks = {"M1", "log_holder", "Y", "local_integrability"};
  if (task.contains("checks")) {
    checks.clear();
    for (const auto& c : task["checks"]) checks.push_back(c.get<std::string>());
  }
  json reports = json::array();
  bool any_fail = false, any_inconclusive = false;
  for (const auto& name : ws.phi_names(task)) {
    const PhiFunction& phi = ws.phi(name);
    for (const auto& check : checks) {
      ConditionReport report;
      if (check == "M1") {
        const json params = task.value("m1", json::object());
        Varphi varphi = params.contains("varphi")
                            ? parse_varphi(params["varphi"])
                            : (phi.x_independent() ? varphi_constant_one() : varphi_log_holder(1.0));
        M1Options options;
        options.seed = ws.seed;
        report = check_m1(phi, *ws.dom, varphi, params.value("c", 1.0), options);
      } else if (check == "log_holder") {
        const json params = task.value("log_holder", json::object());
        const ExponentField* p = phi.exponent_field();
        if (p == nullptr) {
          report.condition = "log_holder";
          report.verdict = Verdict::inconclusive;
          report.witness = {{"kind", "not_applicable"}, {"reason", "family has no exponent field"}};
        } else {
          LogHolderOptions options;
          options.seed = ws.seed;
          report = check_log_holder(*p, *ws.dom, params.value("C0", 1.0), options);
        }
      } else if (check == "Y") {
        const json params = task.value("y", json::object());
        const int axis = params.value("axis", 0);
        const double a = params.value("segment", json::array({ws.dom->lower(axis), ws.dom->upper(axis)}))[0]
                             .get<double>();
        const double b = params.value("segment", json::array({ws.dom->lower(axis), ws.dom->upper(axis)}))[1]
                             .get<double>();
        std::optional<double> t0;
        if (params.contains("t0")) t0 = params["t0"].get<double>();
        YOptions options;
        options.seed = ws.seed;
        report = check_y(phi, *ws.dom, axis, a, b, t0, options);
      } else if (check == "local_integrability") {
        const json params = task.value("local_integrability", json::object());
        std::vector<double> k_lo, k_hi;
        if (params.contains("box")) {
          for (const auto& pair : params["box"]) {
            k_lo.push_back(pair[0].get<double>());
            k_hi.push_back(pair[1].get<double>());
          }
        } else {
          for (int a = 0; a < ws.dom->dim(); ++a) {
            k_lo.push_back(ws.dom->lower(a));
            k_hi.push_back(ws.dom->upper(a));
          }
        }
        report = check_local_integrability(phi, *ws.dom, params.value("c", 1.0), k_lo, k_hi);
      } else {
        bad_config("unknown condition check '" + check + "'");
      }
      any_fail = any_fail || report.verdict == Verdict::fail;
      any_inconclusive = any_inconclusive || report.verdict == Verdict::inconclusive;
      json j = json_of(report);
      j["phi"] = name;
      reports.push_back(std::move(j));
    }
  }
  out.status = any_fail ? "fail" : (any_inconclusive ? "inconclusive" : "pass");
  out.report = {{"reports", reports}};
  return out;
}

TaskOutcome run_compute_norm(const Workspace& ws, const json& task) {
  TaskOutcome out;
  out.status = "none";
  const PhiFunction& phi = ws.phi(task.at("phi").get<std::string>());
  GridFunction u = ws.test_function(task.at("test_function").get<std::string>());
  if (task.contains("scale")) u = scale(u, task["scale"].get<double>());
  const std::string kind = task.value("kind", "luxemburg");
  json result;
  if (kind == "luxemburg") {
    result = json_of(luxemburg_norm(phi, u, ws.tol.solver));
  } else if (kind == "sobolev") {
    result = json_of(sobolev_norm(phi, u, task.value("m", 1), ws.tol.solver));
  } else if (kind == "modular") {
    result = {{"value", modular_scaled(phi, u, task_number(task, "c", 1.0))}};
  } else if (kind == "modular_gap") {
    const GridFunction v = ws.test_function(task.at("v").get<std::string>());
    result = {{"value", modular_gap(phi, u, v, task_number(task, "lambda", 1.0))}};
  } else {
    bad_config("unknown norm kind '" + kind + "'");
  }
  if (task.contains("csv")) {
    std::ostringstream os;
    export_csv(u, os);
    out.csv_files.emplace_back(task["csv"].get<std::string>(), os.str());
  }
  out.report = {{"kind", kind}, {"result", result}};
  return out;
}

TaskOutcome run_conjugate_table(const Workspace& ws, const json& task) {
  TaskOutcome out;
  out.status = "none";
  const PhiFunction& phi = ws.phi(task.at("phi").get<std::string>());
  std::vector<std::vector<double>> points;
  if (task.contains("x_points")) {
    for (const auto& p : task["x_points"]) points.push_back(p.get<std::vector<double>>());
  } else {
    std::vector<double> mid(static_cast<std::size_t>(ws.dom->dim()));
    for (int a = 0; a < ws.dom->dim(); ++a)
      mid[static_cast<std::size_t>(a)] = 0.5 * (ws.dom->lower(a) + ws.dom->upper(a));
    points.push_back(std::move(mid));
  }
  std::vector<double> s_values;
  if (task.contains("s_values")) {
    for (const auto& s : task["s_values"]) s_values.push_back(s.get<double>());
  } else {
    const json rng = task.value("s_log", json::array({1e-2, 1e2, 25}));
    const double lo = std::log(rng[0].get<double>()), hi = std::log(rng[1].get<double>());
    const int count = rng[2].get<int>();
    for (int i = 0; i < count; ++i)
      s_values.push_back(std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1)));
  }
  json rows = json::array();
  std::ostringstream csv;
  for (int a = 0; a < ws.dom->dim(); ++a) csv << "x" << (a + 1) << ",";
  csv << "s,conjugate,argmax\n";
  csv.precision(17);
  for (const auto& x : points) {
    for (double s : s_values) {
      const auto result = conjugate(phi, x, s, ws.tol.solver);
      rows.push_back({{"x", x}, {"s", s}, {"value", result.value}, {"argmax", result.argmax}});
      for (double xi : x) csv << xi << ",";
      csv << s << "," << result.value << "," << result.argmax << "\n";
    }
  }
  if (task.contains("csv")) out.csv_files.emplace_back(task["csv"].get<std::string>(), csv.str());
  out.report = {{"rows", rows}};
  return out;
}

TaskOutcome run_verify_poincare(const Workspace& ws, const json& task) {
  TaskOutcome out;
  out.theorem_check = true;
  const int m = task.value("m", 1);
  std::optional<double> c;
  if (task.contains("c")) c = task["c"].get<double>();
  const bool with_norm = task.value("norm", true);
  const auto scalings = scalings_of(task);
  json reports = json::array();
  bool all_pass = true;
  for (const auto& name : ws.phi_names(task)) {
    const PhiFunction& phi = ws.phi(name);
    for (const auto& [tf_name, tf] : resolve_test_functions(ws, task)) {
      for (double s : scalings) {
        const GridFunction u = s == 1.0 ? tf : scale(tf, s);
        PoincareReport report = verify_modular_poincare(phi, u, m, c, ws.tol.modular);
        report.test_id = tf_name;
        if (with_norm) {
          const PoincareReport norm_report = verify_norm_poincare(phi, u, m, ws.tol.norm, ws.tol.solver);
          report.has_norm_side = true;
          report.lhs_norm_sum = norm_report.lhs_norm_sum;
          report.rhs_norm_sum = norm_report.rhs_norm_sum;
          report.C_m_omega = norm_report.C_m_omega;
          report.norm_verdict = norm_report.norm_verdict;
        }
        all_pass = all_pass && report.modular_verdict == Verdict::pass &&
                   (!with_norm || report.norm_verdict == Verdict::pass);
        json j = json_of(report);
        j["phi"] = name;
        j["scaling"] = s;
        reports.push_back(std::move(j));
      }
    }
  }
  out.status = all_pass ? "pass" : "fail";
  out.report = {{"reports", reports}};
  return out;
}

std::vector<BumpSpec> resolve_bumps(const json& task) {
  if (!task.contains("bumps") || (task["bumps"].is_string() && task["bumps"].get<std::string>() == "default"))
    return default_test_functions();
  std::vector<BumpSpec> specs;
  for (const auto& b : task["bumps"]) {
    BumpSpec spec;
    spec.id = b.value("id", "bump" + std::to_string(specs.size()));
    spec.kind = b.value("kind", std::string("smooth_exp")) == "poly" ? BumpKind::poly : BumpKind::smooth_exp;
    spec.poly_k = b.value("k", 4);
    spec.center_fractions = b.at("center_fractions").get<std::vector<double>>();
    spec.width_fractions = b.at("width_fractions").get<std::vector<double>>();
    specs.push_back(std::move(spec));
  }
  return specs;
}

std::string curve_csv(const std::vector<RatioCurvePoint>& points) {
  std::ostringstream os;
  os << "scaling,lhs,rhs,ratio\n";
  os.precision(17);
  for (const auto& p : points) os << p.scaling << "," << p.lhs << "," << p.rhs << "," << p.ratio << "\n";
  return os.str();
}

TaskOutcome run_counterexample_search(const Workspace& ws, const json& task) {
  TaskOutcome out;
  out.status = "none";  // evidence, no verdict
  const PhiFunction& phi = ws.phi(task.at("phi").get<std::string>());
  const auto bumps = resolve_bumps(task);
  std::vector<double> scalings = task.contains("scalings") ? scalings_of(task) : default_scalings();
  const double c = task_number(task, "c", poincare_constant(*ws.dom, 1));
  const SearchReport report = counterexample_search(phi, ws.dom, bumps, scalings, c);
  if (task.contains("csv")) {
    const std::string base = task["csv"].get<std::string>();
    const std::string stem = base.size() > 4 && base.ends_with(".csv") ? base.substr(0, base.size() - 4) : base;
    for (const auto& [id, points] : report.curves)
      out.csv_files.emplace_back(stem + "_" + sanitize_name(id) + ".csv", curve_csv(points));
  }
  out.report = json_of(report);
  return out;
}

TaskOutcome run_sweep(const Workspace& ws, const json& task) {
  TaskOutcome out;
  out.theorem_check = true;
  SweepOptions options;
  options.m = task.value("m", 1);
  if (task.contains("c")) options.c = task["c"].get<double>();
  options.modular_tol = ws.tol.modular;
  options.norm_tol = ws.tol.norm;
  options.solver_tol = task.value("solver_tol", 1e-8);
  options.with_norms = task.value("norm", true);
  options.threads = ws.threads;
  const auto bumps = resolve_bumps(task);
  std::vector<double> scalings = task.contains("scalings") ? scalings_of(task) : default_scalings();
  std::vector<const PhiFunction*> phis;
  for (const auto& name : ws.phi_names(task)) phis.push_back(&ws.phi(name));
  const SweepReport report = sweep(phis, ws.dom, bumps, scalings, options);
  const std::size_t expected = report.cells.size();
  const bool pass = report.errors == 0 && report.modular_pass == expected &&
                    (!options.with_norms || report.norm_pass == expected);
  out.status = pass ? "pass" : "fail";
  out.report = json_of(report, task.value("cells", true));
  return out;
}

Workspace build_workspace(const json& config, const RunOptions& options) {
  if (!config.is_object()) bad_config("config must be a JSON object");
  Workspace ws;
  ws.dom = parse_domain(config.at("domain"));
  if (!config.contains("phi") || !config["phi"].is_array() || config["phi"].empty())
    bad_config("config needs a nonempty 'phi' array");
  for (const auto& spec : config["phi"]) {
    PhiFunction phi = parse_phi(spec, *ws.dom);
    if (ws.phi_index.count(phi.name())) bad_config("duplicate phi name '" + phi.name() + "'");
    ws.phi_index[phi.name()] = ws.phis.size();
    ws.phis.push_back(std::move(phi));
  }
  ws.test_function_specs = json::object();
  if (config.contains("test_functions")) {
    for (const auto& spec : config["test_functions"]) {
      const std::string name = spec.value("name", "tf" + std::to_string(ws.test_function_specs.size()));
      if (ws.test_function_specs.contains(name)) bad_config("duplicate test function name '" + name + "'");
      ws.test_function_specs[name] = spec;
      parse_test_function(spec, ws.dom);  // validate now
    }
  }
  const json tolerances = config.value("tolerances", json::object());
  ws.tol.modular = tolerances.value("modular", 1e-8);
  ws.tol.norm = tolerances.value("norm", 1e-6);
  ws.tol.solver = tolerances.value("solver", 1e-10);
  ws.tol.young = tolerances.value("young", 1e-9);
  if (options.tolerance) {
    ws.tol.modular = *options.tolerance;
    ws.tol.norm = *options.tolerance;
    ws.tol.young = *options.tolerance;
  }
  ws.threads = options.threads > 0 ? options.threads : config.value("threads", 0);
  ws.seed = options.seed ? *options.seed : config.value("seed", 0u);
  ws.out_dir = options.out_dir;
  ws.stamp = options.stamp;
  return ws;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream os(path);
  require(os.good(), ErrorCode::io_error, "cannot write " + path.string());
  os << contents;
  require(os.good(), ErrorCode::io_error, "failed writing " + path.string());
}

}  // namespace

RunOutcome run_config(const json& config, const RunOptions& options) {
  RunOutcome outcome;
  json tasks_summary = json::array();
  int exit_code = 0;

  Workspace ws;
  try {
    ws = build_workspace(config, options);
  } catch (const std::exception& e) {
    outcome.exit_code = 2;
    outcome.summary = {{"schema_version", 1}, {"exit_code", 2}, {"error", e.what()}, {"tasks", json::array()}};
    if (options.stamp) outcome.summary["generated_at"] = timestamp();
    return outcome;
  }

  const bool write_files = !ws.out_dir.empty();
  if (write_files) std::filesystem::create_directories(ws.out_dir);

  const json tasks = config.value("tasks", json::array());
  std::size_t index = 0;
  for (const auto& task : tasks) {
    const std::string type = task.value("type", "");
    const std::string name = sanitize_name(task.value("name", type + "_" + std::to_string(index)));
    TaskOutcome result;
    try {
      if (type == "validate-phi")
        result = run_validate_phi(ws, task);
      else if (type == "check-conditions")
        result = run_check_conditions(ws, task);
      else if (type == "compute-norm")
        result = run_compute_norm(ws, task);
      else if (type == "conjugate-table")
        result = run_conjugate_table(ws, task);
      else if (type == "verify-poincare")
        result = run_verify_poincare(ws, task);
      else if (type == "counterexample-search")
        result = run_counterexample_search(ws, task);
      else if (type == "sweep")
        result = run_sweep(ws, task);
      else
        bad_config("unknown task type '" + type + "'");
    } catch (const std::exception& e) {
      result.status = "error";
      result.report = {{"error", e.what()}};
      exit_code = 2;
    }
    if (result.status == "fail" && (result.theorem_check || result.required)) exit_code = std::max(exit_code, 1);

    json entry{{"name", name}, {"type", type}, {"status", result.status},
               {"theorem_check", result.theorem_check}, {"report", result.report}};
    if (write_files) {
      const std::string file = name + ".json";
      json file_json{{"schema_version", 1}, {"name", name}, {"type", type}, {"status", result.status},
                     {"report", result.report}};
      if (ws.stamp) file_json["generated_at"] = timestamp();
      write_file(std::filesystem::path(ws.out_dir) / file, file_json.dump(2) + "\n");
      entry["report_file"] = file;
      for (const auto& [csv_name, contents] : result.csv_files) {
        write_file(std::filesystem::path(ws.out_dir) / csv_name, contents);
        entry["csv_files"].push_back(csv_name);
      }
    }
    tasks_summary.push_back(std::move(entry));
    ++index;
  }

  outcome.exit_code = exit_code;
  outcome.summary = {{"schema_version", 1}, {"exit_code", exit_code}, {"tasks", tasks_summary}};
  if (options.stamp) outcome.summary["generated_at"] = timestamp();
  if (write_files)
    write_file(std::filesystem::path(ws.out_dir) / "summary.json", outcome.summary.dump(2) + "\n");
  return outcome;
}

std::string describe_config(const json& config) {
  RunOptions options;
  options.stamp = false;
  const Workspace ws = build_workspace(config, options);
  std::ostringstream os;
  os.precision(9);
  os << "domain: N = " << ws.dom->dim() << ", bounds";
  for (int a = 0; a < ws.dom->dim(); ++a) os << " [" << ws.dom->lower(a) << ", " << ws.dom->upper(a) << "]";
  os << ", nodes";
  for (int a = 0; a < ws.dom->dim(); ++a) os << " " << ws.dom->nodes(a);
  os << ", h";
  for (int a = 0; a < ws.dom->dim(); ++a) os << " " << ws.dom->spacing(a);
  os << ", diameter d = " << ws.dom->diameter() << "\n";
  for (const auto& phi : ws.phis) {
    os << "phi: " << phi.name() << " (" << to_string(phi.family());
    if (const auto* p = phi.exponent_field()) os << ", p in [" << p->p_minus() << ", " << p->p_plus() << "]";
    if (phi.family() == PhiFamily::double_phase) {
      const auto* a = phi.weight_field();
      os << ", p = " << phi.p_base() << ", q = " << phi.q() << ", a in [" << a->a_minus() << ", " << a->a_plus()
         << "]";
    }
    os << ")\n";
  }
  std::set<int> orders{1};
  for (const auto& task : config.value("tasks", json::array()))
    if (task.contains("m")) orders.insert(task["m"].get<int>());
  for (int m : orders) {
    const double c = poincare_constant(*ws.dom, m);
    const auto count = count_multiindices_of_order(ws.dom->dim(), m);
    os << "m = " << m << ": c = " << c << ", #{|beta|=m} = " << count << ", C = c * " << (count + 1) << " = "
       << poincare_norm_constant(*ws.dom, m) << "\n";
  }
  return os.str();
}

}  // namespace musielak
