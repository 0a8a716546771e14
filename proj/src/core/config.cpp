#include "core/config.hpp"

#include "core/errors.hpp"

#include <cmath>

namespace musielak {

namespace {

using nlohmann::json;

[[noreturn]] void bad_config(const std::string& what) { raise(ErrorCode::config_error, what); }

const json& get(const json& spec, const char* key) {
  auto it = spec.find(key);
  if (it == spec.end()) bad_config("missing field '" + std::string(key) + "' in " + spec.dump());
  return *it;
}

double get_number(const json& spec, const char* key) {
  const json& v = get(spec, key);
  if (!v.is_number()) bad_config("field '" + std::string(key) + "' must be a number");
  return v.get<double>();
}

double get_number_or(const json& spec, const char* key, double fallback) {
  auto it = spec.find(key);
  if (it == spec.end()) return fallback;
  if (!it->is_number()) bad_config("field '" + std::string(key) + "' must be a number");
  return it->get<double>();
}

int get_int_or(const json& spec, const char* key, int fallback) {
  auto it = spec.find(key);
  if (it == spec.end()) return fallback;
  if (!it->is_number_integer()) bad_config("field '" + std::string(key) + "' must be an integer");
  return it->get<int>();
}

std::vector<double> get_vector(const json& spec, const char* key) {
  const json& v = get(spec, key);
  if (!v.is_array()) bad_config("field '" + std::string(key) + "' must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) bad_config("field '" + std::string(key) + "' must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace

std::shared_ptr<const Domain> parse_domain(const json& spec) {
  if (!spec.is_object()) bad_config("domain spec must be an object");
  const json& bounds = get(spec, "bounds");
  const json& nodes = get(spec, "nodes");
  if (!bounds.is_array() || bounds.empty()) bad_config("domain bounds must be a nonempty array of [a,b] pairs");
  if (!nodes.is_array() || nodes.size() != bounds.size())
    bad_config("domain nodes must list one node count per axis");
  std::vector<double> lo, hi;
  std::vector<int> n;
  for (const auto& pair : bounds) {
    if (!pair.is_array() || pair.size() != 2) bad_config("each domain bound must be a [a,b] pair");
    lo.push_back(pair[0].get<double>());
    hi.push_back(pair[1].get<double>());
  }
  for (const auto& count : nodes) {
    const int c = count.get<int>();
    if (c < 9) bad_config("node counts must be >= 9 per axis");
    n.push_back(c);
  }
  return Domain::create(std::move(lo), std::move(hi), std::move(n));
}

ScalarField parse_field(const json& spec, const Domain& dom) {
  if (spec.is_number()) return ScalarField::constant(spec.get<double>());
  if (!spec.is_object()) bad_config("field spec must be an object or a number");
  const std::string kind = get(spec, "kind").get<std::string>();
  if (kind == "constant") return ScalarField::constant(get_number(spec, "value"));
  if (kind == "affine") {
    std::vector<double> slopes = get_vector(spec, "slopes");
    if (static_cast<int>(slopes.size()) != dom.dim()) bad_config("affine slopes must list one entry per axis");
    std::vector<double> lo(static_cast<std::size_t>(dom.dim())), hi(static_cast<std::size_t>(dom.dim()));
    for (int a = 0; a < dom.dim(); ++a) {
      lo[static_cast<std::size_t>(a)] = dom.lower(a);
      hi[static_cast<std::size_t>(a)] = dom.upper(a);
    }
    return ScalarField::affine(get_number(spec, "intercept"), std::move(slopes), lo, hi);
  }
  if (kind == "sinusoid") {
    const int axis = get_int_or(spec, "axis", 0);
    if (axis < 0 || axis >= dom.dim()) bad_config("sinusoid axis out of range");
    return ScalarField::sinusoid(get_number(spec, "base"), get_number(spec, "amplitude"),
                                 get_number_or(spec, "frequency", 1.0), axis, get_number_or(spec, "phase", 0.0));
  }
  if (kind == "step") {
    const int axis = get_int_or(spec, "axis", 0);
    if (axis < 0 || axis >= dom.dim()) bad_config("step axis out of range");
    return ScalarField::step(axis, get_number(spec, "threshold"), get_number(spec, "low"),
                             get_number(spec, "high"));
  }
  if (kind == "grid") {
    std::vector<int> n;
    for (const auto& c : get(spec, "nodes")) n.push_back(c.get<int>());
    return ScalarField::grid_samples(get_vector(spec, "box_lo"), get_vector(spec, "box_hi"), std::move(n),
                                     get_vector(spec, "values"));
  }
  bad_config("unknown field kind '" + kind + "'");
}

PhiFunction::CustomEval named_custom_eval(const std::string& name, const json& spec) {
  if (name == "square") return [](double t) { return t * t; };
  if (name == "half_square") return [](double t) { return 0.5 * t * t; };
  if (name == "sqrt") return [](double t) { return std::sqrt(t); };
  if (name == "identity") return [](double t) { return t; };
  if (name == "power") {
    const double e = get_number(spec, "exponent");
    return [e](double t) { return std::pow(t, e); };
  }
  bad_config("unknown custom evaluator '" + name + "'");
}

PhiFunction parse_phi(const json& spec, const Domain& dom) {
  if (!spec.is_object()) bad_config("phi spec must be an object");
  const std::string family = get(spec, "family").get<std::string>();
  const std::string name = spec.value("name", family);
  try {
    if (family == "power_variable")
      return PhiFunction::power_variable(ExponentField(parse_field(get(spec, "p"), dom)), name);
    if (family == "power_log")
      return PhiFunction::power_log(ExponentField(parse_field(get(spec, "p"), dom)), name);
    if (family == "exp_power")
      return PhiFunction::exp_power(ExponentField(parse_field(get(spec, "p"), dom)), name);
    if (family == "double_phase")
      return PhiFunction::double_phase(get_number(spec, "p_base"), get_number(spec, "q"),
                                       WeightField(parse_field(get(spec, "a"), dom)), name);
    if (family == "orlicz_custom")
      return PhiFunction::orlicz_custom(named_custom_eval(get(spec, "custom").get<std::string>(), spec), name);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::config_error) throw;
    bad_config("phi '" + name + "': " + e.what());
  }
  bad_config("unknown phi family '" + family + "'");
}

Varphi parse_varphi(const json& spec) {
  const std::string kind = spec.value("kind", "log_holder");
  if (kind == "constant_one") return varphi_constant_one();
  if (kind == "log_holder") return varphi_log_holder(spec.value("C0", 1.0));
  bad_config("unknown varphi kind '" + kind + "'");
}

GridFunction parse_test_function(const json& spec, std::shared_ptr<const Domain> dom) {
  if (!spec.is_object()) bad_config("test function spec must be an object");
  const std::string kind = get(spec, "kind").get<std::string>();
  if (kind == "smooth_exp" || kind == "poly") {
    BumpSpec bump;
    bump.kind = kind == "poly" ? BumpKind::poly : BumpKind::smooth_exp;
    bump.poly_k = get_int_or(spec, "k", 4);
    if (spec.contains("center_fractions") || spec.contains("width_fractions")) {
      bump.center_fractions = get_vector(spec, "center_fractions");
      bump.width_fractions = get_vector(spec, "width_fractions");
      return bump.build(std::move(dom));
    }
    return make_bump(std::move(dom), get_vector(spec, "center"), get_vector(spec, "widths"), bump.kind,
                     bump.poly_k);
  }
  if (kind == "sin") return make_product_sine(std::move(dom));
  if (kind == "constant") return make_constant(std::move(dom), get_number(spec, "value"));
  if (kind == "coordinate") return make_coordinate(std::move(dom), get_int_or(spec, "axis", 0));
  bad_config("unknown test function kind '" + kind + "'");
}

}  // namespace musielak
