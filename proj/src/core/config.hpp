#ifndef MUSIELAK_CORE_CONFIG_HPP
#define MUSIELAK_CORE_CONFIG_HPP

#include "core/conditions.hpp"
#include "core/domain.hpp"
#include "core/phi.hpp"
#include "core/poincare.hpp"

#include <json.hpp>

#include <memory>
#include <string>

namespace musielak {

/// {"bounds": [[a1,b1],...], "nodes": [n1,...]}
std::shared_ptr<const Domain> parse_domain(const nlohmann::json& spec);

/// Scalar field specs:
///   {"kind":"constant","value":2}
///   {"kind":"affine","intercept":2,"slopes":[1,0]}
///   {"kind":"sinusoid","base":2,"amplitude":1,"frequency":1,"axis":0,"phase":0}
///   {"kind":"step","axis":0,"threshold":0.5,"low":2,"high":3}
///   {"kind":"grid","box_lo":[...],"box_hi":[...],"nodes":[...],"values":[...]}
/// A bare number is shorthand for a constant.
ScalarField parse_field(const nlohmann::json& spec, const Domain& dom);

/// {"name":..., "family":"power_variable"|"double_phase"|"power_log"|
///  "exp_power"|"orlicz_custom", ...family parameters...}
PhiFunction parse_phi(const nlohmann::json& spec, const Domain& dom);

/// {"name":..., "kind":"smooth_exp"|"poly"|"sin"|"constant"|"coordinate", ...}
GridFunction parse_test_function(const nlohmann::json& spec, std::shared_ptr<const Domain> dom);

/// Named one-variable convex evaluators for orlicz_custom configs.
PhiFunction::CustomEval named_custom_eval(const std::string& name, const nlohmann::json& spec);

/// {"kind":"constant_one"} or {"kind":"log_holder","C0":1.0}.
Varphi parse_varphi(const nlohmann::json& spec);

}  // namespace musielak

#endif
