#ifndef MUSIELAK_CORE_SERIALIZE_HPP
#define MUSIELAK_CORE_SERIALIZE_HPP

#include "core/conditions.hpp"
#include "core/conjugate.hpp"
#include "core/norms.hpp"
#include "core/phi.hpp"
#include "core/poincare.hpp"

#include <json.hpp>

namespace musielak {

nlohmann::json json_of(const PhiValidationReport& report);
nlohmann::json json_of(const ConditionReport& report);
nlohmann::json json_of(const NormResult& result);
nlohmann::json json_of(const ConjugateResult& result);
nlohmann::json json_of(const YoungReport& report);
nlohmann::json json_of(const HolderReport& report);
nlohmann::json json_of(const BiconjugateAudit& audit);
nlohmann::json json_of(const PoincareReport& report);
nlohmann::json json_of(const SearchReport& report);
nlohmann::json json_of(const SweepReport& report, bool include_cells = true);

}  // namespace musielak

#endif
