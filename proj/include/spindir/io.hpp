#pragma once

#include <string>

#include "json.hpp"
#include "spindir/encoding.hpp"
#include "spindir/fidelity.hpp"
#include "spindir/povm.hpp"
#include "spindir/simulate.hpp"

namespace spindir {

// {"N": int, "twice_m": int, "coeffs": [real]}
nlohmann::json to_json(const EffectiveState& state);
EffectiveState state_from_json(const nlohmann::json& j);

// {"N", "F_P", "F_A", "F_O", "I_P", "I_A", "I_O"}
nlohmann::json to_json(const FidelityReport& report);
FidelityReport fidelity_report_from_json(const nlohmann::json& j);
std::string fidelity_csv_header();
std::string fidelity_csv_row(const FidelityReport& report);

// {"J2": int, "max_abs": real, "pass": bool, "worst": [L, M]}
nlohmann::json to_json(const MultipoleReport& report);

nlohmann::json to_json(const SimulationReport& report);

}  // namespace spindir
