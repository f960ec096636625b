#include "spindir/io.hpp"

#include <cstdio>

namespace spindir {

nlohmann::json to_json(const EffectiveState& state) {
  return nlohmann::json{{"N", state.spin_count()},
                        {"twice_m", state.m().twice()},
                        {"coeffs", state.coeffs()}};
}

EffectiveState state_from_json(const nlohmann::json& j) {
  const int n = j.at("N").get<int>();
  const int twice_m = j.at("twice_m").get<int>();
  const std::vector<double> coeffs = j.at("coeffs").get<std::vector<double>>();
  return EffectiveState(HalfInt::from_twice(n), HalfInt::from_twice(twice_m), coeffs);
}

nlohmann::json to_json(const FidelityReport& report) {
  return nlohmann::json{{"N", report.N},
                        {"F_P", report.f_parallel},
                        {"F_A", report.f_antiparallel},
                        {"F_O", report.f_optimal},
                        {"I_P", report.i_parallel},
                        {"I_A", report.i_antiparallel},
                        {"I_O", report.i_optimal}};
}

FidelityReport fidelity_report_from_json(const nlohmann::json& j) {
  FidelityReport report;
  report.N = j.at("N").get<int>();
  report.f_parallel = j.at("F_P").get<double>();
  report.f_antiparallel = j.at("F_A").get<double>();
  report.f_optimal = j.at("F_O").get<double>();
  report.i_parallel = j.at("I_P").get<double>();
  report.i_antiparallel = j.at("I_A").get<double>();
  report.i_optimal = j.at("I_O").get<double>();
  return report;
}

std::string fidelity_csv_header() { return "N,F_P,F_A,F_O,I_P,I_A,I_O"; }

std::string fidelity_csv_row(const FidelityReport& report) {
  char line[256];
  std::snprintf(line, sizeof line, "%d,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g", report.N,
                report.f_parallel, report.f_antiparallel, report.f_optimal,
                report.i_parallel, report.i_antiparallel, report.i_optimal);
  return line;
}

nlohmann::json to_json(const MultipoleReport& report) {
  return nlohmann::json{{"J2", report.J.twice()},
                        {"max_abs", report.max_abs},
                        {"pass", report.pass},
                        {"worst", {report.worst_L, report.worst_M}}};
}

nlohmann::json to_json(const SimulationReport& report) {
  return nlohmann::json{{"trials", report.trials},
                        {"mean_fidelity", report.mean_fidelity},
                        {"std_error", report.std_error},
                        {"seed", report.seed},
                        {"rng", report.rng},
                        {"state", report.state_descriptor},
                        {"set", report.set_descriptor}};
}

}  // namespace spindir
