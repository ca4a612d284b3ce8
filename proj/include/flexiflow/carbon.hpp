#pragma once

// Embodied and operational carbon of a core + memory system.
//
// All arithmetic runs in SI units: watts, seconds, joules, kilograms.
// Grid intensities are quoted in g CO2e/kWh and converted with
// 1 kWh = 3.6e6 J. Idle power is zero: energy is only spent while a program
// execution is running.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flexiflow/error.hpp"
#include "flexiflow/ppa.hpp"

namespace flexiflow::carbon {

inline constexpr double kJoulesPerKWh = 3.6e6;

struct EnergySource {
  std::string name;
  double intensity_g_per_kwh = 0.0;

  double kg_per_kwh() const noexcept { return intensity_g_per_kwh / 1e3; }
  double kg_per_joule() const noexcept { return kg_per_kwh() / kJoulesPerKWh; }

  void validate() const {
    if (!(intensity_g_per_kwh >= 0.0)) throw ConfigError("energy source '" + name + "': negative intensity");
  }
};

inline std::vector<EnergySource> energy_catalog() {
  return {
      {"us_grid", 367.0}, {"coal", 1048.0}, {"petroleum", 1116.0}, {"solar", 28.0}, {"wind", 12.0},
  };
}

inline std::optional<EnergySource> find_source(std::string_view name) {
  for (auto& s : energy_catalog()) {
    if (s.name == name) return s;
  }
  return std::nullopt;
}

struct FoundryConfig {
  double kg_co2e_per_wafer = 0.0;
  double active_wafer_area_mm2 = 0.0;
  double wafer_yield = 1.0;

  void validate() const {
    if (!(kg_co2e_per_wafer > 0.0)) throw ConfigError("kg_co2e_per_wafer must be positive");
    if (!(active_wafer_area_mm2 > 0.0)) throw ConfigError("active_wafer_area_mm2 must be positive");
    if (!(wafer_yield > 0.0 && wafer_yield <= 1.0)) throw ConfigError("wafer_yield must be in (0, 1]");
  }
};

// Illustrative stand-in for proprietary foundry LCA data; not measured values.
inline FoundryConfig sample_foundry() { return {10.0, 25'000.0, 0.9}; }

struct DeploymentScenario {
  double lifetime_s = 0.0;
  double exec_per_s = 0.0;
  EnergySource source;

  double executions() const noexcept { return lifetime_s * exec_per_s; }

  void validate() const {
    if (!(lifetime_s > 0.0)) throw ConfigError("lifetime must be positive");
    if (!(exec_per_s > 0.0)) throw ConfigError("execution frequency must be positive");
    source.validate();
  }
};

struct CarbonReport {
  std::string core_name;
  double embodied_kg = 0.0;
  double operational_kg = 0.0;
  double total_kg = 0.0;
  double runtime_s = 0.0;
  double duty_cycle = 0.0;
  bool feasible = true;  // duty_cycle <= 1
};

namespace detail {

inline double operational_kg(double power_mw, double runtime_s, double exec_per_s, double lifetime_s,
                             const EnergySource& source) noexcept {
  const double joules_per_exec = power_mw / 1e3 * runtime_s;
  const double executions = exec_per_s * lifetime_s;
  return joules_per_exec * executions / kJoulesPerKWh * source.kg_per_kwh();
}

}  // namespace detail

inline double operational_carbon(double power_mw, double runtime_s, double exec_per_s, double lifetime_s,
                                 const EnergySource& source) {
  if (!(power_mw >= 0.0 && runtime_s >= 0.0 && exec_per_s >= 0.0 && lifetime_s >= 0.0)) {
    throw ConfigError("operational carbon inputs must be non-negative");
  }
  source.validate();
  if (exec_per_s * runtime_s > 1.0) {
    throw InfeasibleScenario("duty cycle " + std::to_string(exec_per_s * runtime_s) + " exceeds 100%");
  }
  return detail::operational_kg(power_mw, runtime_s, exec_per_s, lifetime_s, source);
}

inline double embodied_carbon(double die_area_mm2, const FoundryConfig& foundry) {
  foundry.validate();
  if (!(die_area_mm2 >= 0.0)) throw ConfigError("die area must be non-negative");
  if (die_area_mm2 > foundry.active_wafer_area_mm2) {
    throw ConfigError("die area " + std::to_string(die_area_mm2) + " mm2 exceeds the active wafer area");
  }
  return die_area_mm2 / (foundry.active_wafer_area_mm2 * foundry.wafer_yield) * foundry.kg_co2e_per_wafer;
}

// Full report with the duty cycle flagged rather than thrown.
inline CarbonReport assess(const ppa::CoreModel& core, const WorkloadProfile& w,
                           const DeploymentScenario& scenario, const FoundryConfig& foundry,
                           const ppa::MemoryModel& mem) {
  scenario.validate();
  const auto sys = ppa::system_ppa(core, w, mem);

  CarbonReport r;
  r.core_name = core.name;
  r.runtime_s = sys.runtime_s;
  r.duty_cycle = sys.runtime_s * scenario.exec_per_s;
  r.feasible = r.duty_cycle <= 1.0;
  r.embodied_kg = embodied_carbon(sys.total_area_mm2, foundry);
  r.operational_kg = detail::operational_kg(sys.total_power_mw, sys.runtime_s, scenario.exec_per_s,
                                            scenario.lifetime_s, scenario.source);
  r.total_kg = r.embodied_kg + r.operational_kg;
  return r;
}

inline CarbonReport total_carbon(const ppa::CoreModel& core, const WorkloadProfile& w,
                                 const DeploymentScenario& scenario, const FoundryConfig& foundry,
                                 const ppa::MemoryModel& mem) {
  auto r = assess(core, w, scenario, foundry, mem);
  if (!r.feasible) {
    throw InfeasibleScenario("core '" + core.name + "' cannot run '" + w.name + "' at " +
                             std::to_string(scenario.exec_per_s) + " exec/s (duty cycle " +
                             std::to_string(r.duty_cycle) + ")");
  }
  return r;
}

}  // namespace flexiflow::carbon
