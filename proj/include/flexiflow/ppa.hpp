#pragma once

// Power/area data for the bit-serial cores and workload-sized memories,
// and the per-execution energy of a full core + memory system.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flexiflow/error.hpp"
#include "flexiflow/timing.hpp"
#include "flexiflow/workload.hpp"

namespace flexiflow::ppa {

struct CoreModel {
  std::string name;
  std::uint32_t width = 1;
  double area_mm2 = 0.0;   // datapath and control; the register file is SRAM and lives in memory
  double power_mw = 0.0;   // static, frequency independent
  std::uint32_t nand2_gates = 0;
  timing::TimingParams timing;

  void validate() const {
    if (name.empty()) throw ConfigError("core without a name");
    if (!(area_mm2 > 0.0)) throw ConfigError("core '" + name + "': area must be positive");
    if (!(power_mw > 0.0)) throw ConfigError("core '" + name + "': power must be positive");
    timing.validate();
    timing::check_width(width, timing);
  }
};

// SERV, QERV, HERV.
inline std::vector<CoreModel> default_cores() {
  return {
      {"SERV", 1, 2.93, 17.75, 2546, {}},
      {"QERV", 4, 3.68, 21.07, 3198, {}},
      {"HERV", 8, 4.50, 24.99, 3903, {}},
  };
}

// One characterized memory configuration.
struct MemoryRow {
  double lprom_mm2 = 0.0;
  double sram_mm2 = 0.0;
  double area_mm2 = 0.0;
  double power_mw = 0.0;
};

struct MemoryModel {
  double sram_mm2_per_kb = 0.0;
  double sram_base_mm2 = 0.0;
  double sram_mw_per_kb = 0.0;
  double sram_base_mw = 0.0;
  double lprom_mm2_per_kb = 0.0;
  double lprom_mw_per_kb = 0.0;
  std::map<std::string, MemoryRow, std::less<>> exact_table;

  void validate() const {
    for (double c : {sram_mm2_per_kb, sram_base_mm2, sram_mw_per_kb, sram_base_mw, lprom_mm2_per_kb,
                     lprom_mw_per_kb}) {
      if (!(c >= 0.0)) throw ConfigError("memory model coefficients must be non-negative");
    }
    for (const auto& [name, row] : exact_table) {
      if (!(row.area_mm2 >= 0.0) || !(row.power_mw >= 0.0)) {
        throw ConfigError("memory row '" + name + "': negative area or power");
      }
    }
  }
};

// Characterized SRAM/LPROM rows per FlexiBench workload, keyed by workload name.
inline std::map<std::string, MemoryRow, std::less<>> flexibench_memory_rows() {
  return {
      {"Water Quality Monitoring", {0.88, 2.32, 3.20, 2.26}},
      {"Malodor Classification", {2.12, 2.46, 4.58, 2.38}},
      {"HVAC Control", {136.40, 3.15, 139.55, 3.06}},
      {"Smart Irrigation Control", {5.51, 3.38, 8.89, 3.28}},
      {"Air Pollution Monitoring", {182.03, 3.63, 185.66, 3.52}},
      {"Food Spoilage Detection", {7.63, 3.71, 11.33, 3.60}},
      {"Cardiotocography", {9.38, 11.83, 21.21, 11.49}},
      {"Arrhythmia Detection", {9.95, 70.83, 80.79, 68.77}},
      {"Package Tracking", {25.30, 71.95, 97.25, 69.86}},
      {"Tree Tracking", {9.91, 648.01, 657.92, 629.14}},
      {"Gesture Recognition", {575.71, 661.85, 1237.56, 642.58}},
  };
}

// Least-squares fit over the characterized rows: LPROM area through the
// origin in NVM size, SRAM area affine in VM size, total power affine in VM
// with a small NVM term. The SRAM intercept is the register-file SRAM.
inline MemoryModel default_memory_model() {
  MemoryModel m;
  m.lprom_mm2_per_kb = 2.87196;
  m.sram_mm2_per_kb = 16.4875;
  m.sram_base_mm2 = 2.10460;
  m.sram_mw_per_kb = 16.0026;
  m.sram_base_mw = 2.01708;
  m.lprom_mw_per_kb = 0.00213756;
  m.exact_table = flexibench_memory_rows();
  return m;
}

struct MemoryPPA {
  double area_mm2 = 0.0;
  double power_mw = 0.0;
};

inline MemoryPPA memory_ppa(double nvm_kb, double vm_kb, const MemoryModel& m,
                            std::optional<std::string_view> workload_name = std::nullopt) {
  if (!(nvm_kb >= 0.0) || !(vm_kb >= 0.0)) throw ConfigError("memory sizes must be non-negative");
  if (workload_name) {
    if (auto it = m.exact_table.find(*workload_name); it != m.exact_table.end()) {
      return {it->second.area_mm2, it->second.power_mw};
    }
  }
  return {m.lprom_mm2_per_kb * nvm_kb + m.sram_mm2_per_kb * vm_kb + m.sram_base_mm2,
          m.sram_mw_per_kb * vm_kb + m.sram_base_mw + m.lprom_mw_per_kb * nvm_kb};
}

struct SystemPPA {
  double core_area_mm2 = 0.0;
  double mem_area_mm2 = 0.0;
  double total_area_mm2 = 0.0;
  double core_power_mw = 0.0;
  double mem_power_mw = 0.0;
  double total_power_mw = 0.0;
  double runtime_s = 0.0;
  double energy_per_exec_j = 0.0;
  double core_energy_per_exec_j = 0.0;
};

inline SystemPPA system_ppa(const CoreModel& core, const WorkloadProfile& w, const MemoryModel& mem) {
  core.validate();
  w.validate();
  const auto m = memory_ppa(w.nvm_kb, w.vm_kb, mem, w.name);
  const auto cycles = timing::workload_cycles(w, core.width, core.timing);

  SystemPPA s;
  s.core_area_mm2 = core.area_mm2;
  s.mem_area_mm2 = m.area_mm2;
  s.total_area_mm2 = core.area_mm2 + m.area_mm2;
  s.core_power_mw = core.power_mw;
  s.mem_power_mw = m.power_mw;
  s.total_power_mw = core.power_mw + m.power_mw;
  s.runtime_s = cycles.runtime_s;
  s.energy_per_exec_j = s.total_power_mw / 1e3 * s.runtime_s;
  s.core_energy_per_exec_j = s.core_power_mw / 1e3 * s.runtime_s;
  return s;
}

}  // namespace flexiflow::ppa
