#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "flexiflow/error.hpp"
#include "flexiflow/instr_class.hpp"

namespace flexiflow {

// What one execution of a workload costs, plus its typical deployment.
struct WorkloadProfile {
  std::string name;
  ClassCounts class_counts;  // per single execution
  double nvm_kb = 0.0;
  double vm_kb = 0.0;
  std::optional<double> default_lifetime_s;
  std::optional<double> default_exec_per_s;
  std::optional<double> accuracy;
  std::string sdg;
  std::string notes;
  std::string provenance;

  std::uint64_t total_instructions() const noexcept { return class_counts.total(); }

  void validate() const {
    if (!(nvm_kb >= 0.0) || !(vm_kb >= 0.0)) throw ConfigError("workload '" + name + "': negative memory size");
    if (default_lifetime_s && !(*default_lifetime_s > 0.0)) {
      throw ConfigError("workload '" + name + "': default lifetime must be positive");
    }
    if (default_exec_per_s && !(*default_exec_per_s > 0.0)) {
      throw ConfigError("workload '" + name + "': default execution frequency must be positive");
    }
    if (accuracy && !(*accuracy >= 0.0 && *accuracy <= 1.0)) {
      throw ConfigError("workload '" + name + "': accuracy outside [0, 1]");
    }
  }
};

// Same dynamic instruction count, split into only one-stage or only two-stage work.
inline ClassCounts extreme_mix(std::uint64_t total_non_system, Stage stage, std::uint64_t system = 0) {
  ClassCounts c;
  c[stage == Stage::two_stage ? InstrClass::load : InstrClass::arith_logic] = total_non_system;
  c[InstrClass::system] = system;
  return c;
}

}  // namespace flexiflow
