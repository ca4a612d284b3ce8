#pragma once

// Analytic cycle model for bit-serial cores.
//
// A core of datapath width W needs word_bits/W cycles per pass. One-stage
// instructions make a single pass plus fetch overhead; two-stage
// instructions make two passes plus a larger overhead. With the defaults a
// 1-bit core spends 35 cycles on a one-stage and 70 on a two-stage
// instruction.

#include <array>
#include <cstdint>

#include "flexiflow/error.hpp"
#include "flexiflow/instr_class.hpp"
#include "flexiflow/workload.hpp"

namespace flexiflow::timing {

struct TimingParams {
  std::uint32_t one_stage_overhead = 3;
  std::uint32_t two_stage_overhead = 6;
  std::uint32_t word_bits = 32;
  double clock_hz = 10'000.0;

  void validate() const {
    if (word_bits != 32) throw ConfigError("word_bits must be 32");
    if (!(clock_hz > 0.0)) throw ConfigError("clock_hz must be positive");
  }

  friend bool operator==(const TimingParams&, const TimingParams&) = default;
};

struct CycleReport {
  std::uint64_t total_cycles = 0;
  double runtime_s = 0.0;
  std::array<std::uint64_t, kNumInstrClasses> per_class_cycles{};
};

inline void check_width(std::uint32_t width, const TimingParams& p) {
  if (width == 0 || width > p.word_bits || p.word_bits % width != 0) {
    throw ConfigError("unsupported datapath width " + std::to_string(width));
  }
}

inline std::uint64_t cycles_per_instruction(InstrClass c, std::uint32_t width, const TimingParams& p) {
  p.validate();
  check_width(width, p);
  const std::uint64_t pass = p.word_bits / width;
  switch (stage_of(c)) {
    case Stage::one_stage: return pass + p.one_stage_overhead;
    case Stage::two_stage: return 2 * pass + p.two_stage_overhead;
    case Stage::none: return 0;
  }
  return 0;
}

inline CycleReport workload_cycles(const ClassCounts& counts, std::uint32_t width, const TimingParams& p) {
  CycleReport r;
  for (InstrClass c : kAllInstrClasses) {
    const std::uint64_t cyc = counts[c] * cycles_per_instruction(c, width, p);
    r.per_class_cycles[index_of(c)] = cyc;
    r.total_cycles += cyc;
  }
  r.runtime_s = static_cast<double>(r.total_cycles) / p.clock_hz;
  return r;
}

inline CycleReport workload_cycles(const WorkloadProfile& w, std::uint32_t width, const TimingParams& p) {
  return workload_cycles(w.class_counts, width, p);
}

// cycles(width_a) / cycles(width_b); > 1 means width_b is faster.
inline double speedup(const ClassCounts& counts, std::uint32_t width_a, std::uint32_t width_b,
                      const TimingParams& p) {
  const auto a = workload_cycles(counts, width_a, p).total_cycles;
  const auto b = workload_cycles(counts, width_b, p).total_cycles;
  if (b == 0) throw UndefinedRatio("speedup undefined: zero cycles at width " + std::to_string(width_b));
  return static_cast<double>(a) / static_cast<double>(b);
}

inline double speedup(const WorkloadProfile& w, std::uint32_t width_a, std::uint32_t width_b,
                      const TimingParams& p) {
  return speedup(w.class_counts, width_a, width_b, p);
}

}  // namespace flexiflow::timing
