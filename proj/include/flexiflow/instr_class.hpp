#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace flexiflow {

// Timing classes of retired instructions on the bit-serial cores.
enum class InstrClass : std::uint8_t {
  arith_logic,
  upper_imm,
  load,
  store,
  branch,
  jump,
  shift,
  set_less_than,
  system,
};

inline constexpr std::size_t kNumInstrClasses = 9;

inline constexpr std::array<InstrClass, kNumInstrClasses> kAllInstrClasses = {
    InstrClass::arith_logic, InstrClass::upper_imm, InstrClass::load,
    InstrClass::store,       InstrClass::branch,    InstrClass::jump,
    InstrClass::shift,       InstrClass::set_less_than, InstrClass::system,
};

// How many passes through the serial datapath an instruction needs.
enum class Stage : std::uint8_t { none, one_stage, two_stage };

constexpr Stage stage_of(InstrClass c) noexcept {
  switch (c) {
    case InstrClass::arith_logic:
    case InstrClass::upper_imm:
      return Stage::one_stage;
    case InstrClass::load:
    case InstrClass::store:
    case InstrClass::branch:
    case InstrClass::jump:
    case InstrClass::shift:
    case InstrClass::set_less_than:
      return Stage::two_stage;
    case InstrClass::system:
      return Stage::none;
  }
  return Stage::none;
}

constexpr std::size_t index_of(InstrClass c) noexcept { return static_cast<std::size_t>(c); }

constexpr std::string_view to_string(InstrClass c) noexcept {
  switch (c) {
    case InstrClass::arith_logic: return "arith_logic";
    case InstrClass::upper_imm: return "upper_imm";
    case InstrClass::load: return "load";
    case InstrClass::store: return "store";
    case InstrClass::branch: return "branch";
    case InstrClass::jump: return "jump";
    case InstrClass::shift: return "shift";
    case InstrClass::set_less_than: return "set_less_than";
    case InstrClass::system: return "system";
  }
  return "?";
}

constexpr std::optional<InstrClass> instr_class_from_string(std::string_view name) noexcept {
  for (InstrClass c : kAllInstrClasses) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

// Dense per-class counter, indexed by InstrClass.
class ClassCounts {
 public:
  constexpr ClassCounts() = default;

  constexpr std::uint64_t& operator[](InstrClass c) noexcept { return counts_[index_of(c)]; }
  constexpr std::uint64_t operator[](InstrClass c) const noexcept { return counts_[index_of(c)]; }

  constexpr std::uint64_t total() const noexcept {
    std::uint64_t sum = 0;
    for (auto n : counts_) sum += n;
    return sum;
  }

  constexpr std::uint64_t stage_total(Stage s) const noexcept {
    std::uint64_t sum = 0;
    for (InstrClass c : kAllInstrClasses) {
      if (stage_of(c) == s) sum += (*this)[c];
    }
    return sum;
  }

  constexpr ClassCounts& operator+=(const ClassCounts& other) noexcept {
    for (std::size_t i = 0; i < kNumInstrClasses; ++i) counts_[i] += other.counts_[i];
    return *this;
  }

  friend constexpr ClassCounts operator+(ClassCounts a, const ClassCounts& b) noexcept {
    a += b;
    return a;
  }

  friend constexpr bool operator==(const ClassCounts&, const ClassCounts&) = default;

 private:
  std::array<std::uint64_t, kNumInstrClasses> counts_{};
};

}  // namespace flexiflow
