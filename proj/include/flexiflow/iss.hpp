#pragma once

// RV32E interpreter with per-class retirement profiling.
//
// Executes flat little-endian images. Every retired instruction is tagged
// with its InstrClass so the trace can feed the bit-serial timing model.
// ECALL/EBREAK halt the machine; faults halt it without retiring the
// faulting instruction.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flexiflow/error.hpp"
#include "flexiflow/instr_class.hpp"

namespace flexiflow::iss {

inline constexpr unsigned kNumRegs = 16;
inline constexpr unsigned kStackPointer = 2;
inline constexpr std::size_t kDefaultMemSize = 64 * 1024;

enum class HaltReason : std::uint8_t { none, ecall, ebreak, max_steps, fault };

enum class FaultKind : std::uint8_t {
  none,
  illegal_register,
  illegal_instruction,
  memory,
  misaligned_target,
};

constexpr std::string_view to_string(HaltReason r) noexcept {
  switch (r) {
    case HaltReason::none: return "none";
    case HaltReason::ecall: return "ecall";
    case HaltReason::ebreak: return "ebreak";
    case HaltReason::max_steps: return "max_steps";
    case HaltReason::fault: return "fault";
  }
  return "?";
}

constexpr std::optional<HaltReason> halt_reason_from_string(std::string_view s) noexcept {
  for (auto r : {HaltReason::none, HaltReason::ecall, HaltReason::ebreak, HaltReason::max_steps,
                 HaltReason::fault}) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

constexpr std::string_view to_string(FaultKind f) noexcept {
  switch (f) {
    case FaultKind::none: return "none";
    case FaultKind::illegal_register: return "illegal_register";
    case FaultKind::illegal_instruction: return "illegal_instruction";
    case FaultKind::memory: return "memory";
    case FaultKind::misaligned_target: return "misaligned_target";
  }
  return "?";
}

struct MachineState {
  std::uint32_t pc = 0;
  std::array<std::uint32_t, kNumRegs> regs{};
  std::vector<std::uint8_t> mem;
  bool halted = false;
  std::uint64_t retired = 0;
  HaltReason halt_reason = HaltReason::none;
  FaultKind fault = FaultKind::none;
  std::string fault_detail;

  std::uint32_t reg(unsigned i) const noexcept { return i == 0 ? 0u : regs[i]; }
  void set_reg(unsigned i, std::uint32_t v) noexcept {
    if (i != 0) regs[i] = v;
  }
};

// Load parameters that a flat binary cannot carry itself.
struct ProgramManifest {
  std::uint32_t base = 0;
  std::uint32_t entry = 0;
  std::uint32_t sp_init = 0;
  std::uint64_t globals_bytes = 0;
  std::size_t mem_size = kDefaultMemSize;
};

struct ExecutionTrace {
  ClassCounts class_counts;
  std::uint64_t total_instructions = 0;
  std::uint64_t max_stack_excursion = 0;
  HaltReason halt_reason = HaltReason::none;
  FaultKind fault = FaultKind::none;
  std::uint32_t final_pc = 0;

  friend bool operator==(const ExecutionTrace&, const ExecutionTrace&) = default;
};

struct MemoryFootprint {
  double nvm_kb = 0.0;
  double vm_kb = 0.0;
};

inline MachineState load_program(std::span<const std::uint8_t> image, std::uint32_t base,
                                 std::uint32_t entry, std::uint32_t sp_init,
                                 std::size_t mem_size = kDefaultMemSize) {
  if (std::uint64_t{base} + image.size() > mem_size) {
    throw LoadError("image of " + std::to_string(image.size()) + " bytes at base " +
                    std::to_string(base) + " overflows " + std::to_string(mem_size) +
                    "-byte memory");
  }
  if (entry % 4 != 0) throw AlignmentError("entry point " + std::to_string(entry) + " is not 4-aligned");
  if (entry >= mem_size) {
    throw LoadError("entry point " + std::to_string(entry) + " outside memory");
  }
  if (sp_init > mem_size) throw LoadError("initial sp " + std::to_string(sp_init) + " outside memory");

  MachineState s;
  s.mem.assign(mem_size, 0);
  std::copy(image.begin(), image.end(), s.mem.begin() + base);
  s.pc = entry;
  s.regs[kStackPointer] = sp_init;
  return s;
}

inline MachineState load_program(std::span<const std::uint8_t> image, const ProgramManifest& m) {
  return load_program(image, m.base, m.entry, m.sp_init, m.mem_size);
}

namespace detail {

constexpr std::uint32_t bits(std::uint32_t v, unsigned hi, unsigned lo) noexcept {
  return (v >> lo) & ((1u << (hi - lo + 1)) - 1u);
}

constexpr std::int32_t sign_extend(std::uint32_t v, unsigned width) noexcept {
  const std::uint32_t m = 1u << (width - 1);
  return static_cast<std::int32_t>((v ^ m) - m);
}

constexpr std::int32_t imm_i(std::uint32_t in) noexcept { return sign_extend(in >> 20, 12); }
constexpr std::int32_t imm_s(std::uint32_t in) noexcept {
  return sign_extend((bits(in, 31, 25) << 5) | bits(in, 11, 7), 12);
}
constexpr std::int32_t imm_b(std::uint32_t in) noexcept {
  return sign_extend((bits(in, 31, 31) << 12) | (bits(in, 7, 7) << 11) | (bits(in, 30, 25) << 5) |
                         (bits(in, 11, 8) << 1),
                     13);
}
constexpr std::uint32_t imm_u(std::uint32_t in) noexcept { return in & 0xfffff000u; }
constexpr std::int32_t imm_j(std::uint32_t in) noexcept {
  return sign_extend((bits(in, 31, 31) << 20) | (bits(in, 19, 12) << 12) | (bits(in, 20, 20) << 11) |
                         (bits(in, 30, 21) << 1),
                     21);
}

inline bool in_bounds(const MachineState& s, std::uint32_t addr, unsigned size) noexcept {
  return std::uint64_t{addr} + size <= s.mem.size();
}

inline std::uint32_t read_le(const MachineState& s, std::uint32_t addr, unsigned size) noexcept {
  std::uint32_t v = 0;
  for (unsigned i = 0; i < size; ++i) v |= std::uint32_t{s.mem[addr + i]} << (8 * i);
  return v;
}

inline void write_le(MachineState& s, std::uint32_t addr, unsigned size, std::uint32_t v) noexcept {
  for (unsigned i = 0; i < size; ++i) s.mem[addr + i] = static_cast<std::uint8_t>(v >> (8 * i));
}

inline std::optional<InstrClass> fault(MachineState& s, FaultKind kind, std::string detail) {
  s.halted = true;
  s.halt_reason = HaltReason::fault;
  s.fault = kind;
  s.fault_detail = std::move(detail);
  return std::nullopt;
}

inline std::string hex(std::uint32_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out = "0x00000000";
  for (int i = 9; i >= 2; --i, v >>= 4) out[static_cast<std::size_t>(i)] = digits[v & 0xf];
  return out;
}

}  // namespace detail

// Executes one instruction. Returns its class, or nullopt if it faulted.
inline std::optional<InstrClass> step(MachineState& s) {
  using namespace detail;
  if (s.halted) throw Error("step() on a halted machine");

  const std::uint32_t pc = s.pc;
  if (!in_bounds(s, pc, 4)) return fault(s, FaultKind::memory, "fetch outside memory at " + hex(pc));
  const std::uint32_t in = read_le(s, pc, 4);

  const std::uint32_t opcode = bits(in, 6, 0);
  const unsigned rd = bits(in, 11, 7);
  const unsigned funct3 = bits(in, 14, 12);
  const unsigned rs1 = bits(in, 19, 15);
  const unsigned rs2 = bits(in, 24, 20);
  const unsigned funct7 = bits(in, 31, 25);

  auto illegal = [&] {
    return fault(s, FaultKind::illegal_instruction, "illegal instruction " + hex(in) + " at " + hex(pc));
  };
  auto check_regs = [&](std::initializer_list<unsigned> used) {
    return std::all_of(used.begin(), used.end(), [](unsigned r) { return r < kNumRegs; });
  };
  auto bad_reg = [&] {
    return fault(s, FaultKind::illegal_register,
                 "register outside x0..x15 in " + hex(in) + " at " + hex(pc));
  };
  auto retire = [&](InstrClass c, std::uint32_t next_pc) -> std::optional<InstrClass> {
    s.pc = next_pc;
    ++s.retired;
    return c;
  };
  auto jump_to = [&](InstrClass c, std::uint32_t target) -> std::optional<InstrClass> {
    if (target % 4 != 0) {
      return fault(s, FaultKind::misaligned_target, "misaligned target " + hex(target) + " at " + hex(pc));
    }
    return retire(c, target);
  };

  const std::uint32_t a = rs1 < kNumRegs ? s.reg(rs1) : 0;
  const std::uint32_t b = rs2 < kNumRegs ? s.reg(rs2) : 0;

  switch (opcode) {
    case 0x37:  // LUI
      if (!check_regs({rd})) return bad_reg();
      s.set_reg(rd, imm_u(in));
      return retire(InstrClass::upper_imm, pc + 4);

    case 0x17:  // AUIPC
      if (!check_regs({rd})) return bad_reg();
      s.set_reg(rd, pc + imm_u(in));
      return retire(InstrClass::upper_imm, pc + 4);

    case 0x6f: {  // JAL
      if (!check_regs({rd})) return bad_reg();
      const std::uint32_t target = pc + static_cast<std::uint32_t>(imm_j(in));
      if (target % 4 != 0) return jump_to(InstrClass::jump, target);
      s.set_reg(rd, pc + 4);
      return retire(InstrClass::jump, target);
    }

    case 0x67: {  // JALR
      if (funct3 != 0) return illegal();
      if (!check_regs({rd, rs1})) return bad_reg();
      const std::uint32_t target = (a + static_cast<std::uint32_t>(imm_i(in))) & ~1u;
      if (target % 4 != 0) return jump_to(InstrClass::jump, target);
      s.set_reg(rd, pc + 4);
      return retire(InstrClass::jump, target);
    }

    case 0x63: {  // BRANCH
      if (funct3 == 2 || funct3 == 3) return illegal();
      if (!check_regs({rs1, rs2})) return bad_reg();
      const auto sa = static_cast<std::int32_t>(a);
      const auto sb = static_cast<std::int32_t>(b);
      bool taken = false;
      switch (funct3) {
        case 0: taken = a == b; break;
        case 1: taken = a != b; break;
        case 4: taken = sa < sb; break;
        case 5: taken = sa >= sb; break;
        case 6: taken = a < b; break;
        case 7: taken = a >= b; break;
      }
      if (!taken) return retire(InstrClass::branch, pc + 4);
      return jump_to(InstrClass::branch, pc + static_cast<std::uint32_t>(imm_b(in)));
    }

    case 0x03: {  // LOAD
      unsigned size = 0;
      switch (funct3) {
        case 0: case 4: size = 1; break;
        case 1: case 5: size = 2; break;
        case 2: size = 4; break;
        default: return illegal();
      }
      if (!check_regs({rd, rs1})) return bad_reg();
      const std::uint32_t addr = a + static_cast<std::uint32_t>(imm_i(in));
      if (!in_bounds(s, addr, size)) {
        return fault(s, FaultKind::memory, "load outside memory at " + hex(addr));
      }
      std::uint32_t v = read_le(s, addr, size);
      if (funct3 == 0) v = static_cast<std::uint32_t>(sign_extend(v, 8));
      if (funct3 == 1) v = static_cast<std::uint32_t>(sign_extend(v, 16));
      s.set_reg(rd, v);
      return retire(InstrClass::load, pc + 4);
    }

    case 0x23: {  // STORE
      if (funct3 > 2) return illegal();
      if (!check_regs({rs1, rs2})) return bad_reg();
      const unsigned size = 1u << funct3;
      const std::uint32_t addr = a + static_cast<std::uint32_t>(imm_s(in));
      if (!in_bounds(s, addr, size)) {
        return fault(s, FaultKind::memory, "store outside memory at " + hex(addr));
      }
      write_le(s, addr, size, b);
      return retire(InstrClass::store, pc + 4);
    }

    case 0x13: {  // OP-IMM
      const std::int32_t imm = imm_i(in);
      const auto uimm = static_cast<std::uint32_t>(imm);
      const unsigned shamt = rs2;
      InstrClass cls = InstrClass::arith_logic;
      std::uint32_t v = 0;
      switch (funct3) {
        case 0: v = a + uimm; break;
        case 2: v = static_cast<std::int32_t>(a) < imm; cls = InstrClass::set_less_than; break;
        case 3: v = a < uimm; cls = InstrClass::set_less_than; break;
        case 4: v = a ^ uimm; break;
        case 6: v = a | uimm; break;
        case 7: v = a & uimm; break;
        case 1:
          if (funct7 != 0) return illegal();
          v = a << shamt;
          cls = InstrClass::shift;
          break;
        case 5:
          if (funct7 == 0x00) {
            v = a >> shamt;
          } else if (funct7 == 0x20) {
            v = static_cast<std::uint32_t>(static_cast<std::int32_t>(a) >> shamt);
          } else {
            return illegal();
          }
          cls = InstrClass::shift;
          break;
      }
      if (!check_regs({rd, rs1})) return bad_reg();
      s.set_reg(rd, v);
      return retire(cls, pc + 4);
    }

    case 0x33: {  // OP
      if (funct7 != 0x00 && funct7 != 0x20) return illegal();  // includes the M extension
      const bool alt = funct7 == 0x20;
      if (alt && funct3 != 0 && funct3 != 5) return illegal();
      if (!check_regs({rd, rs1, rs2})) return bad_reg();
      const unsigned sh = b & 31u;
      InstrClass cls = InstrClass::arith_logic;
      std::uint32_t v = 0;
      switch (funct3) {
        case 0: v = alt ? a - b : a + b; break;
        case 1: v = a << sh; cls = InstrClass::shift; break;
        case 2: v = static_cast<std::int32_t>(a) < static_cast<std::int32_t>(b); cls = InstrClass::set_less_than; break;
        case 3: v = a < b; cls = InstrClass::set_less_than; break;
        case 4: v = a ^ b; break;
        case 5:
          v = alt ? static_cast<std::uint32_t>(static_cast<std::int32_t>(a) >> sh) : a >> sh;
          cls = InstrClass::shift;
          break;
        case 6: v = a | b; break;
        case 7: v = a & b; break;
      }
      s.set_reg(rd, v);
      return retire(cls, pc + 4);
    }

    case 0x0f:  // MISC-MEM: FENCE / FENCE.I are no-ops on a single hart
      if (funct3 > 1) return illegal();
      return retire(InstrClass::arith_logic, pc + 4);

    case 0x73: {  // SYSTEM
      if (funct3 == 0) {
        const std::uint32_t funct12 = in >> 20;
        if (rd != 0 || rs1 != 0 || funct12 > 1) return illegal();
        ++s.retired;
        s.halted = true;
        s.halt_reason = funct12 == 0 ? HaltReason::ecall : HaltReason::ebreak;
        return InstrClass::system;
      }
      if (funct3 == 4) return illegal();
      // CSR access: no CSRs are modeled, the instruction retires without effect.
      const bool uses_rs1 = funct3 < 4;
      if (rd >= kNumRegs || (uses_rs1 && rs1 >= kNumRegs)) return bad_reg();
      return retire(InstrClass::arith_logic, pc + 4);
    }

    default:
      return illegal();
  }
}

inline ExecutionTrace run(MachineState& s, std::uint64_t max_steps) {
  if (max_steps == 0) throw ConfigError("max_steps must be positive");
  ExecutionTrace t;
  const std::uint32_t sp_start = s.reg(kStackPointer);
  std::uint32_t sp_min = sp_start;

  std::uint64_t n = 0;
  while (!s.halted && n < max_steps) {
    const auto cls = step(s);
    ++n;
    if (cls) ++t.class_counts[*cls];
    sp_min = std::min(sp_min, s.reg(kStackPointer));
  }
  if (!s.halted) {
    s.halted = true;
    s.halt_reason = HaltReason::max_steps;
  }
  t.total_instructions = t.class_counts.total();
  t.max_stack_excursion = sp_start - sp_min;
  t.halt_reason = s.halt_reason;
  t.fault = s.fault;
  t.final_pc = s.pc;
  return t;
}

// NVM covers the loaded image (code + constants); VM covers globals plus peak stack.
inline MemoryFootprint profile_memory(std::span<const std::uint8_t> image, const ExecutionTrace& trace,
                                      std::uint64_t globals_bytes) {
  return {static_cast<double>(image.size()) / 1024.0,
          static_cast<double>(globals_bytes + trace.max_stack_excursion) / 1024.0};
}

}  // namespace flexiflow::iss
