#pragma once

// JSON forms of every on-disk artifact: program manifests, traces, workload
// profiles, core/memory/foundry/energy packs, scenarios, variant packs,
// scale scenarios and decision maps.
//
// Emission uses insertion-ordered objects so that load -> emit is
// byte-stable. Optional fields are omitted rather than written as null.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "flexiflow/carbon.hpp"
#include "flexiflow/dse.hpp"
#include "flexiflow/error.hpp"
#include "flexiflow/iss.hpp"
#include "flexiflow/ppa.hpp"
#include "flexiflow/scale.hpp"
#include "flexiflow/workload.hpp"

namespace flexiflow::io {

using Json = nlohmann::ordered_json;

// ---- files ---------------------------------------------------------------

inline std::vector<std::uint8_t> read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write " + p.string());
  out << text;
  if (!out) throw IoError("write failed for " + p.string());
}

inline Json parse_json(const std::string& text, const std::string& origin = "<input>") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw IoError(origin + ": " + e.what());
  }
}

inline Json read_json(const std::filesystem::path& p) { return parse_json(read_text(p), p.string()); }

// Two-space indent plus trailing newline.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---- field access ----------------------------------------------------------

namespace detail {

template <class T>
T get(const Json& j, const char* key, const std::string& ctx) {
  if (!j.is_object() || !j.contains(key)) throw IoError(ctx + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw IoError(ctx + ": bad field '" + key + "': " + e.what());
  }
}

template <class T>
std::optional<T> get_opt(const Json& j, const char* key, const std::string& ctx) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get<T>(j, key, ctx);
}

template <class T>
T get_or(const Json& j, const char* key, T fallback, const std::string& ctx) {
  return get_opt<T>(j, key, ctx).value_or(fallback);
}

}  // namespace detail

// ---- class counts / traces --------------------------------------------------

inline Json to_json(const ClassCounts& c) {
  Json j = Json::object();
  for (InstrClass k : kAllInstrClasses) j[std::string(to_string(k))] = c[k];
  return j;
}

inline ClassCounts class_counts_from_json(const Json& j, const std::string& ctx) {
  if (!j.is_object()) throw IoError(ctx + ": class_counts must be an object");
  ClassCounts c;
  for (const auto& [key, value] : j.items()) {
    const auto k = instr_class_from_string(key);
    if (!k) throw IoError(ctx + ": unknown instruction class '" + key + "'");
    if (!value.is_number_integer() || value.get<std::int64_t>() < 0) {
      throw IoError(ctx + ": count for '" + key + "' must be a non-negative integer");
    }
    c[*k] = value.get<std::uint64_t>();
  }
  return c;
}

inline Json to_json(const iss::ExecutionTrace& t) {
  Json j;
  j["class_counts"] = to_json(t.class_counts);
  j["total_instructions"] = t.total_instructions;
  j["max_stack_excursion"] = t.max_stack_excursion;
  j["halt_reason"] = std::string(iss::to_string(t.halt_reason));
  if (t.fault != iss::FaultKind::none) j["fault"] = std::string(iss::to_string(t.fault));
  j["final_pc"] = t.final_pc;
  return j;
}

inline iss::ExecutionTrace trace_from_json(const Json& j) {
  const std::string ctx = "trace";
  iss::ExecutionTrace t;
  t.class_counts = class_counts_from_json(detail::get<Json>(j, "class_counts", ctx), ctx);
  t.total_instructions = detail::get<std::uint64_t>(j, "total_instructions", ctx);
  t.max_stack_excursion = detail::get<std::uint64_t>(j, "max_stack_excursion", ctx);
  const auto reason = detail::get<std::string>(j, "halt_reason", ctx);
  const auto parsed = iss::halt_reason_from_string(reason);
  if (!parsed) throw IoError(ctx + ": unknown halt_reason '" + reason + "'");
  t.halt_reason = *parsed;
  if (auto f = detail::get_opt<std::string>(j, "fault", ctx)) {
    bool found = false;
    for (auto k : {iss::FaultKind::illegal_register, iss::FaultKind::illegal_instruction, iss::FaultKind::memory,
                   iss::FaultKind::misaligned_target}) {
      if (iss::to_string(k) == *f) {
        t.fault = k;
        found = true;
      }
    }
    if (!found) throw IoError(ctx + ": unknown fault '" + *f + "'");
  }
  t.final_pc = detail::get_or<std::uint32_t>(j, "final_pc", 0, ctx);
  if (t.total_instructions != t.class_counts.total()) {
    throw IoError(ctx + ": total_instructions does not match class_counts");
  }
  return t;
}

inline iss::ProgramManifest manifest_from_json(const Json& j) {
  const std::string ctx = "manifest";
  iss::ProgramManifest m;
  m.base = detail::get<std::uint32_t>(j, "base", ctx);
  m.entry = detail::get<std::uint32_t>(j, "entry", ctx);
  m.sp_init = detail::get<std::uint32_t>(j, "sp_init", ctx);
  m.globals_bytes = detail::get_or<std::uint64_t>(j, "globals_bytes", 0, ctx);
  m.mem_size = detail::get_or<std::size_t>(j, "mem_size", iss::kDefaultMemSize, ctx);
  return m;
}

inline Json to_json(const iss::ProgramManifest& m) {
  Json j;
  j["base"] = m.base;
  j["entry"] = m.entry;
  j["sp_init"] = m.sp_init;
  j["globals_bytes"] = m.globals_bytes;
  j["mem_size"] = m.mem_size;
  return j;
}

// ---- workload profiles -------------------------------------------------------

inline Json to_json(const WorkloadProfile& w) {
  Json j;
  j["name"] = w.name;
  if (!w.sdg.empty()) j["sdg"] = w.sdg;
  j["class_counts"] = to_json(w.class_counts);
  j["nvm_kb"] = w.nvm_kb;
  j["vm_kb"] = w.vm_kb;
  if (w.default_lifetime_s) j["default_lifetime_s"] = *w.default_lifetime_s;
  if (w.default_exec_per_s) j["default_exec_per_s"] = *w.default_exec_per_s;
  if (w.accuracy) j["accuracy"] = *w.accuracy;
  if (!w.provenance.empty()) j["provenance"] = w.provenance;
  if (!w.notes.empty()) j["notes"] = w.notes;
  return j;
}

inline WorkloadProfile profile_from_json(const Json& j) {
  const std::string ctx = "workload " + (j.is_object() && j.contains("name") && j["name"].is_string()
                                             ? "'" + j["name"].get<std::string>() + "'"
                                             : std::string("profile"));
  WorkloadProfile w;
  w.name = detail::get<std::string>(j, "name", ctx);
  w.sdg = detail::get_or<std::string>(j, "sdg", "", ctx);
  w.class_counts = class_counts_from_json(detail::get<Json>(j, "class_counts", ctx), ctx);
  w.nvm_kb = detail::get<double>(j, "nvm_kb", ctx);
  w.vm_kb = detail::get<double>(j, "vm_kb", ctx);
  w.default_lifetime_s = detail::get_opt<double>(j, "default_lifetime_s", ctx);
  w.default_exec_per_s = detail::get_opt<double>(j, "default_exec_per_s", ctx);
  w.accuracy = detail::get_opt<double>(j, "accuracy", ctx);
  w.provenance = detail::get_or<std::string>(j, "provenance", "", ctx);
  w.notes = detail::get_or<std::string>(j, "notes", "", ctx);
  try {
    w.validate();
  } catch (const ConfigError& e) {
    throw IoError(e.what());
  }
  return w;
}

// ---- model packs -------------------------------------------------------------

inline Json to_json(const timing::TimingParams& t) {
  Json j;
  j["one_stage_overhead"] = t.one_stage_overhead;
  j["two_stage_overhead"] = t.two_stage_overhead;
  j["word_bits"] = t.word_bits;
  j["clock_hz"] = t.clock_hz;
  return j;
}

inline timing::TimingParams timing_from_json(const Json& j) {
  const std::string ctx = "timing";
  timing::TimingParams t;
  t.one_stage_overhead = detail::get_or<std::uint32_t>(j, "one_stage_overhead", t.one_stage_overhead, ctx);
  t.two_stage_overhead = detail::get_or<std::uint32_t>(j, "two_stage_overhead", t.two_stage_overhead, ctx);
  t.word_bits = detail::get_or<std::uint32_t>(j, "word_bits", t.word_bits, ctx);
  t.clock_hz = detail::get_or<double>(j, "clock_hz", t.clock_hz, ctx);
  return t;
}

inline Json to_json(const ppa::CoreModel& c) {
  Json j;
  j["name"] = c.name;
  j["width"] = c.width;
  j["area_mm2"] = c.area_mm2;
  j["power_mw"] = c.power_mw;
  j["nand2_gates"] = c.nand2_gates;
  j["timing"] = to_json(c.timing);
  return j;
}

inline ppa::CoreModel core_from_json(const Json& j) {
  const std::string ctx = "core";
  ppa::CoreModel c;
  c.name = detail::get<std::string>(j, "name", ctx);
  c.width = detail::get<std::uint32_t>(j, "width", ctx);
  c.area_mm2 = detail::get<double>(j, "area_mm2", ctx);
  c.power_mw = detail::get<double>(j, "power_mw", ctx);
  c.nand2_gates = detail::get_or<std::uint32_t>(j, "nand2_gates", 0, ctx);
  if (j.contains("timing")) c.timing = timing_from_json(j.at("timing"));
  c.validate();
  return c;
}

// Accepts a bare array or {"cores": [...]}.
inline std::vector<ppa::CoreModel> cores_from_json(const Json& j) {
  const Json& arr = j.is_object() && j.contains("cores") ? j.at("cores") : j;
  if (!arr.is_array()) throw IoError("cores: expected an array of core models");
  std::vector<ppa::CoreModel> out;
  for (const auto& c : arr) out.push_back(core_from_json(c));
  if (out.empty()) throw ConfigError("cores: empty core list");
  return out;
}

inline Json to_json(const ppa::MemoryModel& m) {
  Json j;
  j["lprom_mm2_per_kb"] = m.lprom_mm2_per_kb;
  j["lprom_mw_per_kb"] = m.lprom_mw_per_kb;
  j["sram_mm2_per_kb"] = m.sram_mm2_per_kb;
  j["sram_base_mm2"] = m.sram_base_mm2;
  j["sram_mw_per_kb"] = m.sram_mw_per_kb;
  j["sram_base_mw"] = m.sram_base_mw;
  Json rows = Json::object();
  for (const auto& [name, r] : m.exact_table) {
    rows[name] = Json{{"lprom_mm2", r.lprom_mm2}, {"sram_mm2", r.sram_mm2}, {"area_mm2", r.area_mm2},
                      {"power_mw", r.power_mw}};
  }
  j["exact_table"] = rows;
  return j;
}

inline ppa::MemoryModel memory_from_json(const Json& j) {
  const std::string ctx = "memory";
  ppa::MemoryModel m;
  m.lprom_mm2_per_kb = detail::get<double>(j, "lprom_mm2_per_kb", ctx);
  m.lprom_mw_per_kb = detail::get_or<double>(j, "lprom_mw_per_kb", 0.0, ctx);
  m.sram_mm2_per_kb = detail::get<double>(j, "sram_mm2_per_kb", ctx);
  m.sram_base_mm2 = detail::get<double>(j, "sram_base_mm2", ctx);
  m.sram_mw_per_kb = detail::get<double>(j, "sram_mw_per_kb", ctx);
  m.sram_base_mw = detail::get<double>(j, "sram_base_mw", ctx);
  if (j.contains("exact_table")) {
    for (const auto& [name, r] : j.at("exact_table").items()) {
      const std::string rctx = ctx + " row '" + name + "'";
      ppa::MemoryRow row;
      row.lprom_mm2 = detail::get_or<double>(r, "lprom_mm2", 0.0, rctx);
      row.sram_mm2 = detail::get_or<double>(r, "sram_mm2", 0.0, rctx);
      row.area_mm2 = detail::get<double>(r, "area_mm2", rctx);
      row.power_mw = detail::get<double>(r, "power_mw", rctx);
      m.exact_table.emplace(name, row);
    }
  }
  m.validate();
  return m;
}

inline Json to_json(const carbon::FoundryConfig& f) {
  Json j;
  j["kg_co2e_per_wafer"] = f.kg_co2e_per_wafer;
  j["active_wafer_area_mm2"] = f.active_wafer_area_mm2;
  j["wafer_yield"] = f.wafer_yield;
  return j;
}

inline carbon::FoundryConfig foundry_from_json(const Json& j) {
  const std::string ctx = "foundry";
  carbon::FoundryConfig f;
  f.kg_co2e_per_wafer = detail::get<double>(j, "kg_co2e_per_wafer", ctx);
  f.active_wafer_area_mm2 = detail::get<double>(j, "active_wafer_area_mm2", ctx);
  f.wafer_yield = detail::get<double>(j, "wafer_yield", ctx);
  f.validate();
  return f;
}

inline Json to_json(const carbon::EnergySource& s) {
  return Json{{"name", s.name}, {"intensity_g_per_kwh", s.intensity_g_per_kwh}};
}

inline carbon::EnergySource source_from_json(const Json& j) {
  const std::string ctx = "energy source";
  carbon::EnergySource s;
  s.name = detail::get_or<std::string>(j, "name", "custom", ctx);
  s.intensity_g_per_kwh = detail::get<double>(j, "intensity_g_per_kwh", ctx);
  s.validate();
  return s;
}

// Accepts a bare array or {"sources": [...]}.
inline std::vector<carbon::EnergySource> sources_from_json(const Json& j) {
  const Json& arr = j.is_object() && j.contains("sources") ? j.at("sources") : j;
  if (!arr.is_array()) throw IoError("energy: expected an array of sources");
  std::vector<carbon::EnergySource> out;
  for (const auto& s : arr) out.push_back(source_from_json(s));
  return out;
}

// A source given by catalog name or inline {"name", "intensity_g_per_kwh"}.
inline carbon::EnergySource resolve_source(const Json& j, const std::vector<carbon::EnergySource>& catalog) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    for (const auto& s : catalog) {
      if (s.name == name) return s;
    }
    throw ConfigError("unknown energy source '" + name + "'");
  }
  return source_from_json(j);
}

inline carbon::DeploymentScenario scenario_from_json(const Json& j,
                                                     const std::vector<carbon::EnergySource>& catalog) {
  const std::string ctx = "scenario";
  carbon::DeploymentScenario s;
  s.lifetime_s = detail::get<double>(j, "lifetime_s", ctx);
  s.exec_per_s = detail::get<double>(j, "exec_per_s", ctx);
  s.source = j.contains("source") ? resolve_source(j.at("source"), catalog) : catalog.at(0);
  s.validate();
  return s;
}

inline Json to_json(const carbon::DeploymentScenario& s) {
  Json j;
  j["lifetime_s"] = s.lifetime_s;
  j["exec_per_s"] = s.exec_per_s;
  j["source"] = to_json(s.source);
  return j;
}

inline Json to_json(const carbon::CarbonReport& r) {
  Json j;
  j["core"] = r.core_name;
  j["embodied_kg"] = r.embodied_kg;
  j["operational_kg"] = r.operational_kg;
  j["total_kg"] = r.total_kg;
  j["runtime_s"] = r.runtime_s;
  j["duty_cycle"] = r.duty_cycle;
  j["feasible"] = r.feasible;
  return j;
}

// ---- algorithm variants --------------------------------------------------------

inline std::vector<dse::AlgorithmVariant> variants_from_json(const Json& j) {
  const Json& arr = j.is_object() && j.contains("variants") ? j.at("variants") : j;
  if (!arr.is_array()) throw IoError("variants: expected an array");
  std::vector<dse::AlgorithmVariant> out;
  for (const auto& v : arr) {
    const std::string ctx = "variant";
    dse::AlgorithmVariant a;
    a.name = detail::get<std::string>(v, "name", ctx);
    a.profile = profile_from_json(detail::get<Json>(v, "profile", ctx + " '" + a.name + "'"));
    const auto acc = detail::get_opt<double>(v, "accuracy", ctx);
    if (!acc && !a.profile.accuracy) throw IoError("variant '" + a.name + "': missing accuracy");
    a.accuracy = acc.value_or(a.profile.accuracy.value_or(0.0));
    if (!(a.accuracy >= 0.0 && a.accuracy <= 1.0)) throw IoError("variant '" + a.name + "': accuracy outside [0, 1]");
    out.push_back(std::move(a));
  }
  return out;
}

// ---- scale scenarios -------------------------------------------------------------

struct ScaleSystem {
  std::string name;
  double device_footprint_kg = 0.0;
};

struct ScalePack {
  std::string name;
  scale::ScaleScenario base;  // device_footprint_kg unused; see systems
  std::vector<double> effectiveness_rates{1.0, 0.1, 0.01, 0.001};
  std::vector<ScaleSystem> systems;

  scale::ScaleScenario scenario_for(const ScaleSystem& sys) const {
    auto s = base;
    s.device_footprint_kg = sys.device_footprint_kg;
    return s;
  }
};

// The product volume may be given in kg units or in pounds ("units_lb_per_year").
inline ScalePack scale_pack_from_json(const Json& j) {
  const std::string ctx = "scale scenario";
  ScalePack p;
  p.name = detail::get_or<std::string>(j, "name", "", ctx);
  if (auto lb = detail::get_opt<double>(j, "units_lb_per_year", ctx)) {
    p.base.units_per_year = scale::pounds_to_kg(*lb);
  } else {
    p.base.units_per_year = detail::get<double>(j, "units_per_year", ctx);
  }
  p.base.co2e_per_unit_kg = detail::get<double>(j, "co2e_per_unit_kg", ctx);
  p.base.waste_fraction = detail::get<double>(j, "waste_fraction", ctx);
  p.base.car_equiv_kg_per_year =
      detail::get_or<double>(j, "car_equiv_kg_per_year", scale::kDefaultCarKgPerYear, ctx);
  if (j.contains("effectiveness_rates")) {
    p.effectiveness_rates = detail::get<std::vector<double>>(j, "effectiveness_rates", ctx);
  }
  for (double r : p.effectiveness_rates) {
    if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("effectiveness rate " + std::to_string(r) + " outside [0, 1]");
  }
  if (j.contains("systems")) {
    for (const auto& s : j.at("systems")) {
      p.systems.push_back({detail::get<std::string>(s, "name", ctx), detail::get<double>(s, "device_footprint_kg", ctx)});
    }
  } else {
    p.systems.push_back({p.name, detail::get<double>(j, "device_footprint_kg", ctx)});
  }
  for (const auto& s : p.systems) p.scenario_for(s).validate();
  return p;
}

// ---- decision maps ------------------------------------------------------------------

inline Json to_json(const dse::DecisionMap& m) {
  Json j;
  j["workload"] = m.workload;
  j["source"] = Json{{"name", m.source_name}, {"intensity_g_per_kwh", m.intensity_g_per_kwh}};
  Json cores = Json::array();
  for (std::size_t i = 0; i < m.core_names.size(); ++i) {
    cores.push_back(Json{{"name", m.core_names[i]}, {"width", m.core_widths[i]}, {"area_mm2", m.core_areas_mm2[i]}});
  }
  j["cores"] = cores;
  j["lifetimes_s"] = m.lifetimes_s;
  j["frequencies_per_s"] = m.frequencies;
  if (m.marker) {
    j["marker"] = Json{{"row", m.marker->first},
                       {"col", m.marker->second},
                       {"lifetime_s", m.lifetimes_s[m.marker->first]},
                       {"exec_per_s", m.frequencies[m.marker->second]}};
  }
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.lifetimes_s.size(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.frequencies.size(); ++c) {
      const auto& cell = m.at(r, c);
      Json jc;
      jc["optimal"] = cell.optimal ? Json(m.core_names[*cell.optimal]) : Json(nullptr);
      jc["total_kg"] = cell.total_kg;
      Json feas = Json::array();
      for (bool f : cell.feasible) feas.push_back(f);
      jc["feasible"] = feas;
      row.push_back(jc);
    }
    rows.push_back(row);
  }
  j["cells"] = rows;
  return j;
}

inline dse::DecisionMap decision_map_from_json(const Json& j) {
  const std::string ctx = "decision map";
  dse::DecisionMap m;
  m.workload = detail::get<std::string>(j, "workload", ctx);
  const auto src = source_from_json(detail::get<Json>(j, "source", ctx));
  m.source_name = src.name;
  m.intensity_g_per_kwh = src.intensity_g_per_kwh;
  for (const auto& c : detail::get<Json>(j, "cores", ctx)) {
    m.core_names.push_back(detail::get<std::string>(c, "name", ctx));
    m.core_widths.push_back(detail::get<std::uint32_t>(c, "width", ctx));
    m.core_areas_mm2.push_back(detail::get<double>(c, "area_mm2", ctx));
  }
  m.lifetimes_s = detail::get<std::vector<double>>(j, "lifetimes_s", ctx);
  m.frequencies = detail::get<std::vector<double>>(j, "frequencies_per_s", ctx);
  if (j.contains("marker")) {
    const auto& mk = j.at("marker");
    m.marker = std::pair{detail::get<std::size_t>(mk, "row", ctx), detail::get<std::size_t>(mk, "col", ctx)};
  }
  const auto& rows = detail::get<Json>(j, "cells", ctx);
  if (!rows.is_array() || rows.size() != m.lifetimes_s.size()) throw IoError(ctx + ": row count mismatch");
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != m.frequencies.size()) throw IoError(ctx + ": column count mismatch");
    for (const auto& jc : row) {
      dse::Cell cell;
      if (!jc.at("optimal").is_null()) {
        const auto name = jc.at("optimal").get<std::string>();
        const auto it = std::find(m.core_names.begin(), m.core_names.end(), name);
        if (it == m.core_names.end()) throw IoError(ctx + ": unknown core '" + name + "' in cell");
        cell.optimal = static_cast<std::size_t>(it - m.core_names.begin());
      }
      cell.total_kg = detail::get<std::vector<double>>(jc, "total_kg", ctx);
      for (const auto& f : detail::get<Json>(jc, "feasible", ctx)) cell.feasible.push_back(f.get<bool>());
      m.cells.push_back(std::move(cell));
    }
  }
  return m;
}

}  // namespace flexiflow::io
