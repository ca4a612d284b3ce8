#pragma once

// Lifetime-aware design-space exploration.
//
// For a fixed workload, a core's total carbon is affine in the number of
// executions N = lifetime * frequency: embodied + N * energy/exec *
// intensity. Two cores therefore swap order exactly once, at the crossover
// N*, and the carbon-optimal core over a lifetime x frequency grid changes
// along lines of constant L*f (diagonals in log-log space).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flexiflow/carbon.hpp"
#include "flexiflow/error.hpp"
#include "flexiflow/ppa.hpp"
#include "flexiflow/units.hpp"
#include "flexiflow/workload.hpp"

namespace flexiflow::dse {

using carbon::CarbonReport;
using carbon::DeploymentScenario;
using carbon::EnergySource;
using carbon::FoundryConfig;
using ppa::CoreModel;
using ppa::MemoryModel;

struct Selection {
  std::optional<std::size_t> optimal;  // index into the core list; empty when no core is feasible
  std::vector<CarbonReport> reports;   // one per core, in input order

  const CarbonReport& optimal_report() const { return reports.at(optimal.value()); }
};

namespace detail {

// Strict "a is preferred over b": lower carbon, then smaller core area, then input order.
inline bool preferred(const CarbonReport& a, const CoreModel& ca, std::size_t ia, const CarbonReport& b,
                      const CoreModel& cb, std::size_t ib) {
  if (a.total_kg != b.total_kg) return a.total_kg < b.total_kg;
  if (ca.area_mm2 != cb.area_mm2) return ca.area_mm2 < cb.area_mm2;
  return ia < ib;
}

}  // namespace detail

// Argmin of total carbon over the feasible cores.
inline Selection select_optimal(std::span<const CoreModel> cores, const WorkloadProfile& w,
                                const DeploymentScenario& scenario, const FoundryConfig& foundry,
                                const MemoryModel& mem) {
  if (cores.empty()) throw ConfigError("no cores to select from");
  Selection sel;
  sel.reports.reserve(cores.size());
  for (std::size_t i = 0; i < cores.size(); ++i) {
    sel.reports.push_back(carbon::assess(cores[i], w, scenario, foundry, mem));
    const auto& r = sel.reports.back();
    if (!r.feasible) continue;
    if (!sel.optimal ||
        detail::preferred(r, cores[i], i, sel.reports[*sel.optimal], cores[*sel.optimal], *sel.optimal)) {
      sel.optimal = i;
    }
  }
  return sel;
}

// N* = delta_embodied / (delta_energy * intensity). Empty when one side dominates at every N.
inline std::optional<double> crossover_executions(double delta_embodied_kg, double delta_energy_j,
                                                  const EnergySource& source) {
  const double per_exec_kg = delta_energy_j * source.kg_per_joule();
  if (!(delta_embodied_kg > 0.0) || !(per_exec_kg > 0.0)) return std::nullopt;
  return delta_embodied_kg / per_exec_kg;
}

// Executions after which core_b (more embodied, less energy/exec) beats core_a.
inline std::optional<double> crossover_executions(const CoreModel& core_a, const CoreModel& core_b,
                                                  const WorkloadProfile& w, const EnergySource& source,
                                                  const FoundryConfig& foundry, const MemoryModel& mem) {
  const auto a = ppa::system_ppa(core_a, w, mem);
  const auto b = ppa::system_ppa(core_b, w, mem);
  const double d_emb =
      carbon::embodied_carbon(b.total_area_mm2, foundry) - carbon::embodied_carbon(a.total_area_mm2, foundry);
  return crossover_executions(d_emb, a.energy_per_exec_j - b.energy_per_exec_j, source);
}

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct GridSpec {
  Range lifetime_s{units::kSecondsPerDay, 20 * units::kSecondsPerYear};
  Range exec_per_s{1.0 / units::kSecondsPerDay, 1.0};
  double points_per_decade = 20.0;
};

// n >= 2 log-spaced points from lo to hi inclusive.
inline std::vector<double> log_points(Range r, std::size_t n) {
  if (!(r.lo > 0.0) || !(r.hi > r.lo)) throw ConfigError("grid range must be positive and increasing");
  if (n < 2) throw ConfigError("grid axis needs at least 2 points");
  std::vector<double> out(n);
  const double a = std::log10(r.lo);
  const double b = std::log10(r.hi);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = std::pow(10.0, a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1));
  }
  out.front() = r.lo;
  out.back() = r.hi;
  return out;
}

// Grid with the given density; endpoints included, at least 2 points.
inline std::vector<double> log_grid(Range r, double points_per_decade) {
  if (!(points_per_decade > 0.0)) throw ConfigError("points_per_decade must be positive");
  if (!(r.lo > 0.0) || !(r.hi > r.lo)) throw ConfigError("grid range must be positive and increasing");
  const double steps = std::round(points_per_decade * std::log10(r.hi / r.lo));
  return log_points(r, static_cast<std::size_t>(std::max(1.0, steps)) + 1);
}

struct Cell {
  std::optional<std::size_t> optimal;
  std::vector<double> total_kg;  // per core
  std::vector<bool> feasible;    // per core

  bool infeasible() const noexcept { return !optimal.has_value(); }
};

struct DecisionMap {
  std::string workload;
  std::string source_name;
  double intensity_g_per_kwh = 0.0;
  std::vector<std::string> core_names;
  std::vector<std::uint32_t> core_widths;
  std::vector<double> core_areas_mm2;
  std::vector<double> lifetimes_s;   // rows
  std::vector<double> frequencies;   // columns, exec/s
  std::vector<Cell> cells;           // row-major
  std::optional<std::pair<std::size_t, std::size_t>> marker;  // the workload's default deployment

  const Cell& at(std::size_t row, std::size_t col) const { return cells.at(row * frequencies.size() + col); }
  Cell& at(std::size_t row, std::size_t col) { return cells.at(row * frequencies.size() + col); }

  std::optional<std::string> optimal_name(std::size_t row, std::size_t col) const {
    const auto& c = at(row, col);
    if (!c.optimal) return std::nullopt;
    return core_names.at(*c.optimal);
  }
};

// Cell whose (lifetime, frequency) is nearest in log space.
inline std::pair<std::size_t, std::size_t> nearest_cell(const DecisionMap& m, double lifetime_s, double exec_per_s) {
  auto nearest = [](const std::vector<double>& axis, double v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < axis.size(); ++i) {
      if (std::abs(std::log(axis[i] / v)) < std::abs(std::log(axis[best] / v))) best = i;
    }
    return best;
  };
  return {nearest(m.lifetimes_s, lifetime_s), nearest(m.frequencies, exec_per_s)};
}

inline DecisionMap sweep(std::span<const CoreModel> cores, const WorkloadProfile& w,
                         std::span<const double> lifetimes_s, std::span<const double> frequencies,
                         const EnergySource& source, const FoundryConfig& foundry, const MemoryModel& mem) {
  if (cores.empty()) throw ConfigError("no cores to sweep");
  if (lifetimes_s.size() < 2 || frequencies.size() < 2) throw ConfigError("grid axis needs at least 2 points");

  DecisionMap m;
  m.workload = w.name;
  m.source_name = source.name;
  m.intensity_g_per_kwh = source.intensity_g_per_kwh;
  for (const auto& c : cores) {
    m.core_names.push_back(c.name);
    m.core_widths.push_back(c.width);
    m.core_areas_mm2.push_back(c.area_mm2);
  }
  m.lifetimes_s.assign(lifetimes_s.begin(), lifetimes_s.end());
  m.frequencies.assign(frequencies.begin(), frequencies.end());
  m.cells.reserve(lifetimes_s.size() * frequencies.size());

  for (double lifetime : lifetimes_s) {
    for (double freq : frequencies) {
      const DeploymentScenario scenario{lifetime, freq, source};
      auto sel = select_optimal(cores, w, scenario, foundry, mem);
      Cell cell;
      cell.optimal = sel.optimal;
      for (const auto& r : sel.reports) {
        cell.total_kg.push_back(r.total_kg);
        cell.feasible.push_back(r.feasible);
      }
      m.cells.push_back(std::move(cell));
    }
  }
  if (w.default_lifetime_s && w.default_exec_per_s) {
    m.marker = nearest_cell(m, *w.default_lifetime_s, *w.default_exec_per_s);
  }
  return m;
}

inline DecisionMap sweep(std::span<const CoreModel> cores, const WorkloadProfile& w, const GridSpec& grid,
                         const EnergySource& source, const FoundryConfig& foundry, const MemoryModel& mem) {
  const auto lifetimes = log_grid(grid.lifetime_s, grid.points_per_decade);
  const auto freqs = log_grid(grid.exec_per_s, grid.points_per_decade);
  return sweep(cores, w, lifetimes, freqs, source, foundry, mem);
}

// Two adjacent cells (along either axis) whose optimal cores differ.
struct Boundary {
  std::size_t row_lo, col_lo, row_hi, col_hi;
  std::size_t core_lo, core_hi;  // optimal core on the smaller / larger L*f side
  double product_lo, product_hi;
};

inline std::vector<Boundary> boundaries(const DecisionMap& m) {
  std::vector<Boundary> out;
  auto visit = [&](std::size_t r0, std::size_t c0, std::size_t r1, std::size_t c1) {
    const auto& a = m.at(r0, c0);
    const auto& b = m.at(r1, c1);
    if (!a.optimal || !b.optimal || *a.optimal == *b.optimal) return;
    out.push_back({r0, c0, r1, c1, *a.optimal, *b.optimal, m.lifetimes_s[r0] * m.frequencies[c0],
                   m.lifetimes_s[r1] * m.frequencies[c1]});
  };
  for (std::size_t r = 0; r < m.lifetimes_s.size(); ++r) {
    for (std::size_t c = 0; c < m.frequencies.size(); ++c) {
      if (r + 1 < m.lifetimes_s.size()) visit(r, c, r + 1, c);
      if (c + 1 < m.frequencies.size()) visit(r, c, r, c + 1);
    }
  }
  return out;
}

// Per frequency column, the geometric-mean L*f at which the optimal core first
// leaves `from_core` when walking up the lifetime axis. Empty where it never does.
inline std::vector<std::optional<double>> transition_products(const DecisionMap& m, std::size_t from_core) {
  std::vector<std::optional<double>> out(m.frequencies.size());
  for (std::size_t c = 0; c < m.frequencies.size(); ++c) {
    for (std::size_t r = 0; r + 1 < m.lifetimes_s.size(); ++r) {
      const auto& a = m.at(r, c);
      const auto& b = m.at(r + 1, c);
      if (a.optimal == from_core && b.optimal && *b.optimal != from_core) {
        out[c] = std::sqrt(m.lifetimes_s[r] * m.lifetimes_s[r + 1]) * m.frequencies[c];
        break;
      }
    }
  }
  return out;
}

// Maps keyed by energy-source name.
inline std::map<std::string, DecisionMap> sensitivity_energy(std::span<const CoreModel> cores,
                                                             const WorkloadProfile& w,
                                                             std::span<const EnergySource> sources,
                                                             const GridSpec& grid, const FoundryConfig& foundry,
                                                             const MemoryModel& mem) {
  std::map<std::string, DecisionMap> out;
  for (const auto& s : sources) out.insert_or_assign(s.name, sweep(cores, w, grid, s, foundry, mem));
  return out;
}

struct MixSensitivity {
  WorkloadProfile one_stage_profile;
  WorkloadProfile two_stage_profile;
  DecisionMap one_stage_only;
  DecisionMap two_stage_only;
};

// Re-sweeps the workload with its instruction count moved entirely to one
// extreme of the mix. Memory and system instructions are unchanged.
inline MixSensitivity sensitivity_mix(std::span<const CoreModel> cores, const WorkloadProfile& base,
                                      const GridSpec& grid, const EnergySource& source,
                                      const FoundryConfig& foundry, const MemoryModel& mem) {
  const std::uint64_t system = base.class_counts[InstrClass::system];
  const std::uint64_t work = base.class_counts.total() - system;

  MixSensitivity out;
  out.one_stage_profile = base;
  out.one_stage_profile.class_counts = extreme_mix(work, Stage::one_stage, system);
  out.two_stage_profile = base;
  out.two_stage_profile.class_counts = extreme_mix(work, Stage::two_stage, system);
  out.one_stage_only = sweep(cores, out.one_stage_profile, grid, source, foundry, mem);
  out.two_stage_only = sweep(cores, out.two_stage_profile, grid, source, foundry, mem);
  return out;
}

// Indices of the points not dominated in (higher accuracy, lower cost),
// sorted by cost ascending. Equal points do not dominate each other.
template <class T, class AccuracyFn, class CostFn>
std::vector<std::size_t> pareto_indices(std::span<const T> items, AccuracyFn accuracy, CostFn cost) {
  std::vector<std::size_t> front;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const double ai = std::invoke(accuracy, items[i]);
    const double ci = std::invoke(cost, items[i]);
    bool dominated = false;
    for (std::size_t j = 0; j < items.size() && !dominated; ++j) {
      if (j == i) continue;
      const double aj = std::invoke(accuracy, items[j]);
      const double cj = std::invoke(cost, items[j]);
      dominated = aj >= ai && cj <= ci && (aj > ai || cj < ci);
    }
    if (!dominated) front.push_back(i);
  }
  std::stable_sort(front.begin(), front.end(), [&](std::size_t a, std::size_t b) {
    return std::invoke(cost, items[a]) < std::invoke(cost, items[b]);
  });
  return front;
}

struct AlgorithmVariant {
  std::string name;
  WorkloadProfile profile;
  double accuracy = 0.0;
};

struct VariantResult {
  std::string name;
  double accuracy = 0.0;
  std::string optimal_core;
  double total_kg = 0.0;
  std::vector<CarbonReport> reports;
  bool on_frontier = false;
};

// Evaluates every variant on its own carbon-optimal core. Variants sharing a
// name are collapsed to the first occurrence.
inline std::vector<VariantResult> evaluate_variants(std::span<const AlgorithmVariant> variants,
                                                    std::span<const CoreModel> cores,
                                                    const DeploymentScenario& scenario,
                                                    const FoundryConfig& foundry, const MemoryModel& mem) {
  std::vector<VariantResult> out;
  for (const auto& v : variants) {
    if (!(v.accuracy >= 0.0 && v.accuracy <= 1.0)) {
      throw ConfigError("variant '" + v.name + "': accuracy outside [0, 1]");
    }
    if (std::any_of(out.begin(), out.end(), [&](const VariantResult& r) { return r.name == v.name; })) continue;
    auto sel = select_optimal(cores, v.profile, scenario, foundry, mem);
    if (!sel.optimal) {
      throw InfeasibleScenario("variant '" + v.name + "' is infeasible on every core");
    }
    VariantResult r;
    r.name = v.name;
    r.accuracy = v.accuracy;
    r.optimal_core = cores[*sel.optimal].name;
    r.total_kg = sel.optimal_report().total_kg;
    r.reports = std::move(sel.reports);
    out.push_back(std::move(r));
  }
  return out;
}

// Marks on_frontier in place and returns the frontier members by carbon ascending.
inline std::vector<VariantResult> pareto_frontier(std::vector<VariantResult>& results) {
  const auto idx = pareto_indices<VariantResult>(
      results, [](const VariantResult& r) { return r.accuracy; },
      [](const VariantResult& r) { return r.total_kg; });
  std::vector<VariantResult> front;
  for (auto& r : results) r.on_frontier = false;
  for (std::size_t i : idx) {
    results[i].on_frontier = true;
    front.push_back(results[i]);
  }
  return front;
}

}  // namespace flexiflow::dse
