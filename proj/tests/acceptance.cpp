// Acceptance checks. Prints one PASS/FAIL line per criterion; exits nonzero if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "iss_suite.hpp"
#include "oracles.hpp"
#include "table5.hpp"

using namespace flexiflow;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string run_cli(const std::string& args, int& code) {
  const std::string cmd = "'" FLEXIFLOW_CLI_PATH "' " + args + " 2>/dev/null";
  std::string out;
  code = -1;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  const int status = pclose(p);
  code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

std::string pct(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v * 100 << "%";
  return s.str();
}

const auto kCores = ppa::default_cores();
const auto kMem = ppa::default_memory_model();
const auto kFoundry = carbon::sample_foundry();
const auto kGrid = *carbon::find_source("us_grid");

Verdict table5_reproduction() {
  Verdict v;
  const auto t0 = Clock::now();
  int code = 0;
  const auto out = run_cli("scale --scenario beef --format json", code);
  const double dt = seconds_since(t0);
  v.require(code == 0, "scale exited with " + std::to_string(code));
  if (code != 0) return v;
  const auto rep = report::scale_report_from_json(io::parse_json(out));
  v.require(rep.rows.size() == 3, "expected 3 systems");
  double worst_raw = 0.0;
  std::string worst_cell;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < std::min<std::size_t>(3, rep.rows.size()); ++i) {
    const auto& want = table5::rows()[i];
    const auto& got = rep.rows[i];
    v.require(got.system == want.system, "row " + std::to_string(i) + " is " + got.system);
    for (std::size_t k = 0; k < 4; ++k) {
      for (const auto& [printed, value, kind] :
           {std::tuple{want.savings_kg[k], got.savings_kg[k], "savings"}, std::tuple{want.cars[k], got.cars[k], "cars"}}) {
        const auto c = table5::compare(printed, value);
        ++cells;
        v.require(c.pass, want.system + " " + kind + " " + std::to_string(k) + ": " + report::fmt_num(value) +
                              " vs " + printed);
        if (c.raw_dev > worst_raw) {
          worst_raw = c.raw_dev;
          worst_cell = want.system + " " + kind + " at " + report::fmt_num(rep.effectiveness_rates[k] * 100) + "%";
        }
      }
    }
    v.require(got.break_even.has_value(), want.system + " never breaks even");
    if (got.break_even) {
      const auto c = table5::compare(want.break_even_pct, *got.break_even * 100);
      ++cells;
      v.require(c.pass, want.system + " break-even " + report::fmt_num(*got.break_even * 100) + "%");
    }
  }
  v.require(dt < 1.0, "runtime " + std::to_string(dt) + " s");
  v.detail = std::to_string(cells) + " cells within 2% plus print rounding, " + report::fmt_num(dt * 1000) +
             " ms; largest raw deviation " + pct(worst_raw) + " (" + worst_cell + ")";
  return v;
}

Verdict ppa_tables() {
  Verdict v;
  struct Want {
    const char* name;
    std::uint32_t width;
    double area, power;
    std::uint32_t gates;
  };
  const Want want[] = {{"SERV", 1, 2.93, 17.75, 2546}, {"QERV", 4, 3.68, 21.07, 3198}, {"HERV", 8, 4.50, 24.99, 3903}};
  v.require(kCores.size() == 3, "core count");
  for (std::size_t i = 0; i < 3 && i < kCores.size(); ++i) {
    const auto& c = kCores[i];
    v.require(c.name == want[i].name && c.width == want[i].width && c.area_mm2 == want[i].area &&
                  c.power_mw == want[i].power && c.nand2_gates == want[i].gates,
              "core " + c.name);
  }
  const double ratios[] = {kCores[1].area_mm2 / kCores[0].area_mm2, kCores[2].area_mm2 / kCores[0].area_mm2,
                           kCores[1].power_mw / kCores[0].power_mw, kCores[2].power_mw / kCores[0].power_mw};
  const double printed[] = {1.26, 1.54, 1.19, 1.41};
  std::string detail = "ratios";
  for (int i = 0; i < 4; ++i) {
    v.require(std::abs(ratios[i] - printed[i]) <= 0.005, "ratio " + report::fmt_num(ratios[i]));
    char buf[48];
    std::snprintf(buf, sizeof buf, " %.3f->%.2f", ratios[i], printed[i]);
    detail += buf;
  }
  v.detail = detail;
  return v;
}

Verdict timing_calibration() {
  Verdict v;
  const timing::TimingParams p;
  ClassCounts one, two;
  one[InstrClass::arith_logic] = 1;
  two[InstrClass::load] = 1;
  v.require(timing::cycles_per_instruction(InstrClass::load, 1, p) == 70, "SERV two-stage cost");
  std::string detail;
  for (const auto& [mix, label] : {std::pair{one, "one-stage"}, std::pair{two, "two-stage"}}) {
    const double s4 = timing::speedup(mix, 1, 4, p);
    const double s8 = timing::speedup(mix, 1, 8, p);
    v.require(std::abs(s4 / 3.15 - 1) <= 0.10, std::string(label) + " 1->4 speedup " + report::fmt_num(s4));
    v.require(std::abs(s8 / 4.93 - 1) <= 0.10, std::string(label) + " 1->8 speedup " + report::fmt_num(s8));
    detail += std::string(label) + " " + report::fmt_num(s4) + "x/" + report::fmt_num(s8) + "x; ";
    WorkloadProfile w;
    w.name = label;
    w.class_counts = mix;
    const double e1 = ppa::system_ppa(kCores[0], w, kMem).core_energy_per_exec_j;
    const double e4 = ppa::system_ppa(kCores[1], w, kMem).core_energy_per_exec_j;
    const double e8 = ppa::system_ppa(kCores[2], w, kMem).core_energy_per_exec_j;
    v.require(std::abs(e1 / e4 / 2.65 - 1) <= 0.10, std::string(label) + " energy ratio 1/4");
    v.require(std::abs(e1 / e8 / 3.50 - 1) <= 0.10, std::string(label) + " energy ratio 1/8");
    if (mix == one) detail += "energy " + report::fmt_num(e1 / e4) + "x/" + report::fmt_num(e1 / e8) + "x; ";
  }
  v.detail = detail + "SERV two-stage 70 cycles";
  return v;
}

Verdict timing_invariants() {
  Verdict v;
  const auto t0 = Clock::now();
  const timing::TimingParams p;
  ClassCounts one, two;
  one[InstrClass::arith_logic] = 1;
  two[InstrClass::load] = 1;
  std::mt19937_64 rng(4242);
  auto profiles = oracle::shipped_profiles();
  const std::size_t shipped = profiles.size();
  for (int i = 0; i < 1000; ++i) profiles.push_back(oracle::random_profile(rng, i));
  std::size_t checked = 0;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const auto& w = profiles[i];
    const auto base = timing::workload_cycles(w, 1, p).total_cycles;
    // additivity: cycles of a profile equal the sum over a random split
    ClassCounts a, b;
    for (InstrClass k : kAllInstrClasses) {
      const auto n = w.class_counts[k];
      a[k] = n == 0 ? 0 : rng() % (n + 1);
      b[k] = n - a[k];
    }
    for (std::uint32_t width : {1u, 2u, 4u, 8u, 16u, 32u}) {
      const auto whole = timing::workload_cycles(w.class_counts, width, p).total_cycles;
      const auto parts =
          timing::workload_cycles(a, width, p).total_cycles + timing::workload_cycles(b, width, p).total_cycles;
      v.require(whole == parts, w.name + " not additive at W=" + std::to_string(width));
      v.require(static_cast<long double>(whole) == oracle::cycles(w.class_counts, width),
                w.name + " differs from closed form at W=" + std::to_string(width));
    }
    std::uint64_t prev = base;
    for (std::uint32_t width : {2u, 4u, 8u, 16u, 32u}) {
      const auto c = timing::workload_cycles(w, width, p).total_cycles;
      v.require(c <= prev, w.name + " not width-monotone");
      prev = c;
    }
    if (base == 0) continue;
    for (std::uint32_t width : {4u, 8u}) {
      const double s = timing::speedup(w, 1, width, p);
      const double s1 = timing::speedup(one, 1, width, p), s2 = timing::speedup(two, 1, width, p);
      const double lo = std::min(s1, s2) * (1 - 1e-12), hi = std::max(s1, s2) * (1 + 1e-12);
      v.require(s >= lo && s <= hi, w.name + " speedup outside class extremes");
    }
    ++checked;
  }
  const double dt = seconds_since(t0);
  v.require(dt < 10.0, "runtime " + std::to_string(dt) + " s");
  v.detail = std::to_string(checked) + " profiles (" + std::to_string(shipped) + " shipped) in " +
             report::fmt_num(dt) + " s";
  return v;
}

Verdict decision_geometry() {
  Verdict v;
  const dse::GridSpec g;
  const auto L = dse::log_points(g.lifetime_s, 20);
  const auto F = dse::log_points(g.exec_per_s, 20);
  const double step_l = L[1] / L[0], step_f = F[1] / F[0];
  std::mt19937_64 rng(2025);
  const int n_profiles = 100;
  std::size_t n_boundaries = 0;
  for (int i = 0; i < n_profiles; ++i) {
    const auto w = oracle::random_profile(rng, i, 2e4);
    const auto m = dse::sweep(kCores, w, L, F, kGrid, kFoundry, kMem);
    for (const auto& b : dse::boundaries(m)) {
      if (m.at(b.row_lo, b.col_lo).feasible != m.at(b.row_hi, b.col_hi).feasible) continue;
      const auto n = dse::crossover_executions(kCores[b.core_lo], kCores[b.core_hi], w, kGrid, kFoundry, kMem);
      v.require(n.has_value(), w.name + " boundary without crossover");
      if (!n) continue;
      const double step = b.row_lo == b.row_hi ? step_f : step_l;
      v.require(*n >= std::min(b.product_lo, b.product_hi) / step && *n <= std::max(b.product_lo, b.product_hi) * step,
                w.name + " boundary off the diagonal");
      ++n_boundaries;
    }
    for (std::size_t r = 0; r < 20; ++r) {
      for (std::size_t c = 0; c < 20; ++c) {
        const auto& cell = m.at(r, c);
        if (!cell.optimal) continue;
        if (r + 1 < 20 && m.at(r + 1, c).optimal) {
          v.require(m.core_widths[*cell.optimal] <= m.core_widths[*m.at(r + 1, c).optimal], w.name + " lifetime");
        }
        if (c + 1 < 20 && m.at(r, c + 1).optimal) {
          v.require(m.core_widths[*cell.optimal] <= m.core_widths[*m.at(r, c + 1).optimal], w.name + " frequency");
        }
      }
    }
  }

  // direction of shift
  auto lean = oracle::shipped("food_spoilage");
  auto heavy = lean;
  heavy.name = "vm-heavy";
  heavy.vm_kb = 8.0;
  const auto cat = carbon::energy_catalog();
  const auto coal = *carbon::find_source("coal");
  const auto solar = *carbon::find_source("solar");
  const auto ct = oracle::shipped("cardiotocography");
  const auto mix = dse::sensitivity_mix(kCores, ct, g, kGrid, kFoundry, kMem);
  for (std::size_t a = 0; a < kCores.size(); ++a) {
    for (std::size_t b = a + 1; b < kCores.size(); ++b) {
      const auto nl = dse::crossover_executions(kCores[a], kCores[b], lean, kGrid, kFoundry, kMem);
      const auto nh = dse::crossover_executions(kCores[a], kCores[b], heavy, kGrid, kFoundry, kMem);
      v.require(nl && nh && *nh < *nl, "VM-heavy shift " + kCores[a].name + "/" + kCores[b].name);
      const auto nc = dse::crossover_executions(kCores[a], kCores[b], lean, coal, kFoundry, kMem);
      const auto ns = dse::crossover_executions(kCores[a], kCores[b], lean, solar, kFoundry, kMem);
      v.require(nc && ns && *nc < *ns, "coal/solar shift " + kCores[a].name + "/" + kCores[b].name);
      const auto n1 = dse::crossover_executions(kCores[a], kCores[b], mix.one_stage_profile, kGrid, kFoundry, kMem);
      const auto n2 = dse::crossover_executions(kCores[a], kCores[b], mix.two_stage_profile, kGrid, kFoundry, kMem);
      v.require(n1 && n2 && *n2 < *n1, "mix shift " + kCores[a].name + "/" + kCores[b].name);
    }
  }
  const auto maps = dse::sensitivity_energy(kCores, lean, std::vector{coal, solar}, g, kFoundry, kMem);
  const auto tc = dse::transition_products(maps.at("coal"), 0);
  const auto ts = dse::transition_products(maps.at("solar"), 0);
  for (std::size_t c = 0; c < tc.size(); ++c) {
    if (tc[c] && ts[c]) v.require(*tc[c] <= *ts[c], "coal map transitions later than solar");
  }
  v.detail = std::to_string(n_profiles) + " random 20x20 maps, " + std::to_string(n_boundaries) +
             " boundaries on the diagonal; VM, coal/solar and mix shifts in the expected direction";
  return v;
}

Verdict selection_flip() {
  Verdict v;
  const auto ct = oracle::shipped("cardiotocography");
  v.require(ct.default_exec_per_s.has_value(), "CT profile has no default frequency");
  if (!ct.default_exec_per_s) return v;
  const double f = *ct.default_exec_per_s;
  const auto week = dse::select_optimal(kCores, ct, {7 * 86400.0, f, kGrid}, kFoundry, kMem);
  const auto nine = dse::select_optimal(kCores, ct, {270 * 86400.0, f, kGrid}, kFoundry, kMem);
  v.require(week.optimal && nine.optimal, "no feasible core");
  if (!week.optimal || !nine.optimal) return v;
  const auto& a = kCores[*week.optimal];
  const auto& b = kCores[*nine.optimal];
  v.require(a.name != b.name, "same core at both lifetimes");
  v.require(b.width > a.width, "longer deployment did not select a wider core");
  const double penalty = nine.reports[*week.optimal].total_kg / nine.optimal_report().total_kg;
  v.detail = "1 week -> " + a.name + ", 9 months -> " + b.name + "; keeping " + a.name + " at 9 months costs " +
             report::fmt_num(penalty) + "x";
  return v;
}

Verdict pareto_property() {
  Verdict v;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int trials = 2000;
  for (int t = 0; t < trials; ++t) {
    std::vector<dse::VariantResult> res(1 + rng() % 10);
    for (std::size_t i = 0; i < res.size(); ++i) {
      res[i].name = "v" + std::to_string(i);
      res[i].accuracy = std::round(u(rng) * 10) / 10;
      res[i].total_kg = std::round(u(rng) * 10) / 10;
    }
    dse::pareto_frontier(res);
    for (const auto& a : res) {
      bool dominated = false;
      for (const auto& b : res) {
        dominated |= b.accuracy >= a.accuracy && b.total_kg <= a.total_kg &&
                     (b.accuracy > a.accuracy || b.total_kg < a.total_kg);
      }
      v.require(a.on_frontier == !dominated, "frontier membership wrong in trial " + std::to_string(t));
    }
  }
  const auto variants = io::variants_from_json(io::read_json(oracle::data_dir() / "variants/food_spoilage.json"));
  auto res = dse::evaluate_variants(variants, kCores, {365 * 86400.0, 1.0 / 3600, kGrid}, kFoundry, kMem);
  double knn = 0, lr = 0;
  for (const auto& r : res) {
    if (r.name == "KNN-large") knn = r.total_kg;
    if (r.name == "LR") lr = r.total_kg;
  }
  v.require(knn > 0 && lr > 0, "shipped variants missing LR or KNN-large");
  v.require(knn > lr, "KNN-large does not exceed LR");
  v.detail = std::to_string(trials) + " brute-force trials; KNN-large/LR = " + report::fmt_num(knn / lr) + "x";
  return v;
}

Verdict iss_correctness() {
  Verdict v;
  const auto cases = suite::cases();
  std::size_t passed = 0;
  for (const auto& c : cases) {
    const auto o = suite::check(c);
    passed += o.pass;
    for (const auto& f : o.failures) v.require(false, f);
  }
  v.require(cases.size() >= 30, "suite has " + std::to_string(cases.size()) + " programs");

  const auto image = io::read_bytes(oracle::samples_dir() / "sum_loop.bin");
  const auto manifest = io::manifest_from_json(io::read_json(oracle::samples_dir() / "sum_loop.json"));
  auto st = iss::load_program(image, manifest);
  const auto t = iss::run(st, 100000);
  v.require(st.reg(1) == 55, "sum-loop x1 = " + std::to_string(st.reg(1)));
  v.require(t.total_instructions == 33, "sum-loop retired " + std::to_string(t.total_instructions));
  v.require(t.halt_reason == iss::HaltReason::ecall, "sum-loop did not halt on ecall");
  v.detail = std::to_string(passed) + "/" + std::to_string(cases.size()) + " programs; sum-loop x1=" +
             std::to_string(st.reg(1)) + ", " + std::to_string(t.total_instructions) + " instructions";
  return v;
}

Verdict carbon_linearity() {
  Verdict v;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.1, 10.0), k(0.05, 20.0);
  const carbon::EnergySource src{"x", 300.0};
  double worst = 0.0;
  auto track = [&](double got, double want) {
    const double e = oracle::rel_err(got, want);
    worst = std::max(worst, e);
    v.require(e <= 1e-12, "multilinearity error " + report::fmt_num(e));
  };
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    const double p = u(rng), rt = u(rng) * 1e-3, f = u(rng) * 1e-2, L = u(rng) * 1e6, kk = k(rng);
    const double base = carbon::operational_carbon(p, rt, f, L, src);
    track(carbon::operational_carbon(p * kk, rt, f, L, src), base * kk);
    track(carbon::operational_carbon(p, rt, f * kk, L, src), base * kk);
    track(carbon::operational_carbon(p, rt * kk, f, L, src), base * kk);
    track(carbon::operational_carbon(p, rt, f, L * kk, src), base * kk);
    track(carbon::operational_carbon(p, rt, f, L, {"y", src.intensity_g_per_kwh * kk}), base * kk);
    const double area = u(rng);
    auto fk = kFoundry;
    fk.kg_co2e_per_wafer *= kk;
    track(carbon::embodied_carbon(area * kk, kFoundry), carbon::embodied_carbon(area, kFoundry) * kk);
    track(carbon::embodied_carbon(area, fk), carbon::embodied_carbon(area, kFoundry) * kk);
  }
  double worst_cross = 0.0;
  std::size_t pairs = 0;
  for (int i = 0; i < 300; ++i) {
    const auto w = oracle::random_profile(rng, i, 1e4);
    for (std::size_t a = 0; a < kCores.size(); ++a) {
      for (std::size_t b = a + 1; b < kCores.size(); ++b) {
        const auto nstar = dse::crossover_executions(kCores[a], kCores[b], w, kGrid, kFoundry, kMem);
        v.require(nstar.has_value(), "no crossover for " + w.name);
        if (!nstar) continue;
        const double L = 86400.0 * 365;
        const carbon::DeploymentScenario s{L, *nstar / L, kGrid};
        const double ta = carbon::assess(kCores[a], w, s, kFoundry, kMem).total_kg;
        const double tb = carbon::assess(kCores[b], w, s, kFoundry, kMem).total_kg;
        worst_cross = std::max(worst_cross, oracle::rel_err(ta, tb));
        ++pairs;
      }
    }
  }
  v.require(worst_cross <= 1e-3, "crossover totals differ by " + report::fmt_num(worst_cross));
  v.detail = std::to_string(n * 7) + " scalings, worst " + report::fmt_num(worst) + "; " + std::to_string(pairs) +
             " crossovers, worst " + report::fmt_num(worst_cross);
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"at-scale savings table", table5_reproduction},
      {"core PPA values and ratios", ppa_tables},
      {"timing calibration", timing_calibration},
      {"timing invariants over profiles", timing_invariants},
      {"decision-map geometry", decision_geometry},
      {"selection flip with lifetime", selection_flip},
      {"Pareto frontier", pareto_property},
      {"ISS correctness", iss_correctness},
      {"carbon linearity and crossover", carbon_linearity},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.notes.push_back(std::string("exception: ") + e.what());
    }
    failures += !v.pass;
    std::cout << (v.pass ? "[PASS]" : "[FAIL]") << " criterion " << i + 1 << ": " << criteria[i].first;
    if (!v.detail.empty()) std::cout << " (" << v.detail << ")";
    std::cout << "\n";
    for (std::size_t k = 0; k < std::min<std::size_t>(v.notes.size(), 10); ++k) std::cout << "    " << v.notes[k] << "\n";
    if (v.notes.size() > 10) std::cout << "    ... " << v.notes.size() - 10 << " more\n";
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size()
            << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}
