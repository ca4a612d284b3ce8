// flexiflow command-line front end.
//
// Exit codes: 0 success, 1 configuration or I/O error, 2 simulation fault.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flexiflow/flexiflow.hpp"

namespace fs = std::filesystem;
using namespace flexiflow;

#ifndef FLEXIFLOW_DEFAULT_DATA_DIR
#define FLEXIFLOW_DEFAULT_DATA_DIR "data"
#endif

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitFault = 2;

fs::path data_dir() {
  if (const char* env = std::getenv("FLEXIFLOW_DATA"); env && *env) return env;
  return FLEXIFLOW_DEFAULT_DATA_DIR;
}

// An explicit path wins; otherwise look in the data pack.
fs::path resolve(const std::string& arg, const fs::path& pack_subdir, const std::string& ext = ".json") {
  if (fs::exists(arg)) return arg;
  const fs::path candidate = data_dir() / pack_subdir / (arg + ext);
  if (fs::exists(candidate)) return candidate;
  throw IoError("cannot find '" + arg + "' (also tried " + candidate.string() + ")");
}

fs::path pack_file(const std::optional<std::string>& arg, const char* default_name) {
  if (arg) return resolve(*arg, "");
  return data_dir() / default_name;
}

void emit(const std::string& text, const std::optional<std::string>& out) {
  if (out) {
    io::write_text(*out, text);
  } else {
    std::cout << text;
    std::cout.flush();
  }
}

struct Models {
  std::vector<ppa::CoreModel> cores;
  carbon::FoundryConfig foundry;
  ppa::MemoryModel memory;
  std::vector<carbon::EnergySource> catalog;
};

struct ModelArgs {
  std::optional<std::string> cores, foundry, memory, energy;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--cores", cores, "Core models JSON (default: data pack cores.json)");
    cmd->add_option("--foundry", foundry, "Foundry config JSON (default: data pack foundry.sample.json)");
    cmd->add_option("--memory", memory, "Memory model JSON (default: data pack memory.json)");
    cmd->add_option("--energy", energy, "Energy source catalog JSON (default: data pack energy.json)");
  }

  Models load() const {
    Models m;
    m.cores = io::cores_from_json(io::read_json(pack_file(cores, "cores.json")));
    m.foundry = io::foundry_from_json(io::read_json(pack_file(foundry, "foundry.sample.json")));
    m.memory = io::memory_from_json(io::read_json(pack_file(memory, "memory.json")));
    m.catalog = io::sources_from_json(io::read_json(pack_file(energy, "energy.json")));
    if (m.catalog.empty()) throw ConfigError("energy catalog is empty");
    return m;
  }
};

// A catalog name, or a JSON file holding one source.
carbon::EnergySource load_source(const std::string& arg, const std::vector<carbon::EnergySource>& catalog) {
  for (const auto& s : catalog) {
    if (s.name == arg) return s;
  }
  if (fs::exists(arg)) return io::source_from_json(io::read_json(arg));
  throw ConfigError("unknown energy source '" + arg + "'");
}

WorkloadProfile load_workload(const std::string& arg) {
  return io::profile_from_json(io::read_json(resolve(arg, "flexibench")));
}

struct GridArgs {
  dse::GridSpec spec;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--lifetime-min", spec.lifetime_s.lo, "Shortest lifetime, seconds")->capture_default_str();
    cmd->add_option("--lifetime-max", spec.lifetime_s.hi, "Longest lifetime, seconds")->capture_default_str();
    cmd->add_option("--freq-min", spec.exec_per_s.lo, "Lowest frequency, executions/s")->capture_default_str();
    cmd->add_option("--freq-max", spec.exec_per_s.hi, "Highest frequency, executions/s")->capture_default_str();
    cmd->add_option("--points-per-decade", spec.points_per_decade, "Grid density")->capture_default_str();
  }
};

struct SimArgs {
  std::string binary, manifest;
  std::uint64_t max_steps = 100'000'000;
};

struct SimResult {
  iss::ExecutionTrace trace;
  std::vector<std::uint8_t> image;
  iss::ProgramManifest manifest;
};

SimResult run_sim(const SimArgs& a) {
  SimResult r;
  r.manifest = io::manifest_from_json(io::read_json(a.manifest));
  r.image = io::read_bytes(a.binary);
  auto st = iss::load_program(r.image, r.manifest);
  r.trace = iss::run(st, a.max_steps);
  if (r.trace.halt_reason == iss::HaltReason::max_steps) {
    std::cerr << "flexiflow: warning: stopped after " << a.max_steps << " instructions without halting\n";
  }
  return r;
}

int sim_exit(const iss::ExecutionTrace& t) {
  if (t.halt_reason == iss::HaltReason::fault) {
    std::cerr << "flexiflow: simulation fault: " << iss::to_string(t.fault) << " at pc 0x" << std::hex << t.final_pc
              << std::dec << "\n";
    return kExitFault;
  }
  return kExitOk;
}

std::string sections_csv(const std::vector<std::pair<std::string, dse::DecisionMap>>& maps) {
  std::string out;
  for (const auto& [key, m] : maps) out += "# " + key + "\n" + report::decision_map_csv(m);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lifetime-aware carbon design-space exploration for bit-serial RV32E cores"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "flexiflow 0.1.0");

  std::optional<std::string> out;
  std::string format = "csv";
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  };

  // simulate
  SimArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run a flat RV32E binary and emit its execution trace");
  simulate->add_option("binary", sim.binary, "Flat binary image")->required();
  simulate->add_option("manifest", sim.manifest, "Program manifest JSON")->required();
  simulate->add_option("--max-steps", sim.max_steps, "Instruction limit")->capture_default_str()->check(
      CLI::PositiveNumber);
  simulate->add_option("--out", out, "Write to file instead of stdout");

  // profile
  SimArgs prof;
  std::optional<std::string> prof_name;
  std::optional<double> prof_lifetime, prof_freq;
  auto* profile = app.add_subcommand("profile", "Simulate a binary and emit a workload profile");
  profile->add_option("binary", prof.binary, "Flat binary image")->required();
  profile->add_option("manifest", prof.manifest, "Program manifest JSON")->required();
  profile->add_option("--max-steps", prof.max_steps, "Instruction limit")->capture_default_str()->check(
      CLI::PositiveNumber);
  profile->add_option("--name", prof_name, "Workload name (default: binary file stem)");
  profile->add_option("--lifetime", prof_lifetime, "Default lifetime, seconds");
  profile->add_option("--frequency", prof_freq, "Default executions per second");
  profile->add_option("--out", out, "Write to file instead of stdout");

  // sweep
  std::string workload;
  std::string source_arg = "us_grid";
  ModelArgs models;
  GridArgs grid;
  auto* sweep = app.add_subcommand("sweep", "Carbon-optimal core over a lifetime x frequency grid");
  sweep->add_option("--workload", workload, "Workload profile JSON or shipped workload name")->required();
  sweep->add_option("--source", source_arg, "Energy source name or JSON file")->capture_default_str();
  models.add_to(sweep);
  grid.add_to(sweep);
  add_format(sweep);
  sweep->add_option("--out", out, "Write to file instead of stdout");

  // pareto
  std::string variants_path, scenario_path;
  auto* pareto = app.add_subcommand("pareto", "Accuracy vs carbon frontier over algorithm variants");
  pareto->add_option("--variants", variants_path, "Variant pack JSON")->required();
  pareto->add_option("--scenario", scenario_path, "Deployment scenario JSON")->required();
  models.add_to(pareto);
  pareto->add_option("--out", out, "Write to file instead of stdout");

  // scale
  std::string scale_path;
  auto* scale_cmd = app.add_subcommand("scale", "At-scale net carbon savings");
  scale_cmd->add_option("--scenario", scale_path, "Scale scenario JSON or shipped name")->required();
  add_format(scale_cmd);
  scale_cmd->add_option("--out", out, "Write to file instead of stdout");

  // sensitivity
  auto* sens = app.add_subcommand("sensitivity", "Decision maps under alternative assumptions");
  sens->require_subcommand(1);
  std::vector<std::string> sens_sources;
  auto* sens_energy = sens->add_subcommand("energy", "One map per energy source");
  sens_energy->add_option("--workload", workload, "Workload profile JSON or shipped workload name")->required();
  sens_energy->add_option("--sources", sens_sources, "Source names (default: whole catalog)")->delimiter(',');
  models.add_to(sens_energy);
  grid.add_to(sens_energy);
  add_format(sens_energy);
  sens_energy->add_option("--out", out, "Write to file instead of stdout");
  auto* sens_mix = sens->add_subcommand("mix", "Maps with the mix moved to all one-stage and all two-stage");
  sens_mix->add_option("--workload", workload, "Workload profile JSON or shipped workload name")->required();
  sens_mix->add_option("--source", source_arg, "Energy source name or JSON file")->capture_default_str();
  models.add_to(sens_mix);
  grid.add_to(sens_mix);
  add_format(sens_mix);
  sens_mix->add_option("--out", out, "Write to file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*simulate) {
      const auto r = run_sim(sim);
      emit(io::dump(io::to_json(r.trace)), out);
      return sim_exit(r.trace);
    }

    if (*profile) {
      const auto r = run_sim(prof);
      if (const int code = sim_exit(r.trace); code != kExitOk) return code;
      const auto mem = iss::profile_memory(r.image, r.trace, r.manifest.globals_bytes);
      WorkloadProfile w;
      w.name = prof_name.value_or(fs::path(prof.binary).stem().string());
      w.class_counts = r.trace.class_counts;
      w.nvm_kb = mem.nvm_kb;
      w.vm_kb = mem.vm_kb;
      w.default_lifetime_s = prof_lifetime;
      w.default_exec_per_s = prof_freq;
      w.provenance = "profiled";
      w.validate();
      emit(io::dump(io::to_json(w)), out);
      return kExitOk;
    }

    if (*sweep) {
      const auto m = models.load();
      const auto w = load_workload(workload);
      const auto src = load_source(source_arg, m.catalog);
      const auto map = dse::sweep(m.cores, w, grid.spec, src, m.foundry, m.memory);
      emit(format == "json" ? io::dump(io::to_json(map)) : report::decision_map_csv(map), out);
      return kExitOk;
    }

    if (*pareto) {
      const auto m = models.load();
      const auto variants = io::variants_from_json(io::read_json(variants_path));
      const auto scenario = io::scenario_from_json(io::read_json(resolve(scenario_path, "scenarios")), m.catalog);
      auto results = dse::evaluate_variants(variants, m.cores, scenario, m.foundry, m.memory);
      dse::pareto_frontier(results);
      emit(report::frontier_csv(results), out);
      return kExitOk;
    }

    if (*scale_cmd) {
      const auto pack = io::scale_pack_from_json(io::read_json(resolve(scale_path, "scale")));
      const auto rep = report::evaluate_scale(pack);
      emit(format == "json" ? io::dump(report::to_json(rep)) : report::scale_csv(rep), out);
      return kExitOk;
    }

    if (*sens_energy) {
      const auto m = models.load();
      const auto w = load_workload(workload);
      std::vector<carbon::EnergySource> sources;
      if (sens_sources.empty()) {
        sources = m.catalog;
      } else {
        for (const auto& s : sens_sources) sources.push_back(load_source(s, m.catalog));
      }
      std::vector<std::pair<std::string, dse::DecisionMap>> maps;
      for (const auto& s : sources) maps.emplace_back(s.name, dse::sweep(m.cores, w, grid.spec, s, m.foundry, m.memory));
      if (format == "json") {
        io::Json j = io::Json::object();
        for (const auto& [k, map] : maps) j[k] = io::to_json(map);
        emit(io::dump(j), out);
      } else {
        emit(sections_csv(maps), out);
      }
      return kExitOk;
    }

    if (*sens_mix) {
      const auto m = models.load();
      const auto w = load_workload(workload);
      const auto src = load_source(source_arg, m.catalog);
      const auto mix = dse::sensitivity_mix(m.cores, w, grid.spec, src, m.foundry, m.memory);
      const std::vector<std::pair<std::string, dse::DecisionMap>> maps{{"one_stage_only", mix.one_stage_only},
                                                                       {"two_stage_only", mix.two_stage_only}};
      if (format == "json") {
        io::Json j = io::Json::object();
        for (const auto& [k, map] : maps) j[k] = io::to_json(map);
        emit(io::dump(j), out);
      } else {
        emit(sections_csv(maps), out);
      }
      return kExitOk;
    }
  } catch (const flexiflow::Error& e) {
    std::cerr << "flexiflow: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "flexiflow: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
