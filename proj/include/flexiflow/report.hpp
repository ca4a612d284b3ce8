#pragma once

// CSV reports. '.' decimal point, ',' separator, LF line endings, numbers
// with 6 significant digits.

#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flexiflow/dse.hpp"
#include "flexiflow/io.hpp"
#include "flexiflow/scale.hpp"

namespace flexiflow::report {

inline std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Rows are lifetimes, columns are frequencies, cells name the optimal core.
inline std::string decision_map_csv(const dse::DecisionMap& m) {
  std::string out = "lifetime_s\\exec_per_s";
  for (double f : m.frequencies) out += "," + fmt_num(f);
  out += "\n";
  for (std::size_t r = 0; r < m.lifetimes_s.size(); ++r) {
    out += fmt_num(m.lifetimes_s[r]);
    for (std::size_t c = 0; c < m.frequencies.size(); ++c) {
      out += ",";
      out += csv_field(m.optimal_name(r, c).value_or("infeasible"));
    }
    out += "\n";
  }
  return out;
}

inline std::string frontier_csv(std::span<const dse::VariantResult> results) {
  std::string out = "variant,accuracy,optimal_core,total_kg,on_frontier\n";
  for (const auto& r : results) {
    out += csv_field(r.name) + "," + fmt_num(r.accuracy) + "," + csv_field(r.optimal_core) + "," +
           fmt_num(r.total_kg) + "," + (r.on_frontier ? "true" : "false") + "\n";
  }
  return out;
}

struct ScaleRow {
  std::string system;
  double device_footprint_kg = 0.0;
  std::vector<double> savings_kg;  // per effectiveness rate
  std::vector<double> cars;
  std::optional<double> break_even;  // fraction; empty = never breaks even
};

struct ScaleReport {
  std::string name;
  std::vector<double> effectiveness_rates;
  std::vector<ScaleRow> rows;
};

inline ScaleReport evaluate_scale(const io::ScalePack& pack) {
  ScaleReport rep;
  rep.name = pack.name;
  rep.effectiveness_rates = pack.effectiveness_rates;
  for (const auto& sys : pack.systems) {
    const auto s = pack.scenario_for(sys);
    ScaleRow row;
    row.system = sys.name;
    row.device_footprint_kg = sys.device_footprint_kg;
    for (double p : pack.effectiveness_rates) {
      const double kg = scale::net_savings(p, s);
      row.savings_kg.push_back(kg);
      row.cars.push_back(scale::car_equivalent(kg, s));
    }
    row.break_even = scale::break_even(s);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

inline std::string rate_label(double p) { return fmt_num(p * 100.0) + "pct"; }

// One row per system: savings and car equivalents at each rate, then break-even.
inline std::string scale_csv(const ScaleReport& rep) {
  std::string out = "system,device_footprint_kg";
  for (double p : rep.effectiveness_rates) out += ",savings_kg_" + rate_label(p);
  for (double p : rep.effectiveness_rates) out += ",cars_" + rate_label(p);
  out += ",break_even_pct\n";
  for (const auto& r : rep.rows) {
    out += csv_field(r.system) + "," + fmt_num(r.device_footprint_kg);
    for (double v : r.savings_kg) out += "," + fmt_num(v);
    for (double v : r.cars) out += "," + fmt_num(v);
    out += "," + (r.break_even ? fmt_num(*r.break_even * 100.0) : std::string("never"));
    out += "\n";
  }
  return out;
}

inline io::Json to_json(const ScaleReport& rep) {
  io::Json j;
  j["name"] = rep.name;
  j["effectiveness_rates"] = rep.effectiveness_rates;
  io::Json rows = io::Json::array();
  for (const auto& r : rep.rows) {
    io::Json jr;
    jr["system"] = r.system;
    jr["device_footprint_kg"] = r.device_footprint_kg;
    jr["savings_kg"] = r.savings_kg;
    jr["cars"] = r.cars;
    jr["break_even"] = r.break_even ? io::Json(*r.break_even) : io::Json(nullptr);
    rows.push_back(jr);
  }
  j["rows"] = rows;
  return j;
}

inline ScaleReport scale_report_from_json(const io::Json& j) {
  const std::string ctx = "scale report";
  ScaleReport rep;
  rep.name = io::detail::get<std::string>(j, "name", ctx);
  rep.effectiveness_rates = io::detail::get<std::vector<double>>(j, "effectiveness_rates", ctx);
  for (const auto& jr : io::detail::get<io::Json>(j, "rows", ctx)) {
    ScaleRow r;
    r.system = io::detail::get<std::string>(jr, "system", ctx);
    r.device_footprint_kg = io::detail::get<double>(jr, "device_footprint_kg", ctx);
    r.savings_kg = io::detail::get<std::vector<double>>(jr, "savings_kg", ctx);
    r.cars = io::detail::get<std::vector<double>>(jr, "cars", ctx);
    r.break_even = io::detail::get_opt<double>(jr, "break_even", ctx);
    rep.rows.push_back(std::move(r));
  }
  return rep;
}

}  // namespace flexiflow::report
