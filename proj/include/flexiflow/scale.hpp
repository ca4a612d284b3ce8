#pragma once

// At-scale savings of deploying a device on every unit of a product.
//
// A deployment with effectiveness p saves p * waste_fraction of the
// product's footprint per unit and costs one device footprint per unit.

#include <cmath>
#include <optional>
#include <string>

#include "flexiflow/error.hpp"
#include "flexiflow/units.hpp"

namespace flexiflow::scale {

inline constexpr double kDefaultCarKgPerYear = 4'600.0;

struct ScaleScenario {
  double units_per_year = 0.0;
  double co2e_per_unit_kg = 0.0;
  double waste_fraction = 0.0;
  double device_footprint_kg = 0.0;
  double car_equiv_kg_per_year = kDefaultCarKgPerYear;

  void validate() const {
    if (!(units_per_year > 0.0)) throw ConfigError("units_per_year must be positive");
    if (!(co2e_per_unit_kg > 0.0)) throw ConfigError("co2e_per_unit_kg must be positive");
    if (!(waste_fraction > 0.0 && waste_fraction < 1.0)) throw ConfigError("waste_fraction must be in (0, 1)");
    if (!(device_footprint_kg >= 0.0)) throw ConfigError("device_footprint_kg must be non-negative");
    if (!(car_equiv_kg_per_year > 0.0)) throw ConfigError("car_equiv_kg_per_year must be positive");
  }
};

inline double pounds_to_kg(double lb) noexcept { return lb * units::kKgPerPound; }

// Net kg CO2e per year; negative means the deployment adds carbon.
inline double net_savings(double effectiveness, const ScaleScenario& s) {
  if (!(effectiveness >= 0.0 && effectiveness <= 1.0)) throw ConfigError("effectiveness must be in [0, 1]");
  s.validate();
  return effectiveness * s.waste_fraction * s.units_per_year * s.co2e_per_unit_kg -
         s.units_per_year * s.device_footprint_kg;
}

// Effectiveness at which savings are exactly zero; empty if it would exceed 100%.
inline std::optional<double> break_even(const ScaleScenario& s) {
  s.validate();
  const double p = s.device_footprint_kg / (s.waste_fraction * s.co2e_per_unit_kg);
  if (p > 1.0) return std::nullopt;
  return p;
}

inline double car_equivalent(double kg, const ScaleScenario& s) {
  if (!(s.car_equiv_kg_per_year > 0.0)) throw ConfigError("car_equiv_kg_per_year must be positive");
  return kg / s.car_equiv_kg_per_year;
}

}  // namespace flexiflow::scale
