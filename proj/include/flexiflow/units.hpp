#pragma once

namespace flexiflow::units {

inline constexpr double kSecondsPerMinute = 60.0;
inline constexpr double kSecondsPerHour = 3'600.0;
inline constexpr double kSecondsPerDay = 86'400.0;
inline constexpr double kSecondsPerWeek = 7 * kSecondsPerDay;
inline constexpr double kSecondsPerMonth = 30 * kSecondsPerDay;
inline constexpr double kSecondsPerYear = 365 * kSecondsPerDay;

inline constexpr double kKgPerPound = 0.453592;

}  // namespace flexiflow::units
