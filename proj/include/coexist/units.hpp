#pragma once

#include <cmath>

namespace coexist::units {

inline constexpr double kBoltzmann = 1.380649e-23;  // J/K
inline constexpr double kReferenceTemperature = 290.0;  // K
inline constexpr double kEarthRadius = 6371e3;  // m

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

inline double km(double v) { return v * 1e3; }

}  // namespace coexist::units
