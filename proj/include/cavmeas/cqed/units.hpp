#pragma once

#include <numbers>

// Conversions from laboratory units to the SI values used internally.
// Frequencies given in MHz are ordinary frequencies; the returned value
// is the angular frequency 2*pi*f in rad/s.
namespace cavmeas::units {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr double mhz(double f) { return f * 1e6 * two_pi; }
constexpr double to_mhz(double omega) { return omega / two_pi / 1e6; }

constexpr double us(double t) { return t / 1e6; }
constexpr double to_us(double t) { return t * 1e6; }

constexpr double per_us(double r) { return r * 1e6; }
constexpr double to_per_us(double r) { return r / 1e6; }

constexpr double um(double x) { return x / 1e6; }
constexpr double to_um(double x) { return x * 1e6; }
constexpr double nm(double x) { return x / 1e9; }
constexpr double to_nm(double x) { return x * 1e9; }

}  // namespace cavmeas::units
