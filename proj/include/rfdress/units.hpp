#pragma once

#include "rfdress/constants.hpp"

// Laboratory-unit conversions. Everything inside the library is SI;
// these are the only place lab units (G, mG, kHz, G/cm, a0, ms, amu)
// are translated.
namespace rfdress::units {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

constexpr double tesla_from_gauss(double g) { return g * 1e-4; }
constexpr double gauss_from_tesla(double t) { return t * 1e4; }
constexpr double tesla_from_milligauss(double mg) { return mg * 1e-7; }
constexpr double milligauss_from_tesla(double t) { return t * 1e7; }

constexpr double tesla_per_meter_from_gauss_per_cm(double gcm) { return gcm * 1e-2; }
constexpr double gauss_per_cm_from_tesla_per_meter(double tm) { return tm * 1e2; }

constexpr double angular_from_hz(double f) { return two_pi * f; }
constexpr double hz_from_angular(double w) { return w / two_pi; }

constexpr double seconds_from_ms(double ms) { return ms * 1e-3; }
constexpr double seconds_from_us(double us) { return us * 1e-6; }
constexpr double ms_from_seconds(double s) { return s * 1e3; }
constexpr double us_from_seconds(double s) { return s * 1e6; }

constexpr double meters_from_bohr(double n) { return n * codata().a0; }
constexpr double bohr_from_meters(double m) { return m / codata().a0; }

constexpr double kg_from_amu(double u) { return u * codata().amu; }
constexpr double amu_from_kg(double kg) { return kg / codata().amu; }

}  // namespace rfdress::units
