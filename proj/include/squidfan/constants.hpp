#ifndef SQUIDFAN_CONSTANTS_HPP
#define SQUIDFAN_CONSTANTS_HPP

#include <numbers>

namespace squidfan
{

/// Magnetic flux quantum h/2e in webers.
inline constexpr double kPhi0 = 2.067833848e-15;

/// (3π + 2)/(4π): total SQUID inductance near threshold in units of Φ0/Ic,
/// counting the washer (β_L = 1), one junction at I = 0 and one at I = Ic.
inline constexpr double kTotalInductancePrefactor = (3.0 * std::numbers::pi + 2.0) / (4.0 * std::numbers::pi);

/// (3π + 2)/(2π): activity-fraction prefactor, twice the inductance prefactor.
inline constexpr double kActivityPrefactor = 2.0 * kTotalInductancePrefactor;

namespace units
{
inline constexpr double pico  = 1e-12;
inline constexpr double nano  = 1e-9;
inline constexpr double micro = 1e-6;

constexpr double to_pH(double henries) { return henries / pico; }
constexpr double from_pH(double ph) { return ph * pico; }
constexpr double to_uA(double amperes) { return amperes / micro; }
constexpr double from_uA(double ua) { return ua * micro; }
} // namespace units

} // namespace squidfan

#endif
