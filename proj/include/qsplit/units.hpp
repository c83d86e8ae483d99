#pragma once

#include <cmath>

// Units: energy in eV, length in nm, time in fs, mass in electron masses.
namespace qsplit::units {

inline constexpr double kHbar = 0.6582119569;          // eV fs
inline constexpr double kHbar2Over2Me = 0.0380998;     // eV nm^2
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kFsPerPs = 1000.0;

/// Kinetic energy hbar^2 k^2 / 2m for a particle of `mass` (in m_e).
inline double energy(double k, double mass) { return kHbar2Over2Me * k * k / mass; }

/// Inverse of energy() for E >= 0.
inline double wavenumber(double energy_eV, double mass) {
  return std::sqrt(energy_eV * mass / kHbar2Over2Me);
}

/// hbar/m in nm^2/fs, so that hbar k/m is a velocity in nm/fs.
inline double hbar_over_m(double mass) { return 2.0 * kHbar2Over2Me / (mass * kHbar); }

/// 2m/hbar^2 in 1/(eV nm^2).
inline double two_m_over_hbar2(double mass) { return mass / kHbar2Over2Me; }

}  // namespace qsplit::units
