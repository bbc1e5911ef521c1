#pragma once

// Unit conventions used throughout:
//   - energies and frequencies are cyclic frequencies in GHz (E/h),
//   - times are in ns (GHz*ns is dimensionless),
//   - factors of 2*pi appear only where cyclic quantities meet angular ones
//     (integrator, rates, pulse areas).
// The circuit-network module works in SI units (ohm, henry, farad, rad/s).

namespace mmq::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// CODATA 2018 exact values.
inline constexpr double planck_h = 6.62607015e-34;        // J/Hz
inline constexpr double hbar = planck_h / two_pi;         // J*s
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double boltzmann_k = 1.380649e-23;       // J/K
inline constexpr double flux_quantum = planck_h / (2.0 * elementary_charge);  // Wb

}  // namespace mmq::constants
