#pragma once

// Physical constants, CODATA 2018. Defined once; everything else derives.

namespace pbec::constants {

inline constexpr double c_light = 299792458.0;        // speed of light [m/s]
inline constexpr double h_planck = 6.62607015e-34;    // Planck constant [J s]
inline constexpr double hbar = 1.054571817e-34;       // reduced Planck constant [J s]
inline constexpr double k_boltzmann = 1.380649e-23;   // Boltzmann constant [J/K]
inline constexpr double epsilon0 = 8.8541878128e-12;  // vacuum permittivity [F/m]
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

}  // namespace pbec::constants
