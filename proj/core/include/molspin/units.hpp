#pragma once

// Energies are linear frequencies in GHz, times in ns, fields in tesla.
// A Hamiltonian H generates U(t) = exp(-i 2 pi H t).

namespace molspin::units {

inline constexpr double bohr_magneton_ghz_per_tesla = 13.9962449;
inline constexpr double nuclear_magneton_ghz_per_tesla = 7.6225932291e-3;
inline constexpr double ghz_per_inverse_cm = 29.9792458;

// mu0/(4 pi) * mu_B * mu_N / h, in GHz * angstrom^3.
inline constexpr double mu0_over_4pi = 1e-7;
inline constexpr double nuclear_magneton_joule_per_tesla = 5.0507837461e-27;
inline constexpr double dipolar_ghz_angstrom3 =
    mu0_over_4pi * (bohr_magneton_ghz_per_tesla * 1e9) * nuclear_magneton_joule_per_tesla * 1e30 * 1e-9;

constexpr double cm_to_ghz(double inverse_cm) { return inverse_cm * ghz_per_inverse_cm; }
constexpr double ghz_to_cm(double ghz) { return ghz / ghz_per_inverse_cm; }
constexpr double mhz_to_ghz(double mhz) { return mhz * 1e-3; }

}  // namespace molspin::units
