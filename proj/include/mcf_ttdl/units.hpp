#pragma once

// Units are fixed per field and encoded in names:
//   transverse lengths in um, wavelengths in nm, grating positions in mm,
//   link lengths in km, delays in ps, RF frequencies in GHz.

namespace mcf {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Round-trip delay in ps for a one-way path of `mm` at group index `n_g`.
constexpr double round_trip_delay_ps(double mm, double group_index) {
    return 2.0 * group_index * (mm * 1e-3) / kSpeedOfLight * 1e12;
}

/// Group delay per km (ps/km) for a group index.
constexpr double group_delay_ps_per_km(double group_index) {
    return group_index * 1e3 / kSpeedOfLight * 1e12;
}

/// FSR in GHz for a basic differential delay in ps.
constexpr double fsr_ghz_from_delay_ps(double delay_ps) { return 1e3 / delay_ps; }

}  // namespace mcf
