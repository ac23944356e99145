#pragma once

namespace dwdm {

// Library-wide unit conventions: time in picoseconds, angular frequency in
// rad/ps.  Source bandwidths are carried in rad/s and converted where used.
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLightNmPerPs = 299792.458;

// Angular phase-matching bandwidth in rad/s for a wavelength window
// delta_lambda (nm) around center lambda (nm).
inline double angular_bandwidth_rad_per_s(double lambda_nm, double delta_lambda_nm) {
    const double c_nm_per_s = kSpeedOfLightNmPerPs * 1e12;
    return 2.0 * kPi * c_nm_per_s * delta_lambda_nm / (lambda_nm * lambda_nm);
}

inline double rad_per_s_to_rad_per_ps(double w) { return w * 1e-12; }

// Pump angular frequency (rad/ps) for frequency-degenerate pairs emitted at
// lambda (nm): twice the center frequency of a single photon.
inline double pump_frequency_rad_per_ps(double lambda_nm) {
    return 2.0 * (2.0 * kPi * kSpeedOfLightNmPerPs / lambda_nm);
}

} // namespace dwdm
