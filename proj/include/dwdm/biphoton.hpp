#pragma once

#include <complex>
#include <string>

namespace dwdm {

/// Frequency-degenerate SPDC pair in the two-width Gaussian model.
/// sigma_cor is the arrival-time-difference width, sigma_coh the
/// arrival-time-sum width (pump coherence); times in ps, omega_p in rad/ps.
struct GaussianBiphoton {
    double sigma_cor;
    double sigma_coh;
    double omega_p;
};

GaussianBiphoton make_biphoton(double sigma_cor, double sigma_coh, double omega_p);

/// Named crystal preset.  bandwidth_delta_omega is the angular phase-matching
/// bandwidth in rad/s; sigma_coh is a pump property and configurable.
struct SourceSpec {
    std::string name;
    double center_wavelength_nm;
    double bandwidth_delta_omega;
    double sigma_cor_ps;
    double sigma_coh_ps;

    GaussianBiphoton to_state() const;
};

SourceSpec ppktp_source(double sigma_coh_ps = 1000.0);
SourceSpec ppln_source(double sigma_coh_ps = 1000.0);
SourceSpec source_by_name(const std::string& name, double sigma_coh_ps = 1000.0);

/// Normalized joint amplitude at arrival times (t_a, t_b); |psi|^2 integrates
/// to one over the plane.
std::complex<double> time_amplitude(const GaussianBiphoton& s, double t_a, double t_b);

/// Exact two-dimensional Fourier transform of time_amplitude, peaked at
/// w_a = w_b = omega_p / 2 and anti-correlated in the sum frequency.
std::complex<double> freq_amplitude(const GaussianBiphoton& s, double w_a, double w_b);

double schmidt_number(const GaussianBiphoton& s);

struct AlphabetPlan {
    int n_time;
    int n_freq;
};

/// Bin/channel counts for a hybrid alphabet with time bins of sigma_bin ps.
AlphabetPlan alphabet_plan(const GaussianBiphoton& s, double sigma_bin);

/// Detector-jitter projection applied to both photons.
GaussianBiphoton apply_jitter(const GaussianBiphoton& s, double sigma_det);

/// Gaussian timing measurement of resolution sigma_coh_e on one photon:
/// shortens the coherence width, leaves the correlation width alone.
GaussianBiphoton apply_eve_temporal(const GaussianBiphoton& s, double sigma_coh_e);

/// Weak spectral measurement of resolution sigma_cor_e: broadens the
/// correlation width, leaves the coherence width alone.
GaussianBiphoton apply_eve_spectral(const GaussianBiphoton& s, double sigma_cor_e);

} // namespace dwdm
