#include "dwdm/biphoton.hpp"

#include <cmath>
#include <stdexcept>

#include "dwdm/constants.hpp"

namespace dwdm {

GaussianBiphoton make_biphoton(double sigma_cor, double sigma_coh, double omega_p) {
    if (!(sigma_cor > 0.0) || !(sigma_coh >= sigma_cor))
        throw std::invalid_argument("biphoton widths must satisfy sigma_coh >= sigma_cor > 0");
    if (!(omega_p > 0.0)) throw std::invalid_argument("pump frequency must be positive");
    return {sigma_cor, sigma_coh, omega_p};
}

GaussianBiphoton SourceSpec::to_state() const {
    return make_biphoton(sigma_cor_ps, sigma_coh_ps, pump_frequency_rad_per_ps(center_wavelength_nm));
}

SourceSpec ppktp_source(double sigma_coh_ps) {
    return {"ppktp", 1550.0, angular_bandwidth_rad_per_s(1550.0, 4.0), 1.0, sigma_coh_ps};
}

SourceSpec ppln_source(double sigma_coh_ps) {
    return {"ppln", 1550.0, angular_bandwidth_rad_per_s(1550.0, 100.0), 0.04, sigma_coh_ps};
}

SourceSpec source_by_name(const std::string& name, double sigma_coh_ps) {
    if (name == "ppktp") return ppktp_source(sigma_coh_ps);
    if (name == "ppln") return ppln_source(sigma_coh_ps);
    throw std::invalid_argument("unknown source preset: " + name);
}

std::complex<double> time_amplitude(const GaussianBiphoton& s, double t_a, double t_b) {
    const double u = t_a - t_b;
    const double v = t_a + t_b;
    const double norm = 1.0 / std::sqrt(kPi * s.sigma_cor * s.sigma_coh);
    const double envelope = std::exp(-u * u / (4.0 * s.sigma_cor * s.sigma_cor) -
                                     v * v / (4.0 * s.sigma_coh * s.sigma_coh));
    const double phase = -0.5 * s.omega_p * v;
    return norm * envelope * std::complex<double>(std::cos(phase), std::sin(phase));
}

std::complex<double> freq_amplitude(const GaussianBiphoton& s, double w_a, double w_b) {
    const double sum_det = w_a + w_b - s.omega_p;
    const double diff = w_a - w_b;
    const double norm = std::sqrt(s.sigma_cor * s.sigma_coh / kPi);
    return norm * std::exp(-0.25 * s.sigma_cor * s.sigma_cor * diff * diff -
                           0.25 * s.sigma_coh * s.sigma_coh * sum_det * sum_det);
}

double schmidt_number(const GaussianBiphoton& s) { return s.sigma_coh / s.sigma_cor; }

AlphabetPlan alphabet_plan(const GaussianBiphoton& s, double sigma_bin) {
    if (sigma_bin < s.sigma_cor || sigma_bin > s.sigma_coh)
        throw std::invalid_argument("sigma_bin must lie between sigma_cor and sigma_coh");
    return {static_cast<int>(std::floor(s.sigma_coh / sigma_bin)),
            static_cast<int>(std::floor(sigma_bin / s.sigma_cor))};
}

GaussianBiphoton apply_jitter(const GaussianBiphoton& s, double sigma_det) {
    if (sigma_det < 0.0) throw std::invalid_argument("jitter must be non-negative");
    const double cor = std::sqrt(s.sigma_cor * s.sigma_cor + sigma_det * sigma_det);
    const double coh = std::sqrt(s.sigma_coh * s.sigma_coh + 0.25 * sigma_det * sigma_det);
    return make_biphoton(cor, coh, s.omega_p);
}

GaussianBiphoton apply_eve_temporal(const GaussianBiphoton& s, double sigma_coh_e) {
    if (!(sigma_coh_e > 0.0)) throw std::invalid_argument("temporal resolution must be positive");
    const double coh =
        1.0 / std::sqrt(1.0 / (s.sigma_coh * s.sigma_coh) + 1.0 / (sigma_coh_e * sigma_coh_e));
    return make_biphoton(s.sigma_cor, coh, s.omega_p);
}

GaussianBiphoton apply_eve_spectral(const GaussianBiphoton& s, double sigma_cor_e) {
    if (sigma_cor_e < 0.0) throw std::invalid_argument("spectral resolution must be non-negative");
    const double cor = std::sqrt(s.sigma_cor * s.sigma_cor + sigma_cor_e * sigma_cor_e);
    return make_biphoton(cor, s.sigma_coh, s.omega_p);
}

} // namespace dwdm
