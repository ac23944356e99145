#include "dwdm/binning.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dwdm/constants.hpp"
#include "dwdm/gaussian2d.hpp"
#include "dwdm/threads.hpp"

namespace dwdm {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / 1.4142135623730951); }

double normal_pdf(double x, double sigma) {
    const double z = x / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * kPi));
}

// Time-of-arrival density of the pair after per-party timing smear, expressed
// through the independent sum/difference coordinates.
struct TimeDensity {
    double sigma_u, sigma_v;
    double operator()(double t_a, double t_b) const {
        return 2.0 * normal_pdf(t_a - t_b, sigma_u) * normal_pdf(t_a + t_b, sigma_v);
    }
};

TimeDensity smeared_time_density(const GaussianBiphoton& state, double sigma_det) {
    return {std::sqrt(state.sigma_cor * state.sigma_cor + 2.0 * sigma_det * sigma_det),
            std::sqrt(state.sigma_coh * state.sigma_coh + 2.0 * sigma_det * sigma_det)};
}

// Spectral amplitude in detuning coordinates relative to omega_p/2.
ComplexGauss2 spectral_form(const GaussianBiphoton& state) {
    const double s = state.sigma_cor * state.sigma_cor;
    const double h = state.sigma_coh * state.sigma_coh;
    ComplexGauss2 f;
    f.m00 = 0.5 * (s + h);
    f.m01 = 0.5 * (h - s);
    f.m11 = 0.5 * (s + h);
    f.b0 = f.b1 = 0.0;
    f.c = 0.5 * std::log(state.sigma_cor * state.sigma_coh / kPi);
    return f;
}

std::complex<double> flat_window_transform(double nu, double lo, double hi) {
    if (std::abs(nu) < 1e-12) return {hi - lo, 0.0};
    const std::complex<double> i(0.0, 1.0);
    return (std::exp(-i * nu * hi) - std::exp(-i * nu * lo)) / (-i * nu);
}

} // namespace

TimeBinGrid TimeBinGrid::centered(double sigma_bin, int n_t) {
    if (!(sigma_bin > 0.0) || n_t < 1) throw std::invalid_argument("invalid time-bin grid");
    return {sigma_bin, n_t, -0.5 * n_t * sigma_bin};
}

int TimeBinGrid::index_of(double t) const {
    const double x = (t - origin) / sigma_bin;
    if (x < 0.0 || x >= static_cast<double>(n_t)) return -1;
    return static_cast<int>(x);
}

SpectralChannelBank SpectralChannelBank::dwdm_grid(const GaussianBiphoton& state, int n_omega,
                                                   ChannelShape shape) {
    if (n_omega < 1) throw std::invalid_argument("need at least one channel");
    SpectralChannelBank bank;
    bank.n_omega = n_omega;
    bank.fwhm = 1.0 / (n_omega * state.sigma_cor);
    bank.spacing = 4.0 * bank.fwhm;
    bank.center = 0.5 * state.omega_p;
    bank.shape = shape;
    bank.alice_detuning.resize(n_omega);
    bank.bob_detuning.resize(n_omega);
    for (int m = 0; m < n_omega; ++m) {
        const double d = bank.spacing * (m - 0.5 * (n_omega - 1));
        bank.alice_detuning[m] = d;
        bank.bob_detuning[m] = -d; // paired centers sum to the pump frequency
    }
    return bank;
}

double SpectralChannelBank::intensity_sigma() const {
    return fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
}

double SpectralChannelBank::transmission(double detuning, int m, bool bob_side) const {
    const double c = bob_side ? bob_detuning[m] : alice_detuning[m];
    if (shape == ChannelShape::rectangular)
        return std::abs(detuning - c) <= 0.5 * fwhm ? 1.0 : 0.0;
    const double s = intensity_sigma();
    const double z = (detuning - c) / s;
    return std::exp(-0.5 * z * z);
}

ProjectionTable project_coefficients(const GaussianBiphoton& state, const TimeBinGrid& grid,
                                     const SpectralChannelBank& bank,
                                     const QuadratureOptions& opt) {
    ProjectionTable table;
    table.n_t = grid.n_t;
    table.n_omega = bank.n_omega;
    table.g.assign(static_cast<std::size_t>(grid.n_t) * grid.n_t * bank.n_omega * bank.n_omega,
                   {0.0, 0.0});

    const double bin_norm = 1.0 / grid.sigma_bin; // two unit-normalized flat windows

    for (int k = 0; k < bank.n_omega; ++k) {
        for (int l = 0; l < bank.n_omega; ++l) {
            if (bank.shape == ChannelShape::gaussian) {
                ComplexGauss2 f = spectral_form(state);
                const double s = bank.intensity_sigma();
                f.multiply_axis_gaussian(0, bank.alice_detuning[k], s);
                f.multiply_axis_gaussian(1, bank.bob_detuning[l], s);
                const ComplexGauss2 packet = f.fourier();
                for (int i = 0; i < grid.n_t; ++i) {
                    for (int j = 0; j < grid.n_t; ++j) {
                        auto res = integrate_adaptive_2d(
                            [&](double ta, double tb) { return packet.eval(ta, tb); },
                            grid.left_edge(i), grid.right_edge(i), grid.left_edge(j),
                            grid.right_edge(j), opt);
                        if (!res.converged) {
                            std::ostringstream msg;
                            msg << "projection cell (i=" << i << ", j=" << j << ", k=" << k
                                << ", l=" << l << ") did not converge, delta=" << res.worst_delta;
                            throw QuadratureError(msg.str(), res.worst_cell[0], res.worst_cell[1],
                                                  res.worst_cell[2], res.worst_cell[3],
                                                  res.worst_delta);
                        }
                        table.g[table.idx(i, j, k, l)] = res.value * bin_norm;
                    }
                }
            } else {
                const ComplexGauss2 f = spectral_form(state);
                const double ak_lo = bank.alice_detuning[k] - 0.5 * bank.fwhm;
                const double ak_hi = bank.alice_detuning[k] + 0.5 * bank.fwhm;
                const double bl_lo = bank.bob_detuning[l] - 0.5 * bank.fwhm;
                const double bl_hi = bank.bob_detuning[l] + 0.5 * bank.fwhm;
                for (int i = 0; i < grid.n_t; ++i) {
                    for (int j = 0; j < grid.n_t; ++j) {
                        auto res = integrate_adaptive_2d(
                            [&](double na, double nb) {
                                return f.eval(na, nb) *
                                       flat_window_transform(na, grid.left_edge(i),
                                                             grid.right_edge(i)) *
                                       flat_window_transform(nb, grid.left_edge(j),
                                                             grid.right_edge(j));
                            },
                            ak_lo, ak_hi, bl_lo, bl_hi, opt);
                        if (!res.converged) {
                            std::ostringstream msg;
                            msg << "projection cell (i=" << i << ", j=" << j << ", k=" << k
                                << ", l=" << l << ") did not converge, delta=" << res.worst_delta;
                            throw QuadratureError(msg.str(), res.worst_cell[0], res.worst_cell[1],
                                                  res.worst_cell[2], res.worst_cell[3],
                                                  res.worst_delta);
                        }
                        table.g[table.idx(i, j, k, l)] =
                            res.value * bin_norm / (2.0 * kPi);
                    }
                }
            }
        }
    }
    return table;
}

JointPmf joint_pmf(const ProjectionTable& coeffs) {
    JointPmf pmf;
    pmf.n_t = coeffs.n_t;
    pmf.n_omega = coeffs.n_omega;
    pmf.p.resize(coeffs.g.size());
    double total = 0.0;
    for (std::size_t n = 0; n < coeffs.g.size(); ++n) {
        pmf.p[n] = std::norm(coeffs.g[n]);
        total += pmf.p[n];
    }
    if (!(total > 0.0)) throw std::domain_error("zero captured mass");
    for (double& v : pmf.p) v /= total;
    pmf.captured_mass = std::min(total, 1.0);
    return pmf;
}

Marginals marginals(const JointPmf& pmf) {
    Marginals m;
    m.alice.assign(static_cast<std::size_t>(pmf.n_t) * pmf.n_omega, 0.0);
    m.bob.assign(static_cast<std::size_t>(pmf.n_t) * pmf.n_omega, 0.0);
    for (int i = 0; i < pmf.n_t; ++i)
        for (int j = 0; j < pmf.n_t; ++j)
            for (int k = 0; k < pmf.n_omega; ++k)
                for (int l = 0; l < pmf.n_omega; ++l) {
                    const double v = pmf.at(i, j, k, l);
                    m.alice[static_cast<std::size_t>(i) * pmf.n_omega + k] += v;
                    m.bob[static_cast<std::size_t>(j) * pmf.n_omega + l] += v;
                }
    return m;
}

std::vector<double> channel_pair_mass(const GaussianBiphoton& state,
                                      const SpectralChannelBank& bank) {
    const int n = bank.n_omega;
    std::vector<double> mass(static_cast<std::size_t>(n) * n, 0.0);
    const double sigma_sum = 1.0 / state.sigma_coh;
    const double sigma_diff = 1.0 / state.sigma_cor;

    if (bank.shape == ChannelShape::gaussian) {
        // Joint transmission separates in sum/difference detunings; both
        // factors are plain Gaussian overlap integrals.
        const double w = std::sqrt(2.0) * bank.intensity_sigma();
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                const double a = bank.alice_detuning[k];
                const double b = bank.bob_detuning[l];
                mass[static_cast<std::size_t>(k) * n + l] =
                    gaussian_overlap(sigma_sum, a + b, w) * gaussian_overlap(sigma_diff, a - b, w);
            }
        return mass;
    }

    const double hw = 0.5 * bank.fwhm;
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            const double a_lo = bank.alice_detuning[k] - hw, a_hi = bank.alice_detuning[k] + hw;
            const double b_lo = bank.bob_detuning[l] - hw, b_hi = bank.bob_detuning[l] + hw;
            double d_lo = a_lo - b_hi, d_hi = a_hi - b_lo;
            d_lo = std::max(d_lo, -10.0 * sigma_diff);
            d_hi = std::min(d_hi, 10.0 * sigma_diff);
            if (d_hi <= d_lo) continue;
            mass[static_cast<std::size_t>(k) * n + l] = integrate_real(
                [&](double wd) {
                    const double s_lo = std::max(2.0 * a_lo - wd, 2.0 * b_lo + wd);
                    const double s_hi = std::min(2.0 * a_hi - wd, 2.0 * b_hi + wd);
                    if (s_hi <= s_lo) return 0.0;
                    const double band =
                        normal_cdf(s_hi / sigma_sum) - normal_cdf(s_lo / sigma_sum);
                    return normal_pdf(wd, sigma_diff) * band;
                },
                d_lo, d_hi);
        }
    return mass;
}

std::vector<double> time_cell_mass(const GaussianBiphoton& state, const TimeBinGrid& grid,
                                   double sigma_det, const QuadratureOptions& opt, bool parallel) {
    const TimeDensity rho = smeared_time_density(state, sigma_det);
    const int n = grid.n_t;
    std::vector<double> mass(static_cast<std::size_t>(n) * n, 0.0);

    const auto cell = [&](int c) {
        const int i = c / n, j = c % n;
        mass[c] = integrate_real_2d([&](double ta, double tb) { return rho(ta, tb); },
                                    grid.left_edge(i), grid.right_edge(i), grid.left_edge(j),
                                    grid.right_edge(j), opt);
    };

    const int total = n * n;
    if (parallel) {
#ifdef DWDM_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(effective_threads())
        for (int c = 0; c < total; ++c) cell(c);
#else
        for (int c = 0; c < total; ++c) cell(c);
#endif
    } else {
        for (int c = 0; c < total; ++c) cell(c);
    }
    return mass;
}

namespace {

JointPmf assemble_detection_pmf(const GaussianBiphoton& state, const TimeBinGrid& grid,
                                const SpectralChannelBank& bank, double sigma_det,
                                const QuadratureOptions& opt, bool parallel) {
    if (sigma_det < 0.0) throw std::invalid_argument("jitter must be non-negative");
    const std::vector<double> t_mass = time_cell_mass(state, grid, sigma_det, opt, parallel);
    const std::vector<double> c_mass = channel_pair_mass(state, bank);

    JointPmf pmf;
    pmf.n_t = grid.n_t;
    pmf.n_omega = bank.n_omega;
    pmf.p.resize(t_mass.size() * c_mass.size());

    double t_total = 0.0, c_total = 0.0;
    for (double v : t_mass) t_total += v;
    for (double v : c_mass) c_total += v;
    const double captured = t_total * c_total;
    if (!(captured > 0.0)) throw std::domain_error("zero captured mass");

    for (int i = 0; i < pmf.n_t; ++i)
        for (int j = 0; j < pmf.n_t; ++j)
            for (int k = 0; k < pmf.n_omega; ++k)
                for (int l = 0; l < pmf.n_omega; ++l)
                    pmf.p[pmf.idx(i, j, k, l)] =
                        t_mass[static_cast<std::size_t>(i) * pmf.n_t + j] *
                        c_mass[static_cast<std::size_t>(k) * pmf.n_omega + l] / captured;
    pmf.captured_mass = std::min(captured, 1.0);
    return pmf;
}

} // namespace

JointPmf detection_pmf(const GaussianBiphoton& state, const TimeBinGrid& grid,
                       const SpectralChannelBank& bank, double sigma_det,
                       const QuadratureOptions& opt) {
    return assemble_detection_pmf(state, grid, bank, sigma_det, opt, true);
}

JointPmf detection_pmf_serial(const GaussianBiphoton& state, const TimeBinGrid& grid,
                              const SpectralChannelBank& bank, double sigma_det,
                              const QuadratureOptions& opt) {
    return assemble_detection_pmf(state, grid, bank, sigma_det, opt, false);
}

EventSampler::EventSampler(const GaussianBiphoton& state, const TimeBinGrid& grid,
                           const SpectralChannelBank& bank, double sigma_det)
    : grid_(grid),
      bank_(bank),
      sigma_u_(state.sigma_cor),
      sigma_v_(state.sigma_coh),
      sigma_det_(sigma_det),
      sum_det_sigma_(1.0 / state.sigma_coh),
      diff_det_sigma_(1.0 / state.sigma_cor) {
    if (sigma_det < 0.0) throw std::invalid_argument("jitter must be non-negative");
}

SampledEvent EventSampler::sample(SplitMix64& rng) const {
    SampledEvent ev;

    // Fixed draw order keeps substreams reproducible independent of outcome.
    const double u = draw_normal(rng, 0.0, sigma_u_);
    const double v = draw_normal(rng, 0.0, sigma_v_);
    const double jitter_a = draw_normal(rng) * sigma_det_;
    const double jitter_b = draw_normal(rng) * sigma_det_;
    const double wsum = draw_normal(rng, 0.0, sum_det_sigma_);
    const double wdiff = draw_normal(rng, 0.0, diff_det_sigma_);
    const double route_a = rng.uniform();
    const double route_b = rng.uniform();

    ev.t_a = 0.5 * (v + u) + jitter_a;
    ev.t_b = 0.5 * (v - u) + jitter_b;
    ev.bin_a = grid_.index_of(ev.t_a);
    ev.bin_b = grid_.index_of(ev.t_b);

    const double nu_a = 0.5 * (wsum + wdiff);
    const double nu_b = 0.5 * (wsum - wdiff);
    ev.w_a = bank_.center + nu_a;
    ev.w_b = bank_.center + nu_b;

    double cum = 0.0;
    for (int m = 0; m < bank_.n_omega; ++m) {
        cum += bank_.transmission(nu_a, m, false);
        if (route_a < cum) {
            ev.channel_a = m;
            break;
        }
    }
    cum = 0.0;
    for (int m = 0; m < bank_.n_omega; ++m) {
        cum += bank_.transmission(nu_b, m, true);
        if (route_b < cum) {
            ev.channel_b = m;
            break;
        }
    }
    return ev;
}

bool EventSampler::single_photon_capture(SplitMix64& rng, bool bob_side) const {
    const double sigma_t =
        std::sqrt(0.25 * (sigma_u_ * sigma_u_ + sigma_v_ * sigma_v_) + sigma_det_ * sigma_det_);
    const double sigma_nu =
        0.5 * std::sqrt(sum_det_sigma_ * sum_det_sigma_ + diff_det_sigma_ * diff_det_sigma_);
    const double t = draw_normal(rng, 0.0, sigma_t);
    const double nu = draw_normal(rng, 0.0, sigma_nu);
    const double route = rng.uniform();
    if (grid_.index_of(t) < 0) return false;
    double cum = 0.0;
    for (int m = 0; m < bank_.n_omega; ++m) {
        cum += bank_.transmission(nu, m, bob_side);
        if (route < cum) return true;
    }
    return false;
}

SampledEvent sample_event(const GaussianBiphoton& state, const TimeBinGrid& grid,
                          const SpectralChannelBank& bank, double sigma_det, SplitMix64& rng) {
    return EventSampler(state, grid, bank, sigma_det).sample(rng);
}

} // namespace dwdm
