#pragma once

#include <complex>
#include <vector>

#include "dwdm/biphoton.hpp"
#include "dwdm/quadrature.hpp"
#include "dwdm/random.hpp"

namespace dwdm {

/// Contiguous arrival-time bins shared by both parties.
struct TimeBinGrid {
    double sigma_bin; // bin duration, ps
    int n_t;
    double origin;    // left edge of bin 0, ps

    static TimeBinGrid centered(double sigma_bin, int n_t);

    double left_edge(int i) const { return origin + i * sigma_bin; }
    double right_edge(int i) const { return origin + (i + 1) * sigma_bin; }
    double span() const { return n_t * sigma_bin; }
    int index_of(double t) const; // -1 when outside the grid
};

enum class ChannelShape { gaussian, rectangular };

/// Demultiplexer filter bank.  Channel centers are stored as detunings from
/// omega_p/2; Bob's bank is mirrored so that paired channels (k = l) have
/// center frequencies summing to the pump frequency.
struct SpectralChannelBank {
    int n_omega = 1;
    double fwhm = 1.0;     // intensity FWHM (full passband width when rectangular), rad/ps
    double spacing = 4.0;  // center-to-center, rad/ps
    double center = 0.0;   // omega_p / 2, rad/ps
    ChannelShape shape = ChannelShape::gaussian;
    std::vector<double> alice_detuning;
    std::vector<double> bob_detuning;

    /// fwhm = 1/(n_omega sigma_cor) with spacing 4x fwhm, symmetric about
    /// omega_p/2 -- the 100 GHz-grid / 25 GHz-passband style layout.
    static SpectralChannelBank dwdm_grid(const GaussianBiphoton& state, int n_omega,
                                         ChannelShape shape = ChannelShape::gaussian);

    /// Standard deviation of the intensity transmission (gaussian shape).
    double intensity_sigma() const;

    /// Peak-normalized intensity transmission of channel m at a given
    /// detuning from omega_p/2.
    double transmission(double detuning, int m, bool bob_side) const;
};

/// Complex projection coefficients G onto (time bin x channel) detection
/// states for both parties, indexed (i, j, k, l) = (Alice bin, Bob bin,
/// Alice channel, Bob channel).  Amplitudes are tracked in a frame rotating
/// at the carrier, against unit-normalized bin windows.
struct ProjectionTable {
    int n_t = 0;
    int n_omega = 0;
    std::vector<std::complex<double>> g;

    std::size_t idx(int i, int j, int k, int l) const {
        return ((static_cast<std::size_t>(i) * n_t + j) * n_omega + k) * n_omega + l;
    }
    std::complex<double> at(int i, int j, int k, int l) const { return g[idx(i, j, k, l)]; }
};

/// Joint detection probabilities conditioned on both photons being captured.
struct JointPmf {
    int n_t = 0;
    int n_omega = 0;
    std::vector<double> p;
    double captured_mass = 0.0; // probability mass inside grid and bank, pre-normalization

    std::size_t idx(int i, int j, int k, int l) const {
        return ((static_cast<std::size_t>(i) * n_t + j) * n_omega + k) * n_omega + l;
    }
    double at(int i, int j, int k, int l) const { return p[idx(i, j, k, l)]; }
};

/// Filter both photons through their channels, return to the time domain in
/// closed form and integrate the amplitude over every time-bin rectangle by
/// adaptive quadrature (rectangular channels integrate the windowed spectral
/// amplitude instead).  Throws QuadratureError when a cell fails to converge.
ProjectionTable project_coefficients(const GaussianBiphoton& state, const TimeBinGrid& grid,
                                     const SpectralChannelBank& bank,
                                     const QuadratureOptions& opt = {});

/// p = |G|^2 renormalized by the captured mass.  Throws when the table
/// carries no mass at all.
JointPmf joint_pmf(const ProjectionTable& coeffs);

struct Marginals {
    std::vector<double> alice; // over (i, k)
    std::vector<double> bob;   // over (j, l)
};

Marginals marginals(const JointPmf& pmf);

/// Detection-model pmf: demux routing by filter transmission combined with
/// arrival-time binning after per-party Gaussian timing smear sigma_det.
/// This is the distribution the event sampler draws from, so Monte Carlo
/// histograms converge to it by construction.
JointPmf detection_pmf(const GaussianBiphoton& state, const TimeBinGrid& grid,
                       const SpectralChannelBank& bank, double sigma_det,
                       const QuadratureOptions& opt = {});

/// Single-threaded reference for detection_pmf; bit-identical by contract.
JointPmf detection_pmf_serial(const GaussianBiphoton& state, const TimeBinGrid& grid,
                              const SpectralChannelBank& bank, double sigma_det,
                              const QuadratureOptions& opt = {});

/// Joint channel capture probabilities (k, l), row-major n_omega x n_omega.
std::vector<double> channel_pair_mass(const GaussianBiphoton& state,
                                      const SpectralChannelBank& bank);

/// Joint time-bin capture probabilities (i, j) under timing smear.
std::vector<double> time_cell_mass(const GaussianBiphoton& state, const TimeBinGrid& grid,
                                   double sigma_det, const QuadratureOptions& opt = {},
                                   bool parallel = false);

struct SampledEvent {
    int bin_a = -1, bin_b = -1;         // -1: outside the grid
    int channel_a = -1, channel_b = -1; // -1: rejected by every filter
    double t_a = 0.0, t_b = 0.0;        // jittered arrival times, ps
    double w_a = 0.0, w_b = 0.0;        // sampled frequencies, rad/ps

    bool alice_complete() const { return bin_a >= 0 && channel_a >= 0; }
    bool bob_complete() const { return bin_b >= 0 && channel_b >= 0; }
    bool complete() const { return alice_complete() && bob_complete(); }
};

/// Reusable sampler; construction precomputes the filter layout.
class EventSampler {
public:
    EventSampler(const GaussianBiphoton& state, const TimeBinGrid& grid,
                 const SpectralChannelBank& bank, double sigma_det);

    SampledEvent sample(SplitMix64& rng) const;

    /// Draws whether a lone photon lands in some bin and channel; used for
    /// cross-basis bookkeeping in the protocol.
    bool single_photon_capture(SplitMix64& rng, bool bob_side) const;

private:
    TimeBinGrid grid_;
    SpectralChannelBank bank_;
    double sigma_u_, sigma_v_, sigma_det_;
    double sum_det_sigma_, diff_det_sigma_; // spectral sum/difference widths
};

SampledEvent sample_event(const GaussianBiphoton& state, const TimeBinGrid& grid,
                          const SpectralChannelBank& bank, double sigma_det, SplitMix64& rng);

} // namespace dwdm
