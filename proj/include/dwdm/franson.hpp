#pragma once

#include <array>
#include <limits>
#include <optional>

#include "dwdm/biphoton.hpp"
#include "dwdm/random.hpp"

namespace dwdm {

/// Unbalanced-MZI pair geometry.  delta_t_long is the long/short imbalance
/// shared by both interferometers; delta_t the offset between Alice's and
/// Bob's long arms; omega the carrier (omega_p/2).  tau_alpha is the photon
/// lifetime in the arm (infinity = lossless); r1/r2 the splitter
/// reflectivities.
struct FransonGeometry {
    double delta_t_long;  // ps
    double delta_t;       // ps
    double omega;         // rad/ps
    double tau_alpha = std::numeric_limits<double>::infinity();
    double r1 = 0.5;
    double r2 = 0.5;

    static FransonGeometry for_state(const GaussianBiphoton& s, double delta_t_long,
                                     double delta_t = 0.0);

    /// Long-arm power transmission implied by tau_alpha.
    double loss_transmission() const;

    /// Security use demands an imbalance well beyond the correlation time;
    /// formula evaluation itself stays total.
    void validate_for(const GaussianBiphoton& s) const;
};

/// Two visibilities observed at probe delays delta_t1/delta_t2, plus the
/// coincidence counts each estimate consumed.
struct VisibilityObservation {
    double delta_t1, delta_t2; // ps
    double v1, v2;
    double delta_t_long;       // ps
    long long counts = 0;
};

struct ExtractedTimes {
    double sigma_cor; // +infinity when the envelope is flat between the probes
    double sigma_coh;
    bool narrowing_detected = true; // false <=> sigma_cor is infinite
};

struct EveAssessment {
    double sigma_cor_eprime = 0.0;
    double sigma_coh_eprime = 0.0;
    std::optional<double> sigma_cor_e; // nullopt: none detected
    std::optional<double> sigma_coh_e;
    double information_bound_bits = 0.0;
};

/// Coincidence probability of the fringe, normalized so an ideal scan spans
/// [0, 1].
double coincidence_fringe(const GaussianBiphoton& s, const FransonGeometry& g);

/// Fringe contrast (max-min)/(max+min) over a local delay scan.
double visibility(const GaussianBiphoton& s, double delta_t_long, double delta_t);

/// Contrast including long-arm loss and splitter imbalance.  Reduces to
/// visibility() for a lossless balanced geometry.
double lossy_visibility(const GaussianBiphoton& s, const FransonGeometry& g);

/// Common reflectivity r1 = r2 = r that restores full fringe contrast for a
/// given long-arm transmission.
double balance_ratio(double t_l);

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Splitter coupling modes (short, long, environment); r is the reflectivity.
Mat3 beam_splitter(double r);
/// Virtual coupler modelling long-arm loss with power transmission t_l.
Mat3 loss_coupler(double t_l);
Mat3 matmul(const Mat3& a, const Mat3& b);

/// Short-short and long-long route amplitudes through splitter 1, the loss
/// coupler, and splitter 2, read off the composed mode matrices.
std::array<double, 2> path_amplitudes(double r1, double r2, double t_l);

/// Inverts two visibility measurements into apparent correlation/coherence
/// times.  Throws std::domain_error on inconsistent observations.
ExtractedTimes extract_times(const VisibilityObservation& obs);

/// Compares extracted times against the source baseline, inverts them into
/// the eavesdropper's measurement resolutions (when present) and bounds the
/// information leak.  Total: out-of-range inputs clamp to "none detected".
EveAssessment infer_eve(const ExtractedTimes& extracted, const GaussianBiphoton& baseline);

/// Finite-statistics visibility estimate: n coincidences split between the
/// fringe maximum and minimum quadrature phases, binomial counting noise.
double simulate_visibility_measurement(const GaussianBiphoton& s, const FransonGeometry& g,
                                       long long n_coincidences, SplitMix64& rng);

} // namespace dwdm
