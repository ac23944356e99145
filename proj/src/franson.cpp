#include "dwdm/franson.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace dwdm {

namespace {

double envelope(const GaussianBiphoton& s, double delta_t_long, double delta_t) {
    const double c = s.sigma_cor, h = s.sigma_coh;
    return std::exp(-delta_t * delta_t / (8.0 * c * c) -
                    delta_t_long * delta_t_long / (8.0 * h * h));
}

} // namespace

FransonGeometry FransonGeometry::for_state(const GaussianBiphoton& s, double delta_t_long,
                                           double delta_t) {
    FransonGeometry g;
    g.delta_t_long = delta_t_long;
    g.delta_t = delta_t;
    g.omega = 0.5 * s.omega_p;
    return g;
}

double FransonGeometry::loss_transmission() const {
    if (std::isinf(tau_alpha)) return 1.0;
    return std::exp(-2.0 * delta_t_long / tau_alpha);
}

void FransonGeometry::validate_for(const GaussianBiphoton& s) const {
    if (!(delta_t_long > 10.0 * s.sigma_cor))
        throw std::invalid_argument("arm imbalance must greatly exceed the correlation time");
    if (!(r1 > 0.0 && r1 < 1.0 && r2 > 0.0 && r2 < 1.0))
        throw std::invalid_argument("splitter reflectivities must lie in (0,1)");
    if (!(tau_alpha > 0.0)) throw std::invalid_argument("arm lifetime must be positive");
}

double coincidence_fringe(const GaussianBiphoton& s, const FransonGeometry& g) {
    const double phase = g.omega * (2.0 * g.delta_t_long - g.delta_t);
    return 0.5 + 0.5 * std::cos(phase) * envelope(s, g.delta_t_long, g.delta_t);
}

double visibility(const GaussianBiphoton& s, double delta_t_long, double delta_t) {
    return envelope(s, delta_t_long, delta_t);
}

double lossy_visibility(const GaussianBiphoton& s, const FransonGeometry& g) {
    const auto c = path_amplitudes(g.r1, g.r2, g.loss_transmission());
    const double p1 = c[0] * c[0], p2 = c[1] * c[1];
    const double prefactor = 2.0 * p1 * p2 / (p1 * p1 + p2 * p2);
    return prefactor * envelope(s, g.delta_t_long, g.delta_t);
}

double balance_ratio(double t_l) {
    if (!(t_l > 0.0 && t_l <= 1.0)) throw std::invalid_argument("transmission must lie in (0,1]");
    const double s = std::sqrt(t_l);
    return s / (1.0 + s);
}

Mat3 beam_splitter(double r) {
    const double a = std::sqrt(r), b = std::sqrt(1.0 - r);
    return {{{a, b, 0.0}, {b, -a, 0.0}, {0.0, 0.0, 1.0}}};
}

Mat3 loss_coupler(double t_l) {
    const double a = std::sqrt(t_l), b = std::sqrt(1.0 - t_l);
    return {{{1.0, 0.0, 0.0}, {0.0, a, b}, {0.0, b, -a}}};
}

Mat3 matmul(const Mat3& a, const Mat3& b) {
    Mat3 out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
            out[i][j] = s;
        }
    return out;
}

std::array<double, 2> path_amplitudes(double r1, double r2, double t_l) {
    const Mat3 u1 = beam_splitter(r1);
    const Mat3 u2 = beam_splitter(r2);
    const Mat3 ul = loss_coupler(t_l);
    const Mat3 u2l = matmul(u2, ul);
    // Route products: the short path stays in mode 0 through the coupler, the
    // long path rides mode 1 and picks up the delay tracked elsewhere.
    const double c1 = u2l[0][0] * u1[0][0];
    const double c2 = u2l[0][1] * u1[1][0];
    return {c1, c2};
}

ExtractedTimes extract_times(const VisibilityObservation& obs) {
    if (!(obs.v1 > 0.0 && obs.v1 <= 1.0 && obs.v2 > 0.0 && obs.v2 <= 1.0))
        throw std::domain_error("visibilities must lie in (0, 1]");
    if (obs.delta_t1 == obs.delta_t2)
        throw std::domain_error("probe delays must differ");

    const double d1 = obs.delta_t1 * obs.delta_t1;
    const double d2 = obs.delta_t2 * obs.delta_t2;
    const double ln1 = std::log(obs.v1);
    const double ln2 = std::log(obs.v2);

    ExtractedTimes out;
    const double denom_cor = ln2 - ln1;
    if (denom_cor == 0.0) {
        out.sigma_cor = std::numeric_limits<double>::infinity();
        out.narrowing_detected = false;
    } else {
        const double cor_sq = 0.125 * (d1 - d2) / denom_cor;
        if (cor_sq <= 0.0) throw std::domain_error("inconsistent observation: negative correlation-time square");
        out.sigma_cor = std::sqrt(cor_sq);
    }

    const double denom_coh = d2 * ln1 - d1 * ln2;
    if (denom_coh == 0.0) throw std::domain_error("inconsistent observation: flat coherence response");
    const double coh_sq = 0.125 * obs.delta_t_long * obs.delta_t_long * (d1 - d2) / denom_coh;
    if (coh_sq <= 0.0) throw std::domain_error("inconsistent observation: negative coherence-time square");
    out.sigma_coh = std::sqrt(coh_sq);
    return out;
}

EveAssessment infer_eve(const ExtractedTimes& extracted, const GaussianBiphoton& baseline) {
    EveAssessment out;
    out.sigma_cor_eprime = extracted.sigma_cor;
    out.sigma_coh_eprime = extracted.sigma_coh;

    // Timing attack shortens the apparent coherence; invert by reciprocal
    // subtraction, clamping to "none" past the baseline.
    const double inv_obs = 1.0 / (extracted.sigma_coh * extracted.sigma_coh);
    const double inv_base = 1.0 / (baseline.sigma_coh * baseline.sigma_coh);
    if (inv_obs > inv_base) {
        out.sigma_coh_e = 1.0 / std::sqrt(inv_obs - inv_base);
        const double bits = std::log2(baseline.sigma_coh / *out.sigma_coh_e);
        if (bits > 0.0) out.information_bound_bits += bits;
    }

    // Spectral attack broadens the apparent correlation time in quadrature.
    if (extracted.narrowing_detected && std::isfinite(extracted.sigma_cor)) {
        const double excess = extracted.sigma_cor * extracted.sigma_cor -
                              baseline.sigma_cor * baseline.sigma_cor;
        if (excess > 0.0) {
            out.sigma_cor_e = std::sqrt(excess);
            const double bits = std::log2(*out.sigma_cor_e / baseline.sigma_cor);
            if (bits > 0.0) out.information_bound_bits += bits;
        }
    }
    return out;
}

double simulate_visibility_measurement(const GaussianBiphoton& s, const FransonGeometry& g,
                                       long long n_coincidences, SplitMix64& rng) {
    if (n_coincidences < 1) throw std::invalid_argument("need at least one coincidence");
    const double env = envelope(s, g.delta_t_long, g.delta_t);
    const double p_max = 0.5 + 0.5 * env;
    const double p_min = 0.5 - 0.5 * env;
    const long long n_hi = (n_coincidences + 1) / 2;
    const long long n_lo = n_coincidences / 2;

    std::binomial_distribution<long long> at_max(n_hi, p_max);
    const long long c_hi = at_max(rng);
    long long c_lo = 0;
    if (n_lo > 0) {
        std::binomial_distribution<long long> at_min(n_lo, p_min);
        c_lo = at_min(rng);
    }

    const double r_hi = n_hi > 0 ? static_cast<double>(c_hi) / n_hi : 0.0;
    const double r_lo = n_lo > 0 ? static_cast<double>(c_lo) / n_lo : 0.0;
    const double denom = r_hi + r_lo;
    if (denom <= 0.0) return 0.0;
    return (r_hi - r_lo) / denom;
}

} // namespace dwdm
