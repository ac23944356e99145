#include "dwdm/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "dwdm/threads.hpp"

namespace dwdm {

namespace {

constexpr long long kBlockSize = 4096;

double plain_entropy(const std::vector<double>& p) {
    double h = 0.0;
    for (double v : p)
        if (v > 0.0) h -= v * std::log2(v);
    return h < 0.0 ? 0.0 : h;
}

struct Accumulator {
    CategoryCounts counts;
    long long trials[2][2] = {{0, 0}, {0, 0}};
    long long clicks[2][2] = {{0, 0}, {0, 0}};
    std::vector<std::uint64_t> histogram; // (alice symbol, bob symbol)

    void merge(const Accumulator& other) {
        counts.same_basis_key += other.counts.same_basis_key;
        counts.same_basis_security += other.counts.same_basis_security;
        counts.cross_basis += other.counts.cross_basis;
        counts.incomplete += other.counts.incomplete;
        for (int d = 0; d < 2; ++d)
            for (int q = 0; q < 2; ++q) {
                trials[d][q] += other.trials[d][q];
                clicks[d][q] += other.clicks[d][q];
            }
        for (std::size_t n = 0; n < histogram.size(); ++n) histogram[n] += other.histogram[n];
    }
};

struct SessionContext {
    SessionConfig cfg;
    GaussianBiphoton base;
    GaussianBiphoton attacked;
    TimeBinGrid grid;
    SpectralChannelBank bank;
    EventSampler sampler_base;
    EventSampler sampler_attacked;
    double click_prob[2][2][2]; // [variant][delay][phase], coincidence probability
    int alphabet = 0;
};

GaussianBiphoton attacked_state(const GaussianBiphoton& base, const EveStrategy& eve) {
    GaussianBiphoton s = base;
    using K = EveStrategy::Kind;
    if (eve.kind == K::temporal || eve.kind == K::mixed) s = apply_eve_temporal(s, eve.sigma_coh_e);
    if (eve.kind == K::spectral || eve.kind == K::mixed) s = apply_eve_spectral(s, eve.sigma_cor_e);
    return s;
}

SessionContext make_context(const SessionConfig& cfg) {
    cfg.validate();
    const GaussianBiphoton base = cfg.source.to_state();
    const GaussianBiphoton eve =
        cfg.eve.kind == EveStrategy::Kind::none ? base : attacked_state(base, cfg.eve);
    const int n_t = cfg.n_t > 0 ? cfg.n_t : alphabet_plan(base, cfg.sigma_bin).n_time;
    const TimeBinGrid grid = TimeBinGrid::centered(cfg.sigma_bin, n_t);
    const SpectralChannelBank bank = SpectralChannelBank::dwdm_grid(base, cfg.n_omega);

    SessionContext ctx{cfg,  base, eve, grid, bank,
                       EventSampler(base, grid, bank, cfg.sigma_det),
                       EventSampler(eve, grid, bank, cfg.sigma_det),
                       {},   n_t * cfg.n_omega};
    const double delays[2] = {cfg.security_delay_1, cfg.security_delay_2};
    for (int variant = 0; variant < 2; ++variant) {
        const GaussianBiphoton& s = variant == 0 ? base : eve;
        for (int d = 0; d < 2; ++d) {
            const double env = visibility(s, cfg.franson_delta_t_long, delays[d]);
            ctx.click_prob[variant][d][0] = 0.5 + 0.5 * env;
            ctx.click_prob[variant][d][1] = 0.5 - 0.5 * env;
        }
    }
    return ctx;
}

void process_pair(const SessionContext& ctx, std::uint64_t index, Accumulator& acc,
                  std::vector<std::pair<int, int>>& sifted) {
    SplitMix64 rng = substream(ctx.cfg.seed, index);

    const double u_eve = rng.uniform();
    const bool intercepted = ctx.cfg.eve.kind != EveStrategy::Kind::none &&
                             u_eve < ctx.cfg.eve.intercept_probability;
    const bool alice_key = rng.uniform() >= ctx.cfg.security_fraction_q;
    const bool bob_key = rng.uniform() >= ctx.cfg.security_fraction_q;
    const bool alice_eff = rng.uniform() < ctx.cfg.detector_efficiency;
    const bool bob_eff = rng.uniform() < ctx.cfg.detector_efficiency;

    const EventSampler& sampler = intercepted ? ctx.sampler_attacked : ctx.sampler_base;
    const int variant = intercepted ? 1 : 0;

    if (alice_key && bob_key) {
        const SampledEvent ev = sampler.sample(rng);
        const bool a_ok = alice_eff && ev.alice_complete();
        const bool b_ok = bob_eff && ev.bob_complete();
        if (a_ok && b_ok) {
            acc.counts.same_basis_key += 1;
            const int a_sym = ev.bin_a * ctx.cfg.n_omega + ev.channel_a;
            const int b_sym = ev.bin_b * ctx.cfg.n_omega + ev.channel_b;
            acc.histogram[static_cast<std::size_t>(a_sym) * ctx.alphabet + b_sym] += 1;
            sifted.emplace_back(a_sym, b_sym);
        } else {
            acc.counts.incomplete += 1;
        }
        return;
    }

    if (!alice_key && !bob_key) {
        const int d = rng.uniform() < 0.5 ? 0 : 1;
        const int q = rng.uniform() < 0.5 ? 0 : 1;
        const double p = ctx.click_prob[variant][d][q];
        const bool click = alice_eff && bob_eff && rng.uniform() < p;
        acc.trials[d][q] += 1;
        if (click) {
            acc.clicks[d][q] += 1;
            acc.counts.same_basis_security += 1;
        } else {
            acc.counts.incomplete += 1;
        }
        return;
    }

    // Cross-basis frame: the key-side photon runs through the demux and grid,
    // the check-side photon through the interferometer.
    const bool key_side_is_alice = alice_key;
    const bool captured = sampler.single_photon_capture(rng, /*bob_side=*/!key_side_is_alice);
    const bool key_ok = (key_side_is_alice ? alice_eff : bob_eff) && captured;
    const bool check_ok = key_side_is_alice ? bob_eff : alice_eff;
    if (key_ok && check_ok)
        acc.counts.cross_basis += 1;
    else
        acc.counts.incomplete += 1;
}

double estimate_visibility(const long long trials[2], const long long clicks[2], double* sigma) {
    if (trials[0] == 0 || trials[1] == 0) return -1.0;
    const double r_hi = static_cast<double>(clicks[0]) / trials[0];
    const double r_lo = static_cast<double>(clicks[1]) / trials[1];
    const double s = r_hi + r_lo;
    if (s <= 0.0) return -1.0;
    const double v = std::clamp((r_hi - r_lo) / s, 0.0, 1.0);
    if (sigma) {
        const auto var = [](double r, long long n) {
            const double smoothed = (r * n + 1.0) / (n + 2.0);
            return smoothed * (1.0 - smoothed) / n;
        };
        const double dv_hi = 2.0 * r_lo / (s * s);
        const double dv_lo = 2.0 * r_hi / (s * s);
        *sigma = std::sqrt(dv_hi * dv_hi * var(r_hi, trials[0]) +
                           dv_lo * dv_lo * var(r_lo, trials[1]));
    }
    return v;
}

// Shrinks a measured visibility toward its expectation by the 3-sigma
// counting-noise floor before feeding the leak bound, so a quiet channel
// infers exactly zero leaked bits.
double noise_floored(double v_measured, double v_expected, double sigma) {
    const double dev = v_measured - v_expected;
    const double mag = std::max(0.0, std::abs(dev) - 3.0 * sigma);
    const double v = v_expected + (dev < 0.0 ? -mag : mag);
    return std::clamp(v, 1e-9, 1.0);
}

} // namespace

EveStrategy::Kind EveStrategy::kind_from_string(const std::string& s) {
    if (s == "none") return Kind::none;
    if (s == "temporal") return Kind::temporal;
    if (s == "spectral") return Kind::spectral;
    if (s == "mixed") return Kind::mixed;
    throw std::invalid_argument("unknown eavesdropper kind: " + s);
}

std::string EveStrategy::kind_to_string(Kind k) {
    switch (k) {
        case Kind::none: return "none";
        case Kind::temporal: return "temporal";
        case Kind::spectral: return "spectral";
        case Kind::mixed: return "mixed";
    }
    return "none";
}

void SessionConfig::validate() const {
    const GaussianBiphoton s = source.to_state();
    if (sigma_bin < s.sigma_cor || sigma_bin > s.sigma_coh)
        throw std::invalid_argument("sigma_bin must lie between sigma_cor and sigma_coh");
    if (n_t < 0 || n_omega < 1) throw std::invalid_argument("invalid alphabet dimensions");
    if (sigma_det < 0.0) throw std::invalid_argument("jitter must be non-negative");
    if (!(pair_flux_n > 0.0)) throw std::invalid_argument("pair flux must be positive");
    if (num_pairs < 0) throw std::invalid_argument("num_pairs must be non-negative");
    if (!(security_fraction_q >= 0.0 && security_fraction_q < 1.0))
        throw std::invalid_argument("security fraction must lie in [0, 1)");
    if (!(detector_efficiency >= 0.0 && detector_efficiency <= 1.0))
        throw std::invalid_argument("detector efficiency must lie in [0, 1]");
    if (security_delay_1 == security_delay_2)
        throw std::invalid_argument("security probe delays must differ");
    if (!(franson_delta_t_long > 10.0 * s.sigma_cor))
        throw std::invalid_argument("interferometer imbalance too small for this source");
    using K = EveStrategy::Kind;
    if ((eve.kind == K::temporal || eve.kind == K::mixed) && !(eve.sigma_coh_e > 0.0))
        throw std::invalid_argument("temporal attack needs a positive resolution");
    if ((eve.kind == K::spectral || eve.kind == K::mixed) && !(eve.sigma_cor_e > 0.0))
        throw std::invalid_argument("spectral attack needs a positive resolution");
    if (eve.kind != K::none &&
        !(eve.intercept_probability >= 0.0 && eve.intercept_probability <= 1.0))
        throw std::invalid_argument("intercept probability must lie in [0, 1]");
}

Category sift(const PairOutcome& outcome) {
    if (!outcome.alice_detected || !outcome.bob_detected) return Category::incomplete;
    return outcome.alice_key_mode == outcome.bob_key_mode ? Category::same_basis
                                                          : Category::cross_basis;
}

SymbolErrorRate symbol_error_rate(const std::vector<std::pair<int, int>>& sifted_symbols) {
    SymbolErrorRate out;
    if (sifted_symbols.empty()) return out;
    long long bad = 0;
    for (const auto& [a, b] : sifted_symbols)
        if (a != b) ++bad;
    out.value = static_cast<double>(bad) / sifted_symbols.size();
    out.defined = true;
    return out;
}

Verdict security_decision(double v1_measured, double v1_expected, double v2_measured,
                          double v2_expected, double eve_information_bits,
                          const SecurityThresholds& thresholds, bool have_visibility) {
    if (have_visibility) {
        if (std::abs(v1_measured - v1_expected) > thresholds.visibility_tolerance)
            return Verdict::abort;
        if (std::abs(v2_measured - v2_expected) > thresholds.visibility_tolerance)
            return Verdict::abort;
    }
    if (eve_information_bits > thresholds.eve_information_max) return Verdict::abort;
    return Verdict::accept;
}

SessionReport run_session(const SessionConfig& cfg, int num_threads) {
    const SessionContext ctx = make_context(cfg);
    const long long n = cfg.num_pairs;
    const long long blocks = (n + kBlockSize - 1) / kBlockSize;

    std::vector<std::vector<std::pair<int, int>>> block_symbols(
        static_cast<std::size_t>(blocks));

    int workers = num_threads > 0 ? num_threads : effective_threads();
#ifndef DWDM_HAVE_OPENMP
    workers = 1;
#endif

    Accumulator total;
    total.histogram.assign(static_cast<std::size_t>(ctx.alphabet) * ctx.alphabet, 0);

#ifdef DWDM_HAVE_OPENMP
#pragma omp parallel num_threads(workers)
    {
        Accumulator local;
        local.histogram.assign(total.histogram.size(), 0);
#pragma omp for schedule(dynamic)
        for (long long b = 0; b < blocks; ++b) {
            auto& sifted = block_symbols[static_cast<std::size_t>(b)];
            const long long lo = b * kBlockSize;
            const long long hi = std::min(n, lo + kBlockSize);
            for (long long i = lo; i < hi; ++i)
                process_pair(ctx, static_cast<std::uint64_t>(i), local, sifted);
        }
#pragma omp critical
        total.merge(local);
    }
#else
    (void)workers;
    for (long long b = 0; b < blocks; ++b) {
        auto& sifted = block_symbols[static_cast<std::size_t>(b)];
        const long long lo = b * kBlockSize;
        const long long hi = std::min(n, lo + kBlockSize);
        for (long long i = lo; i < hi; ++i)
            process_pair(ctx, static_cast<std::uint64_t>(i), total, sifted);
    }
#endif

    SessionReport report;
    report.counts = total.counts;
    report.n_t = ctx.grid.n_t;
    report.n_omega = cfg.n_omega;
    report.seed = cfg.seed;
    for (int d = 0; d < 2; ++d)
        for (int q = 0; q < 2; ++q) {
            report.security_trials[d][q] = total.trials[d][q];
            report.security_clicks[d][q] = total.clicks[d][q];
        }

    for (auto& v : block_symbols)
        report.sifted_symbols.insert(report.sifted_symbols.end(), v.begin(), v.end());
    report.error_rate = symbol_error_rate(report.sifted_symbols);

    report.v1_expected = visibility(ctx.base, cfg.franson_delta_t_long, cfg.security_delay_1);
    report.v2_expected = visibility(ctx.base, cfg.franson_delta_t_long, cfg.security_delay_2);

    double sigma1 = 0.0, sigma2 = 0.0;
    const double v1 = estimate_visibility(total.trials[0], total.clicks[0], &sigma1);
    const double v2 = estimate_visibility(total.trials[1], total.clicks[1], &sigma2);
    const bool have_visibility = v1 >= 0.0 && v2 >= 0.0;

    report.visibility = {cfg.security_delay_1, cfg.security_delay_2,
                         have_visibility ? v1 : 0.0, have_visibility ? v2 : 0.0,
                         cfg.franson_delta_t_long, total.counts.same_basis_security};

    if (have_visibility) {
        const VisibilityObservation floored = {
            cfg.security_delay_1, cfg.security_delay_2,
            noise_floored(v1, report.v1_expected, sigma1),
            noise_floored(v2, report.v2_expected, sigma2), cfg.franson_delta_t_long,
            total.counts.same_basis_security};
        try {
            report.eve_assessment = infer_eve(extract_times(floored), ctx.base);
        } catch (const std::domain_error&) {
            report.eve_assessment = {};
        }
    }

    report.verdict = security_decision(
        have_visibility ? v1 : 0.0, report.v1_expected, have_visibility ? v2 : 0.0,
        report.v2_expected, report.eve_assessment.information_bound_bits,
        {cfg.visibility_tolerance, cfg.eve_information_max}, have_visibility);

    const long long key_events = total.counts.same_basis_key;
    if (key_events > 0) {
        std::vector<double> joint(total.histogram.size());
        std::vector<double> pa(static_cast<std::size_t>(ctx.alphabet), 0.0);
        std::vector<double> pb(static_cast<std::size_t>(ctx.alphabet), 0.0);
        for (int a = 0; a < ctx.alphabet; ++a)
            for (int b = 0; b < ctx.alphabet; ++b) {
                const double f =
                    static_cast<double>(total.histogram[static_cast<std::size_t>(a) * ctx.alphabet + b]) /
                    key_events;
                joint[static_cast<std::size_t>(a) * ctx.alphabet + b] = f;
                pa[a] += f;
                pb[b] += f;
            }
        report.realized_bpp =
            std::max(0.0, plain_entropy(pa) + plain_entropy(pb) - plain_entropy(joint));
        report.realized_rate = report.realized_bpp * cfg.pair_flux_n *
                               (static_cast<double>(key_events) / std::max<long long>(1, n));
    }
    return report;
}

SessionReport run_session_serial(const SessionConfig& cfg) { return run_session(cfg, 1); }

std::string SessionReport::to_text() const {
    std::ostringstream os;
    char buf[128];
    os << "session seed=" << seed << " alphabet=" << n_t << "x" << n_omega << "\n";
    os << "counts: same-basis key=" << counts.same_basis_key
       << " same-basis check=" << counts.same_basis_security << " cross-basis=" << counts.cross_basis
       << " incomplete=" << counts.incomplete << "\n";
    if (error_rate.defined) {
        std::snprintf(buf, sizeof buf, "%.9g", error_rate.value);
        os << "symbol error rate: " << buf << "\n";
    } else {
        os << "symbol error rate: undefined (no sifted symbols)\n";
    }
    std::snprintf(buf, sizeof buf, "V(dt=%.9g): measured %.9g expected %.9g", visibility.delta_t1,
                  visibility.v1, v1_expected);
    os << buf << "\n";
    std::snprintf(buf, sizeof buf, "V(dt=%.9g): measured %.9g expected %.9g", visibility.delta_t2,
                  visibility.v2, v2_expected);
    os << buf << "\n";
    std::snprintf(buf, sizeof buf, "eve information bound: %.9g bits",
                  eve_assessment.information_bound_bits);
    os << buf << "\n";
    if (eve_assessment.sigma_coh_e)
        os << "  inferred timing resolution: " << *eve_assessment.sigma_coh_e << " ps\n";
    if (eve_assessment.sigma_cor_e)
        os << "  inferred spectral resolution: " << *eve_assessment.sigma_cor_e << " ps\n";
    std::snprintf(buf, sizeof buf, "realized: %.9g bits/photon, %.9g bits/s", realized_bpp,
                  realized_rate);
    os << buf << "\n";
    os << "verdict: " << (verdict == Verdict::accept ? "accept" : "abort") << "\n";
    return os.str();
}

} // namespace dwdm
