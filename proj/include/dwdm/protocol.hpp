#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dwdm/binning.hpp"
#include "dwdm/biphoton.hpp"
#include "dwdm/franson.hpp"

namespace dwdm {

struct EveStrategy {
    enum class Kind { none, temporal, spectral, mixed };
    Kind kind = Kind::none;
    double sigma_coh_e = 0.0;          // ps, timing resolution (temporal/mixed)
    double sigma_cor_e = 0.0;          // ps, spectral resolution (spectral/mixed)
    double intercept_probability = 0.0;

    static Kind kind_from_string(const std::string& s);
    static std::string kind_to_string(Kind k);
};

struct SessionConfig {
    SourceSpec source = ppktp_source();
    double sigma_bin = 100.0;          // ps
    int n_t = 0;                       // 0: derive from the alphabet plan
    int n_omega = 4;
    double sigma_det = 0.0;            // ps
    double pair_flux_n = 1e6;          // pairs per second; frame T = 1/n
    long long num_pairs = 100000;
    double security_fraction_q = 0.1;  // per-party probability of a check frame
    double detector_efficiency = 1.0;
    double franson_delta_t_long = 100.0; // ps
    double security_delay_1 = 1.0;       // ps, probe delay delta_t1
    double security_delay_2 = 0.0;       // ps, probe delay delta_t2
    EveStrategy eve;
    double visibility_tolerance = 0.05;  // epsilon_V
    double eve_information_max = 0.1;    // abort bound, bits
    std::uint64_t seed = 1;

    void validate() const;
};

struct CategoryCounts {
    long long same_basis_key = 0;       // both key mode, both photons captured
    long long same_basis_security = 0;  // both check mode, coincidence seen
    long long cross_basis = 0;          // modes differ, both detected
    long long incomplete = 0;           // anything lost

    long long same_basis() const { return same_basis_key + same_basis_security; }
    long long total() const { return same_basis() + cross_basis + incomplete; }
};

/// Minimal per-pair record used by the sifting step.
struct PairOutcome {
    bool alice_key_mode = true;
    bool bob_key_mode = true;
    bool alice_detected = false;
    bool bob_detected = false;
};

enum class Category { same_basis, cross_basis, incomplete };

Category sift(const PairOutcome& outcome);

/// Fraction of matched-basis key symbols that disagree; channel indices pair
/// anti-correlated (Alice k with Bob l = k).
struct SymbolErrorRate {
    double value = 0.0;
    bool defined = false;
};

SymbolErrorRate symbol_error_rate(const std::vector<std::pair<int, int>>& sifted_symbols);

enum class Verdict { accept, abort };

struct SecurityThresholds {
    double visibility_tolerance;
    double eve_information_max;
};

Verdict security_decision(double v1_measured, double v1_expected, double v2_measured,
                          double v2_expected, double eve_information_bits,
                          const SecurityThresholds& thresholds, bool have_visibility);

struct SessionReport {
    CategoryCounts counts;
    std::vector<std::pair<int, int>> sifted_symbols; // (alice, bob) alphabet indices
    SymbolErrorRate error_rate;
    VisibilityObservation visibility;
    double v1_expected = 0.0, v2_expected = 0.0;
    long long security_trials[2][2] = {{0, 0}, {0, 0}}; // [delay][phase]
    long long security_clicks[2][2] = {{0, 0}, {0, 0}};
    EveAssessment eve_assessment;
    Verdict verdict = Verdict::accept;
    double realized_bpp = 0.0;
    double realized_rate = 0.0; // bits per second
    int n_t = 0, n_omega = 0;
    std::uint64_t seed = 0;

    std::string to_text() const;
};

/// Runs a full two-party exchange: per-pair interception, mode choice, hybrid
/// key sampling, interleaved interferometer checks, sifting and the security
/// verdict.  Deterministic for a given config; independent of thread count.
SessionReport run_session(const SessionConfig& cfg, int num_threads = 0);

/// Single-threaded reference path, bit-identical to run_session.
SessionReport run_session_serial(const SessionConfig& cfg);

} // namespace dwdm
