#pragma once

#include <span>
#include <vector>

#include "dwdm/biphoton.hpp"

namespace dwdm {

struct JointPmf; // binning.hpp

/// H = -sum p log2 p over any flattened table; 0 log 0 reads as 0.
/// Throws on negative entries or a total off one by more than 1e-6.
double shannon_entropy(std::span<const double> pmf);

/// I(A,B) = H(A) + H(B) - H(A,B) on a joint detection table, with Alice
/// holding (time bin, channel) and Bob the partner pair.
double mutual_information(const JointPmf& joint);

/// One point of the rate-vs-flux relation R = n log2(delta_omega / n).
struct RatePoint {
    double pair_flux_n;     // detected pairs per second
    double delta_omega;     // angular bandwidth, rad/s
    double bpp;             // bits per photon
    double rate_r;          // bits per second
    bool clamped = false;   // flux at or above the bandwidth; bpp forced to 0
};

RatePoint key_rate(double delta_omega, double pair_flux_n);

std::vector<RatePoint> key_rate_curve(const SourceSpec& source,
                                      std::span<const double> flux_grid);

} // namespace dwdm
