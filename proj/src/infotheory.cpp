#include "dwdm/infotheory.hpp"

#include <cmath>
#include <stdexcept>

#include "dwdm/binning.hpp"

namespace dwdm {

namespace {

// Compensated accumulation so entropy sums are order-stable.
struct KahanSum {
    double sum = 0.0, carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

double entropy_unchecked(std::span<const double> pmf) {
    KahanSum h;
    for (double p : pmf) {
        if (p > 0.0) h.add(-p * std::log2(p));
    }
    return h.sum < 0.0 ? 0.0 : h.sum;
}

} // namespace

double shannon_entropy(std::span<const double> pmf) {
    KahanSum total;
    for (double p : pmf) {
        if (p < 0.0 || !std::isfinite(p)) throw std::invalid_argument("pmf entries must be finite and non-negative");
        total.add(p);
    }
    if (std::abs(total.sum - 1.0) > 1e-6)
        throw std::invalid_argument("pmf must sum to one within 1e-6");
    return entropy_unchecked(pmf);
}

double mutual_information(const JointPmf& joint) {
    const Marginals m = marginals(joint);
    const double ha = entropy_unchecked(m.alice);
    const double hb = entropy_unchecked(m.bob);
    const double hab = entropy_unchecked(joint.p);
    const double mi = ha + hb - hab;
    return mi < 0.0 ? 0.0 : mi;
}

RatePoint key_rate(double delta_omega, double pair_flux_n) {
    if (!(delta_omega > 0.0) || !(pair_flux_n > 0.0))
        throw std::invalid_argument("bandwidth and flux must be positive");
    RatePoint pt;
    pt.pair_flux_n = pair_flux_n;
    pt.delta_omega = delta_omega;
    const double ratio = delta_omega / pair_flux_n;
    if (ratio <= 1.0) {
        pt.bpp = 0.0;
        pt.clamped = true;
    } else {
        pt.bpp = std::log2(ratio);
    }
    pt.rate_r = pair_flux_n * pt.bpp;
    return pt;
}

std::vector<RatePoint> key_rate_curve(const SourceSpec& source,
                                      std::span<const double> flux_grid) {
    if (flux_grid.empty()) throw std::invalid_argument("flux grid must be non-empty");
    std::vector<RatePoint> out;
    out.reserve(flux_grid.size());
    for (double n : flux_grid) out.push_back(key_rate(source.bandwidth_delta_omega, n));
    return out;
}

} // namespace dwdm
