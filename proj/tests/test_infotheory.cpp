#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dwdm/binning.hpp"
#include "dwdm/infotheory.hpp"

using namespace dwdm;

namespace {

JointPmf manual_pmf(int n_t, int n_omega, const std::vector<double>& p) {
    JointPmf pmf;
    pmf.n_t = n_t;
    pmf.n_omega = n_omega;
    pmf.p = p;
    pmf.captured_mass = 1.0;
    return pmf;
}

} // namespace

TEST_CASE("shannon entropy basics") {
    CHECK(shannon_entropy(std::vector<double>{0.25, 0.25, 0.25, 0.25}) == doctest::Approx(2.0));
    CHECK(shannon_entropy(std::vector<double>{1.0, 0.0, 0.0}) == doctest::Approx(0.0));
    CHECK(shannon_entropy(std::vector<double>{0.5, 0.25, 0.25}) == doctest::Approx(1.5));
    CHECK_THROWS_AS((void)shannon_entropy(std::vector<double>{0.5, -0.1, 0.6}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)shannon_entropy(std::vector<double>{0.5, 0.4}), std::invalid_argument);
}

TEST_CASE("mutual information of correlated and product tables") {
    // perfectly correlated, uniform over 8 diagonal cells (2 bins x 4 channels)
    JointPmf diag;
    diag.n_t = 2;
    diag.n_omega = 4;
    diag.p.assign(2 * 2 * 4 * 4, 0.0);
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 4; ++k) diag.p[diag.idx(i, i, k, k)] = 1.0 / 8.0;
    diag.captured_mass = 1.0;
    CHECK(mutual_information(diag) == doctest::Approx(3.0).epsilon(1e-12));

    // product table carries no information
    JointPmf prod;
    prod.n_t = 2;
    prod.n_omega = 2;
    prod.p.assign(16, 0.0);
    const double pa[4] = {0.1, 0.4, 0.2, 0.3};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    prod.p[prod.idx(i, j, k, l)] = pa[i * 2 + k] * pa[j * 2 + l];
    prod.captured_mass = 1.0;
    CHECK(mutual_information(prod) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("mutual information is invariant under relabeling") {
    JointPmf pmf = manual_pmf(2, 2, {0.10, 0.02, 0.03, 0.05, 0.04, 0.11, 0.02, 0.03,
                                     0.06, 0.01, 0.20, 0.08, 0.05, 0.02, 0.08, 0.10});
    const double before = mutual_information(pmf);

    // swap both parties' channel labels 0 <-> 1
    JointPmf swapped = pmf;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    swapped.p[swapped.idx(i, j, k, l)] = pmf.p[pmf.idx(i, j, 1 - k, 1 - l)];
    CHECK(mutual_information(swapped) == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("merging outcomes never increases mutual information") {
    JointPmf pmf = manual_pmf(2, 2, {0.10, 0.02, 0.03, 0.05, 0.04, 0.11, 0.02, 0.03,
                                     0.06, 0.01, 0.20, 0.08, 0.05, 0.02, 0.08, 0.10});
    const double before = mutual_information(pmf);

    // merge Alice's two channels into one (Bob untouched)
    JointPmf merged;
    merged.n_t = 2;
    merged.n_omega = 2; // keep shape; alice channel 1 emptied into 0
    merged.p.assign(16, 0.0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    merged.p[merged.idx(i, j, 0, l)] += pmf.p[pmf.idx(i, j, k, l)];
    merged.captured_mass = 1.0;
    CHECK(mutual_information(merged) <= before + 1e-12);
}

TEST_CASE("key rate formula and clamping") {
    const RatePoint pt = key_rate(1024.0, 1.0);
    CHECK(pt.bpp == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(pt.rate_r == doctest::Approx(10.0).epsilon(1e-12));
    CHECK_FALSE(pt.clamped);

    const RatePoint sat = key_rate(100.0, 200.0);
    CHECK(sat.bpp == 0.0);
    CHECK(sat.rate_r == 0.0);
    CHECK(sat.clamped);

    CHECK_THROWS_AS((void)key_rate(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)key_rate(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("headline rate points for the two presets") {
    const auto ppln = ppln_source();
    const RatePoint hi = key_rate(ppln.bandwidth_delta_omega, 1e8);
    CHECK(hi.bpp == doctest::Approx(19.58).epsilon(0.0026));
    CHECK(hi.rate_r == doctest::Approx(1.958e9).epsilon(0.0026));

    const auto ppktp = ppktp_source();
    const RatePoint lo = key_rate(ppktp.bandwidth_delta_omega, 1e6);
    CHECK(lo.bpp == doctest::Approx(21.58).epsilon(1e-3));
    CHECK(lo.rate_r == doctest::Approx(2.16e7).epsilon(1e-2));
}

TEST_CASE("rate curve shape") {
    const auto ppln = ppln_source();
    const std::vector<double> grid = {1e6, 1e8};
    const auto curve = key_rate_curve(ppln, grid);
    REQUIRE(curve.size() == 2);
    CHECK(curve[0].bpp == doctest::Approx(26.2).epsilon(1e-2));
    CHECK(curve[1].bpp == doctest::Approx(19.6).epsilon(1e-2));
    CHECK(curve[0].bpp > curve[1].bpp);

    const auto single = key_rate_curve(ppln, std::vector<double>{1e7});
    CHECK(single.size() == 1);
    CHECK_THROWS_AS((void)key_rate_curve(ppln, std::vector<double>{}), std::invalid_argument);

    // bandwidth-ratio offset between the presets, uniform in flux
    const auto ppktp = ppktp_source();
    for (double n : {1e4, 1e6, 1e9}) {
        const double gap = key_rate(ppln.bandwidth_delta_omega, n).bpp -
                           key_rate(ppktp.bandwidth_delta_omega, n).bpp;
        CHECK(std::abs(gap - std::log2(25.0)) < 1e-9);
    }

    // bpp + log2 n = log2 delta_omega
    for (double n : {1.0, 1e3, 1e8}) {
        const RatePoint pt = key_rate(ppln.bandwidth_delta_omega, n);
        CHECK(pt.bpp + std::log2(n) ==
              doctest::Approx(std::log2(ppln.bandwidth_delta_omega)).epsilon(1e-12));
    }
}

TEST_CASE("splitting the band across channels leaves the total rate unchanged") {
    const double delta_omega = 7.84e13, n = 1e8;
    const double whole = key_rate(delta_omega, n).rate_r;
    for (int n_c : {2, 5, 32}) {
        double split = 0.0;
        for (int c = 0; c < n_c; ++c) split += key_rate(delta_omega / n_c, n / n_c).rate_r;
        CHECK(split == doctest::Approx(whole).epsilon(1e-12));
    }
}

TEST_CASE("discretized mutual information decreases with jitter") {
    const auto state = ppktp_source().to_state();
    const TimeBinGrid grid = TimeBinGrid::centered(40.0, 2);
    const auto bank = SpectralChannelBank::dwdm_grid(state, 2);
    double previous = 1e9;
    for (double det : {0.0, 20.0, 40.0}) {
        const double mi = mutual_information(detection_pmf(state, grid, bank, det));
        CHECK(mi <= previous + 1e-9);
        previous = mi;
    }
}
