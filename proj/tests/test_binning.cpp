#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "dwdm/binning.hpp"
#include "dwdm/infotheory.hpp"
#include "dwdm/random.hpp"
#include "oracles.hpp"

using namespace dwdm;

namespace {

SpectralChannelBank single_channel(const GaussianBiphoton& state, double fwhm, double alice_det,
                                   double bob_det, ChannelShape shape) {
    SpectralChannelBank bank;
    bank.n_omega = 1;
    bank.fwhm = fwhm;
    bank.spacing = 4.0 * fwhm;
    bank.center = 0.5 * state.omega_p;
    bank.shape = shape;
    bank.alice_detuning = {alice_det};
    bank.bob_detuning = {bob_det};
    return bank;
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

} // namespace

TEST_CASE("time-bin grid indexing") {
    const auto grid = TimeBinGrid::centered(40.0, 2);
    CHECK(grid.origin == doctest::Approx(-40.0));
    CHECK(grid.index_of(-39.9) == 0);
    CHECK(grid.index_of(0.1) == 1);
    CHECK(grid.index_of(40.1) == -1);
    CHECK(grid.index_of(-40.1) == -1);
    CHECK_THROWS_AS((void)TimeBinGrid::centered(-1.0, 2), std::invalid_argument);
}

TEST_CASE("demux grid geometry") {
    const auto state = ppktp_source().to_state();
    const auto bank = SpectralChannelBank::dwdm_grid(state, 4);
    CHECK(bank.fwhm == doctest::Approx(0.25));
    CHECK(bank.spacing == doctest::Approx(1.0));
    REQUIRE(bank.alice_detuning.size() == 4);
    CHECK(bank.alice_detuning[0] == doctest::Approx(-1.5));
    CHECK(bank.alice_detuning[3] == doctest::Approx(1.5));
    for (int m = 0; m < 4; ++m) // paired centers sum to the pump frequency
        CHECK(bank.alice_detuning[m] + bank.bob_detuning[m] == doctest::Approx(0.0));
}

TEST_CASE("complete window captures the whole state") {
    const auto state = make_biphoton(1.0, 14.0, 2430.0);
    const TimeBinGrid grid{16.0 * state.sigma_coh, 1, -8.0 * state.sigma_coh};
    const auto bank =
        single_channel(state, 16.0 / state.sigma_cor, 0.0, 0.0, ChannelShape::rectangular);
    const JointPmf pmf = detection_pmf_serial(state, grid, bank, 0.0);
    CHECK(pmf.captured_mass == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(pmf.p[0] == doctest::Approx(1.0));
}

TEST_CASE("two symmetric bins split the amplitude evenly with tiny cross terms") {
    const auto state = make_biphoton(1.0, 1000.0, 2430.0);
    const TimeBinGrid grid = TimeBinGrid::centered(50.0, 2);
    // wide filter: effectively a full-band channel
    const auto bank = single_channel(state, 40.0, 0.0, 0.0, ChannelShape::gaussian);
    const auto table = project_coefficients(state, grid, bank);
    const JointPmf pmf = joint_pmf(table);
    CHECK(pmf.at(0, 0, 0, 0) == doctest::Approx(0.5).epsilon(2e-3));
    CHECK(pmf.at(1, 1, 0, 0) == doctest::Approx(0.5).epsilon(2e-3));
    CHECK(pmf.at(0, 1, 0, 0) + pmf.at(1, 0, 0, 0) <= 1e-3);
}

TEST_CASE("co-detuned channels on both sides are suppressed") {
    const auto state = make_biphoton(1.0, 1000.0, 2430.0);
    const TimeBinGrid grid = TimeBinGrid::centered(40.0, 2);
    const double fwhm = 0.25;
    // both parties parked at +5 fwhm: the pair sum-frequency cannot match
    const auto bank = single_channel(state, fwhm, 5.0 * fwhm, 5.0 * fwhm, ChannelShape::gaussian);
    const auto table = project_coefficients(state, grid, bank);
    double total = 0.0;
    for (const auto& g : table.g) total += std::norm(g);
    CHECK(total <= 1e-6);
}

TEST_CASE("joint pmf normalization and failure modes") {
    ProjectionTable empty;
    empty.n_t = 1;
    empty.n_omega = 1;
    empty.g = {{0.0, 0.0}};
    CHECK_THROWS_AS((void)joint_pmf(empty), std::domain_error);

    ProjectionTable diag;
    diag.n_t = 2;
    diag.n_omega = 1;
    diag.g.assign(4, {0.0, 0.0});
    diag.g[diag.idx(0, 0, 0, 0)] = std::sqrt(0.5);
    diag.g[diag.idx(1, 1, 0, 0)] = std::sqrt(0.5);
    const JointPmf pmf = joint_pmf(diag);
    CHECK(pmf.captured_mass == doctest::Approx(1.0));
    CHECK(pmf.at(0, 0, 0, 0) == doctest::Approx(0.5));
    CHECK(sum(pmf.p) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("default layout concentrates mass on the matched diagonal") {
    const auto state = ppktp_source().to_state();
    const TimeBinGrid grid = TimeBinGrid::centered(40.0, 2);
    const auto bank = SpectralChannelBank::dwdm_grid(state, 4);
    const JointPmf pmf = detection_pmf(state, grid, bank, 0.0);
    CHECK(sum(pmf.p) == doctest::Approx(1.0).epsilon(1e-9));

    double off_time = 0.0, off_channel = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) {
                    if (i != j) off_time += pmf.at(i, j, k, l);
                    if (k != l) off_channel += pmf.at(i, j, k, l);
                }
    CHECK(off_time < 0.02);
    CHECK(off_channel < 0.01);
}

TEST_CASE("marginals") {
    JointPmf diag;
    diag.n_t = 2;
    diag.n_omega = 2;
    diag.p.assign(16, 0.0);
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) diag.p[diag.idx(i, i, k, k)] = 0.25;
    diag.captured_mass = 1.0;
    const Marginals m = marginals(diag);
    for (double v : m.alice) CHECK(v == doctest::Approx(0.25));
    CHECK(sum(m.alice) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sum(m.bob) == doctest::Approx(1.0).epsilon(1e-9));

    // exchange symmetry of the physical layout
    const auto state = ppktp_source().to_state();
    const auto pmf = detection_pmf(state, TimeBinGrid::centered(40.0, 2),
                                   SpectralChannelBank::dwdm_grid(state, 4), 0.0);
    const Marginals phys = marginals(pmf);
    double l1 = 0.0;
    for (std::size_t n = 0; n < phys.alice.size(); ++n)
        l1 += std::abs(phys.alice[n] - phys.bob[n]);
    CHECK(l1 < 1e-3);
}

TEST_CASE("coherent table obeys the exchange symmetry and Bessel bound") {
    const auto state = make_biphoton(1.0, 5.0, 2430.0);
    const TimeBinGrid grid = TimeBinGrid::centered(5.0, 4);

    SpectralChannelBank bank;
    bank.n_omega = 4;
    bank.fwhm = 0.4;
    bank.spacing = 0.6;
    bank.center = 0.5 * state.omega_p;
    bank.shape = ChannelShape::rectangular;
    bank.alice_detuning = {-0.9, -0.3, 0.3, 0.9};
    bank.bob_detuning = {0.9, 0.3, -0.3, -0.9};

    const auto table = project_coefficients(state, grid, bank);
    double total = 0.0;
    for (const auto& g : table.g) total += std::norm(g);
    CHECK(total <= 1.0 + 1e-9);
    CHECK(total > 0.05); // a meaningful fraction is captured

    for (int i = 0; i < grid.n_t; ++i)
        for (int j = 0; j < grid.n_t; ++j)
            for (int k = 0; k < bank.n_omega; ++k)
                for (int l = 0; l < bank.n_omega; ++l) {
                    const double a = std::norm(table.at(i, j, k, l));
                    const double b = std::norm(table.at(j, i, l, k));
                    CHECK(std::abs(a - b) <= 1e-6);
                }
}

TEST_CASE("growing the grid or bank never loses captured mass") {
    const auto state = ppktp_source().to_state();
    const auto bank4 = SpectralChannelBank::dwdm_grid(state, 4);
    const auto bank8 = SpectralChannelBank::dwdm_grid(state, 8);

    const double small_grid =
        detection_pmf(state, TimeBinGrid::centered(40.0, 2), bank4, 0.0).captured_mass;
    const double big_grid =
        detection_pmf(state, TimeBinGrid::centered(40.0, 8), bank4, 0.0).captured_mass;
    CHECK(big_grid >= small_grid);

    const double more_channels =
        detection_pmf(state, TimeBinGrid::centered(40.0, 2), bank8, 0.0).captured_mass;
    // the 8-channel layout narrows each filter but covers the same span;
    // compare same-filter banks instead for strict monotonicity
    auto bank4_wide = bank4;
    bank4_wide.alice_detuning.resize(2);
    bank4_wide.bob_detuning.resize(2);
    bank4_wide.n_omega = 2;
    const double fewer =
        detection_pmf(state, TimeBinGrid::centered(40.0, 2), bank4_wide, 0.0).captured_mass;
    CHECK(small_grid >= fewer);
    (void)more_channels;
}

TEST_CASE("serial and parallel detection kernels agree bit for bit") {
    const auto state = ppktp_source().to_state();
    const TimeBinGrid grid = TimeBinGrid::centered(100.0, 6);
    const auto bank = SpectralChannelBank::dwdm_grid(state, 4);
    const JointPmf a = detection_pmf_serial(state, grid, bank, 15.0);
    const JointPmf b = detection_pmf(state, grid, bank, 15.0);
    REQUIRE(a.p.size() == b.p.size());
    CHECK(a.captured_mass == b.captured_mass);
    for (std::size_t n = 0; n < a.p.size(); ++n) CHECK(a.p[n] == b.p[n]);
}

TEST_CASE("channel-pair mass matches a direct quadrature") {
    const auto state = ppktp_source().to_state();
    const auto bank = SpectralChannelBank::dwdm_grid(state, 4);
    const auto mass = channel_pair_mass(state, bank);

    const double sigma_sum = 1.0 / state.sigma_coh;
    const double sigma_diff = 1.0 / state.sigma_cor;
    for (int k = 0; k < 4; ++k)
        for (int l : {k, (k + 1) % 4}) {
            const double direct = integrate_real_2d(
                [&](double ws, double wd) {
                    const double nu_a = 0.5 * (ws + wd), nu_b = 0.5 * (ws - wd);
                    return oracles::normal_pdf(ws, sigma_sum) * oracles::normal_pdf(wd, sigma_diff) *
                           bank.transmission(nu_a, k, false) * bank.transmission(nu_b, l, true);
                },
                -8.0 * sigma_sum, 8.0 * sigma_sum, -8.0 * sigma_diff, 8.0 * sigma_diff,
                {1e-12, 14});
            CHECK(mass[static_cast<std::size_t>(k) * 4 + l] ==
                  doctest::Approx(direct).epsilon(1e-8));
        }
}

TEST_CASE("time-cell masses match the banded reference integral") {
    const auto state = ppktp_source().to_state();
    const TimeBinGrid grid = TimeBinGrid::centered(100.0, 4);
    for (double det : {0.0, 25.0}) {
        const auto cells = time_cell_mass(state, grid, det);
        const double su = std::sqrt(1.0 + 2.0 * det * det);
        const double sv = std::sqrt(1e6 + 2.0 * det * det);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                const double ref = oracles::cell_mass_reference(
                    su, sv, grid.left_edge(i), grid.right_edge(i), grid.left_edge(j),
                    grid.right_edge(j));
                CHECK(cells[static_cast<std::size_t>(i) * 4 + j] ==
                      doctest::Approx(ref).epsilon(1e-7));
            }
    }
}

TEST_CASE("sampled events rarely cross bins when bins dwarf the correlation time") {
    const auto state = ppktp_source().to_state();
    const TimeBinGrid grid = TimeBinGrid::centered(100.0, 10);
    const auto bank =
        single_channel(state, 16.0 / state.sigma_cor, 0.0, 0.0, ChannelShape::rectangular);
    const EventSampler sampler(state, grid, bank, 0.0);
    SplitMix64 rng(31);
    long long complete = 0, mismatched = 0;
    for (int n = 0; n < 100000; ++n) {
        const SampledEvent ev = sampler.sample(rng);
        if (!ev.complete()) continue;
        ++complete;
        if (ev.bin_a != ev.bin_b) ++mismatched;
    }
    REQUIRE(complete > 10000);
    CHECK(static_cast<double>(mismatched) / complete < 0.01);
}

TEST_CASE("heavy jitter scrambles the time bins") {
    const auto state = ppktp_source().to_state();
    const TimeBinGrid grid = TimeBinGrid::centered(10.0, 10);
    const auto bank =
        single_channel(state, 16.0 / state.sigma_cor, 0.0, 0.0, ChannelShape::rectangular);
    const EventSampler sampler(state, grid, bank, 100.0); // ten bin widths
    SplitMix64 rng(77);
    long long complete = 0, mismatched = 0;
    for (int n = 0; n < 50000; ++n) {
        const SampledEvent ev = sampler.sample(rng);
        if (!ev.complete()) continue;
        ++complete;
        if (ev.bin_a != ev.bin_b) ++mismatched;
    }
    REQUIRE(complete > 1000);
    CHECK(static_cast<double>(mismatched) / complete > 0.4);
}

TEST_CASE("monte carlo histogram matches the detection pmf") {
    const auto state = ppktp_source().to_state();
    const TimeBinGrid grid = TimeBinGrid::centered(100.0, 4);
    const auto bank = SpectralChannelBank::dwdm_grid(state, 4);
    const JointPmf pmf = detection_pmf(state, grid, bank, 0.0);

    const EventSampler sampler(state, grid, bank, 0.0);
    SplitMix64 rng(2024);
    std::vector<long long> hist(pmf.p.size(), 0);
    long long complete = 0;
    const long long wanted = 1000000;
    while (complete < wanted) {
        const SampledEvent ev = sampler.sample(rng);
        if (!ev.complete()) continue;
        ++hist[pmf.idx(ev.bin_a, ev.bin_b, ev.channel_a, ev.channel_b)];
        ++complete;
    }
    const auto chi2 = oracles::chi_squared_gof(hist, pmf.p, wanted);
    CHECK(chi2.p_value > 0.01);
}

TEST_CASE("non-converging quadrature reports the worst cell") {
    QuadratureOptions strict;
    strict.strict = true;
    strict.max_depth = 3;
    strict.abs_tol = 1e-14;
    CHECK_THROWS_AS((void)integrate_adaptive_2d(
                        [](double x, double y) {
                            return std::complex<double>(std::sin(503.0 * x * y), 0.0);
                        },
                        0.0, 7.0, 0.0, 9.0, strict),
                    QuadratureError);

    // a window transform oscillating far beyond the refinement budget
    const auto state = make_biphoton(1.0, 5.0, 2430.0);
    const TimeBinGrid absurd{2e6, 1, -1e6};
    const auto bank = single_channel(state, 0.4, 0.0, 0.0, ChannelShape::rectangular);
    CHECK_THROWS_AS((void)project_coefficients(state, absurd, bank), QuadratureError);
}
