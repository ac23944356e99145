// Command-line front end: rate curves, discretized mutual information,
// jitter sweeps, interferometer scans and full key-exchange simulations,
// all emitting stable CSV plus a reproducibility manifest.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dwdm/binning.hpp"
#include "dwdm/biphoton.hpp"
#include "dwdm/constants.hpp"
#include "dwdm/csvio.hpp"
#include "dwdm/franson.hpp"
#include "dwdm/infotheory.hpp"
#include "dwdm/protocol.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using nlohmann::json;

struct GlobalOpts {
    std::uint64_t seed = 12345;
    std::string out = "-";
    std::string source = "ppktp";
    double sigma_coh = 1000.0;
    std::string config_path;
};

std::vector<double> parse_grid(const std::string& list, double lo, double hi, int points,
                               bool log_spaced) {
    std::vector<double> grid;
    if (!list.empty()) {
        std::stringstream ss(list);
        std::string tok;
        while (std::getline(ss, tok, ',')) grid.push_back(std::stod(tok));
        return grid;
    }
    if (points == 1) {
        grid.push_back(lo);
        return grid;
    }
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / (points - 1);
        grid.push_back(log_spaced ? lo * std::pow(hi / lo, t) : lo + t * (hi - lo));
    }
    return grid;
}

void write_manifest(const std::string& command, const GlobalOpts& g, const json& resolved,
                    const std::string& out_path) {
    if (out_path == "-") return;
    json manifest;
    manifest["command"] = command;
    manifest["version"] = kVersion;
    manifest["seed"] = g.seed;
    manifest["config"] = resolved;
    manifest["outputs"] = json::array({out_path});
    dwdm::write_file_atomic(out_path + ".manifest.json", manifest.dump(2) + "\n");
}

dwdm::SessionConfig config_from_json(const json& j) {
    dwdm::SessionConfig cfg;
    const std::string source = j.value("source", std::string("ppktp"));
    const double sigma_coh = j.value("sigma_coh", 1000.0);
    cfg.source = dwdm::source_by_name(source, sigma_coh);
    cfg.sigma_bin = j.value("sigma_bin", cfg.sigma_bin);
    cfg.n_t = j.value("n_t", cfg.n_t);
    cfg.n_omega = j.value("n_omega", cfg.n_omega);
    cfg.sigma_det = j.value("sigma_det", cfg.sigma_det);
    cfg.pair_flux_n = j.value("pair_flux_n", cfg.pair_flux_n);
    cfg.num_pairs = j.value("num_pairs", cfg.num_pairs);
    cfg.security_fraction_q = j.value("security_fraction_q", cfg.security_fraction_q);
    cfg.detector_efficiency = j.value("detector_efficiency", cfg.detector_efficiency);
    cfg.franson_delta_t_long = j.value("franson_delta_t_long", cfg.franson_delta_t_long);
    cfg.security_delay_1 = j.value("security_delay_1", cfg.security_delay_1);
    cfg.security_delay_2 = j.value("security_delay_2", cfg.security_delay_2);
    cfg.visibility_tolerance = j.value("visibility_tolerance", cfg.visibility_tolerance);
    cfg.eve_information_max = j.value("eve_information_max", cfg.eve_information_max);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("eve")) {
        const json& e = j.at("eve");
        cfg.eve.kind = dwdm::EveStrategy::kind_from_string(e.value("kind", std::string("none")));
        cfg.eve.sigma_coh_e = e.value("sigma_coh_e", 0.0);
        cfg.eve.sigma_cor_e = e.value("sigma_cor_e", 0.0);
        cfg.eve.intercept_probability = e.value("intercept_probability", 0.0);
    }
    return cfg;
}

json config_to_json(const dwdm::SessionConfig& cfg) {
    json j;
    j["source"] = cfg.source.name;
    j["sigma_coh"] = cfg.source.sigma_coh_ps;
    j["sigma_bin"] = cfg.sigma_bin;
    j["n_t"] = cfg.n_t;
    j["n_omega"] = cfg.n_omega;
    j["sigma_det"] = cfg.sigma_det;
    j["pair_flux_n"] = cfg.pair_flux_n;
    j["num_pairs"] = cfg.num_pairs;
    j["security_fraction_q"] = cfg.security_fraction_q;
    j["detector_efficiency"] = cfg.detector_efficiency;
    j["franson_delta_t_long"] = cfg.franson_delta_t_long;
    j["security_delay_1"] = cfg.security_delay_1;
    j["security_delay_2"] = cfg.security_delay_2;
    j["eve"] = {{"kind", dwdm::EveStrategy::kind_to_string(cfg.eve.kind)},
                {"sigma_coh_e", cfg.eve.sigma_coh_e},
                {"sigma_cor_e", cfg.eve.sigma_cor_e},
                {"intercept_probability", cfg.eve.intercept_probability}};
    j["visibility_tolerance"] = cfg.visibility_tolerance;
    j["eve_information_max"] = cfg.eve_information_max;
    j["seed"] = cfg.seed;
    return j;
}

int cmd_key_rate(const GlobalOpts& g, double delta_omega, const std::string& n_list, double n_min,
                 double n_max, int n_points) {
    double bandwidth = delta_omega;
    if (bandwidth <= 0.0)
        bandwidth = dwdm::source_by_name(g.source, g.sigma_coh).bandwidth_delta_omega;
    const std::vector<double> grid = parse_grid(n_list, n_min, n_max, n_points, true);

    dwdm::CsvWriter csv({"n_pairs_per_s", "bpp", "rate_bits_per_s"});
    for (double n : grid) {
        const dwdm::RatePoint pt = dwdm::key_rate(bandwidth, n);
        if (pt.clamped)
            std::cerr << "warning: flux " << n << " saturates the bandwidth; bpp clamped to 0\n";
        csv.add_row({pt.pair_flux_n, pt.bpp, pt.rate_r});
    }
    csv.write(g.out);
    write_manifest("key-rate", g,
                   {{"delta_omega", bandwidth}, {"source", g.source}, {"n_grid", grid}}, g.out);
    return 0;
}

int cmd_mutual_info(const GlobalOpts& g, const std::string& n_omega_list, double sigma_bin,
                    int n_t, double sigma_det) {
    const dwdm::GaussianBiphoton state =
        dwdm::source_by_name(g.source, g.sigma_coh).to_state();
    const dwdm::TimeBinGrid grid = dwdm::TimeBinGrid::centered(sigma_bin, n_t);

    std::vector<int> n_omegas;
    {
        std::stringstream ss(n_omega_list);
        std::string tok;
        while (std::getline(ss, tok, ',')) n_omegas.push_back(std::stoi(tok));
    }

    dwdm::CsvWriter csv({"n_omega", "MI_bits", "ideal_bits"});
    for (int n_omega : n_omegas) {
        const auto bank = dwdm::SpectralChannelBank::dwdm_grid(state, n_omega);
        const dwdm::JointPmf pmf = dwdm::detection_pmf(state, grid, bank, sigma_det);
        csv.add_row({static_cast<double>(n_omega), dwdm::mutual_information(pmf),
                     std::log2(static_cast<double>(n_t) * n_omega)});
    }
    csv.write(g.out);
    write_manifest("mutual-info", g,
                   {{"source", g.source},
                    {"sigma_bin", sigma_bin},
                    {"n_t", n_t},
                    {"sigma_det", sigma_det},
                    {"n_omega", n_omegas}},
                   g.out);
    return 0;
}

int cmd_jitter_sweep(const GlobalOpts& g, double sigma_bin, int n_t, int n_omega,
                     const std::string& det_list, double det_max, int det_points) {
    const dwdm::GaussianBiphoton state =
        dwdm::source_by_name(g.source, g.sigma_coh).to_state();
    const dwdm::TimeBinGrid grid = dwdm::TimeBinGrid::centered(sigma_bin, n_t);
    const auto bank = dwdm::SpectralChannelBank::dwdm_grid(state, n_omega);
    const std::vector<double> dets = parse_grid(det_list, 0.0, det_max, det_points, false);

    dwdm::CsvWriter csv({"sigma_det_over_sigma_bin", "MI_bits"});
    for (double det : dets) {
        const dwdm::JointPmf pmf = dwdm::detection_pmf(state, grid, bank, det);
        csv.add_row({det / sigma_bin, dwdm::mutual_information(pmf)});
    }
    csv.write(g.out);
    write_manifest("jitter-sweep", g,
                   {{"source", g.source},
                    {"sigma_bin", sigma_bin},
                    {"n_t", n_t},
                    {"n_omega", n_omega},
                    {"sigma_det_grid", dets}},
                   g.out);
    return 0;
}

int cmd_franson(const GlobalOpts& g, double delta_t_long, double dt_min, double dt_max,
                int dt_points, double tau_alpha) {
    const dwdm::GaussianBiphoton state =
        dwdm::source_by_name(g.source, g.sigma_coh).to_state();

    dwdm::CsvWriter csv({"delta_t", "P_C", "V"});
    for (int i = 0; i < dt_points; ++i) {
        const double dt = dt_points == 1
                              ? dt_min
                              : dt_min + (dt_max - dt_min) * i / (dt_points - 1);
        dwdm::FransonGeometry geom = dwdm::FransonGeometry::for_state(state, delta_t_long, dt);
        geom.tau_alpha = tau_alpha;
        csv.add_row({dt, dwdm::coincidence_fringe(state, geom), dwdm::lossy_visibility(state, geom)});
    }
    csv.write(g.out);
    write_manifest("franson", g,
                   {{"source", g.source},
                    {"delta_t_long", delta_t_long},
                    {"dt_min", dt_min},
                    {"dt_max", dt_max},
                    {"dt_points", dt_points},
                    {"tau_alpha", std::isinf(tau_alpha) ? -1.0 : tau_alpha}},
                   g.out);
    return 0;
}

int cmd_simulate(const GlobalOpts& g, bool seed_given, long long num_pairs_override) {
    json doc;
    {
        std::ifstream in(g.config_path);
        if (!in) {
            std::cerr << "error: cannot open config " << g.config_path << "\n";
            return 2;
        }
        try {
            doc = json::parse(in);
        } catch (const json::parse_error& e) {
            std::cerr << "error: config parse failed: " << e.what() << "\n";
            return 2;
        }
    }

    dwdm::SessionConfig cfg;
    try {
        cfg = config_from_json(doc);
        if (seed_given) cfg.seed = g.seed;
        if (num_pairs_override >= 0) cfg.num_pairs = num_pairs_override;
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "error: bad config: " << e.what() << "\n";
        return 2;
    }

    const dwdm::SessionReport report = dwdm::run_session(cfg);
    std::cout << report.to_text();

    std::map<std::pair<int, int>, long long> tally;
    for (const auto& s : report.sifted_symbols) ++tally[s];
    dwdm::CsvWriter csv({"alice_symbol", "bob_symbol", "count"});
    for (const auto& [key, count] : tally)
        csv.add_row({static_cast<double>(key.first), static_cast<double>(key.second),
                     static_cast<double>(count)});
    csv.write(g.out);
    write_manifest("simulate", g, config_to_json(cfg), g.out);

    return report.verdict == dwdm::Verdict::accept ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dwdm-qkd: entanglement-based dense-WDM key distribution simulator"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--out", g.out, "output path, or - for stdout")->capture_default_str();
    app.add_option("--source", g.source, "source preset (ppktp|ppln)")->capture_default_str();
    app.add_option("--sigma-coh", g.sigma_coh, "pump coherence time, ps")->capture_default_str();
    app.add_option("--config", g.config_path, "JSON config file");

    auto* kr = app.add_subcommand("key-rate", "rate and bits/photon over a flux grid");
    double kr_delta_omega = 0.0, kr_n_min = 0.0, kr_n_max = 0.0;
    int kr_n_points = 0;
    std::string kr_n_list;
    kr->add_option("--delta-omega", kr_delta_omega, "angular bandwidth, rad/s (overrides preset)");
    auto* kr_n = kr->add_option("--n", kr_n_list, "comma list of pair fluxes, pairs/s");
    auto* kr_min = kr->add_option("--n-min", kr_n_min, "log-grid start, pairs/s");
    kr->add_option("--n-max", kr_n_max, "log-grid end, pairs/s");
    kr->add_option("--n-points", kr_n_points, "log-grid length");

    auto* mi = app.add_subcommand("mutual-info", "mutual information vs channel count");
    std::string mi_list = "1,2,4,8,16,32";
    double mi_sigma_bin = 40.0, mi_sigma_det = 0.0;
    int mi_n_t = 2;
    mi->add_option("--n-omega", mi_list, "comma list of channel counts")->capture_default_str();
    mi->add_option("--sigma-bin", mi_sigma_bin, "time-bin duration, ps")->capture_default_str();
    mi->add_option("--n-t", mi_n_t, "number of time bins")->capture_default_str();
    mi->add_option("--sigma-det", mi_sigma_det, "detector jitter, ps")->capture_default_str();

    auto* js = app.add_subcommand("jitter-sweep", "mutual information vs detector jitter");
    double js_sigma_bin = 40.0, js_det_max = 60.0;
    int js_n_t = 2, js_n_omega = 4, js_det_points = 10;
    std::string js_det_list;
    js->add_option("--sigma-bin", js_sigma_bin, "time-bin duration, ps")->capture_default_str();
    js->add_option("--n-t", js_n_t, "number of time bins")->capture_default_str();
    js->add_option("--n-omega", js_n_omega, "channel count")->capture_default_str();
    js->add_option("--sigma-det", js_det_list, "comma list of jitter values, ps");
    js->add_option("--sigma-det-max", js_det_max, "linear grid end, ps")->capture_default_str();
    js->add_option("--sigma-det-points", js_det_points, "linear grid length")->capture_default_str();

    auto* fr = app.add_subcommand("franson", "coincidence fringe and visibility scan");
    double fr_delta_t = 100.0, fr_dt_min = -8.0, fr_dt_max = 8.0;
    double fr_tau = std::numeric_limits<double>::infinity();
    int fr_points = 801;
    fr->add_option("--delta-T", fr_delta_t, "arm imbalance, ps")->capture_default_str();
    fr->add_option("--dt-min", fr_dt_min, "scan start, ps")->capture_default_str();
    fr->add_option("--dt-max", fr_dt_max, "scan end, ps")->capture_default_str();
    fr->add_option("--dt-points", fr_points, "scan length")->capture_default_str();
    fr->add_option("--tau-alpha", fr_tau, "photon lifetime in the arm, ps (default lossless)");

    auto* sim = app.add_subcommand("simulate", "run a two-party key exchange session");
    long long sim_num_pairs = -1;
    sim->add_option("--num-pairs", sim_num_pairs, "override pair count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        app.exit(e);
        return 2;
    }

    try {
        if (kr->parsed()) {
            if (kr_n_list.empty() && (!*kr_min || kr_n_points < 1)) {
                std::cerr << "error: key-rate needs --n or --n-min/--n-max/--n-points\n";
                return 2;
            }
            (void)kr_n;
            return cmd_key_rate(g, kr_delta_omega, kr_n_list, kr_n_min, kr_n_max, kr_n_points);
        }
        if (mi->parsed()) return cmd_mutual_info(g, mi_list, mi_sigma_bin, mi_n_t, mi_sigma_det);
        if (js->parsed())
            return cmd_jitter_sweep(g, js_sigma_bin, js_n_t, js_n_omega, js_det_list, js_det_max,
                                    js_det_points);
        if (fr->parsed()) return cmd_franson(g, fr_delta_t, fr_dt_min, fr_dt_max, fr_points, fr_tau);
        if (sim->parsed()) {
            if (g.config_path.empty()) {
                std::cerr << "error: simulate needs --config\n";
                return 2;
            }
            return cmd_simulate(g, app.count("--seed") > 0, sim_num_pairs);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
