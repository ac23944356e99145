// Timing comparison between the serial reference kernels and their
// OpenMP-parallel counterparts: detection pmf assembly and full sessions.

#include <cstdio>
#include <cstring>

#include "dwdm/binning.hpp"
#include "dwdm/infotheory.hpp"
#include "dwdm/protocol.hpp"
#include "dwdm/threads.hpp"

#ifdef DWDM_HAVE_OPENMP
#include <omp.h>
static double now() { return omp_get_wtime(); }
#else
#include <chrono>
static double now() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}
#endif

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;

    using namespace dwdm;
    const GaussianBiphoton state = ppktp_source().to_state();
    // narrow diagonal ridge against wide cells keeps the quadrature honest
    const TimeBinGrid grid = TimeBinGrid::centered(80.0, quick ? 4 : 12);
    const auto bank = SpectralChannelBank::dwdm_grid(state, quick ? 4 : 16);

    std::printf("workers available: %d\n", effective_threads());

    double t0 = now();
    const JointPmf serial = detection_pmf_serial(state, grid, bank, 0.0);
    double t1 = now();
    const JointPmf parallel = detection_pmf(state, grid, bank, 0.0);
    double t2 = now();

    bool identical = serial.p.size() == parallel.p.size();
    for (std::size_t i = 0; identical && i < serial.p.size(); ++i)
        identical = serial.p[i] == parallel.p[i];
    std::printf("detection pmf  serial %.3fs  parallel %.3fs  speedup %.2fx  identical=%s\n",
                t1 - t0, t2 - t1, (t1 - t0) / (t2 - t1), identical ? "yes" : "no");
    std::printf("  mutual information: %.6f bits\n", mutual_information(parallel));

    SessionConfig cfg;
    cfg.num_pairs = quick ? 20000 : 400000;
    cfg.seed = 99;
    t0 = now();
    const SessionReport a = run_session_serial(cfg);
    t1 = now();
    const SessionReport b = run_session(cfg);
    t2 = now();
    const bool same = a.to_text() == b.to_text();
    std::printf("session        serial %.3fs  parallel %.3fs  speedup %.2fx  identical=%s\n",
                t1 - t0, t2 - t1, (t1 - t0) / (t2 - t1), same ? "yes" : "no");
    return identical && same ? 0 : 1;
}
