#pragma once

#include <cstdlib>
#include <string>

#ifdef DWDM_HAVE_OPENMP
#include <omp.h>
#endif

namespace dwdm {

// Worker cap honoring the DWDM_QKD_THREADS environment variable.
inline int effective_threads() {
#ifdef DWDM_HAVE_OPENMP
    int n = omp_get_max_threads();
#else
    int n = 1;
#endif
    if (const char* env = std::getenv("DWDM_QKD_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1 && cap < n) n = cap;
    }
    return n;
}

} // namespace dwdm
