#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dwdm {

/// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussRule {
    std::vector<double> node;
    std::vector<double> weight;
};

/// n-point rule computed by Newton iteration on the Legendre recurrence.
const GaussRule& gauss_legendre(int n);

struct QuadratureOptions {
    double abs_tol = 1e-8;   // subdivision stops once an estimate moves less than this
    int max_depth = 12;
    int points = 15;
    bool strict = false;     // throw instead of flagging when max_depth is hit unconverged
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double ax, double bx, double ay, double by,
                    double last_delta)
        : std::runtime_error(what), ax(ax), bx(bx), ay(ay), by(by), last_delta(last_delta) {}
    double ax, bx, ay, by;
    double last_delta;
};

struct QuadResult {
    std::complex<double> value;
    bool converged = true;
    double worst_delta = 0.0;        // largest unconverged refinement step
    double worst_cell[4] = {0, 0, 0, 0};
};

using Integrand1D = std::function<std::complex<double>(double)>;
using Integrand2D = std::function<std::complex<double>(double, double)>;

QuadResult integrate_adaptive(const Integrand1D& f, double a, double b,
                              const QuadratureOptions& opt = {});

QuadResult integrate_adaptive_2d(const Integrand2D& f, double ax, double bx,
                                 double ay, double by, const QuadratureOptions& opt = {});

/// Real-valued convenience wrappers.
double integrate_real(const std::function<double(double)>& f, double a, double b,
                      const QuadratureOptions& opt = {});
double integrate_real_2d(const std::function<double(double, double)>& f, double ax, double bx,
                         double ay, double by, const QuadratureOptions& opt = {});

} // namespace dwdm
