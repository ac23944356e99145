#include "dwdm/gaussian2d.hpp"

#include <cmath>
#include <stdexcept>

namespace dwdm {

ComplexGauss2 ComplexGauss2::fourier() const {
    const cplx d = det();
    if (std::abs(d) == 0.0) throw std::domain_error("degenerate Gaussian form");
    // inverse of the symmetric 2x2 block
    const cplx i00 = m11 / d, i01 = -m01 / d, i11 = m00 / d;
    const cplx ib0 = i00 * b0 + i01 * b1;
    const cplx ib1 = i01 * b0 + i11 * b1;

    ComplexGauss2 g;
    g.m00 = i00;
    g.m01 = i01;
    g.m11 = i11;
    const cplx minus_i(0.0, -1.0);
    g.b0 = minus_i * ib0;
    g.b1 = minus_i * ib1;
    g.c = c - 0.5 * std::log(d) + 0.5 * (b0 * ib0 + b1 * ib1);
    return g;
}

double RealGauss2::density(double x0, double x1) const {
    const double det = c00 * c11 - c01 * c01;
    const double dx0 = x0 - mean[0], dx1 = x1 - mean[1];
    const double q = (c11 * dx0 * dx0 - 2.0 * c01 * dx0 * dx1 + c00 * dx1 * dx1) / det;
    return mass / (2.0 * 3.14159265358979323846 * std::sqrt(det)) * std::exp(-0.5 * q);
}

RealGauss2 squared_modulus(const ComplexGauss2& f) {
    // |f|^2 = exp(-x^T A x + beta^T x + gamma) with A = Re M, beta = 2 Re b.
    const double a00 = f.m00.real(), a01 = f.m01.real(), a11 = f.m11.real();
    const double det = a00 * a11 - a01 * a01;
    if (det <= 0.0 || a00 <= 0.0)
        throw std::domain_error("squared modulus is not normalizable");
    const double b0 = 2.0 * f.b0.real(), b1 = 2.0 * f.b1.real();
    const double gamma = 2.0 * f.c.real();

    const double inv00 = a11 / det, inv01 = -a01 / det, inv11 = a00 / det;
    RealGauss2 g;
    g.mean = {0.5 * (inv00 * b0 + inv01 * b1), 0.5 * (inv01 * b0 + inv11 * b1)};
    g.c00 = 0.5 * inv00;
    g.c01 = 0.5 * inv01;
    g.c11 = 0.5 * inv11;
    const double quad = 0.25 * (b0 * (inv00 * b0 + inv01 * b1) + b1 * (inv01 * b0 + inv11 * b1));
    g.mass = 3.14159265358979323846 / std::sqrt(det) * std::exp(gamma + quad);
    return g;
}

double gaussian_overlap(double sigma, double m, double w) {
    const double v = sigma * sigma + w * w;
    return w / std::sqrt(v) * std::exp(-0.5 * m * m / v);
}

} // namespace dwdm
