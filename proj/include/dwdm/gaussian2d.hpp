#pragma once

#include <array>
#include <complex>

namespace dwdm {

using cplx = std::complex<double>;

/// Complex Gaussian exponential in two variables,
///   f(x) = exp(-x^T M x / 2 + b^T x + c),
/// with M complex symmetric and Re(M) positive definite.  Closed under
/// multiplication by Gaussian filters and under the continuous Fourier
/// transform, which is all the amplitude bookkeeping this library needs.
struct ComplexGauss2 {
    cplx m00{1.0}, m01{0.0}, m11{1.0};
    cplx b0{0.0}, b1{0.0};
    cplx c{0.0};

    cplx eval(double x0, double x1) const {
        const cplx q = 0.5 * (m00 * x0 * x0 + 2.0 * m01 * x0 * x1 + m11 * x1 * x1);
        return std::exp(-q + b0 * x0 + b1 * x1 + c);
    }

    cplx det() const { return m00 * m11 - m01 * m01; }

    /// Multiplies by exp(-(x_axis - center)^2 / (4 s^2)); the squared modulus
    /// of that factor is a Gaussian of standard deviation s.
    void multiply_axis_gaussian(int axis, double center, double s) {
        const double k = 1.0 / (2.0 * s * s);
        if (axis == 0) {
            m00 += k;
            b0 += k * center;
        } else {
            m11 += k;
            b1 += k * center;
        }
        c -= 0.25 * center * center / (s * s);
    }

    /// g(t) = (1/2pi) Int f(x) exp(-i x.t) d^2x, again of the same form.
    ComplexGauss2 fourier() const;
};

/// Real Gaussian measure: mass * Normal(mean, cov).
struct RealGauss2 {
    double mass = 0.0;
    std::array<double, 2> mean{0.0, 0.0};
    double c00 = 1.0, c01 = 0.0, c11 = 1.0;

    double density(double x0, double x1) const;
};

/// Squared modulus of a complex Gaussian, integrated bookkeeping included.
RealGauss2 squared_modulus(const ComplexGauss2& f);

/// Int Normal(x; 0, sigma^2) exp(-(x-m)^2/(2 w^2)) dx.
double gaussian_overlap(double sigma, double m, double w);

} // namespace dwdm
