#include "dwdm/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace dwdm {

namespace {

GaussRule build_rule(int n) {
    GaussRule rule;
    rule.node.resize(n);
    rule.weight.resize(n);
    const double pi = 3.14159265358979323846;
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.node[i] = -x;
        rule.node[n - 1 - i] = x;
        rule.weight[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weight[n - 1 - i] = rule.weight[i];
    }
    return rule;
}

std::complex<double> fixed_1d(const Integrand1D& f, double a, double b, const GaussRule& r) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    std::complex<double> sum = 0.0;
    for (std::size_t i = 0; i < r.node.size(); ++i)
        sum += r.weight[i] * f(mid + half * r.node[i]);
    return sum * half;
}

std::complex<double> fixed_2d(const Integrand2D& f, double ax, double bx, double ay, double by,
                              const GaussRule& r) {
    const double mx = 0.5 * (ax + bx), hx = 0.5 * (bx - ax);
    const double my = 0.5 * (ay + by), hy = 0.5 * (by - ay);
    std::complex<double> sum = 0.0;
    for (std::size_t i = 0; i < r.node.size(); ++i) {
        const double x = mx + hx * r.node[i];
        std::complex<double> row = 0.0;
        for (std::size_t j = 0; j < r.node.size(); ++j)
            row += r.weight[j] * f(x, my + hy * r.node[j]);
        sum += r.weight[i] * row;
    }
    return sum * hx * hy;
}

void recurse_1d(const Integrand1D& f, double a, double b, std::complex<double> whole,
                const GaussRule& r, const QuadratureOptions& opt, int depth, QuadResult& out) {
    const double mid = 0.5 * (a + b);
    const std::complex<double> left = fixed_1d(f, a, mid, r);
    const std::complex<double> right = fixed_1d(f, mid, b, r);
    const double delta = std::abs(left + right - whole);
    if (delta < opt.abs_tol) {
        out.value += left + right;
        return;
    }
    if (depth >= opt.max_depth) {
        if (opt.strict)
            throw QuadratureError("adaptive quadrature failed to converge", a, b, 0, 0, delta);
        out.value += left + right;
        out.converged = false;
        if (delta > out.worst_delta) {
            out.worst_delta = delta;
            out.worst_cell[0] = a;
            out.worst_cell[1] = b;
        }
        return;
    }
    recurse_1d(f, a, mid, left, r, opt, depth + 1, out);
    recurse_1d(f, mid, b, right, r, opt, depth + 1, out);
}

void recurse_2d(const Integrand2D& f, double ax, double bx, double ay, double by,
                std::complex<double> whole, const GaussRule& r, const QuadratureOptions& opt,
                int depth, QuadResult& out) {
    const double mx = 0.5 * (ax + bx), my = 0.5 * (ay + by);
    const std::complex<double> c00 = fixed_2d(f, ax, mx, ay, my, r);
    const std::complex<double> c10 = fixed_2d(f, mx, bx, ay, my, r);
    const std::complex<double> c01 = fixed_2d(f, ax, mx, my, by, r);
    const std::complex<double> c11 = fixed_2d(f, mx, bx, my, by, r);
    const std::complex<double> refined = c00 + c10 + c01 + c11;
    const double delta = std::abs(refined - whole);
    if (delta < opt.abs_tol) {
        out.value += refined;
        return;
    }
    if (depth >= opt.max_depth) {
        if (opt.strict)
            throw QuadratureError("adaptive quadrature failed to converge", ax, bx, ay, by, delta);
        out.value += refined;
        out.converged = false;
        if (delta > out.worst_delta) {
            out.worst_delta = delta;
            out.worst_cell[0] = ax;
            out.worst_cell[1] = bx;
            out.worst_cell[2] = ay;
            out.worst_cell[3] = by;
        }
        return;
    }
    recurse_2d(f, ax, mx, ay, my, c00, r, opt, depth + 1, out);
    recurse_2d(f, mx, bx, ay, my, c10, r, opt, depth + 1, out);
    recurse_2d(f, ax, mx, my, by, c01, r, opt, depth + 1, out);
    recurse_2d(f, mx, bx, my, by, c11, r, opt, depth + 1, out);
}

} // namespace

const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

QuadResult integrate_adaptive(const Integrand1D& f, double a, double b,
                              const QuadratureOptions& opt) {
    const GaussRule& r = gauss_legendre(opt.points);
    QuadResult out;
    recurse_1d(f, a, b, fixed_1d(f, a, b, r), r, opt, 0, out);
    return out;
}

QuadResult integrate_adaptive_2d(const Integrand2D& f, double ax, double bx, double ay, double by,
                                 const QuadratureOptions& opt) {
    const GaussRule& r = gauss_legendre(opt.points);
    QuadResult out;
    recurse_2d(f, ax, bx, ay, by, fixed_2d(f, ax, bx, ay, by, r), r, opt, 0, out);
    return out;
}

double integrate_real(const std::function<double(double)>& f, double a, double b,
                      const QuadratureOptions& opt) {
    return integrate_adaptive([&](double x) { return std::complex<double>(f(x), 0.0); }, a, b, opt)
        .value.real();
}

double integrate_real_2d(const std::function<double(double, double)>& f, double ax, double bx,
                         double ay, double by, const QuadratureOptions& opt) {
    return integrate_adaptive_2d(
               [&](double x, double y) { return std::complex<double>(f(x, y), 0.0); }, ax, bx, ay,
               by, opt)
        .value.real();
}

} // namespace dwdm
