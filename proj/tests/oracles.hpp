// Independent reference values for the tests: closed forms of the power-law
// example, a separate quadrature rule and finite differences.
#pragma once

#include <cmath>
#include <functional>

#include <boost/math/special_functions/lambert_w.hpp>

namespace oracle {

struct PowerLaw {
    double c, r, beta, delta;
};

inline double y0(const PowerLaw& p) { return -p.c * p.delta / (p.beta + (1 - p.r) * p.delta); }
inline double y_inf(const PowerLaw& p) {
    return -p.c * (p.beta + p.delta) / (p.beta + (1 - p.r) * (p.beta + p.delta));
}

inline double theta(const PowerLaw& p, double y) {
    const double c = p.c, b = p.beta, d = p.delta;
    if (p.r == 1.0)
        return (b * y + d * c) * (b * y + (2 * b + d) * c) / (2 * b * d * c) -
               c * (b + d) / d * std::log((b * y + (b + d) * c) / (b * c));
    const double q = 1 - p.r;
    const double A = c + q * y, B = b + q * d, C = b + q * (b + d);
    return (b * y + d * A) / (d * q) - b * c * B / (d * C * q * q) * std::log(A * B / (b * c)) +
           b * c * (b + d) / (d * C) * std::log(b * A / (b * y + (b + d) * A));
}

// d theta / dy of the r = 1 closed form
inline double theta_prime_r1(const PowerLaw& p, double y) {
    const double c = p.c, b = p.beta, d = p.delta;
    return b * (2 * b * y + 2 * (b + d) * c) / (2 * b * d * c) - c * (b + d) / d * b / (b * y + (b + d) * c);
}

// r != 1 uses f(y)/f(y0) = ((1+q y/c)(1+q delta/beta))^(1/q)
inline double tau(const PowerLaw& p, double y) {
    const double c = p.c, b = p.beta, d = p.delta;
    if (p.r == 1.0) return -y / (d * c) - 1 / b - std::log(y / c + 1 + d / b) / d;
    const double q = 1 - p.r;
    double fr = std::pow((1 + q * y / c) * (1 + q * d / b), 1 / q);
    return -std::log(fr * ((y / c) / (1 + q * y / c) + (b + d) / b)) / d;
}

inline double ybar_r1(const PowerLaw& p, double tau) {
    double w = boost::math::lambert_w0(std::exp(1 - p.delta * tau));
    return p.c * w - p.c * (p.beta + p.delta) / p.beta;
}

inline double thetabar_r1(const PowerLaw& p, double tau) {
    double w = boost::math::lambert_w0(std::exp(1 - p.delta * tau));
    return p.beta * p.c / (2 * p.delta) * (w * w - 1) - p.c * (p.beta + p.delta) / p.delta * std::log(w);
}

inline double rate_at_zero(const PowerLaw& p) {
    return p.delta * p.beta * p.c / (2 * p.beta + (1 - p.r) * p.delta);
}
inline double rate_at_infinity(const PowerLaw& p) {
    return p.beta * p.c * (p.beta + p.delta) / (p.beta + (1 - p.r) * (p.beta + p.delta));
}

inline double f(const PowerLaw& p, double y) {
    if (p.r == 1.0) return std::exp(y / p.c);
    return std::pow(1 + (1 - p.r) * y / p.c, 1 / (1 - p.r));
}

namespace detail {
inline double simpson_rec(const std::function<double(double)>& g, double a, double b, double fa, double fm, double fb,
                          double whole, double tol, int depth) {
    double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = g(lm), frm = g(rm);
    double left = (m - a) / 6 * (fa + 4 * flm + fm), right = (b - m) / 6 * (fm + 4 * frm + fb);
    double diff = left + right - whole;
    if (depth <= 0 || std::abs(diff) <= 15 * tol) return left + right + diff / 15;
    return simpson_rec(g, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           simpson_rec(g, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}
}  // namespace detail

// Adaptive Simpson, absolute tolerance.
inline double simpson(const std::function<double(double)>& g, double a, double b, double tol = 1e-12) {
    if (a == b) return 0.0;
    double fa = g(a), fb = g(b), fm = g(0.5 * (a + b));
    double whole = (b - a) / 6 * (fa + 4 * fm + fb);
    return detail::simpson_rec(g, a, b, fa, fm, fb, whole, tol, 40);
}

inline double central_diff(const std::function<double(double)>& g, double x, double h) {
    return (g(x + h) - g(x - h)) / (2 * h);
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// plain bisection, g(lo) and g(hi) of opposite sign
inline double bisect(const std::function<double(double)>& g, double lo, double hi) {
    double glo = g(lo);
    for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++i) {
        double m = 0.5 * (lo + hi), gm = g(m);
        if ((gm < 0) == (glo < 0)) {
            lo = m;
            glo = gm;
        } else {
            hi = m;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace oracle
