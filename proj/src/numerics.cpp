#include "mlob/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "mlob/errors.hpp"

namespace mlob {

double lambert_w(double x) {
    if (std::isnan(x) || x < 0.0) throw DomainError("lambert_w: x must be >= 0 (principal branch only)");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return x;
    double w;
    if (x < 2.5) {
        double l = std::log1p(x);
        w = l * (1.0 - std::log1p(l) / (2.0 + l));
    } else {
        double l1 = std::log(x), l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }
    for (int i = 0; i < 50; ++i) {
        double ew = std::exp(w);
        double r = w * ew - x;
        double denom = ew * (w + 1.0) - (w + 2.0) * r / (2.0 * w + 2.0);
        double step = r / denom;
        w -= step;
        if (std::abs(step) <= 4 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w))) break;
    }
    return w;
}

double find_root(const RealFn& f, double lo, double hi, double tol_abs, double tol_rel, int max_iter) {
    if (lo > hi) std::swap(lo, hi);
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::isnan(flo) || std::isnan(fhi) || (flo > 0) == (fhi > 0))
        throw RangeError("find_root: root not bracketed");
    auto tol = [=](double a, double b) { return std::abs(b - a) <= tol_abs + tol_rel * std::min(std::abs(a), std::abs(b)); };
    boost::uintmax_t iters = static_cast<boost::uintmax_t>(max_iter);
    auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    double a = r.first, b = r.second;
    // prefer the endpoint with smaller residual when the bracket is tiny
    double fa = f(a), fb = f(b);
    return std::abs(fa) <= std::abs(fb) ? a : b;
}

double integrate(const RealFn& f, double a, double b, double rel_tol, unsigned max_depth) {
    if (a == b) return 0.0;
    double err = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, rel_tol, &err);
}

double minimize_scalar(const RealFn& f, double lo, double hi) {
    auto r = boost::math::tools::brent_find_minima(f, lo, hi, std::numeric_limits<double>::digits);
    return r.first;
}

double fd_derivative(const RealFn& f, double x, double rel_step) {
    double e = rel_step * std::max(1.0, std::abs(x));
    return (f(x + e) - f(x - e)) / (2.0 * e);
}

double fd_second_derivative(const RealFn& f, double x, double rel_step) {
    double e = rel_step * std::max(1.0, std::abs(x));
    return (f(x + e) - 2.0 * f(x) + f(x - e)) / (e * e);
}

HermiteCurve::HermiteCurve(std::vector<double> x, std::vector<double> v, std::vector<double> dv)
    : x_(std::move(x)), v_(std::move(v)), dv_(std::move(dv)) {
    if (x_.size() < 2 || v_.size() != x_.size() || dv_.size() != x_.size())
        throw ArgumentError("HermiteCurve: need >= 2 knots with matching values and slopes");
    x_increasing_ = x_.back() > x_.front();
    v_increasing_ = v_.back() > v_.front();
}

std::size_t HermiteCurve::segment_for_x(double x) const {
    double lo = std::min(x_.front(), x_.back()), hi = std::max(x_.front(), x_.back());
    if (!(x >= lo && x <= hi)) throw RangeError("HermiteCurve: abscissa outside sampled range");
    std::size_t i;
    if (x_increasing_)
        i = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
    else
        i = std::upper_bound(x_.begin(), x_.end(), x, std::greater<double>()) - x_.begin();
    if (i == 0) i = 1;
    if (i >= x_.size()) i = x_.size() - 1;
    return i - 1;
}

std::size_t HermiteCurve::segment_for_value(double v) const {
    double lo = std::min(v_.front(), v_.back()), hi = std::max(v_.front(), v_.back());
    if (!(v >= lo && v <= hi)) throw RangeError("HermiteCurve: value outside sampled range");
    std::size_t i;
    if (v_increasing_)
        i = std::upper_bound(v_.begin(), v_.end(), v) - v_.begin();
    else
        i = std::upper_bound(v_.begin(), v_.end(), v, std::greater<double>()) - v_.begin();
    if (i == 0) i = 1;
    if (i >= v_.size()) i = v_.size() - 1;
    return i - 1;
}

namespace {

struct Seg {
    double x0, hx, v0, v1, m0, m1;
    double at(double t) const {
        double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * v0 + (t3 - 2 * t2 + t) * hx * m0 + (-2 * t3 + 3 * t2) * v1 +
               (t3 - t2) * hx * m1;
    }
    // d/dt
    double dt(double t) const {
        double t2 = t * t;
        return (6 * t2 - 6 * t) * v0 + (3 * t2 - 4 * t + 1) * hx * m0 + (-6 * t2 + 6 * t) * v1 +
               (3 * t2 - 2 * t) * hx * m1;
    }
};

}  // namespace

double HermiteCurve::value(double x) const {
    std::size_t i = segment_for_x(x);
    Seg s{x_[i], x_[i + 1] - x_[i], v_[i], v_[i + 1], dv_[i], dv_[i + 1]};
    if (x == x_[i]) return v_[i];
    if (x == x_[i + 1]) return v_[i + 1];
    return s.at((x - s.x0) / s.hx);
}

double HermiteCurve::derivative(double x) const {
    std::size_t i = segment_for_x(x);
    Seg s{x_[i], x_[i + 1] - x_[i], v_[i], v_[i + 1], dv_[i], dv_[i + 1]};
    return s.dt((x - s.x0) / s.hx) / s.hx;
}

double HermiteCurve::inverse(double target) const {
    std::size_t i = segment_for_value(target);
    if (target == v_[i]) return x_[i];
    if (target == v_[i + 1]) return x_[i + 1];
    Seg s{x_[i], x_[i + 1] - x_[i], v_[i], v_[i + 1], dv_[i], dv_[i + 1]};
    bool inc = s.v1 > s.v0;
    double a = 0.0, b = 1.0;
    double t = (target - s.v0) / (s.v1 - s.v0);
    for (int it = 0; it < 100; ++it) {
        double r = s.at(t) - target;
        if (r == 0.0) break;
        if ((r > 0) == inc) b = t; else a = t;
        double d = s.dt(t);
        double tn = t - r / d;
        if (!(tn > a && tn < b) || d == 0.0) tn = 0.5 * (a + b);
        if (std::abs(tn - t) < 1e-17 || b - a < 1e-16) { t = tn; break; }
        t = tn;
    }
    return s.x0 + t * s.hx;
}

}  // namespace mlob
