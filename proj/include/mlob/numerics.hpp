#pragma once

#include <functional>
#include <vector>

namespace mlob {

using RealFn = std::function<double(double)>;

// Principal branch of the product logarithm, x >= 0.
double lambert_w(double x);

// Root of f on [lo, hi]; f(lo) and f(hi) must not share a sign.
// Terminates when the bracket is below tol_abs + tol_rel*|x|.
double find_root(const RealFn& f, double lo, double hi, double tol_abs = 1e-14,
                 double tol_rel = 1e-15, int max_iter = 200);

// Adaptive Gauss-Kronrod (31 point) with relative tolerance.
double integrate(const RealFn& f, double a, double b, double rel_tol = 1e-13,
                 unsigned max_depth = 12);

// Minimizer of a unimodal f on [lo, hi].
double minimize_scalar(const RealFn& f, double lo, double hi);

// Central finite-difference derivatives, step relative to max(1,|x|).
double fd_derivative(const RealFn& f, double x, double rel_step = 1e-6);
double fd_second_derivative(const RealFn& f, double x, double rel_step = 1e-4);

// Cubic Hermite interpolant over strictly monotone knots x (either direction),
// values v and slopes dv/dx.
class HermiteCurve {
public:
    HermiteCurve() = default;
    HermiteCurve(std::vector<double> x, std::vector<double> v, std::vector<double> dv);

    bool empty() const { return x_.empty(); }
    std::size_t size() const { return x_.size(); }
    const std::vector<double>& knots() const { return x_; }
    const std::vector<double>& values() const { return v_; }
    const std::vector<double>& slopes() const { return dv_; }

    double value(double x) const;
    double derivative(double x) const;
    // x with value(x) == target, values assumed strictly monotone.
    double inverse(double target) const;

private:
    std::size_t segment_for_x(double x) const;
    std::size_t segment_for_value(double v) const;
    std::vector<double> x_, v_, dv_;
    bool x_increasing_ = true;
    bool v_increasing_ = true;
};

}  // namespace mlob
