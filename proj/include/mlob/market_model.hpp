#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mlob/numerics.hpp"

namespace mlob {

// Open interval (lo, hi); infinite ends allowed.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool contains(double y) const { return y > lo && y < hi; }
};

// Power-law order book shape with linear resilience h(y) = beta*y.
struct PowerLawBook {
    double c = 1.0;
    double r = 1.0;
    double beta = 1.0;
};

struct MarketSpec {
    RealFn h, h_prime, h_double_prime;
    RealFn lambda, lambda_prime;  // lambda = f'/f
    RealFn f, F;                  // F(0) = 0, F' = f
    double delta = 0.0;
    Interval domain;
    std::optional<double> linear_beta;  // set when h(y) = beta*y exactly
    std::string name;

    // h*lambda + delta, root y0
    double y0_residual(double y) const { return h(y) * lambda(y) + delta; }
    // h*lambda + h' + delta, root y_inf
    double yinf_residual(double y) const { return h(y) * lambda(y) + h_prime(y) + delta; }
    double yinf_residual_prime(double y) const {
        return h_prime(y) * lambda(y) + h(y) * lambda_prime(y) + h_double_prime(y);
    }

    bool in_domain(double y) const { return domain.contains(y); }
    void require_domain(double y, const char* what) const;
};

// Builds the preset spec. delta == 0 is only accepted when allow_zero_delta
// (finite-horizon type-A strategies).
MarketSpec power_law_spec(const PowerLawBook& book, double delta, bool allow_zero_delta = false);

// User-supplied primitives; derivatives by central finite differences.
MarketSpec custom_spec(RealFn h, RealFn f, RealFn F, double delta, Interval domain, std::string name = "custom");

struct AssumptionReport {
    bool delta_positive = false;
    bool f_at_zero_is_one = false;
    bool f_increasing = false;
    bool lambda_positive = false;
    bool h_at_zero_is_zero = false;
    bool h_prime_positive = false;
    bool h_convex = false;
    bool h_lambda_increasing = false;
    bool F_antiderivative = false;
    bool valid = false;
    std::optional<Interval> y0_bracket;
    std::optional<Interval> yinf_bracket;
    std::vector<std::string> violations;

    std::string summary() const;
};

// Samples 10^4 equidistant points of search (which must contain 0 and lie in
// the domain; infinite ends are not allowed).
AssumptionReport check_assumptions(const MarketSpec& spec, Interval search);

// Proceeds (per unit unaffected price) of selling d_theta shares at once from
// impact y_pre; negative d_theta buys.
double block_trade_proceeds(const MarketSpec& spec, double y_pre, double d_theta);

}  // namespace mlob
