#include "mlob/market_model.hpp"

#include <cmath>
#include <sstream>

#include "mlob/errors.hpp"

namespace mlob {

void MarketSpec::require_domain(double y, const char* what) const {
    if (!in_domain(y)) {
        std::ostringstream os;
        os.precision(17);
        os << what << ": y=" << y << " outside domain (" << domain.lo << ", " << domain.hi << ")";
        throw DomainError(os.str());
    }
}

MarketSpec power_law_spec(const PowerLawBook& b, double delta, bool allow_zero_delta) {
    if (!(b.c > 0)) throw ValidationError("power_law: c > 0 required");
    if (!(b.beta > 0)) throw ValidationError("power_law: h' > 0 violated (beta must be > 0)");
    if (delta < 0 || (delta == 0 && !allow_zero_delta) || std::isnan(delta))
        throw ValidationError("power_law: delta > 0 required");
    double r_max = 1.0 + b.beta / (b.beta + delta);
    if (!(b.r >= 0.0 && b.r < r_max)) {
        std::ostringstream os;
        os.precision(17);
        os << "power_law: r in [0, 1 + beta/(beta+delta)) = [0, " << r_max << ") violated by r=" << b.r;
        throw ValidationError(os.str());
    }

    MarketSpec s;
    const double c = b.c, r = b.r, beta = b.beta;
    s.delta = delta;
    s.linear_beta = beta;
    s.h = [beta](double y) { return beta * y; };
    s.h_prime = [beta](double) { return beta; };
    s.h_double_prime = [](double) { return 0.0; };

    std::ostringstream nm;
    nm << "power_law(c=" << c << ",r=" << r << ",beta=" << beta << ",delta=" << delta << ")";
    s.name = nm.str();

    if (r == 1.0) {
        s.f = [c](double y) { return std::exp(y / c); };
        s.F = [c](double y) { return c * std::expm1(y / c); };
        s.lambda = [c](double) { return 1.0 / c; };
        s.lambda_prime = [](double) { return 0.0; };
        return s;
    }
    const double q = 1.0 - r;
    if (q > 0)
        s.domain.lo = -c / q;
    else
        s.domain.hi = c / (-q);
    s.lambda = [c, q](double y) { return 1.0 / (c + q * y); };
    s.lambda_prime = [c, q](double y) {
        double a = c + q * y;
        return -q / (a * a);
    };
    s.f = [c, q](double y) { return std::pow(1.0 + q * y / c, 1.0 / q); };
    if (r == 2.0) {
        s.F = [c](double y) { return -c * std::log1p(-y / c); };
    } else {
        const double p = (2.0 - r) / q;
        s.F = [c, q, p, r](double y) {
            // c/(2-r) * ((1+q y/c)^p - 1) without cancellation near 0
            return c / (2.0 - r) * std::expm1(p * std::log1p(q * y / c));
        };
    }
    return s;
}

MarketSpec custom_spec(RealFn h, RealFn f, RealFn F, double delta, Interval domain, std::string name) {
    if (std::isnan(delta) || delta < 0) throw ValidationError("custom_spec: delta >= 0 required");
    MarketSpec s;
    s.h = h;
    s.f = f;
    s.F = F;
    s.delta = delta;
    s.domain = domain;
    s.name = std::move(name);
    s.h_prime = [h](double y) { return fd_derivative(h, y); };
    s.h_double_prime = [h](double y) { return fd_second_derivative(h, y); };
    RealFn logf = [f](double y) { return std::log(f(y)); };
    s.lambda = [logf](double y) { return fd_derivative(logf, y); };
    s.lambda_prime = [logf](double y) { return fd_second_derivative(logf, y, 1e-3); };
    return s;
}

std::string AssumptionReport::summary() const {
    std::ostringstream os;
    auto line = [&](const char* n, bool v) { os << "  " << n << ": " << (v ? "ok" : "VIOLATED") << "\n"; };
    os << "assumptions: " << (valid ? "valid" : "invalid") << "\n";
    line("delta > 0", delta_positive);
    line("f(0) = 1", f_at_zero_is_one);
    line("f increasing", f_increasing);
    line("lambda > 0", lambda_positive);
    line("h(0) = 0", h_at_zero_is_zero);
    line("h' > 0", h_prime_positive);
    line("h'' >= 0", h_convex);
    line("(h*lambda)' > 0", h_lambda_increasing);
    line("F' = f", F_antiderivative);
    os.precision(12);
    if (y0_bracket) os << "  y0 bracket: [" << y0_bracket->lo << ", " << y0_bracket->hi << "]\n";
    if (yinf_bracket) os << "  y_inf bracket: [" << yinf_bracket->lo << ", " << yinf_bracket->hi << "]\n";
    for (const auto& v : violations) os << "  " << v << "\n";
    return os.str();
}

AssumptionReport check_assumptions(const MarketSpec& s, Interval search) {
    if (!std::isfinite(search.lo) || !std::isfinite(search.hi) || !(search.lo < 0.0 && search.hi >= 0.0))
        throw ArgumentError("check_assumptions: search interval must be finite and contain 0");
    if (!s.in_domain(search.lo) || !s.in_domain(search.hi))
        throw ArgumentError("check_assumptions: search interval must lie inside the spec domain");

    AssumptionReport rep;
    const int n = 10000;
    std::vector<double> ys(n);
    for (int k = 0; k < n; ++k) ys[k] = search.lo + (search.hi - search.lo) * k / (n - 1);

    auto note = [&](bool& flag, bool ok, const std::string& msg) {
        if (!ok && flag) rep.violations.push_back(msg);
        flag = flag && ok;
    };
    auto at = [](const char* what, double y) {
        std::ostringstream os;
        os.precision(10);
        os << what << " at y=" << y;
        return os.str();
    };

    rep.delta_positive = s.delta > 0;
    if (!rep.delta_positive) rep.violations.push_back("delta > 0 violated");
    rep.f_at_zero_is_one = std::abs(s.f(0.0) - 1.0) <= 1e-12;
    if (!rep.f_at_zero_is_one) rep.violations.push_back("f(0) = 1 violated");
    rep.h_at_zero_is_zero = std::abs(s.h(0.0)) <= 1e-12;
    if (!rep.h_at_zero_is_zero) rep.violations.push_back("h(0) = 0 violated");

    rep.f_increasing = rep.lambda_positive = rep.h_prime_positive = rep.h_convex = true;
    rep.h_lambda_increasing = rep.F_antiderivative = true;
    double prev_f = 0, prev_hl = 0;
    for (int k = 0; k < n; ++k) {
        double y = ys[k];
        double fy = s.f(y), lam = s.lambda(y), hl = s.h(y) * lam;
        double lam_fd = fd_derivative(s.f, y) / fy;
        note(rep.lambda_positive, lam > 0 && lam_fd > 0 && std::abs(lam - lam_fd) <= 1e-5 * (1 + std::abs(lam)),
             at("lambda = f'/f > 0 violated", y));
        note(rep.h_prime_positive, s.h_prime(y) > 0, at("h' > 0 violated", y));
        note(rep.h_convex, s.h_double_prime(y) >= -1e-7 * (1 + std::abs(s.h_prime(y))), at("h'' >= 0 violated", y));
        double dF = fd_derivative(s.F, y);
        note(rep.F_antiderivative, std::abs(dF - fy) <= 1e-6 * (1 + std::abs(fy)), at("F' = f violated", y));
        if (k > 0) {
            note(rep.f_increasing, fy > prev_f, at("f strictly increasing violated", y));
            note(rep.h_lambda_increasing, hl > prev_hl, at("(h*lambda)' > 0 violated", y));
        }
        prev_f = fy;
        prev_hl = hl;
    }
    rep.valid = rep.delta_positive && rep.f_at_zero_is_one && rep.f_increasing && rep.lambda_positive &&
                rep.h_at_zero_is_zero && rep.h_prime_positive && rep.h_convex && rep.h_lambda_increasing &&
                rep.F_antiderivative;

    // both residuals are increasing; look for the nonpositive -> positive change
    auto bracket = [&](auto res) -> std::optional<Interval> {
        double prev = res(ys[0]);
        for (int k = 1; k < n; ++k) {
            double cur = res(ys[k]);
            if (prev <= 0 && cur > 0) return Interval{ys[k - 1], ys[k]};
            prev = cur;
        }
        return std::nullopt;
    };
    rep.y0_bracket = bracket([&](double y) { return s.y0_residual(y); });
    rep.yinf_bracket = bracket([&](double y) { return s.yinf_residual(y); });
    if (rep.valid) {
        if (!rep.y0_bracket)
            throw RootsNotBracketed("roots not bracketed: y0 (root of h*lambda + delta) has no sign change in search interval");
        if (!rep.yinf_bracket)
            throw RootsNotBracketed(
                "roots not bracketed: y_inf (root of h*lambda + h' + delta) has no sign change in search interval");
    }
    return rep;
}

double block_trade_proceeds(const MarketSpec& s, double y_pre, double d_theta) {
    if (d_theta == 0.0) return 0.0;
    double y_post = y_pre - d_theta;
    if (!s.in_domain(y_pre) || !s.in_domain(y_post)) {
        std::ostringstream os;
        os.precision(17);
        os << "order book exhausted: block of " << d_theta << " from y=" << y_pre << " leaves the domain";
        throw DomainError(os.str());
    }
    return s.F(y_pre) - s.F(y_post);
}

}  // namespace mlob
