#include "mlob/value_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>
#include <vector>

#include "mlob/errors.hpp"

namespace mlob {

const char* to_string(Region r) {
    switch (r) {
        case Region::Wait: return "wait";
        case Region::Sell1: return "sell1";
        case Region::Sell2: return "sell2";
        case Region::Boundary: return "boundary";
        case Region::Buy: return "buy";
    }
    return "?";
}

ValueField::ValueField(std::shared_ptr<const FreeBoundary> fb) : fb_(std::move(fb)) {
    if (!fb_) throw ArgumentError("ValueField: null boundary");
    if (fb_->kind() != BoundaryKind::Liquidation) throw ArgumentError("ValueField: liquidation boundary required");
}

void ValueField::require_point(double y, double theta) const {
    if (!(theta >= 0)) throw ArgumentError("value: theta must be >= 0");
    spec().require_domain(y, "value");
}

Location ValueField::locate(double y, double theta, bool two_sided) const {
    require_point(y, theta);
    const double y0 = critical().y0;
    const FreeBoundary& fb = *fb_;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    if (y >= y0 + theta) {
        if (theta == 0.0 && y == y0) return {Region::Boundary, 0.0, y0, 0.0, nan};
        return {Region::Sell2, theta, y - theta, 0.0, nan};
    }
    // here y < y0 + theta
    double y_theta;
    if (theta <= fb.theta_covered()) {
        y_theta = fb.y_at(theta);
    } else if (y >= fb.y_end()) {
        y_theta = -std::numeric_limits<double>::infinity();  // boundary lies further left
    } else {
        y_theta = fb.y_at(theta);  // throws
    }
    if (y == y_theta) return {Region::Boundary, 0.0, y, theta, nan};
    if (y < y_theta && !two_sided) return {Region::Wait, nan, nan, nan, y_theta};

    // root of g(d) = theta - d - theta_ext(y - d), decreasing in d
    auto g = [&](double d) { return theta - d - fb.theta_ext(y - d); };
    const double span = y - fb.y_end();  // d <= span keeps y - d on the solved curve
    double lo, hi;
    if (y > y_theta) {
        lo = 0.0;
        hi = std::min(theta, span);
    } else {
        lo = y - y0;
        hi = std::min(0.0, span);
        if (g(hi) > 0) fb.y_at(theta + (y0 - y));  // root beyond the solved curve: throws
    }
    double d = find_root(g, lo, hi, 1e-15, 1e-15);
    double yb = y - d;
    double tb = theta - d;
    if (tb <= 0.0) return {Region::Sell2, theta, y - theta, 0.0, nan};
    return {y > y_theta ? Region::Sell1 : Region::Buy, d, yb, tb, nan};
}

Region ValueField::region(double y, double theta, bool two_sided) const { return locate(y, theta, two_sided).region; }

double ValueField::delta_distance(double y, double theta) const {
    auto loc = locate(y, theta, true);
    return loc.region == Region::Boundary ? 0.0 : loc.delta;
}

double ValueField::phi(double y) const {
    const MarketSpec& s = spec();
    double h = s.h(y);
    return s.f(y) * h * (s.delta + h * s.lambda(y)) / (s.delta * s.h_prime(y));
}

double ValueField::phi_prime(double y) const {
    const MarketSpec& s = spec();
    double f = s.f(y), h = s.h(y), hp = s.h_prime(y), hpp = s.h_double_prime(y);
    double lam = s.lambda(y), lamp = s.lambda_prime(y);
    double a = s.delta + h * lam;
    double N = f * h * a;
    double Np = lam * f * h * a + f * hp * a + f * h * (hp * lam + h * lamp);
    return (Np * hp - N * hpp) / (s.delta * hp * hp);
}

double ValueField::v_bdry(double theta) const {
    if (!(theta >= 0)) throw ArgumentError("v_bdry: theta must be >= 0");
    if (theta == 0.0) return 0.0;
    return phi(fb_->y_at(theta));
}

double ValueField::wait_factor(double y, double y_b) const {
    const MarketSpec& s = spec();
    double q = integrate([&](double x) { return s.delta / s.h(x); }, y, y_b, 1e-13);
    return std::exp(q);
}

double ValueField::value_at(const Location& loc, double y, double theta) const {
    const MarketSpec& s = spec();
    switch (loc.region) {
        case Region::Sell2: return theta == 0.0 ? 0.0 : s.F(y) - s.F(y - theta);
        case Region::Boundary: return theta == 0.0 ? 0.0 : phi(y);
        case Region::Sell1:
        case Region::Buy: return phi(loc.y_b) + s.F(y) - s.F(loc.y_b);
        case Region::Wait: return theta == 0.0 ? 0.0 : phi(loc.wait_y) * wait_factor(y, loc.wait_y);
    }
    return 0.0;
}

Partials ValueField::partials_at(const Location& loc, double y, double theta) const {
    const MarketSpec& s = spec();
    switch (loc.region) {
        case Region::Sell2: return {s.f(y) - s.f(y - theta), s.f(y - theta)};
        case Region::Boundary:
        case Region::Sell1:
        case Region::Buy: {
            double yb = loc.region == Region::Boundary ? y : loc.y_b;
            double pb = phi(yb);
            double v_y = s.f(y) - s.f(yb) - s.delta * pb / s.h(yb);
            double v_t = (s.f(yb) - phi_prime(yb)) / (1.0 - fb_->slope_at(yb));
            return {v_y, v_t};
        }
        case Region::Wait: {
            double e = wait_factor(y, loc.wait_y);
            double v = theta == 0.0 ? 0.0 : phi(loc.wait_y) * e;
            return {-s.delta * v / s.h(y), s.f(loc.wait_y) * e + s.delta * v / s.h(loc.wait_y)};
        }
    }
    return {0, 0};
}

double ValueField::value(double y, double theta) const { return value_at(locate(y, theta), y, theta); }
Partials ValueField::partials(double y, double theta) const { return partials_at(locate(y, theta), y, theta); }
double ValueField::value_two_sided(double y, double theta) const {
    return value_at(locate(y, theta, true), y, theta);
}
Partials ValueField::partials_two_sided(double y, double theta) const {
    return partials_at(locate(y, theta, true), y, theta);
}

std::pair<double, double> ValueField::pasting_coefficients(double y, double y_ref) const {
    const MarketSpec& s = spec();
    double ph = std::exp(-integrate([&](double x) { return s.delta / s.h(x); }, y_ref, y, 1e-13));
    double hp = s.h_prime(y);
    double m1 = phi(y) / ph;
    double m2 = s.f(y) * s.yinf_residual(y) / (hp * ph);
    return {m1, m2};
}

// ---------------------------------------------------------------------------

std::string VIReport::summary() const {
    std::ostringstream os;
    os.precision(3);
    os << (two_sided ? "two-sided" : "one-sided") << " VI check: " << (pass ? "pass" : "FAIL") << " points=" << points
       << " strict=" << strict_points << " excluded=" << excluded << std::scientific
       << " max|hjb eq|=" << hjb_equality_max << " max|dir eq|=" << direction_equality_max;
    if (two_sided)
        os << " max hjb=" << hjb_max << " min off-boundary margin=" << sell_margin_min;
    else
        os << " min wait margin=" << wait_margin_min << " min sell margin=" << sell_margin_min;
    os << " worst at (" << worst_y << ", " << worst_theta << ")";
    return os.str();
}

namespace {

struct Partial {
    VIReport r;
    double worst_score = -1;
    void flag(double score, double y, double th) {
        if (score > worst_score) {
            worst_score = score;
            r.worst_y = y;
            r.worst_theta = th;
        }
    }
};

void check_rows(const ValueField& field, const GridSpec& g, bool two_sided, int row_begin, int row_end, Partial& out) {
    const MarketSpec& s = field.spec();
    VIReport& r = out.r;
    for (int j = row_begin; j < row_end; ++j) {
        double th = g.ntheta == 1 ? g.theta_lo : g.theta_lo + (g.theta_hi - g.theta_lo) * j / (g.ntheta - 1);
        for (int i = 0; i < g.ny; ++i) {
            double y = g.ny == 1 ? g.y_lo : g.y_lo + (g.y_hi - g.y_lo) * i / (g.ny - 1);
            Location loc = field.locate(y, th, two_sided);
            double v = two_sided ? field.value_two_sided(y, th) : field.value(y, th);
            Partials p = two_sided ? field.partials_two_sided(y, th) : field.partials(y, th);
            double hjb = -s.delta * v - s.h(y) * p.v_y;
            double dir = p.v_y + p.v_theta - s.f(y);
            ++r.points;
            if (two_sided) {
                r.direction_equality_max = std::max(r.direction_equality_max, std::abs(dir));
                out.flag(std::abs(dir) / kEqualityTol, y, th);
                r.hjb_max = std::max(r.hjb_max, hjb);
                double dist = loc.region == Region::Boundary ? 0.0 : std::abs(loc.delta);
                if (loc.region == Region::Sell2 && th == 0.0) dist = 0.0;
                if (dist > kBoundaryExclusion) {
                    ++r.strict_points;
                    r.sell_margin_min = std::min(r.sell_margin_min, -hjb);
                    out.flag(kStrictMargin / std::max(-hjb, 1e-300), y, th);
                } else {
                    ++r.excluded;
                    r.hjb_equality_max = std::max(r.hjb_equality_max, std::abs(hjb));
                    out.flag(std::abs(hjb) / kEqualityTol, y, th);
                }
                continue;
            }
            switch (loc.region) {
                case Region::Wait: {
                    r.hjb_equality_max = std::max(r.hjb_equality_max, std::abs(hjb));
                    out.flag(std::abs(hjb) / kEqualityTol, y, th);
                    if (loc.wait_y - y > kBoundaryExclusion) {
                        ++r.strict_points;
                        r.wait_margin_min = std::min(r.wait_margin_min, dir);
                        out.flag(kStrictMargin / std::max(dir, 1e-300), y, th);
                    } else {
                        ++r.excluded;
                    }
                    break;
                }
                case Region::Boundary:
                    r.hjb_equality_max = std::max(r.hjb_equality_max, std::abs(hjb));
                    r.direction_equality_max = std::max(r.direction_equality_max, std::abs(dir));
                    out.flag(std::max(std::abs(hjb), std::abs(dir)) / kEqualityTol, y, th);
                    ++r.excluded;
                    break;
                default: {
                    r.direction_equality_max = std::max(r.direction_equality_max, std::abs(dir));
                    out.flag(std::abs(dir) / kEqualityTol, y, th);
                    double dist = loc.delta;
                    if (dist > kBoundaryExclusion) {
                        ++r.strict_points;
                        r.sell_margin_min = std::min(r.sell_margin_min, -hjb);
                        out.flag(kStrictMargin / std::max(-hjb, 1e-300), y, th);
                    } else {
                        ++r.excluded;
                    }
                }
            }
        }
    }
}

}  // namespace

VIReport check_variational_inequalities(const ValueField& field, const GridSpec& grid, bool two_sided,
                                        unsigned workers) {
    if (grid.ny < 1 || grid.ntheta < 1) throw ArgumentError("check_variational_inequalities: empty grid");
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(grid.ntheta)));
    std::vector<Partial> parts(workers);
    for (auto& p : parts) {
        p.r.two_sided = two_sided;
        p.r.wait_margin_min = p.r.sell_margin_min = std::numeric_limits<double>::infinity();
    }
    auto rows = [&](unsigned w) { return std::pair<int, int>(grid.ntheta * w / workers, grid.ntheta * (w + 1) / workers); };
    if (workers == 1) {
        check_rows(field, grid, two_sided, 0, grid.ntheta, parts[0]);
    } else {
        std::vector<std::thread> ts;
        for (unsigned w = 0; w < workers; ++w) {
            auto [b, e] = rows(w);
            ts.emplace_back([&, w, b, e] { check_rows(field, grid, two_sided, b, e, parts[w]); });
        }
        for (auto& t : ts) t.join();
    }
    Partial all = parts[0];
    for (unsigned w = 1; w < workers; ++w) {
        const VIReport& q = parts[w].r;
        VIReport& r = all.r;
        r.points += q.points;
        r.strict_points += q.strict_points;
        r.excluded += q.excluded;
        r.hjb_equality_max = std::max(r.hjb_equality_max, q.hjb_equality_max);
        r.direction_equality_max = std::max(r.direction_equality_max, q.direction_equality_max);
        r.wait_margin_min = std::min(r.wait_margin_min, q.wait_margin_min);
        r.sell_margin_min = std::min(r.sell_margin_min, q.sell_margin_min);
        r.hjb_max = std::max(r.hjb_max, q.hjb_max);
        all.flag(parts[w].worst_score, q.worst_y, q.worst_theta);
    }
    VIReport& r = all.r;
    if (two_sided)
        r.pass = r.direction_equality_max <= kEqualityTol && r.hjb_max <= kEqualityTol &&
                 r.hjb_equality_max <= kEqualityTol && r.sell_margin_min > kStrictMargin;
    else
        r.pass = r.hjb_equality_max <= kEqualityTol && r.direction_equality_max <= kEqualityTol &&
                 r.wait_margin_min > kStrictMargin && r.sell_margin_min > kStrictMargin;
    return r;
}

namespace {

// Integrals along the boundary in the integration variable u = log(y - y_inf),
// where dtheta = -theta_u du with theta_u exact from the ODE.
double boundary_u(const FreeBoundary& fb, double theta) {
    return std::log(fb.y_at(theta) - fb.critical().y_inf);
}

double theta_u(const FreeBoundary& fb, double u) {
    double e = std::exp(u);
    return fb.slope_at(fb.critical().y_inf + e) * e;
}

}  // namespace

double check_appendix_identity(const ValueField& field, double theta) {
    if (!(theta >= 0)) throw ArgumentError("check_appendix_identity: theta must be >= 0");
    if (theta == 0.0) return 0.0;
    const MarketSpec& s = field.spec();
    const FreeBoundary& fb = field.boundary();
    const double yi = fb.critical().y_inf;
    const double u0 = std::log(fb.critical().y0 - yi), ut = boundary_u(fb, theta);
    auto integrand = [&](double u) {
        double y = yi + std::exp(u);
        return s.h_prime(y) / s.yinf_residual(y) * -theta_u(fb, u);
    };
    double lhs = integrate(integrand, ut, u0, 1e-13);
    double y = fb.y_at(theta);
    double h = s.h(y);
    double rhs = h * (h * s.lambda(y) + s.delta) / (s.delta * s.yinf_residual(y));
    return std::abs(lhs - rhs);
}

double v_bdry_integral(const ValueField& field, double theta) {
    if (!(theta >= 0)) throw ArgumentError("v_bdry_integral: theta must be >= 0");
    if (theta == 0.0) return 0.0;
    const MarketSpec& s = field.spec();
    const FreeBoundary& fb = field.boundary();
    const double yi = fb.critical().y_inf;
    const double u0 = std::log(fb.critical().y0 - yi), ut = boundary_u(fb, theta);
    const double yt = yi + std::exp(ut);
    auto dh = [&](double y) { return s.delta / s.h(y); };
    // x in [0, theta] corresponds to u in [ut, u0]
    auto outer = [&](double u) {
        double yx = yi + std::exp(u);
        double along = integrate([&](double v) { return dh(yi + std::exp(v)) * -theta_u(fb, v); }, ut, u, 1e-12);
        double across = integrate(dh, yt, yx, 1e-12);
        return s.f(yx) * std::exp(along + across) * -theta_u(fb, u);
    };
    return integrate(outer, ut, u0, 1e-11);
}

}  // namespace mlob
