#include "mlob/free_boundary.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "mlob/errors.hpp"

namespace mlob {

namespace odeint = boost::numeric::odeint;

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

double root_of(const RealFn& res, double lo, double hi, const char* name) {
    double rl = res(lo), rh = res(hi);
    if (!(rl <= 0 && rh > 0))
        throw RootsNotBracketed(std::string("roots not bracketed: ") + name + " has no sign change in [" + fmt(lo) +
                                ", " + fmt(hi) + "]");
    return find_root(res, lo, hi, 1e-16, 1e-16);
}

}  // namespace

CriticalPoints critical_points(const MarketSpec& s, std::optional<Interval> search) {
    auto r0 = [&](double y) { return s.y0_residual(y); };
    auto ri = [&](double y) { return s.yinf_residual(y); };
    double lo, hi = 0.0;
    if (search) {
        lo = search->lo;
        hi = std::min(search->hi, 0.0);
    } else {
        lo = -1.0;
        for (int k = 0; k < 200; ++k) {
            if (!s.in_domain(lo)) {
                double edge = s.domain.lo;
                lo = edge + 1e-12 * std::max(1.0, std::abs(edge));
                break;
            }
            if (r0(lo) <= 0 && ri(lo) <= 0) break;
            lo *= 2.0;
        }
    }
    CriticalPoints cp;
    cp.y0 = root_of(r0, lo, hi, "y0 (root of h*lambda + delta)");
    cp.y_inf = root_of(ri, lo, hi, "y_inf (root of h*lambda + h' + delta)");
    if (!(cp.y_inf < cp.y0 && cp.y0 < 0))
        throw ValidationError("critical points violate y_inf < y0 < 0: y0=" + fmt(cp.y0) + " y_inf=" + fmt(cp.y_inf));
    return cp;
}

double boundary_ode_rhs(const MarketSpec& s, const CriticalPoints& cp, double y) {
    if (!(y > cp.y_inf)) throw SingularityError("boundary_ode_rhs: y=" + fmt(y) + " at or below y_inf");
    double h = s.h(y), hp = s.h_prime(y), hpp = s.h_double_prime(y), lam = s.lambda(y);
    double D = h * lam + hp + s.delta;
    double Dp = s.yinf_residual_prime(y);
    double d = s.delta;
    return 1.0 + h * lam / d - h * hpp / (d * hp) + h * Dp / (d * D);
}

double ttl(const MarketSpec& s, const CriticalPoints& cp, double y) {
    if (y == cp.y0) return 0.0;
    double arg = s.f(y) / s.f(cp.y0) * s.yinf_residual(y) / s.h_prime(y);
    if (!(arg > 0)) throw DomainError("ttl: log argument <= 0 at y=" + fmt(y) + " (at or below y_inf)");
    return -std::log(arg) / s.delta;
}

double boundary_ttl_velocity(const MarketSpec& s, double y) {
    double hp = s.h_prime(y), hpp = s.h_double_prime(y), lam = s.lambda(y);
    double D = s.yinf_residual(y), Dp = s.yinf_residual_prime(y);
    return s.delta * D * hp / ((hpp - hp * lam) * D - Dp * hp);
}

double liquidation_rate(const MarketSpec& s, double y) { return boundary_ttl_velocity(s, y) - s.h(y); }

double acquisition_y0(const MarketSpec& s, double eta) {
    if (!(eta > 0)) throw ValidationError("acquisition: eta = mu - gamma > 0 required");
    auto res = [&](double y) { return s.h(y) * s.lambda(y) - eta; };
    double hi = 1.0;
    for (int k = 0; k < 200 && res(hi) <= 0; ++k) {
        double nh = hi * 2.0;
        if (!s.in_domain(nh)) {
            hi = s.domain.hi - 1e-12 * std::max(1.0, std::abs(s.domain.hi));
            break;
        }
        hi = nh;
    }
    if (!(res(hi) > 0)) throw RootsNotBracketed("roots not bracketed: acquisition y0 (root of h*lambda = eta)");
    return find_root(res, 0.0, hi, 1e-16, 1e-16);
}

double acquisition_ode_rhs(const MarketSpec& s, double eta, double y) {
    double h = s.h(y), hp = s.h_prime(y), hpp = s.h_double_prime(y), lam = s.lambda(y);
    double Da = h * lam + hp - eta;
    if (!(Da > 0)) throw SingularityError("acquisition boundary: h*lambda + h' - eta vanishes at y=" + fmt(y));
    double Dap = s.yinf_residual_prime(y);
    return -1.0 + h * lam / eta - h * hpp / (eta * hp) + h * Dap / (eta * Da);
}

// ---------------------------------------------------------------------------

void FreeBoundary::beyond(const char* what) const {
    std::string msg = std::string(what) + ": beyond solved boundary (theta covered up to " + fmt(theta_covered()) + ")";
    if (asymptote_) throw AsymptoteReached(msg + ", asymptote reached");
    throw RangeError(msg);
}

double FreeBoundary::x_of_y(double y) const {
    if (kind_ == BoundaryKind::Acquisition) return y;
    // y on [y_end, y0] may round just outside the knot range
    const auto& k = theta_curve_.knots();
    return std::clamp(std::log(y - cp_.y_inf), k.back(), k.front());
}

double FreeBoundary::y_of_x(double x) const {
    return kind_ == BoundaryKind::Liquidation ? cp_.y_inf + std::exp(x) : x;
}

double FreeBoundary::theta_at(double y) const {
    if (y == cp_.y0) return 0.0;
    if (kind_ == BoundaryKind::Liquidation) {
        if (y > cp_.y0) throw RangeError("theta_at: y=" + fmt(y) + " above y0");
        if (y < y_end()) {
            if (y <= cp_.y_inf) throw SingularityError("theta_at: y=" + fmt(y) + " at or below y_inf");
            beyond("theta_at");
        }
    } else {
        if (y < cp_.y0) throw RangeError("theta_at: y=" + fmt(y) + " below acquisition y0");
        if (y > y_end()) beyond("theta_at");
    }
    return theta_curve_.value(x_of_y(y));
}

double FreeBoundary::y_at(double theta) const {
    if (!(theta >= 0)) throw ArgumentError("y_at: theta must be >= 0");
    if (theta == 0.0) return cp_.y0;
    if (theta > theta_covered()) beyond("y_at");
    return y_of_x(theta_curve_.inverse(theta));
}

double FreeBoundary::slope_at(double y) const {
    return kind_ == BoundaryKind::Liquidation ? boundary_ode_rhs(*spec_, cp_, y) : acquisition_ode_rhs(*spec_, eta_, y);
}

double FreeBoundary::tau_at(double y) const {
    if (kind_ == BoundaryKind::Liquidation) return ttl(*spec_, cp_, y);
    if (y == cp_.y0) return 0.0;
    if (y < cp_.y0 || y > y_end()) throw RangeError("tau_at: y=" + fmt(y) + " outside acquisition boundary");
    return tau_curve_.value(y);
}

double FreeBoundary::theta_ext(double y) const {
    if (y >= cp_.y0) return 0.0;
    if (y < y_end()) {
        if (y_end() - y > 1e-13 * std::max(1.0, std::abs(y))) return std::numeric_limits<double>::infinity();
        return theta_covered();
    }
    return theta_curve_.value(x_of_y(y));
}

std::pair<double, double> FreeBoundary::of_ttl(double tau) const {
    if (!(tau >= 0)) throw ArgumentError("of_ttl: tau must be >= 0");
    if (tau == 0.0) return {cp_.y0, 0.0};
    const auto& last = samples_.back();
    if (tau > last.tau) beyond("of_ttl");
    if (kind_ == BoundaryKind::Acquisition) {
        double y = tau_curve_.inverse(tau);
        return {y, theta_curve_.value(y)};
    }
    // ttl is strictly decreasing in y; solve in u for resolution near y_inf
    const MarketSpec& s = *spec_;
    const CriticalPoints cp = cp_;
    auto g = [&](double u) { return ttl(s, cp, cp.y_inf + std::exp(u)) - tau; };
    double u_hi = std::log(cp.y0 - cp.y_inf), u_lo = x_of_y(last.y);
    double u = find_root(g, u_lo, u_hi, 1e-16, 1e-16);
    double y = std::min(cp.y_inf + std::exp(u), cp.y0);
    return {y, theta_at(y)};
}

// ---------------------------------------------------------------------------

namespace {

using State1 = std::array<double, 1>;
using State2 = std::array<double, 2>;

constexpr double kRelTol = 1e-11;
constexpr double kAbsTol = 1e-13;

}  // namespace

std::shared_ptr<const FreeBoundary> solve_boundary(std::shared_ptr<const MarketSpec> spec, const CriticalPoints& cp,
                                                   double theta_max) {
    if (!(theta_max > 0)) throw ArgumentError("solve_boundary: theta_max must be > 0");
    const MarketSpec& s = *spec;
    if (!(s.delta > 0)) throw ValidationError("solve_boundary: delta > 0 required");

    std::shared_ptr<FreeBoundary> fb(new FreeBoundary());
    fb->spec_ = spec;
    fb->cp_ = cp;
    fb->kind_ = BoundaryKind::Liquidation;
    fb->theta_max_ = theta_max;

    auto rhs_u = [&](double u) {
        double e = std::exp(u);
        return boundary_ode_rhs(s, cp, cp.y_inf + e) * e;
    };
    auto sys = [&](const State1&, State1& dx, double u) { dx[0] = rhs_u(u); };

    const double scale = std::max({1.0, std::abs(cp.y_inf), std::abs(cp.y0)});
    const double u0 = std::log(cp.y0 - cp.y_inf);
    const double u_min = std::log(1e-12 * scale);
    const double max_step = 0.01;

    std::vector<double> us{u0}, th{0.0}, dth{rhs_u(u0)};
    auto stepper = odeint::make_controlled(kAbsTol, kRelTol, odeint::runge_kutta_dopri5<State1>());
    State1 x{0.0};
    double u = u0, du = -1e-3;
    bool asymptote = false;
    while (true) {
        du = std::max(du, -max_step);
        if (u + du < u_min) du = u_min - u;
        if (du > -1e-15) {
            asymptote = true;
            break;
        }
        auto res = stepper.try_step(sys, x, u, du);
        if (res == odeint::fail) continue;
        us.push_back(u);
        th.push_back(x[0]);
        dth.push_back(rhs_u(u));
        if (x[0] >= theta_max) break;
        if (u <= u_min) {
            asymptote = true;
            break;
        }
    }
    fb->asymptote_ = asymptote;
    fb->samples_.reserve(us.size());
    for (std::size_t i = 0; i < us.size(); ++i) {
        double y = i == 0 ? cp.y0 : cp.y_inf + std::exp(us[i]);
        fb->samples_.push_back({y, th[i], ttl(s, cp, y)});
    }
    fb->theta_curve_ = HermiteCurve(us, th, dth);
    return fb;
}

std::shared_ptr<const FreeBoundary> solve_boundary(const MarketSpec& spec, double theta_max) {
    auto sp = std::make_shared<const MarketSpec>(spec);
    return solve_boundary(sp, critical_points(*sp), theta_max);
}

std::shared_ptr<const FreeBoundary> acquisition_boundary(std::shared_ptr<const MarketSpec> spec, double eta,
                                                         double theta_max) {
    if (!(theta_max > 0)) throw ArgumentError("acquisition_boundary: theta_max must be > 0");
    const MarketSpec& s = *spec;
    const double y0 = acquisition_y0(s, eta);

    std::shared_ptr<FreeBoundary> fb(new FreeBoundary());
    fb->spec_ = spec;
    fb->cp_ = CriticalPoints{y0, std::numeric_limits<double>::quiet_NaN()};
    fb->kind_ = BoundaryKind::Acquisition;
    fb->eta_ = eta;
    fb->theta_max_ = theta_max;

    // state (theta, tau); tau is the time to complete along the boundary
    auto deriv = [&](double y, State2& d) {
        double tp = acquisition_ode_rhs(s, eta, y);
        d[0] = tp;
        d[1] = (1.0 + tp) / s.h(y);
    };
    auto sys = [&](const State2&, State2& dx, double y) { deriv(y, dx); };

    const double max_step = 0.01 * std::max(std::abs(y0), 1e-3);
    std::vector<double> ys{y0}, th{0.0}, dth, ta{0.0}, dta;
    State2 d0;
    deriv(y0, d0);
    dth.push_back(d0[0]);
    dta.push_back(d0[1]);

    auto stepper = odeint::make_controlled(kAbsTol, kRelTol, odeint::runge_kutta_dopri5<State2>());
    State2 x{0.0, 0.0};
    double y = y0, dy = 1e-3 * max_step;
    bool edge = false;
    while (x[0] < theta_max) {
        dy = std::min(dy, max_step);
        if (!s.in_domain(y + dy)) {
            // finite book depth above: stop short of the edge
            double room = 0.5 * (s.domain.hi - y);
            if (room < 1e-12 * std::max(1.0, std::abs(y))) {
                edge = true;
                break;
            }
            dy = std::min(dy, room);
        }
        auto res = stepper.try_step(sys, x, y, dy);
        if (res == odeint::fail) continue;
        State2 d;
        deriv(y, d);
        ys.push_back(y);
        th.push_back(x[0]);
        dth.push_back(d[0]);
        ta.push_back(x[1]);
        dta.push_back(d[1]);
    }
    fb->asymptote_ = edge;
    for (std::size_t i = 0; i < ys.size(); ++i) fb->samples_.push_back({ys[i], th[i], ta[i]});
    fb->theta_curve_ = HermiteCurve(ys, th, dth);
    fb->tau_curve_ = HermiteCurve(ys, ta, dta);
    return fb;
}

void write_boundary_csv(std::ostream& os, const FreeBoundary& fb) {
    os << "y,theta,tau\n";
    os << std::setprecision(17);
    for (const auto& p : fb.samples()) os << p.y << ',' << p.theta << ',' << p.tau << '\n';
}

std::vector<BoundarySample> read_boundary_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ArgumentError("boundary csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "y,theta,tau") throw ArgumentError("boundary csv: expected header y,theta,tau");
    std::vector<BoundarySample> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        BoundarySample p{};
        char c1 = 0, c2 = 0;
        if (!(ls >> p.y >> c1 >> p.theta >> c2 >> p.tau) || c1 != ',' || c2 != ',')
            throw ArgumentError("boundary csv: malformed row '" + line + "'");
        out.push_back(p);
    }
    return out;
}

}  // namespace mlob
