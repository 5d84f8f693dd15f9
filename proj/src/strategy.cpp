#include "mlob/strategy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "mlob/errors.hpp"
#include "mlob/numerics.hpp"
#include "mlob/value_function.hpp"

namespace mlob {

namespace odeint = boost::numeric::odeint;

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(10) << x;
    return os.str();
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

// Appends pieces while tracking the running state.
struct Builder {
    const MarketSpec& spec;
    double t = 0.0, y, theta, a = 0.0;
    std::vector<Piece> pieces;

    Builder(const MarketSpec& s, double y_init, double theta_init) : spec(s), y(y_init), theta(theta_init) {}

    Piece start(Piece::Kind k) const {
        Piece p{k};
        p.t0 = p.t1 = t;
        p.y0 = p.y1 = y;
        p.theta0 = p.theta1 = theta;
        p.a0 = p.a1 = a;
        return p;
    }
    void finish(Piece p) {
        t = p.t1;
        y = p.y1;
        theta = p.theta1;
        a = p.a1;
        pieces.push_back(p);
    }

    void block(double size) {
        if (size == 0.0) return;
        spec.require_domain(y - size, "block trade");
        Piece p = start(Piece::Kind::Block);
        p.size = size;
        p.y1 = y - size;
        p.theta1 = theta - size;
        p.a1 = a + size;
        finish(p);
    }
    void wait(double d, double y_end) {
        if (!(d > 0)) return;
        Piece p = start(Piece::Kind::Wait);
        p.t1 = t + d;
        p.y1 = y_end;
        finish(p);
    }
    void wait(double d) { wait(d, impact_flow(spec, y, 0.0, d)); }
    void rate(double rho, double d) {
        if (!(d > 0)) return;
        Piece p = start(Piece::Kind::Rate);
        p.rate = rho;
        p.t1 = t + d;
        p.y1 = impact_flow(spec, y, rho, d);
        p.theta1 = theta - rho * d;
        p.a1 = a + rho * d;
        finish(p);
    }
    void hold(double d) {
        if (!(d > 0)) return;
        Piece p = start(Piece::Kind::Hold);
        p.rate = -spec.h(y);
        p.t1 = t + d;
        p.theta1 = theta - p.rate * d;
        p.a1 = a + p.rate * d;
        finish(p);
    }
    void boundary(const FreeBoundary& fb) {
        if (theta <= 0.0) return;
        Piece p = start(Piece::Kind::Boundary);
        p.t1 = t + fb.tau_at(y);
        p.y1 = fb.critical().y0;
        p.theta1 = 0.0;
        p.a1 = a + theta;
        finish(p);
    }
    // theta counts shares bought so far
    void acq_boundary(const FreeBoundary& fb, double target) {
        double rem = target - theta;
        if (rem <= 0.0) return;
        Piece p = start(Piece::Kind::AcqBoundary);
        p.target = target;
        p.t1 = t + fb.tau_at(y);
        p.y1 = fb.critical().y0;
        p.theta1 = target;
        p.a1 = a - rem;
        finish(p);
    }
    void append(const std::vector<Piece>& tail) {
        for (Piece p : tail) {
            p.t0 += t;
            p.t1 += t;
            p.a0 += a;
            p.a1 += a;
            pieces.push_back(p);
        }
        if (!tail.empty()) {
            const Piece& last = pieces.back();
            t = last.t1;
            y = last.y1;
            theta = last.theta1;
            a = last.a1;
        }
    }
};

void fill_summary(Schedule& sc) {
    sc.initial_block = 0.0;
    sc.wait_time = 0.0;
    sc.terminal_time = sc.pieces.empty() ? 0.0 : sc.pieces.back().t1;
    for (const Piece& p : sc.pieces) {
        if (p.kind == Piece::Kind::Block && p.t0 == 0.0) sc.initial_block += p.size;
        if (p.kind == Piece::Kind::Wait && sc.wait_time == 0.0) sc.wait_time = p.t1 - p.t0;
    }
}

double piece_rate(const MarketSpec& s, const FreeBoundary* fb, const Piece& p, double y) {
    switch (p.kind) {
        case Piece::Kind::Rate:
        case Piece::Kind::Hold: return p.rate;
        case Piece::Kind::Boundary: return liquidation_rate(s, y);
        case Piece::Kind::AcqBoundary: {
            double tp = fb->slope_at(y);
            return -tp * s.h(y) / (1.0 + tp);
        }
        default: return 0.0;
    }
}

// State strictly inside an interval piece, t0 <= t <= t1.
ScheduleState piece_state(const MarketSpec& s, const FreeBoundary* fb, const Piece& p, double t) {
    double d = t - p.t0;
    switch (p.kind) {
        case Piece::Kind::Wait: return {p.theta0, impact_flow(s, p.y0, 0.0, d), p.a0, 0.0};
        case Piece::Kind::Rate:
            return {p.theta0 - p.rate * d, impact_flow(s, p.y0, p.rate, d), p.a0 + p.rate * d, p.rate};
        case Piece::Kind::Hold: return {p.theta0 - p.rate * d, p.y0, p.a0 + p.rate * d, p.rate};
        case Piece::Kind::Boundary:
        case Piece::Kind::AcqBoundary: {
            double tau = std::min(p.t1 - t, fb->samples().back().tau);
            if (tau <= 0.0) return {p.theta1, p.y1, p.a1, 0.0};
            auto [y, th] = fb->of_ttl(tau);
            if (p.kind == Piece::Kind::Boundary) return {th, y, p.a0 + (p.theta0 - th), piece_rate(s, fb, p, y)};
            double bought = p.target - th;
            return {bought, y, p.a0 - (bought - p.theta0), piece_rate(s, fb, p, y)};
        }
        case Piece::Kind::Block: break;
    }
    return {p.theta1, p.y1, p.a1, 0.0};
}

}  // namespace

const char* to_string(ScheduleKind k) {
    switch (k) {
        case ScheduleKind::Liquidation: return "liquidation";
        case ScheduleKind::TwoSided: return "two-sided";
        case ScheduleKind::Acquisition: return "acquisition";
        case ScheduleKind::TypeA: return "type-a";
        case ScheduleKind::Custom: return "custom";
    }
    return "?";
}

double impact_flow(const MarketSpec& s, double y, double rate, double t) {
    if (t == 0.0) return y;
    if (s.linear_beta) {
        double b = *s.linear_beta;
        double y_eq = -rate / b;
        return y_eq + (y - y_eq) * std::exp(-b * t);
    }
    using State = std::array<double, 1>;
    State x{y};
    auto sys = [&](const State& v, State& dv, double) { dv[0] = -s.h(v[0]) - rate; };
    odeint::integrate_adaptive(odeint::make_controlled(1e-14, 1e-13, odeint::runge_kutta_dopri5<State>()), sys, x,
                               0.0, t, t / 64);
    return x[0];
}

double wait_time(const MarketSpec& s, double y, double y_target) {
    if (y == y_target) return 0.0;
    if ((y < y_target) != (y_target < 0.0) || y_target == 0.0 || y * y_target <= 0.0)
        throw ArgumentError("wait_time: y=" + fmt(y) + " does not decay to " + fmt(y_target));
    if (s.linear_beta) return std::log(y / y_target) / *s.linear_beta;
    return integrate([&](double x) { return -1.0 / s.h(x); }, y, y_target, 1e-13);
}

double h_inverse(const MarketSpec& s, double x) {
    if (s.linear_beta) return x / *s.linear_beta;
    if (x == 0.0) return 0.0;
    auto g = [&](double y) { return s.h(y) - x; };
    double lo = -1.0, hi = 1.0;
    for (int i = 0; i < 200 && g(lo) > 0; ++i) lo = s.in_domain(2 * lo) ? 2 * lo : 0.5 * (lo + s.domain.lo);
    for (int i = 0; i < 200 && g(hi) < 0; ++i) hi = s.in_domain(2 * hi) ? 2 * hi : 0.5 * (hi + s.domain.hi);
    if (g(lo) > 0 || g(hi) < 0) throw DomainError("h_inverse: " + fmt(x) + " outside the range of h");
    return find_root(g, lo, hi);
}

ScheduleState Schedule::state_at(double t) const {
    ScheduleState cur{theta_pre, y_pre, 0.0, 0.0};
    if (t < 0.0) return cur;
    const FreeBoundary* fb = boundary.get();
    double t_end = 0.0;
    for (const Piece& p : pieces) {
        if (p.t0 > t) break;
        if (p.kind == Piece::Kind::Block) {
            cur = {p.theta1, p.y1, p.a1, 0.0};
        } else if (t < p.t1) {
            return piece_state(*spec, fb, p, t);
        } else {
            cur = {p.theta1, p.y1, p.a1, 0.0};
        }
        t_end = p.t1;
    }
    if (t > t_end) cur.y = impact_flow(*spec, cur.y, 0.0, t - t_end);
    return cur;
}

ScheduleState Schedule::final_state() const {
    if (pieces.empty()) return {theta_pre, y_pre, 0.0, 0.0};
    const Piece& p = pieces.back();
    return {p.theta1, p.y1, p.a1, 0.0};
}

namespace {

Schedule liquidation(std::shared_ptr<const FreeBoundary> fb, double y, double theta, bool two_sided) {
    if (!fb || fb->kind() != BoundaryKind::Liquidation)
        throw ArgumentError("optimal_schedule: a liquidation boundary is required");
    if (!(theta >= 0)) throw ArgumentError("optimal_schedule: theta_init must be >= 0");
    const MarketSpec& s = fb->spec();
    s.require_domain(y, "optimal_schedule");

    Schedule sc;
    sc.kind = two_sided ? ScheduleKind::TwoSided : ScheduleKind::Liquidation;
    sc.label = two_sided ? "optimal two-sided" : "optimal";
    sc.y_pre = y;
    sc.theta_pre = theta;
    sc.spec = fb->spec_ptr();
    sc.boundary = fb;
    if (theta == 0.0) return sc;

    ValueField field(fb);
    Location loc = field.locate(y, theta, two_sided);
    Builder b(s, y, theta);
    switch (loc.region) {
        case Region::Sell2: b.block(theta); break;
        case Region::Boundary: b.boundary(*fb); break;
        case Region::Sell1:
        case Region::Buy:
            b.block(loc.delta);
            b.boundary(*fb);
            break;
        case Region::Wait:
            b.wait(wait_time(s, y, loc.wait_y), loc.wait_y);
            b.boundary(*fb);
            break;
    }
    sc.pieces = std::move(b.pieces);
    fill_summary(sc);
    return sc;
}

}  // namespace

Schedule optimal_schedule(std::shared_ptr<const FreeBoundary> fb, double y_init, double theta_init) {
    return liquidation(std::move(fb), y_init, theta_init, false);
}

Schedule optimal_schedule_two_sided(std::shared_ptr<const FreeBoundary> fb, double y_init, double theta_init) {
    return liquidation(std::move(fb), y_init, theta_init, true);
}

Schedule acquisition_schedule(std::shared_ptr<const FreeBoundary> acq, double y_init, double theta_target) {
    if (!acq || acq->kind() != BoundaryKind::Acquisition)
        throw ArgumentError("acquisition_schedule: an acquisition boundary is required");
    if (!(theta_target >= 0)) throw ArgumentError("acquisition_schedule: theta_target must be >= 0");
    const MarketSpec& s = acq->spec();
    s.require_domain(y_init, "acquisition_schedule");

    Schedule sc;
    sc.kind = ScheduleKind::Acquisition;
    sc.label = "acquisition";
    sc.y_pre = y_init;
    sc.theta_pre = 0.0;
    sc.spec = acq->spec_ptr();
    sc.boundary = acq;
    if (theta_target == 0.0) return sc;

    const double y0 = acq->critical().y0;
    const double y_end = acq->y_end();
    // remaining quantity on the boundary at impact x
    auto ext = [&](double x) {
        if (x <= y0) return 0.0;
        if (x <= y_end) return acq->theta_at(x);
        return std::numeric_limits<double>::infinity();
    };

    Builder b(s, y_init, 0.0);
    const double rem = theta_target;
    if (y_init + rem <= y0) {
        b.block(-rem);
    } else if (y_init < y0 || rem > ext(y_init)) {
        auto g = [&](double d) { return rem - d - ext(y_init + d); };
        double hi = std::min(rem, y_end - y_init);
        if (g(hi) > 0) acq->y_at(rem + y_init - y_end);  // root beyond the solved curve: throws
        double d = find_root(g, 0.0, hi, 1e-15, 1e-15);
        if (rem - d <= 0.0) {
            b.block(-rem);
        } else {
            b.block(-d);
            b.acq_boundary(*acq, theta_target);
        }
    } else {
        double yb = rem == ext(y_init) ? y_init : acq->y_at(rem);
        b.wait(wait_time(s, y_init, yb), yb);
        b.acq_boundary(*acq, theta_target);
    }
    sc.pieces = std::move(b.pieces);
    fill_summary(sc);
    return sc;
}

double type_a_bound(const MarketSpec& s, double T, double y_init, double theta_init, double y_T) {
    double x = (y_init - theta_init - y_T) / T;
    double g = s.f(h_inverse(s, x)) * x;
    return s.F(y_init) - s.F(y_T) - T * g;
}

TypeAPlan type_a_schedule(std::shared_ptr<const MarketSpec> spec, double T, double y_init, double theta_init) {
    const MarketSpec& s = *spec;
    if (s.delta != 0.0) throw ValidationError("type A: delta = 0 required, got " + fmt(s.delta));
    if (!(T > 0)) throw ArgumentError("type A: horizon T must be > 0");
    if (!(theta_init >= 0)) throw ArgumentError("type A: theta_init must be >= 0");
    s.require_domain(y_init, "type A");

    TypeAPlan plan;
    plan.schedule.kind = ScheduleKind::TypeA;
    plan.schedule.label = "type A";
    plan.schedule.y_pre = y_init;
    plan.schedule.theta_pre = theta_init;
    plan.schedule.spec = spec;
    plan.y_star = y_init;
    plan.y_hold = y_init;
    plan.bound = 0.0;
    if (theta_init == 0.0) return plan;

    double lo = std::min(0.0, y_init) - theta_init, hi = std::max(0.0, y_init);
    if (!s.in_domain(lo)) lo = s.domain.lo + 1e-9 * std::max(1.0, std::abs(s.domain.lo));
    auto G = [&](double y) {
        double x = (y_init - theta_init - y) / T;
        return s.F(y) + T * s.f(h_inverse(s, x)) * x;
    };
    const double ys = minimize_scalar(G, lo, hi);
    const double yh = h_inverse(s, (y_init - theta_init - ys) / T);
    const double a0 = y_init - yh;
    const double tol = 1e-12 * std::max(1.0, theta_init);
    if (a0 < -tol)
        throw ValidationError("type A inadmissible: initial block " + fmt(a0) + " < 0 (would buy)");
    if (a0 > theta_init + tol)
        throw ValidationError("type A inadmissible: initial block " + fmt(a0) + " exceeds Theta0- = " +
                              fmt(theta_init));
    if (yh > tol) throw ValidationError("type A inadmissible: impact after the first block Y0 = " + fmt(yh) + " > 0");
    if (yh - ys < -tol)
        throw ValidationError("type A inadmissible: position before the final block " + fmt(yh - ys) + " < 0");

    Builder b(s, y_init, theta_init);
    b.block(std::clamp(a0, 0.0, theta_init));
    b.hold(T);
    b.block(b.theta);
    plan.schedule.pieces = std::move(b.pieces);
    fill_summary(plan.schedule);
    plan.schedule.terminal_time = T;
    plan.y_star = ys;
    plan.y_hold = yh;
    plan.bound = type_a_bound(s, T, y_init, theta_init, ys);
    return plan;
}

namespace {

Schedule compile(std::shared_ptr<const MarketSpec> spec, std::shared_ptr<const FreeBoundary> fb, double y,
                 double theta, const Strategy& st, bool two_sided) {
    const MarketSpec& s = *spec;
    if (!(theta >= 0)) throw ArgumentError("compile_strategy: theta_init must be >= 0");
    Builder b(s, y, theta);
    const double tol = 1e-12 * std::max(1.0, theta);
    auto reject = [&](std::size_t i, const std::string& why) {
        throw ValidationError("inadmissible strategy '" + st.name + "', leg " + std::to_string(i) + ": " + why);
    };
    for (std::size_t i = 0; i < st.legs.size(); ++i) {
        const Leg& leg = st.legs[i];
        switch (leg.kind) {
            case Leg::Kind::Block:
                if (leg.size < 0 && !two_sided) reject(i, "buys " + fmt(-leg.size) + " shares");
                if (leg.size > b.theta + tol) reject(i, "sells more than the " + fmt(b.theta) + " shares held");
                b.block(std::min(leg.size, b.theta));
                break;
            case Leg::Kind::Wait:
                if (leg.duration < 0) reject(i, "negative duration");
                b.wait(leg.duration);
                break;
            case Leg::Kind::Rate:
            case Leg::Kind::Hold: {
                if (leg.duration < 0) reject(i, "negative duration");
                double rho = leg.kind == Leg::Kind::Rate ? leg.rate : -s.h(b.y);
                if (rho < 0 && !two_sided) reject(i, "buys at rate " + fmt(-rho));
                if (rho * leg.duration > b.theta + tol) reject(i, "sells more than the " + fmt(b.theta) + " shares held");
                if (leg.kind == Leg::Kind::Rate)
                    b.rate(rho, leg.duration);
                else
                    b.hold(leg.duration);
                break;
            }
            case Leg::Kind::Dump: b.block(b.theta); break;
            case Leg::Kind::Optimal: {
                if (!fb) reject(i, "no boundary available for the optimal tail");
                Schedule tail = two_sided ? optimal_schedule_two_sided(fb, b.y, b.theta)
                                          : optimal_schedule(fb, b.y, b.theta);
                b.append(tail.pieces);
                break;
            }
        }
        if (b.theta < 0.0) b.theta = 0.0;
    }
    Schedule sc;
    sc.kind = ScheduleKind::Custom;
    sc.label = st.name;
    sc.y_pre = y;
    sc.theta_pre = theta;
    sc.spec = spec;
    sc.boundary = fb;
    sc.pieces = std::move(b.pieces);
    fill_summary(sc);
    return sc;
}

}  // namespace

Schedule compile_strategy(std::shared_ptr<const FreeBoundary> fb, double y_init, double theta_init,
                          const Strategy& strategy, bool two_sided) {
    return compile(fb->spec_ptr(), fb, y_init, theta_init, strategy, two_sided);
}

Schedule compile_strategy(std::shared_ptr<const MarketSpec> spec, double y_init, double theta_init,
                          const Strategy& strategy, bool two_sided) {
    return compile(std::move(spec), nullptr, y_init, theta_init, strategy, two_sided);
}

Trajectory execute(const Schedule& sc, double dt, double horizon, const std::vector<double>& extra_times) {
    if (!(dt > 0)) throw ArgumentError("execute: dt must be > 0");
    const MarketSpec& s = *sc.spec;
    const FreeBoundary* fb = sc.boundary.get();
    const double H = std::max(sc.terminal_time, horizon);

    std::vector<double> fixed{0.0};
    for (const Piece& p : sc.pieces) {
        fixed.push_back(p.t0);
        fixed.push_back(p.t1);
    }
    for (double t : extra_times)
        if (t >= 0.0 && t <= H) fixed.push_back(t);
    if (H > 0) fixed.push_back(H);
    std::sort(fixed.begin(), fixed.end());
    fixed.erase(std::unique(fixed.begin(), fixed.end(), near), fixed.end());
    std::vector<double> times = fixed;
    const long n = static_cast<long>(std::ceil(H / dt - 1e-9));
    for (long i = 1; i < n; ++i) {
        double t = i * dt;
        auto it = std::lower_bound(fixed.begin(), fixed.end(), t);
        bool clash = (it != fixed.end() && near(*it, t)) || (it != fixed.begin() && near(*(it - 1), t));
        if (!clash) times.push_back(t);
    }
    std::sort(times.begin(), times.end());

    Trajectory tr;
    tr.terminal_time = sc.terminal_time;
    const auto& P = sc.pieces;
    std::size_t k = 0;
    auto skip_done = [&](double t) {
        while (k < P.size() && P[k].kind != Piece::Kind::Block && P[k].t1 <= t) ++k;
    };
    auto rate_after = [&](double t, double y) {
        std::size_t j = k;
        while (j < P.size() && P[j].kind == Piece::Kind::Block && near(P[j].t0, t)) ++j;
        if (j < P.size() && P[j].kind != Piece::Kind::Block && P[j].t0 <= t + 1e-12 && t < P[j].t1)
            return piece_rate(s, fb, P[j], y);
        return 0.0;
    };
    auto rk4 = [&](double y, double rho, double step) {
        auto fy = [&](double v) { return -s.h(v) - rho; };
        double k1 = fy(y), k2 = fy(y + 0.5 * step * k1), k3 = fy(y + 0.5 * step * k2), k4 = fy(y + step * k3);
        return y + step / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    };

    double theta = sc.theta_pre, y = sc.y_pre, a = 0.0;
    auto emit_blocks = [&](double t) {
        skip_done(t);
        while (k < P.size() && P[k].kind == Piece::Kind::Block && near(P[k].t0, t)) {
            tr.samples.push_back({t, theta, y, a, rate_after(t, y)});
            y = P[k].y1;
            theta = P[k].theta1;
            a = P[k].a1;
            ++k;
        }
        tr.samples.push_back({t, theta, y, a, rate_after(t, y)});
    };

    emit_blocks(0.0);
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double ta = times[i - 1], tb = times[i];
        skip_done(ta);
        const Piece* p = (k < P.size() && P[k].kind != Piece::Kind::Block && P[k].t0 <= ta + 1e-12) ? &P[k] : nullptr;
        if (!p || p->kind == Piece::Kind::Wait) {
            y = rk4(y, 0.0, tb - ta);
        } else if (p->kind == Piece::Kind::Rate) {
            y = rk4(y, p->rate, tb - ta);
            theta = p->theta0 - p->rate * (tb - p->t0);
            a = p->a0 + p->rate * (tb - p->t0);
        } else {
            ScheduleState st = piece_state(s, fb, *p, std::min(tb, p->t1));
            theta = st.theta;
            y = st.y;
            a = st.a;
        }
        emit_blocks(tb);
    }
    return tr;
}

double analytic_J(const Schedule& sc, double s0, double delta) {
    const MarketSpec& s = *sc.spec;
    const FreeBoundary* fb = sc.boundary.get();
    double J = 0.0;
    for (const Piece& p : sc.pieces) {
        switch (p.kind) {
            case Piece::Kind::Block: J += std::exp(-delta * p.t0) * (s.F(p.y0) - s.F(p.y1)); break;
            case Piece::Kind::Wait: break;
            case Piece::Kind::Hold: {
                double w = delta == 0.0 ? p.t1 - p.t0 : (std::exp(-delta * p.t0) - std::exp(-delta * p.t1)) / delta;
                J += p.rate * s.f(p.y0) * w;
                break;
            }
            case Piece::Kind::Rate:
                J += p.rate * integrate(
                                  [&](double t) {
                                      return std::exp(-delta * t) * s.f(impact_flow(s, p.y0, p.rate, t - p.t0));
                                  },
                                  p.t0, p.t1, 1e-12);
                break;
            case Piece::Kind::Boundary: {
                // dA = -theta_u du along the curve, u = log(y - y_inf)
                const CriticalPoints& cp = fb->critical();
                auto g = [&](double u) {
                    double e = std::exp(u);
                    double y = cp.y_inf + e;
                    double t = p.t1 - ttl(s, cp, y);
                    return -std::exp(-delta * t) * s.f(y) * boundary_ode_rhs(s, cp, y) * e;
                };
                J += integrate(g, std::log(p.y0 - cp.y_inf), std::log(cp.y0 - cp.y_inf), 1e-13);
                break;
            }
            case Piece::Kind::AcqBoundary: {
                auto g = [&](double y) {
                    double t = p.t1 - fb->tau_at(y);
                    return std::exp(-delta * t) * s.f(y) * fb->slope_at(y);
                };
                J -= integrate(g, fb->critical().y0, p.y0, 1e-11);
                break;
            }
        }
    }
    return s0 * J;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
    os << "t,theta,y,a,rate\n" << std::setprecision(17);
    for (const auto& x : tr.samples) os << x.t << ',' << x.theta << ',' << x.y << ',' << x.a << ',' << x.rate << '\n';
}

}  // namespace mlob
