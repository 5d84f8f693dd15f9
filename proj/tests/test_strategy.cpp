#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mlob/errors.hpp"
#include "mlob/strategy.hpp"
#include "mlob/value_function.hpp"
#include "oracles.hpp"

using namespace mlob;

namespace {

const oracle::PowerLaw kR1{1, 1, 1, 0.5};

std::shared_ptr<const FreeBoundary> r1_boundary() {
    static auto fb = [] {
        auto s = std::make_shared<const MarketSpec>(power_law_spec({1, 1, 1}, 0.5));
        return solve_boundary(s, critical_points(*s), 60.0);
    }();
    return fb;
}

std::shared_ptr<const FreeBoundary> r05_boundary() {
    static auto fb = [] {
        auto s = std::make_shared<const MarketSpec>(power_law_spec({1, 0.5, 1}, 0.1));
        return solve_boundary(s, critical_points(*s), 60.0);
    }();
    return fb;
}

}  // namespace

TEST(Schedule, SellAllAtOnce) {
    auto fb = r1_boundary();
    double y0 = fb->critical().y0;
    for (double th : {0.3, 1.0, 4.0}) {
        auto sc = optimal_schedule(fb, y0 + th + 1, th);
        EXPECT_EQ(sc.initial_block, th);
        EXPECT_EQ(sc.terminal_time, 0.0);
        EXPECT_EQ(sc.final_state().theta, 0.0);
    }
    auto e = optimal_schedule(fb, -1.0, 0.0);
    EXPECT_TRUE(e.empty());
    EXPECT_EQ(e.terminal_time, 0.0);
    EXPECT_EQ(analytic_J(e, 1.0, 0.5), 0.0);
}

TEST(Schedule, ExampleFromZeroImpact) {
    // -d = y(1 - d), i.e. theta(-d) = 1 - d on the closed-form boundary
    double d = oracle::bisect([](double x) { return oracle::theta(kR1, -x) - (1 - x); }, 0.01, 0.99);
    auto sc = optimal_schedule(r1_boundary(), 0.0, 1.0);
    EXPECT_NEAR(sc.initial_block, d, 1e-9);
    EXPECT_NEAR(sc.terminal_time, oracle::tau(kR1, -d), 1e-9);
    EXPECT_NEAR(sc.terminal_time, 0.832786, 1e-6);
    EXPECT_EQ(sc.wait_time, 0.0);
}

TEST(Schedule, WaitThenBoundary) {
    auto fb = r1_boundary();
    double th = 2.0, yb = fb->y_at(th), y = yb - 0.7;
    auto sc = optimal_schedule(fb, y, th);
    EXPECT_EQ(sc.initial_block, 0.0);
    EXPECT_NEAR(sc.wait_time, std::log(y / yb), 1e-14);
    EXPECT_NEAR(sc.terminal_time, sc.wait_time + oracle::tau(kR1, yb), 1e-10);
    auto st = sc.state_at(sc.wait_time);
    EXPECT_NEAR(st.y, yb, 1e-12);
    EXPECT_NEAR(st.theta, th, 1e-12);
    // general-h quadrature agrees with the closed form
    auto s = fb->spec();
    s.linear_beta.reset();
    EXPECT_NEAR(wait_time(s, y, yb), std::log(y / yb), 1e-12);
}

TEST(Schedule, BoundarySegmentFollowsParametrization) {
    auto fb = r1_boundary();
    auto sc = optimal_schedule(fb, 0.0, 1.0);
    double T = sc.terminal_time;
    for (double t = 0.0; t < T; t += T / 37) {
        auto st = sc.state_at(t);
        EXPECT_NEAR(st.y, oracle::ybar_r1(kR1, T - t), 1e-9);
        EXPECT_NEAR(st.theta, oracle::thetabar_r1(kR1, T - t), 1e-9);
        EXPECT_GE(st.theta, 0.0);
    }
    auto end = sc.state_at(T);
    EXPECT_EQ(end.theta, 0.0);
    EXPECT_EQ(end.y, fb->critical().y0);
}

TEST(Schedule, MarkovConsistency) {
    auto fb = r1_boundary();
    struct Start {
        double y, theta;
    };
    for (Start s0 : {Start{0.0, 1.0}, Start{-2.5, 3.0}, Start{0.2, 5.0}}) {
        auto sc = optimal_schedule(fb, s0.y, s0.theta);
        double T = sc.terminal_time;
        for (double frac : {0.1, 0.35, 0.6, 0.9}) {
            double t = frac * T;
            auto st = sc.state_at(t);
            auto tail = optimal_schedule(fb, st.y, st.theta);
            EXPECT_NEAR(tail.initial_block, 0.0, 1e-8);
            EXPECT_NEAR(tail.terminal_time, T - t, 1e-8) << s0.y << " " << frac;
            auto mid = tail.state_at(0.5 * (T - t));
            auto ref = sc.state_at(t + 0.5 * (T - t));
            EXPECT_NEAR(mid.y, ref.y, 1e-8);
            EXPECT_NEAR(mid.theta, ref.theta, 1e-8);
        }
    }
}

TEST(Schedule, DeterministicAndMonotone) {
    auto fb = r1_boundary();
    auto a = optimal_schedule(fb, -0.4, 2.0);
    auto b = optimal_schedule(fb, -0.4, 2.0);
    ASSERT_EQ(a.pieces.size(), b.pieces.size());
    for (std::size_t i = 0; i < a.pieces.size(); ++i) {
        EXPECT_EQ(a.pieces[i].t1, b.pieces[i].t1);
        EXPECT_EQ(a.pieces[i].y1, b.pieces[i].y1);
    }
    auto tr = execute(a, a.terminal_time / 500);
    for (std::size_t i = 1; i < tr.samples.size(); ++i) {
        EXPECT_LE(tr.samples[i].theta, tr.samples[i - 1].theta + 1e-13);
        EXPECT_GE(tr.samples[i].rate, 0.0);
    }
}

TEST(Execute, PureWaitIsExponential) {
    auto spec = std::make_shared<const MarketSpec>(power_law_spec({1, 1, 1}, 0.5));
    auto sc = compile_strategy(spec, -1.0, 0.5, Strategy{"idle", {Leg::wait(2.0)}});
    auto tr = execute(sc, 1e-3);
    for (const auto& x : tr.samples) {
        EXPECT_NEAR(x.y, -std::exp(-x.t), 1e-10);
        EXPECT_EQ(x.theta, 0.5);
    }
    EXPECT_NEAR(tr.samples.back().t, 2.0, 1e-15);
}

TEST(Execute, TrajectoryInvariants) {
    auto fb = r1_boundary();
    const auto& s = fb->spec();
    for (auto sc : {optimal_schedule(fb, 0.0, 1.0), optimal_schedule(fb, -2.0, 2.0)}) {
        double dt = sc.terminal_time / 2000;
        auto tr = execute(sc, dt, sc.terminal_time + 0.5);
        const auto& v = tr.samples;
        for (std::size_t i = 1; i < v.size(); ++i) {
            double d = v[i].t - v[i - 1].t;
            if (d == 0.0) {
                EXPECT_NEAR(v[i].a - v[i - 1].a, -(v[i].theta - v[i - 1].theta), 1e-15);
                EXPECT_NEAR(v[i].a - v[i - 1].a, -(v[i].y - v[i - 1].y), 1e-14);
                continue;
            }
            double ym = 0.5 * (v[i].y + v[i - 1].y);
            double resid = v[i].y - v[i - 1].y + s.h(ym) * d - (v[i].theta - v[i - 1].theta);
            EXPECT_LT(std::abs(resid), 1e-6) << v[i].t;
        }
        EXPECT_EQ(v.back().theta, 0.0);
        EXPECT_NEAR(v.back().y, fb->critical().y0 * std::exp(-0.5), 1e-10);
    }
}

TEST(Execute, RateLimits) {
    auto fb = r1_boundary();
    double th = 40.0;
    auto sc = optimal_schedule(fb, fb->y_at(th), th);
    auto start = sc.state_at(0.0);
    EXPECT_NEAR(start.rate / oracle::rate_at_infinity(kR1), 1.0, 1e-3);
    auto last = sc.state_at(sc.terminal_time * (1 - 1e-9));
    EXPECT_NEAR(last.rate / oracle::rate_at_zero(kR1), 1.0, 1e-6);
}

TEST(Schedule, TwoSided) {
    auto fb = r1_boundary();
    double yb = fb->y_at(1.0);
    auto sc = optimal_schedule_two_sided(fb, yb - 0.3, 0.7);
    EXPECT_EQ(sc.kind, ScheduleKind::TwoSided);
    EXPECT_NEAR(sc.initial_block, -0.3, 1e-12);
    EXPECT_NEAR(sc.terminal_time, oracle::tau(kR1, yb), 1e-10);
    auto st = sc.state_at(0.0);
    EXPECT_NEAR(st.y, yb, 1e-12);
    EXPECT_NEAR(st.theta, 1.0, 1e-12);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uy(fb->critical().y0, 2.0), ut(0.0, 5.0);
    for (int i = 0; i < 25; ++i) {
        double y = uy(rng), th = ut(rng);
        EXPECT_GE(optimal_schedule_two_sided(fb, y, th).initial_block, 0.0);
    }
    for (auto [y, th] : {std::pair{0.0, 1.0}, {0.6, 1.0}, {-0.3, 2.0}}) {
        auto one = optimal_schedule(fb, y, th), two = optimal_schedule_two_sided(fb, y, th);
        EXPECT_EQ(one.initial_block, two.initial_block);
        EXPECT_EQ(one.terminal_time, two.terminal_time);
    }
}

TEST(Schedule, AnalyticJMatchesValue) {
    struct Case {
        std::shared_ptr<const FreeBoundary> fb;
        double y_lo, y_hi;
    };
    std::mt19937_64 rng(11);
    for (const Case& c : {Case{r1_boundary(), -3.0, 1.0}, Case{r05_boundary(), -1.5, 0.5}}) {
        ValueField field(c.fb);
        double delta = c.fb->spec().delta;
        std::uniform_real_distribution<double> uy(c.y_lo, c.y_hi), ut(0.05, 8.0);
        for (int i = 0; i < 20; ++i) {
            double y = uy(rng), th = ut(rng);
            auto sc = optimal_schedule(c.fb, y, th);
            EXPECT_NEAR(oracle::rel_err(analytic_J(sc, 2.0, delta), 2.0 * field.value(y, th)), 0.0, 1e-8)
                << y << " " << th << " " << to_string(field.region(y, th));
            auto sc2 = optimal_schedule_two_sided(c.fb, y, th);
            EXPECT_NEAR(oracle::rel_err(analytic_J(sc2, 1.0, delta), field.value_two_sided(y, th)), 0.0, 1e-8);
        }
    }
}

TEST(Schedule, RangeErrors) {
    auto s = std::make_shared<const MarketSpec>(power_law_spec({1, 1, 1}, 0.5));
    auto fb = solve_boundary(s, critical_points(*s), 2.0);
    EXPECT_THROW(optimal_schedule(fb, -3.0, 5.0), RangeError);
    EXPECT_THROW(optimal_schedule(fb, 0.0, -1.0), ArgumentError);
}

TEST(Acquisition, Schedules) {
    auto s = std::make_shared<const MarketSpec>(power_law_spec({1, 1, 1}, 0.5));
    double eta = 0.4;
    auto acq = acquisition_boundary(s, eta, 10.0);
    double y0 = acq->critical().y0;
    EXPECT_TRUE(acquisition_schedule(acq, 0.0, 0.0).empty());

    auto one = acquisition_schedule(acq, y0 - 2.0, 1.5);
    EXPECT_EQ(one.initial_block, -1.5);
    EXPECT_EQ(one.terminal_time, 0.0);

    for (auto [y, target] : {std::pair{0.0, 1.0}, {y0 - 0.5, 2.0}, {y0 + 0.3, 3.0}}) {
        auto sc = acquisition_schedule(acq, y, target);
        ASSERT_LT(sc.initial_block, 0.0);
        auto st = sc.state_at(0.0);
        EXPECT_LT(std::abs(acq->theta_at(st.y) - (target - st.theta)), 1e-9);
        auto tr = execute(sc, sc.terminal_time / 400);
        for (std::size_t i = 1; i < tr.samples.size(); ++i)
            EXPECT_GE(tr.samples[i].theta, tr.samples[i - 1].theta - 1e-13);
        EXPECT_NEAR(tr.samples.back().theta, target, 1e-12);
        EXPECT_NEAR(tr.samples.back().y, y0, 1e-12);
    }
    // high impact, small order: wait first
    double yw = acq->y_at(0.5) + 0.4;
    auto w = acquisition_schedule(acq, yw, 0.5);
    EXPECT_EQ(w.initial_block, 0.0);
    EXPECT_NEAR(w.wait_time, std::log(yw / acq->y_at(0.5)), 1e-12);
}

TEST(TypeA, MatchesJensenBound) {
    auto s = std::make_shared<const MarketSpec>(power_law_spec({1, 1, 1}, 0.0, true));
    for (double T : {0.5, 1.0, 2.0}) {
        auto plan = type_a_schedule(s, T, 0.0, 1.0);
        // e^{y*} = e^{y_h}(1 + y_h) and T y_h = -1 - y*
        double yh = oracle::bisect([&](double x) { return T * x + 1 + x + std::log1p(x); }, -0.999, 0.0);
        EXPECT_NEAR(plan.y_hold, yh, 1e-7);
        EXPECT_NEAR(plan.y_star, yh + std::log1p(yh), 1e-7);
        double J = analytic_J(plan.schedule, 1.0, 0.0);
        EXPECT_NEAR(J, plan.bound, 1e-9);
        EXPECT_NEAR(plan.schedule.final_state().theta, 0.0, 1e-15);
        EXPECT_NEAR(plan.schedule.final_state().y, plan.y_star, 1e-12);

        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 50; ++i) {
            double a0 = u(rng), rho = u(rng) * (1 - a0) / T;
            auto alt = compile_strategy(s, 0.0, 1.0,
                                        Strategy{"alt", {Leg::block(a0), Leg::at_rate(rho, T), Leg::dump()}});
            EXPECT_LE(analytic_J(alt, 1.0, 0.0), J + 1e-12);
        }
    }
    auto empty = type_a_schedule(s, 1.0, 0.0, 0.0);
    EXPECT_TRUE(empty.schedule.empty());
    EXPECT_EQ(analytic_J(empty.schedule, 1.0, 0.0), 0.0);
    try {
        type_a_schedule(s, 1.0, -3.0, 1.0);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("type A inadmissible"), std::string::npos);
    }
    auto pos = std::make_shared<const MarketSpec>(power_law_spec({1, 1, 1}, 0.5));
    EXPECT_THROW(type_a_schedule(pos, 1.0, 0.0, 1.0), ValidationError);
}

TEST(Strategy, Admissibility) {
    auto fb = r1_boundary();
    EXPECT_THROW(compile_strategy(fb, 0.0, 1.0, Strategy{"buy", {Leg::block(-0.1)}}), ValidationError);
    EXPECT_THROW(compile_strategy(fb, 0.0, 1.0, Strategy{"over", {Leg::block(1.5)}}), ValidationError);
    EXPECT_THROW(compile_strategy(fb, 0.0, 1.0, Strategy{"fast", {Leg::at_rate(2.0, 1.0)}}), ValidationError);
    EXPECT_NO_THROW(compile_strategy(fb, 0.0, 1.0, Strategy{"buy", {Leg::block(-0.1), Leg::dump()}}, true));

    auto opt = optimal_schedule(fb, 0.0, 1.0);
    auto same = compile_strategy(fb, 0.0, 1.0, Strategy{"opt", {Leg::optimal()}});
    EXPECT_EQ(analytic_J(same, 1.0, 0.5), analytic_J(opt, 1.0, 0.5));
    // n equal sub-blocks give the same proceeds as one block
    auto one = compile_strategy(fb, 0.0, 1.0, Strategy{"one", {Leg::block(1.0)}});
    auto four = compile_strategy(
        fb, 0.0, 1.0, Strategy{"four", {Leg::block(0.25), Leg::block(0.25), Leg::block(0.25), Leg::block(0.25)}});
    EXPECT_NEAR(analytic_J(one, 1.0, 0.5), analytic_J(four, 1.0, 0.5), 1e-15);
}
