#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mlob/errors.hpp"
#include "mlob/value_function.hpp"
#include "oracles.hpp"

using namespace mlob;

namespace {

ValueField make_field(double c, double r, double beta, double delta, double theta_max = 60.0) {
    auto s = std::make_shared<const MarketSpec>(power_law_spec({c, r, beta}, delta));
    return ValueField(solve_boundary(s, critical_points(*s), theta_max));
}

const ValueField& r1() {
    static ValueField f = make_field(1, 1, 1, 0.5);
    return f;
}
const ValueField& r05() {
    static ValueField f = make_field(1, 0.5, 1, 0.1);
    return f;
}

}  // namespace

TEST(ValueField, BoundaryConditionAndSell2Example) {
    const auto& v = r1();
    for (double y = -3; y <= 1; y += 0.25) EXPECT_EQ(v.value(y, 0.0), 0.0) << y;
    // y0 + theta = 0.5 > 0, so (0, 1) is a Sell1 point; (0.6, 1) is in Sell2
    EXPECT_EQ(v.region(0, 1), Region::Sell1);
    EXPECT_EQ(v.region(0.6, 1), Region::Sell2);
    EXPECT_NEAR(v.value(0.6, 1), std::exp(0.6) - std::exp(-0.4), 1e-15);
    EXPECT_GT(v.value(0, 1), 1 - std::exp(-1.0));
    EXPECT_EQ(v.v_bdry(0), 0.0);
    EXPECT_THROW(v.value(0, -1), ArgumentError);
}

TEST(ValueField, DeltaDistanceExamples) {
    const auto& v = r1();
    double y0 = v.critical().y0;
    for (double th : {0.3, 1.0, 4.0}) {
        double yb = v.boundary().y_at(th);
        EXPECT_EQ(v.delta_distance(yb, th), 0.0);
        EXPECT_NEAR(v.delta_distance(yb + 0.1, th + 0.1), 0.1, 1e-12);
        EXPECT_NEAR(v.delta_distance(yb - 0.2, th - 0.2), -0.2, 1e-12);
        EXPECT_EQ(v.delta_distance(y0 + th + 0.5, th), th);
        double d = v.delta_distance(yb + 0.1, th + 0.1);
        // residual of the root equation
        EXPECT_NEAR(th + 0.1 - d, v.boundary().theta_at(yb + 0.1 - d), 1e-12);
    }
}

TEST(ValueField, VBoundaryIntegralRepresentation) {
    for (const ValueField* f : {&r1(), &r05()}) {
        for (double th : {0.5, 1.0, 5.0}) {
            double a = f->v_bdry(th), b = v_bdry_integral(*f, th);
            EXPECT_NEAR(a, b, 1e-6) << th;
            EXPECT_GT(a, 0.0);
        }
        double prev = 0;
        for (double th = 0.1; th < 40; th += 0.37) {
            double cur = f->v_bdry(th);
            EXPECT_GT(cur, prev);
            prev = cur;
        }
    }
}

TEST(ValueField, ContinuityAcrossBoundary) {
    const auto& v = r1();
    for (int i = 1; i <= 50; ++i) {
        double th = 0.2 * i;
        double yb = v.boundary().y_at(th);
        double eps = 1e-11;
        EXPECT_EQ(v.region(yb - eps, th), Region::Wait);
        EXPECT_EQ(v.region(yb + eps, th), Region::Sell1);
        EXPECT_NEAR(v.value(yb - eps, th), v.value(yb + eps, th), 1e-10);
        EXPECT_NEAR(v.value(yb, th), v.v_bdry(th), 1e-14);
    }
}

TEST(ValueField, PartialsAgainstFiniteDifferences) {
    std::mt19937_64 rng(5);
    for (const ValueField* f : {&r1(), &r05()}) {
        const double lo = f == &r1() ? -3.0 : -1.5;  // r = 0.5 domain is y > -2
        std::uniform_real_distribution<double> uy(lo, 1.0), ut(0.01, 10.0);
        int n = 0;
        while (n < 200) {
            double y = uy(rng), th = ut(rng);
            const double h = 1e-6;
            auto py = [&](double x) { return f->value(x, th); };
            auto pt = [&](double t) { return f->value(y, t); };
            Partials p = f->partials(y, th);
            EXPECT_NEAR(p.v_y, oracle::central_diff(py, y, h), 1e-6) << y << " " << th;
            EXPECT_NEAR(p.v_theta, oracle::central_diff(pt, th, h), 1e-6) << y << " " << th;
            ++n;
        }
    }
}

TEST(ValueField, DirectionalIdentityInSellRegion) {
    const auto& v = r1();
    const auto& s = v.spec();
    for (double th = 0.1; th < 10; th += 0.3) {
        double yb = v.boundary().y_at(th);
        for (double y = yb; y < 1.5; y += 0.07) {
            Partials p = v.partials(y, th);
            EXPECT_NEAR(p.v_y + p.v_theta, s.f(y), 1e-10) << y << " " << th;
        }
    }
}

TEST(ValueField, ThetaDerivativeAtZero) {
    const auto& v = r1();
    const auto& s = v.spec();
    double y0 = v.critical().y0;
    for (double y = -3; y < 1; y += 0.2) {
        double expect = y < y0 ? s.f(y0) * std::exp(-0.5 * std::log(y0 / y) * -1.0) : s.f(y);
        // exp(int_{y0}^{y} -delta/h) = exp(-(delta/beta) log(y/y0)) for linear h
        if (y < y0) expect = s.f(y0) * std::exp(-0.5 * std::log(y / y0));
        EXPECT_NEAR(v.partials(y, 0.0).v_theta, expect, 1e-12) << y;
        double fd = (v.value(y, 1e-7) - v.value(y, 0.0)) / 1e-7;
        EXPECT_NEAR(fd, expect, 1e-5) << y;
    }
}

TEST(ValueField, TwoSidedVariant) {
    const auto& v = r1();
    const auto& s = v.spec();
    for (double th : {0.5, 2.0, 6.0}) {
        double yb = v.boundary().y_at(th);
        for (double y = yb; y < 1; y += 0.13) EXPECT_NEAR(v.value_two_sided(y, th), v.value(y, th), 1e-12);
        EXPECT_NEAR(v.value_two_sided(yb, th), v.v_bdry(th), 1e-14);
        double expect = v.v_bdry(th) - (s.F(yb) - s.F(yb - 0.2));
        EXPECT_NEAR(v.value_two_sided(yb - 0.2, th - 0.2), expect, 1e-12);
        EXPECT_EQ(v.region(yb - 0.2, th - 0.2, true), Region::Buy);
    }
}

TEST(ValueField, VariationalInequalitiesSmallGrid) {
    auto rep = check_variational_inequalities(r1(), {-3, 1, 41, 0, 10, 41});
    EXPECT_TRUE(rep.pass) << rep.summary();
    auto rep2 = check_variational_inequalities(r1(), {-3, 1, 41, 0, 10, 41}, true, 3);
    EXPECT_TRUE(rep2.pass) << rep2.summary();
    auto rep3 = check_variational_inequalities(r05(), {-1.5, 1, 37, 0, 8, 29});
    EXPECT_TRUE(rep3.pass) << rep3.summary();
}

TEST(ValueField, VIReportDeterministicAcrossWorkers) {
    auto a = check_variational_inequalities(r1(), {-3, 1, 23, 0, 10, 19}, true, 1);
    auto b = check_variational_inequalities(r1(), {-3, 1, 23, 0, 10, 19}, true, 4);
    EXPECT_EQ(a.points, b.points);
    EXPECT_EQ(a.hjb_max, b.hjb_max);
    EXPECT_EQ(a.sell_margin_min, b.sell_margin_min);
    EXPECT_EQ(a.direction_equality_max, b.direction_equality_max);
}

TEST(ValueField, WaitRegionStrictInequality) {
    const auto& v = r1();
    const auto& s = v.spec();
    for (int th = 1; th <= 9; ++th) {
        double y = v.boundary().y_at(th) - 0.5;
        Partials p = v.partials(y, th);
        EXPECT_GT(p.v_y + p.v_theta - s.f(y), 0.0);
    }
}

TEST(ValueField, AppendixIdentity) {
    EXPECT_EQ(check_appendix_identity(r1(), 0.0), 0.0);
    EXPECT_LT(check_appendix_identity(r1(), 1.0), 1e-7);
    EXPECT_LT(check_appendix_identity(r05(), 5.0), 1e-7);
}

TEST(ValueField, C1PastingAcrossBoundaryAndSell2Edge) {
    for (const ValueField* f : {&r1(), &r05()}) {
        double y0 = f->critical().y0;
        const double h = 1e-5;
        // second-order one-sided differences
        auto left = [&](auto&& g, double x) { return (3 * g(x) - 4 * g(x - h) + g(x - 2 * h)) / (2 * h); };
        auto right = [&](auto&& g, double x) { return (-3 * g(x) + 4 * g(x + h) - g(x + 2 * h)) / (2 * h); };
        for (int i = 1; i <= 50; ++i) {
            double th = 0.1 * i;
            double yb = f->boundary().y_at(th);
            auto vy = [&](double y) { return f->value(y, th); };
            EXPECT_NEAR(left(vy, yb), right(vy, yb), 5e-6);
            // theta direction at fixed y through the boundary point
            auto vt = [&](double t) { return f->value(yb, t); };
            EXPECT_NEAR(left(vt, th), right(vt, th), 5e-6);
            double ye = y0 + th;
            EXPECT_NEAR(left(vy, ye), right(vy, ye), 5e-6);
        }
    }
}

TEST(ValueField, SmoothPastingCoefficientsReproduceSlope) {
    for (const ValueField* f : {&r1(), &r05()}) {
        const auto& cp = f->critical();
        double yref = 0.5 * cp.y0;
        for (int i = 0; i < 30; ++i) {
            double y = cp.y0 - (cp.y0 - cp.y_inf - 0.05) * i / 29.0;
            double h = 1e-6;
            double m1p = (f->pasting_coefficients(y + h, yref).first - f->pasting_coefficients(y - h, yref).first) /
                         (2 * h);
            double m2 = f->pasting_coefficients(y, yref).second;
            EXPECT_NEAR(m1p / m2, f->boundary().slope_at(y), 1e-6 * std::max(1.0, std::abs(m1p / m2))) << y;
        }
    }
}

TEST(ValueField, NonnegativeAndMonotoneInImpact) {
    const auto& v = r1();
    for (double th = 0; th <= 10; th += 0.5) {
        double prev = -1;
        for (double y = -3; y <= 1; y += 0.02) {
            double cur = v.value(y, th);
            EXPECT_GE(cur, 0.0);
            EXPECT_GE(cur, prev - 1e-14) << y << " " << th;
            prev = cur;
        }
    }
}
