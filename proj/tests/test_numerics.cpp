#include <cmath>
#include <random>

#include <gtest/gtest.h>
#include <boost/math/special_functions/lambert_w.hpp>

#include "mlob/errors.hpp"
#include "mlob/numerics.hpp"
#include "oracles.hpp"

using namespace mlob;

TEST(LambertW, TrivialValues) {
    EXPECT_EQ(lambert_w(0.0), 0.0);
    EXPECT_NEAR(lambert_w(std::exp(1.0)), 1.0, 1e-15);
}

TEST(LambertW, AtOneMatchesFixedPoint) {
    double w = 0.5;
    for (int i = 0; i < 100; ++i) w = (w * w * std::exp(w) + 1.0) / (std::exp(w) * (w + 1.0));
    EXPECT_NEAR(lambert_w(1.0), w, 1e-15);
    EXPECT_NEAR(lambert_w(1.0), 0.5671432904, 1e-10);
}

TEST(LambertW, DefiningRelationAndBoostAgreement) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> e(-30, 30);
    for (int i = 0; i < 2000; ++i) {
        double x = std::exp(e(rng));
        double w = lambert_w(x);
        EXPECT_LE(std::abs(w * std::exp(w) - x), 1e-14 * x) << x;
        EXPECT_LE(std::abs(w - boost::math::lambert_w0(x)), 1e-14 * std::max(1.0, w)) << x;
    }
}

TEST(LambertW, NegativeArgumentRejected) { EXPECT_THROW(lambert_w(-0.1), DomainError); }

TEST(FindRoot, CubicAndBracketErrors) {
    double r = find_root([](double x) { return x * x * x - 2.0; }, 0.0, 2.0);
    EXPECT_NEAR(r, std::cbrt(2.0), 1e-14);
    EXPECT_THROW(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), RangeError);
}

TEST(Integrate, AgreesWithSimpsonOracle) {
    auto g = [](double x) { return std::exp(-x) * std::sin(3 * x) + 1.0 / (2.0 + x); };
    double a = integrate(g, 0.0, 4.0);
    double b = oracle::simpson(g, 0.0, 4.0, 1e-13);
    EXPECT_NEAR(a, b, 1e-11);
    EXPECT_DOUBLE_EQ(integrate(g, 1.0, 1.0), 0.0);
}

TEST(HermiteCurve, ReproducesCubicsAndInverts) {
    std::vector<double> x, v, d;
    for (int i = 0; i <= 10; ++i) {
        double t = -0.3 * i;  // decreasing knots
        x.push_back(t);
        v.push_back(-t * t * t + 2 * t * t - 5 * t);  // increasing as t decreases
        d.push_back(-3 * t * t + 4 * t - 5);
    }
    HermiteCurve hc(x, v, d);
    for (double t = -2.95; t < 0; t += 0.17) {
        double exact = -t * t * t + 2 * t * t - 5 * t;
        EXPECT_NEAR(hc.value(t), exact, 1e-12);
        EXPECT_NEAR(hc.inverse(exact), t, 1e-12);
    }
    EXPECT_THROW(hc.value(0.5), RangeError);
}
