#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mlob/errors.hpp"
#include "mlob/market_model.hpp"
#include "oracles.hpp"

using namespace mlob;

TEST(PowerLawSpec, ExampleValues) {
    auto s = power_law_spec({1, 1, 1}, 0.5);
    EXPECT_DOUBLE_EQ(s.f(0.0), 1.0);
    for (double y : {-3.0, -0.5, 0.0, 2.0}) EXPECT_DOUBLE_EQ(s.lambda(y), 1.0);
    auto s2 = power_law_spec({2, 0.5, 1}, 0.5);
    EXPECT_NEAR(s2.f(2.0), 2.25, 1e-14);
    // cross-check with exp of the integrated lambda
    double via_lambda = std::exp(oracle::simpson([&](double y) { return s2.lambda(y); }, 0.0, 2.0, 1e-14));
    EXPECT_NEAR(s2.f(2.0), via_lambda, 1e-12);
}

TEST(PowerLawSpec, FMatchesExpOfIntegratedLambda) {
    for (double r : {0.0, 0.5, 1.0, 1.3}) {
        auto s = power_law_spec({1.5, r, 1}, 0.2);
        for (double y = -1.0; y <= 0.5; y += 0.05) {
            double ref = std::exp(oracle::simpson([&](double x) { return s.lambda(x); }, 0.0, y, 1e-14));
            EXPECT_LE(oracle::rel_err(s.f(y), ref), 1e-8) << r << " " << y;
        }
    }
}

TEST(PowerLawSpec, RejectsInadmissibleParameters) {
    double beta = 1, delta = 0.5;
    EXPECT_THROW(power_law_spec({1, 1 + beta / (beta + delta), beta}, delta), ValidationError);
    EXPECT_THROW(power_law_spec({1, -0.1, 1}, 0.5), ValidationError);
    EXPECT_THROW(power_law_spec({1, 1, 1}, 0.0), ValidationError);
    EXPECT_THROW(power_law_spec({1, 1, 1}, -0.5), ValidationError);
    EXPECT_NO_THROW(power_law_spec({1, 1, 1}, 0.0, true));
    try {
        power_law_spec({1, 1, -1}, 0.5);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("h' > 0"), std::string::npos);
    }
}

TEST(CheckAssumptions, PresetIsValidWithBrackets) {
    auto s = power_law_spec({1, 1, 1}, 0.5);
    auto rep = check_assumptions(s, {-3, 0});
    EXPECT_TRUE(rep.valid) << rep.summary();
    ASSERT_TRUE(rep.y0_bracket && rep.yinf_bracket);
    EXPECT_LE(rep.y0_bracket->lo, -0.5);
    EXPECT_GE(rep.y0_bracket->hi, -0.5);
    EXPECT_LE(rep.yinf_bracket->lo, -1.5);
    EXPECT_GE(rep.yinf_bracket->hi, -1.5);
    EXPECT_LT(rep.y0_bracket->hi - rep.y0_bracket->lo, 1e-3);
}

TEST(CheckAssumptions, DecreasingResilienceIsInvalid) {
    auto s = custom_spec([](double y) { return -y; }, [](double y) { return std::exp(y); },
                         [](double y) { return std::expm1(y); }, 0.5, {});
    auto rep = check_assumptions(s, {-3, 0});
    EXPECT_FALSE(rep.valid);
    EXPECT_FALSE(rep.h_prime_positive);
    EXPECT_TRUE(rep.f_increasing);
}

TEST(CheckAssumptions, MissingRootIsReported) {
    auto s = power_law_spec({1, 1, 1}, 0.5);
    try {
        check_assumptions(s, {-1, 0});  // y0 inside, y_inf = -1.5 outside
        FAIL();
    } catch (const RootsNotBracketed& e) {
        EXPECT_NE(std::string(e.what()).find("y_inf"), std::string::npos);
    }
}

TEST(CheckAssumptions, CustomSpecWithFiniteDifferences) {
    double beta = 0.8;
    auto s = custom_spec([=](double y) { return beta * y; }, [](double y) { return std::exp(y); },
                         [](double y) { return std::expm1(y); }, 0.3, {});
    auto rep = check_assumptions(s, {-4, 0});
    EXPECT_TRUE(rep.valid) << rep.summary();
}

TEST(BlockTrade, ExamplesAndSplitting) {
    auto s = power_law_spec({1, 1, 1}, 0.5);
    EXPECT_NEAR(block_trade_proceeds(s, 0, 1), 1 - std::exp(-1.0), 1e-15);
    EXPECT_EQ(block_trade_proceeds(s, 0.3, 0), 0.0);
    EXPECT_NEAR(block_trade_proceeds(s, 0, -1), -(std::exp(1.0) - 1), 1e-14);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uy(-0.5, 0.2), ua(0.0, 0.3);
    for (double r : {0.3, 1.0, 1.4}) {
        auto sp = power_law_spec({1, r, 1}, 0.5);
        for (int i = 0; i < 100; ++i) {
            double y = uy(rng), a = ua(rng), b = ua(rng);
            double lhs = block_trade_proceeds(sp, y, a + b);
            double rhs = block_trade_proceeds(sp, y, a) + block_trade_proceeds(sp, y - a, b);
            EXPECT_NEAR(lhs, rhs, 1e-14);
            double q = oracle::simpson([&](double x) { return sp.f(y - x); }, 0.0, a + b, 1e-15);
            EXPECT_LE(oracle::rel_err(lhs, q), 1e-10);
        }
    }
}

TEST(BlockTrade, ExhaustedBook) {
    // r > 1: finite ask depth, buying beyond c/(r-1) is impossible
    auto s = power_law_spec({1, 1.3, 1}, 0.5);
    EXPECT_THROW(block_trade_proceeds(s, 0, -4.0), DomainError);
    // r < 1: finite bid depth
    auto s2 = power_law_spec({1, 0.5, 1}, 0.5);
    EXPECT_THROW(block_trade_proceeds(s2, 0, 2.5), DomainError);
}
