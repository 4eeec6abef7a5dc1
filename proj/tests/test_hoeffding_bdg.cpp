#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "pathcalc/bdg.hpp"
#include "pathcalc/experiments.hpp"
#include "pathcalc/hoeffding.hpp"
#include "pathcalc/rng.hpp"

using namespace pathcalc;

namespace {

// Independent oracle: rhs of x* <= 6 sqrt([x]) + 2 (h.x) computed in long double.
long double oracle_rhs(const std::vector<double>& x) {
    long double qv = 0, star = 0, hx = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const long double xk = x[k];
        const long double inc = k == 0 ? xk : xk - x[k - 1];
        qv += inc * inc;
        star = std::max(star, std::fabs(xk));
        if (k + 1 < x.size()) {
            const long double denom = std::sqrt(qv + star * star);
            const long double h = denom == 0 ? 0 : xk / denom;
            hx += h * (x[k + 1] - xk);
        }
    }
    return 6 * std::sqrt(qv) + 2 * hx;
}

}  // namespace

TEST(Hoeffding, BetaArithmetic) {
    const double beta = hoeffding_beta(1.0, 1.0);
    EXPECT_NEAR(beta, 0.7127955552758, 1e-12);
    EXPECT_GE(1.0 + beta, std::exp(0.5));
    EXPECT_GE(1.0 - beta, std::exp(-1.5));
    EXPECT_NEAR(1.0 - beta, 0.2872044447242, 1e-12);
    EXPECT_EQ(hoeffding_beta(0.0, 1.0), 0.0);
    EXPECT_EQ(hoeffding_beta(1.5, 0.0), 1.5);
}

TEST(Hoeffding, SingleStepGuarantee) {
    const Path up = Path::scalar(1.0, {0.0, 0.5}, {0.0, 1.0});
    const Path down = Path::scalar(1.0, {0.0, 0.5}, {0.0, -1.0});
    const auto base = RealizedStrategy::constant({1.0});
    const auto r = hoeffding_strategy(base, up, {1.0, 1.0, DecisionRule::EveryEvent});
    EXPECT_NEAR(1.0 + r.capital.values.back(), 1.7127955552758, 1e-12);
    EXPECT_EQ(r.guarantee_failures, 0u);
    EXPECT_EQ(r.bound_violations, 0u);
    const auto d = hoeffding_strategy(base, down, {1.0, 1.0, DecisionRule::EveryEvent});
    EXPECT_NEAR(1.0 + d.capital.values.back(), 0.2872044447242, 1e-12);
    EXPECT_EQ(d.guarantee_failures, 0u);
    EXPECT_GE(d.min_wealth, 0.0);
}

TEST(Hoeffding, ZeroLambdaIsFlat) {
    const auto r = hoeffding_strategy(RealizedStrategy::constant({1.0}), fixtures::p1(),
                                      {0.0, 1.0, DecisionRule::EveryEvent});
    for (double v : r.capital.values) EXPECT_EQ(v, 0.0);
    for (double e : r.envelope) EXPECT_EQ(e, 1.0);
}

TEST(Hoeffding, OversizedStepIsReported) {
    const Path big = Path::scalar(1.0, {0.0, 0.5}, {0.0, 3.0});
    const auto r = hoeffding_strategy(RealizedStrategy::constant({1.0}), big,
                                      {1.0, 1.0, DecisionRule::EveryEvent});
    EXPECT_GT(r.bound_violations, 0u);
}

TEST(Hoeffding, RandomWalks) {
    PhiloxStream rng(21, 0);
    for (int rep = 0; rep < 300; ++rep) {
        const Path p = random_walk_path(rng, 1 + rng.next_u32() % 60, 1.0);
        for (double lambda : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0}) {
            const auto r = hoeffding_strategy(RealizedStrategy::constant({1.0}), p,
                                              {lambda, 1.0, DecisionRule::EveryEvent});
            ASSERT_EQ(r.bound_violations, 0u);
            EXPECT_EQ(r.guarantee_failures, 0u) << "lambda " << lambda;
            EXPECT_GE(r.min_wealth, 0.0);
        }
    }
}

TEST(Hoeffding, IncrementLevelRuleOnLinearPath) {
    const Path p = Path::scalar(1.0, {0, 0.3, 0.6, 1.0}, {0, 0.9, -0.4, 1.1}, Interp::Linear);
    const auto r = hoeffding_strategy(RealizedStrategy::constant({1.0}), p,
                                      {1.0, 0.5, DecisionRule::IncrementLevel});
    EXPECT_EQ(r.bound_violations, 0u);
    EXPECT_EQ(r.guarantee_failures, 0u);
}

TEST(BDG, HandExamples) {
    const std::vector<double> a{0.0, 1.0};
    auto c = bdg_check(a);
    EXPECT_EQ(c.lhs, 1.0);
    EXPECT_EQ(c.rhs, 6.0);
    EXPECT_EQ(bdg_weights(a)[0], 0.0);
    EXPECT_TRUE(c.holds);

    const std::vector<double> b{0.0, 1.0, -1.0};
    c = bdg_check(b);
    EXPECT_DOUBLE_EQ(c.quadratic, 5.0);
    EXPECT_NEAR(c.transform, -std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(c.rhs, 6.0 * std::sqrt(5.0) - 2.0 * std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(c.rhs, 10.58798, 1e-5);
    EXPECT_TRUE(c.holds);

    const std::vector<double> z(7, 0.0);
    c = bdg_check(z);
    EXPECT_EQ(c.lhs, 0.0);
    EXPECT_EQ(c.rhs, 0.0);
    EXPECT_TRUE(c.holds);
    for (double h : bdg_weights(z)) EXPECT_EQ(h, 0.0);
}

TEST(BDG, SingleAndEmpty) {
    const std::vector<double> one{-2.5};
    const auto c = bdg_check(one);
    EXPECT_EQ(c.lhs, 2.5);
    EXPECT_EQ(c.rhs, 15.0);
    EXPECT_TRUE(bdg_check(std::vector<double>{}).holds);
}

TEST(BDG, MatchesOracleOnRandomSequences) {
    PhiloxStream rng(22, 0);
    for (int rep = 0; rep < 5000; ++rep) {
        const auto x = random_bdg_sequence(rng, 200);
        const auto c = bdg_check(x);
        const long double rhs = oracle_rhs(x);
        EXPECT_NEAR(c.rhs, static_cast<double>(rhs), 1e-10 * (1.0 + std::fabs(c.rhs)));
        EXPECT_TRUE(c.holds);
    }
}

TEST(PathwiseBDG, ConstantIntegrandOnP1) {
    const auto F = StepIntegrand::constant({1.0});
    const auto r = pathwise_bdg_check(F, fixtures::p1(), 30);
    EXPECT_DOUBLE_EQ(r.lhs, 1.3);
    EXPECT_NEAR(r.quadratic, 1.21, 1e-12);
    EXPECT_GE(r.rhs, 6.6 - 1e-9);
    EXPECT_TRUE(r.holds);
    EXPECT_EQ(r.theta, 3.0);
}

TEST(PathwiseBDG, ZeroIntegrand) {
    const auto r = pathwise_bdg_check(StepIntegrand::constant({0.0}), fixtures::p1(), 5);
    EXPECT_EQ(r.lhs, 0.0);
    EXPECT_EQ(r.quadratic, 0.0);
    EXPECT_EQ(r.phi_dot_s, 0.0);
    EXPECT_EQ(r.correction, 0.0);
    EXPECT_TRUE(r.holds);
}

TEST(PathwiseBDG, TruncationAtPathSize) {
    const auto F = StepIntegrand::constant({0.5});
    const PathwiseBDGTruncation t{10.0, 1.0, 1.0};
    const auto r = pathwise_bdg_check(F, fixtures::p1(), 10, &t);
    EXPECT_EQ(r.theta, 3.0);  // |S| first reaches 1 at time 3
    EXPECT_TRUE(r.holds);
    const auto s = bdg_strategy(F, fixtures::p1(), 10, &t);
    EXPECT_NO_THROW(s.validate());
}

TEST(PathwiseBDG, RandomStepPaths) {
    PhiloxStream rng(23, 0);
    const PsiSpec psi = PsiSpec::affine(1.0, 1.0);
    for (int rep = 0; rep < 300; ++rep) {
        const Path p = random_step_path(rng, 40, 0.3, &psi);
        const auto F = StepIntegrand::constant({rng.normal()});
        const int n = 1 + static_cast<int>(rng.next_u32() % 10);
        EXPECT_TRUE(pathwise_bdg_check(F, p, n).holds);
        const PathwiseBDGTruncation t{1.0, 2.0, 1.0};
        EXPECT_TRUE(pathwise_bdg_check(F, p, n, &t).holds);
    }
}
