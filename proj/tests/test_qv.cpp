#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "pathcalc/errors.hpp"
#include "pathcalc/quadratic_variation.hpp"
#include "pathcalc/rng.hpp"
#include "pathcalc/simulate.hpp"

using namespace pathcalc;

TEST(DiscreteQV, P1GenerationOne) {
    const Path p = fixtures::p1();
    const auto part = lebesgue_partition_1d(p, 1);
    EXPECT_NEAR(discrete_qv(p, part, 3.0), 0.85, 1e-15);
    EXPECT_NEAR(discrete_qv(p, part, 2.0), 0.40, 1e-15);
    EXPECT_EQ(discrete_qv(p, part, 0.0), 0.0);
}

TEST(DiscreteQV, ConstantIsZero) {
    const Path c = fixtures::constant(0.7);
    for (int n = 1; n < 6; ++n) {
        EXPECT_EQ(discrete_qv(c, lebesgue_partition_1d(c, n), 1.0), 0.0);
    }
}

TEST(DiscreteQV, CrossTermsOfIdenticalCoordinates) {
    const Path p1 = fixtures::p1();
    std::vector<double> v;
    for (std::size_t k = 0; k < p1.size(); ++k) {
        v.push_back(p1.value(k, 0));
        v.push_back(p1.value(k, 0));
    }
    const Path two(2, 3.0, {0, 1, 2, 3}, v, Interp::Step);
    for (int n = 1; n < 6; ++n) {
        for (double t : {0.5, 1.0, 2.2, 3.0}) {
            EXPECT_DOUBLE_EQ(discrete_cross_qv(two, n, 0, 1, t), discrete_cross_qv(two, n, 0, 0, t));
        }
    }
}

TEST(QVLimit, PureJumpP1) {
    const auto rep = qv_limit(fixtures::p1(), 20, 1e-12);
    EXPECT_NEAR(rep.limit_T(0, 0), 1.21, 1e-14);
    EXPECT_TRUE(rep.cauchy_tol_met);
    const auto jumps = jump_identity_check(fixtures::p1(), rep);
    EXPECT_TRUE(jumps.pass);
    EXPECT_LE(jumps.max_discrepancy, 1e-15);
}

TEST(QVLimit, ConstantConvergesAtOnce) {
    const auto rep = qv_limit(fixtures::constant(2.0), 2, 1e-12);
    EXPECT_EQ(rep.limit_T(0, 0), 0.0);
    EXPECT_TRUE(rep.cauchy_tol_met);
    for (double z : rep.z_sup) EXPECT_EQ(z, 0.0);
}

TEST(QVLimit, PolarizationOnStepPaths) {
    PhiloxStream rng(31, 0);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> t{0.0}, v{rng.normal(), rng.normal()};
        for (int k = 1; k <= 10; ++k) {
            t.push_back(k / 11.0);
            v.push_back(rng.normal());
            v.push_back(rng.normal());
        }
        const Path p(2, 1.0, t, v, Interp::Step);
        const auto r = qv_limit(p, 45, 1e-12);
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                double want = 0.0;
                for (std::size_t k = 1; k < p.size(); ++k) {
                    want += (p.value(k, i) - p.value(k - 1, i)) * (p.value(k, j) - p.value(k - 1, j));
                }
                EXPECT_NEAR(r.limit_T(i, j), want, 1e-12 * (1.0 + std::abs(want)));
            }
        }
        EXPECT_DOUBLE_EQ(r.limit_T(0, 1), r.limit_T(1, 0));
        EXPECT_TRUE(jump_identity_check(p, r).pass);
    }
}

TEST(QVLimit, LinearPathsHaveTrivialJumpIdentity) {
    SimSpec s;
    s.steps = 500;
    const Path p = simulate(s);
    const auto r = qv_limit(p, 6, 1e-3);
    EXPECT_TRUE(jump_identity_check(p, r).pass);
    // non-decreasing along the generation's own partition times
    for (std::size_t g = 0; g < r.qv.size(); ++g) {
        double prev = 0.0;
        for (double t : r.partition_times[g]) {
            if (t > p.horizon()) break;
            const double q = r.at(g, r.grid_index(t), 0, 0);
            EXPECT_GE(q, prev);
            prev = q;
        }
    }
}

TEST(ZProcess, VanishesOnceJumpsAreIsolated) {
    const Path p = fixtures::p1();
    // every event is a partition time from n = 4 on (at n = 3 the move 0.6 -> 0.4
    // stays around the tracked level 0.5), so Z^n vanishes from n = 5
    EXPECT_NEAR(z_process(p, 4, 3.0), 0.36, 1e-15);
    for (int n = 5; n < 10; ++n) {
        for (double t : {0.0, 0.5, 1.0, 2.5, 3.0}) EXPECT_NEAR(z_process(p, n, t), 0.0, 1e-15);
    }
    EXPECT_EQ(z_process(fixtures::constant(), 3, 0.5), 0.0);
}

TEST(KProcess, Constants) {
    EXPECT_DOUBLE_EQ(ZProcess::k_constant(1, 1.0, PsiSpec::constant(0.0)), 16.25);
    const Path c = fixtures::constant();
    for (double t : {0.0, 0.3, 1.0}) {
        EXPECT_DOUBLE_EQ(k_process(c, 1, 1.0, PsiSpec::constant(0.0), t), 16.25);
    }
    const double base = ZProcess::k_constant(6, 2.0, PsiSpec::constant(0.0));
    EXPECT_DOUBLE_EQ(k_process(fixtures::p1(), 6, 2.0, PsiSpec::constant(0.0), 3.0), base);
}

TEST(Sigma, SentinelAndThreshold) {
    EXPECT_TRUE(is_never(sigma_n_K(fixtures::constant(), 3, 1.0)));
    EXPECT_TRUE(is_never(sigma_n_K(fixtures::p1(), 5, 1e9)));
    // Z^1 of a path that jumps far at once: Z_{tau_1} is huge, so sigma fires there
    const Path big = Path::scalar(1.0, {0, 0.5}, {0.0, 40.0});
    const ZProcess z(big, 1);
    ASSERT_GE(z.fine().size(), 2u);
    EXPECT_EQ(z.sigma(1.0), z.fine().times[1]);
}

TEST(QVLimit, RejectsBadArguments) {
    EXPECT_THROW(qv_limit(fixtures::p1(), 0, 1e-9), ContractError);
    EXPECT_THROW(qv_limit(fixtures::p1(), 5, 0.0), ContractError);
}
