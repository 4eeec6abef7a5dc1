#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "pathcalc/errors.hpp"
#include "pathcalc/rng.hpp"
#include "pathcalc/simulate.hpp"

using namespace pathcalc;

TEST(Philox, KnownAnswerVectors) {
    using A4 = std::array<std::uint32_t, 4>;
    EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
              (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, StreamsAreIndependentOfConsumption) {
    PhiloxStream a(9, 3), b(9, 3), other(9, 4);
    for (int k = 0; k < 17; ++k) other.next_u64();
    for (int k = 0; k < 100; ++k) EXPECT_EQ(a.next_u32(), b.next_u32());
    PhiloxStream c(9, 3);
    PhiloxStream d(9, 4);
    EXPECT_NE(c.next_u64(), d.next_u64());
}

TEST(Philox, UniformMoments) {
    PhiloxStream s(1, 0);
    double sum = 0, sq = 0;
    const int N = 200000;
    for (int k = 0; k < N; ++k) {
        const double z = s.normal();
        sum += z;
        sq += z * z;
    }
    EXPECT_NEAR(sum / N, 0.0, 5.0 / std::sqrt(N));
    EXPECT_NEAR(sq / N, 1.0, 0.02);
}

TEST(Simulate, ConstantKindGivesZeroPath) {
    SimSpec s;
    s.kind = SimKind::Constant;
    const Path p = simulate(s);
    EXPECT_EQ(sup_norm(p), 0.0);
}

TEST(Simulate, OscillatorMatchesHandTable) {
    SimSpec s;
    s.kind = SimKind::Oscillator;
    s.steps = 4;
    s.amplitude = 1.0;
    s.horizon = 4.0;
    EXPECT_TRUE(simulate(s) == fixtures::p2());
}

TEST(Simulate, Deterministic) {
    for (auto kind : {SimKind::Brownian, SimKind::GeometricBrownian, SimKind::JumpDiffusion}) {
        SimSpec s;
        s.kind = kind;
        s.steps = 300;
        s.seed = 42;
        s.jump_intensity = 4.0;
        EXPECT_TRUE(simulate(s) == simulate(s));
        const auto e1 = ensemble(s, 5), e2 = ensemble(s, 5);
        ASSERT_EQ(e1.size(), 5u);
        for (std::size_t i = 0; i < 5; ++i) {
            EXPECT_TRUE(e1[i] == e2[i]);
            EXPECT_TRUE(e1[i] == simulate(s, i));
        }
        EXPECT_TRUE(ensemble(s, 1)[0] == simulate(s, 0));
    }
}

TEST(Simulate, InvalidSettings) {
    SimSpec s;
    s.steps = 0;
    EXPECT_THROW(simulate(s), ContractError);
    s.steps = 10;
    s.volatility = -1.0;
    EXPECT_THROW(simulate(s), ContractError);
    s.volatility = 1.0;
    s.nonnegative = true;
    EXPECT_THROW(simulate(s), ContractError);
    s.kind = SimKind::Constant;
    s.value = -0.5;
    EXPECT_THROW(simulate(s), ContractError);
}

TEST(Simulate, ModesAndPositivity) {
    SimSpec s;
    s.steps = 200;
    s.kind = SimKind::Brownian;
    EXPECT_EQ(simulate(s).mode(), Interp::Linear);
    s.kind = SimKind::GeometricBrownian;
    const Path g = simulate(s);
    EXPECT_EQ(g.mode(), Interp::Linear);
    for (double v : g.values()) EXPECT_GT(v, 0.0);
    s.kind = SimKind::JumpDiffusion;
    EXPECT_EQ(simulate(s).mode(), Interp::Step);
}

TEST(Simulate, EveryPathIsMember) {
    for (auto kind : {SimKind::Brownian, SimKind::GeometricBrownian, SimKind::JumpDiffusion,
                      SimKind::Oscillator, SimKind::Constant}) {
        for (const auto& psi : {PsiSpec::constant(0.05), PsiSpec::affine(0.1, 0.5), PsiSpec::constant(0.0)}) {
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                SimSpec s;
                s.kind = kind;
                s.steps = 150;
                s.seed = seed;
                s.psi = psi;
                s.jump_intensity = 20.0;
                s.jump_mean = -0.2;
                s.jump_std = 0.3;
                s.dim = 1 + seed % 2;
                s.nonnegative = seed % 2 == 1 && kind != SimKind::Brownian;
                const Path p = simulate(s);
                EXPECT_TRUE(check_membership(p, s.sample_space()).pass)
                    << to_string(kind) << " " << psi.to_string() << " seed " << seed;
            }
        }
    }
}

TEST(Simulate, DriftlessTerminalMeanNearZero) {
    SimSpec s;
    s.steps = 256;
    s.seed = 2024;
    const auto paths = ensemble(s, 100);
    double m = 0.0;
    for (const auto& p : paths) m += p.eval(1.0, 0) - p.eval(0.0, 0);
    m /= 100.0;
    EXPECT_LE(std::abs(m), 4.0 * 1.0 / std::sqrt(100.0));
}

TEST(Simulate, SettingsJsonRoundTrip) {
    SimSpec s;
    s.kind = SimKind::JumpDiffusion;
    s.seed = 99;
    s.x0 = 2.5;
    s.mode = Interp::Linear;
    s.psi = PsiSpec::power(2, 0.5);
    const SimSpec back = sim_spec_from_json(to_json(s));
    EXPECT_EQ(to_json(back), to_json(s));
}
