#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <iostream>

#include "fixtures.hpp"
#include "pathcalc/errors.hpp"
#include "pathcalc/partitions.hpp"
#include "pathcalc/rng.hpp"

using namespace pathcalc;

namespace {

// Direct transcription of the stopping rule for step paths: scan events,
// look for any dyadic level other than the current one between the value at
// the last stopping time and the present value.
struct NaivePartition {
    std::vector<double> times;
    std::vector<double> levels;
};

NaivePartition naive_partition(const Path& p, int n) {
    const double h = std::ldexp(1.0, -n);
    NaivePartition out;
    double level = std::floor(p.value(0, 0) / h) * h;
    double anchor = p.value(0, 0);
    out.times.push_back(0.0);
    out.levels.push_back(level);
    for (std::size_t e = 1; e < p.size(); ++e) {
        const double v = p.value(e, 0);
        const double lo = std::min(anchor, v), hi = std::max(anchor, v);
        bool found = false;
        double best = 0.0;
        for (double j = std::floor(lo / h) - 1; j <= std::ceil(hi / h) + 1; j += 1.0) {
            const double L = j * h;
            if (L < lo || L > hi || L == level) continue;
            if (!found || std::abs(L - v) < std::abs(best - v)) best = L;
            found = true;
        }
        if (found) {
            out.times.push_back(p.time(e));
            out.levels.push_back(best);
            level = best;
            anchor = v;
        }
    }
    return out;
}

}  // namespace

TEST(Partition, P1GenerationOne) {
    const auto part = lebesgue_partition_1d(fixtures::p1(), 1);
    EXPECT_EQ(part.times, (std::vector<double>{0, 1, 3}));
    ASSERT_EQ(part.size(), 3u);
    EXPECT_EQ(part.level(0), 0.0);
    EXPECT_EQ(part.level(1), 0.5);
    EXPECT_EQ(part.level(2), 1.0);
}

TEST(Partition, ConstantPath) {
    for (int n = 1; n < 10; ++n) {
        const auto part = lebesgue_partition_1d(fixtures::constant(0.3), n);
        EXPECT_EQ(part.times, std::vector<double>{0.0});
    }
    const Path c2(2, 1.0, {0.0}, {1.0, 2.0}, Interp::Step);
    EXPECT_EQ(lebesgue_partition_nd(c2, 5).times, std::vector<double>{0.0});
}

TEST(Partition, LinearRootFinding) {
    const Path lin = Path::scalar(1.0, {0, 1}, {0, 1}, Interp::Linear);
    const auto part = lebesgue_partition_1d(lin, 1);
    EXPECT_EQ(part.times, (std::vector<double>{0, 0.5, 1.0}));
    EXPECT_EQ(part.level(1), 0.5);
    EXPECT_EQ(part.level(2), 1.0);
}

TEST(Partition, LinearTimesHitTheirLevels) {
    PhiloxStream rng(8, 0);
    for (int rep = 0; rep < 40; ++rep) {
        std::vector<double> t{0.0}, v{rng.normal()};
        for (int k = 1; k <= 30; ++k) {
            t.push_back(k / 30.0);
            v.push_back(v.back() + 0.3 * rng.normal());
        }
        const Path p = Path::scalar(1.0, t, v, Interp::Linear);
        for (int n = 1; n <= 6; ++n) {
            const auto part = lebesgue_partition_1d(p, n);
            const double h = std::ldexp(1.0, -n);
            for (std::size_t k = 1; k < part.size(); ++k) {
                EXPECT_LT(part.times[k - 1], part.times[k]);
                EXPECT_NEAR(p.eval(part.times[k], 0), part.level(k), 1e-9);
                EXPECT_EQ(std::abs(part.level_index[k] - part.level_index[k - 1]), 1) << "n=" << n;
                (void)h;
            }
        }
    }
}

TEST(Partition, MatchesNaiveOracleOnStepPaths) {
    PhiloxStream rng(21, 0);
    for (int rep = 0; rep < 300; ++rep) {
        const int m = 1 + static_cast<int>(rng.next_u32() % 25);
        std::vector<double> t{0.0}, v{rng.normal()};
        for (int k = 1; k <= m; ++k) {
            t.push_back(k / static_cast<double>(m + 1));
            // quarter-grid values make exact level hits and midpoint ties common
            v.push_back(rep % 3 == 0 ? std::round(8.0 * rng.normal()) / 8.0 : v.back() + rng.normal());
        }
        const Path p = Path::scalar(1.0, t, v);
        for (int n = 1; n <= 6; ++n) {
            const auto got = lebesgue_partition_1d(p, n);
            const auto want = naive_partition(p, n);
            ASSERT_EQ(got.times, want.times) << "rep " << rep << " n " << n;
            for (std::size_t k = 0; k < got.size(); ++k) EXPECT_EQ(got.level(k), want.levels[k]);
        }
    }
}

TEST(Partition, NdReducesToOneDimension) {
    const Path p = fixtures::p1();
    for (int n = 1; n < 8; ++n) {
        EXPECT_EQ(lebesgue_partition_nd(p, n).times, lebesgue_partition_1d(p, n).times);
    }
}

TEST(Partition, NdIsUnionOverCoordinatesAndSums) {
    const Path p(2, 1.0, {0, 0.25, 0.5, 0.75}, {0, 0, 0.6, -0.5, 0.6, 0.1, 0.2, 0.1}, Interp::Step);
    const int n = 1;
    std::vector<double> expect;
    for (const Path& q : {p.component(0), p.component(1), p.coordinate_sum(0, 1)}) {
        for (double t : lebesgue_partition_1d(q, n).times) expect.push_back(t);
    }
    std::sort(expect.begin(), expect.end());
    expect.erase(std::unique(expect.begin(), expect.end()), expect.end());
    EXPECT_EQ(lebesgue_partition_nd(p, n).times, expect);
}

TEST(Partition, RejectsMultiDimAndBadGeneration) {
    const Path p(2, 1.0, {0.0}, {1.0, 2.0}, Interp::Step);
    EXPECT_THROW(lebesgue_partition_1d(p, 1), ContractError);
    EXPECT_THROW(lebesgue_partition_1d(fixtures::p1(), 0), ContractError);
    EXPECT_THROW(lebesgue_partition_1d(fixtures::p1(), kMaxGeneration + 1), ContractError);
}

TEST(Partition, Chi) {
    const auto part = lebesgue_partition_1d(fixtures::p1(), 1);
    EXPECT_EQ(chi(part, 2.5), 1.0);
    EXPECT_EQ(chi(part, 3.0), 3.0);
    EXPECT_EQ(chi(part, 0.0), 0.0);
}

// Nesting is not asserted: the tie rule can in principle break it on
// exact-midpoint paths. Counterexamples are printed instead.
TEST(Partition, NestingSurvey) {
    PhiloxStream rng(77, 0);
    int checked = 0, broken = 0;
    for (int rep = 0; rep < 400; ++rep) {
        std::vector<double> t{0.0}, v{0.0};
        for (int k = 1; k <= 20; ++k) {
            t.push_back(k / 21.0);
            v.push_back(rep % 2 ? std::round(16.0 * rng.normal()) / 16.0 : v.back() + 0.5 * rng.normal());
        }
        const Path p = Path::scalar(1.0, t, v, rep % 4 < 2 ? Interp::Step : Interp::Linear);
        for (int n = 1; n < 7; ++n) {
            ++checked;
            if (!is_nested(lebesgue_partition_1d(p, n), lebesgue_partition_1d(p, n + 1))) {
                ++broken;
                std::cout << "not nested: rep " << rep << " n " << n << "\n";
            }
        }
    }
    std::cout << "nesting survey: " << broken << " of " << checked << " pairs not nested\n";
    SUCCEED();
}
