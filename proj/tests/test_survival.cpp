#include "esjs/distributions.hpp"
#include "esjs/error.hpp"
#include "esjs/survival.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace esjs;

namespace {

void expect_steps(const StepSurvival& s, std::vector<double> breakpoints, std::vector<double> values) {
    ASSERT_EQ(s.size(), breakpoints.size());
    for (std::size_t k = 0; k < breakpoints.size(); ++k) {
        EXPECT_DOUBLE_EQ(s.breakpoints()[k], breakpoints[k]) << "breakpoint " << k;
        EXPECT_DOUBLE_EQ(s.values()[k], values[k]) << "value " << k;
    }
}

}  // namespace

TEST(SortedSample, SortsOnConstruction) {
    const SortedSample s({3.0, 1.0, 2.0});
    EXPECT_EQ(s.vector(), (std::vector<double>{1.0, 2.0, 3.0}));
    EXPECT_EQ(s.min(), 1.0);
    EXPECT_EQ(s.max(), 3.0);
}

TEST(SortedSample, FromSortedRejectsUnorderedInput) {
    EXPECT_NO_THROW((void)SortedSample::from_sorted({1.0, 1.0, 2.0}));
    EXPECT_THROW((void)SortedSample::from_sorted({2.0, 1.0}), std::invalid_argument);
}

TEST(StepSurvival, RejectsBrokenInvariants) {
    EXPECT_THROW(StepSurvival({1.0, 1.0}, {0.5, 0.0}), std::invalid_argument);
    EXPECT_THROW(StepSurvival({1.0, 2.0}, {0.2, 0.5}), std::invalid_argument);
    EXPECT_THROW(StepSurvival({1.0}, {1.5}), std::invalid_argument);
    EXPECT_THROW(StepSurvival({1.0}, {0.5, 0.0}), std::invalid_argument);
}

TEST(EmpiricalSurvival, ThreePoints) {
    const auto s = empirical_survival(SortedSample({1.0, 2.0, 3.0}));
    expect_steps(s, {1, 2, 3}, {2.0 / 3.0, 1.0 / 3.0, 0.0});
    EXPECT_EQ(s(0.5), 1.0);
    EXPECT_DOUBLE_EQ(s(1.0), 2.0 / 3.0);  // right-continuous
    EXPECT_DOUBLE_EQ(s(2.5), 1.0 / 3.0);
    EXPECT_EQ(s(3.0), 0.0);
    EXPECT_EQ(s(100.0), 0.0);
}

TEST(EmpiricalSurvival, TiesDropJointly) {
    const auto s = empirical_survival(SortedSample({1.0, 1.0, 2.0}));
    expect_steps(s, {1, 2}, {1.0 / 3.0, 0.0});
    EXPECT_EQ(s.head(), 1.0);
}

TEST(EmpiricalSurvival, EmptySampleIsAnError) {
    try {
        (void)empirical_survival(SortedSample{});
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_STREQ(e.what(), "empty sample");
    }
}

TEST(EmpiricalSurvival, NormalSampleAtZero) {
    const auto sample = sample_from(make_model(Family::Normal, {0.0, 1.0}), 100000, 11);
    EXPECT_LT(std::fabs(empirical_survival(sample)(0.0) - 0.5), 0.01);
}

TEST(EmpiricalSurvival, ComplementOfEcdfOnRandomSamples) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto raw = oracle::random_sample(rng, 1 + trial % 40);
        const auto s = empirical_survival(SortedSample(raw));
        const double n = static_cast<double>(raw.size());
        for (const double x : raw) {
            for (const double probe : {x - 1e-9, x, x + 1e-9}) {
                std::size_t at_or_below = 0;
                for (const double v : raw) at_or_below += v <= probe ? 1 : 0;
                EXPECT_NEAR(s(probe) + static_cast<double>(at_or_below) / n, 1.0, 1e-15);
            }
        }
    }
}

TEST(KmBinned, AlignedGridMatchesEmpirical) {
    const SortedSample sample({1.0, 2.0, 3.0});
    // Edges 1, 2, 3 over [0, 3].
    const auto binned = km_binned_survival(sample, 3, {0.0, 3.0});
    const auto exact = empirical_survival(sample);
    for (const double x : {1.0, 2.0, 3.0}) EXPECT_DOUBLE_EQ(binned(x), exact(x));
}

TEST(KmBinned, TwoPointsTenBins) {
    const auto s = km_binned_survival(SortedSample({0.0, 10.0}), 10, {0.0, 10.0});
    for (int edge = 1; edge <= 9; ++edge) EXPECT_DOUBLE_EQ(s(edge), 0.5) << "edge " << edge;
    EXPECT_EQ(s(10.0), 0.0);
}

TEST(KmBinned, DefaultBinCount) { EXPECT_EQ(kDefaultBins, 1'000'000u); }

TEST(KmBinned, EqualsEmpiricalAtEveryEdge) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const auto raw = oracle::random_sample(rng, 30);
        const SortedSample sample(raw);
        const std::size_t bins = 17;
        const double lo = sample.min() - 0.3;
        const double hi = sample.max() + 0.1;
        const auto s = km_binned_survival(sample, bins, {lo, hi});
        for (std::size_t k = 1; k <= bins; ++k) {
            const double edge = k == bins ? hi : lo + (hi - lo) * (static_cast<double>(k) / static_cast<double>(bins));
            EXPECT_DOUBLE_EQ(s(edge), oracle::survival(raw, edge));
        }
    }
}

TEST(KmBinned, InvalidArguments) {
    const SortedSample sample({1.0, 2.0});
    EXPECT_THROW((void)km_binned_survival(sample, 0, {0.0, 1.0}), std::invalid_argument);
    EXPECT_THROW((void)km_binned_survival(sample, 10, {1.0, 1.0}), std::invalid_argument);
    EXPECT_THROW((void)km_binned_survival(sample, 10, {2.0, 1.0}), std::invalid_argument);
}

TEST(MixtureSurvival, Idempotent) {
    const auto p = empirical_survival(SortedSample({0.3, 1.2, 1.2, 4.0}));
    EXPECT_EQ(mixture_survival(p, p), p);
}

TEST(MixtureSurvival, SingletonsAtOneAndThree) {
    const auto m = mixture_survival(empirical_survival(SortedSample({1.0})), empirical_survival(SortedSample({3.0})));
    EXPECT_DOUBLE_EQ(m(2.0), 0.5);
}

TEST(MixtureSurvival, UnequalSizes) {
    const auto m =
        mixture_survival(empirical_survival(SortedSample({1.0, 2.0})), empirical_survival(SortedSample({1.5})));
    expect_steps(m, {1.0, 1.5, 2.0}, {0.75, 0.25, 0.0});
}

TEST(MixtureSurvival, SymmetricAndBounded) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = oracle::random_sample(rng, 1 + trial % 13);
        const auto b = oracle::random_sample(rng, 1 + trial % 7);
        const auto p = empirical_survival(SortedSample(a));
        const auto q = empirical_survival(SortedSample(b));
        const auto m = mixture_survival(p, q);
        EXPECT_EQ(m, mixture_survival(q, p));
        for (const double x : oracle::union_points(a, b)) {
            EXPECT_GE(m(x), std::min(p(x), q(x)));
            EXPECT_LE(m(x), std::max(p(x), q(x)));
            EXPECT_DOUBLE_EQ(m(x), 0.5 * (p(x) + q(x)));
        }
    }
}

TEST(SurvivalEntropy, TwoPoints) {
    EXPECT_NEAR(survival_entropy(SortedSample({0.0, 1.0})), 0.5 * std::log(2.0), 1e-15);
    // Quadrature of -S log S over [0, 1] where S = 1/2.
    const double quad = oracle::integrate([](double) { return -oracle::plogp(0.5); }, 0.0, 1.0);
    EXPECT_NEAR(survival_entropy(SortedSample({0.0, 1.0})), quad, 1e-12);
    EXPECT_NEAR(survival_entropy(SortedSample({0.0, 1.0})), 0.34657, 1e-5);
}

TEST(SurvivalEntropy, SinglePointIsZero) { EXPECT_EQ(survival_entropy(SortedSample({5.0})), 0.0); }

TEST(SurvivalEntropy, ThreePoints) {
    const double expected = -(2.0 / 3.0) * std::log(2.0 / 3.0) - (1.0 / 3.0) * std::log(1.0 / 3.0);
    EXPECT_NEAR(survival_entropy(SortedSample({0.0, 1.0, 2.0})), expected, 1e-15);
    EXPECT_NEAR(survival_entropy(SortedSample({0.0, 1.0, 2.0})), 0.63651, 1e-5);
}

TEST(SurvivalEntropy, AllTiedIsZero) { EXPECT_EQ(survival_entropy(SortedSample({2.0, 2.0, 2.0})), 0.0); }

TEST(SurvivalEntropy, SpacingsFormMatchesSegmentIntegration) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<std::size_t> size(2, 500);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto raw = oracle::random_sample(rng, size(rng));
        const double spacings = survival_entropy(SortedSample(raw));
        const double exact = oracle::entropy(raw);
        EXPECT_NEAR(spacings, exact, 1e-10 * std::max(1.0, std::fabs(exact)));
        EXPECT_GE(spacings, 0.0);
        // The step-function overload integrates the same thing.
        EXPECT_NEAR(survival_entropy(empirical_survival(SortedSample(raw))), exact,
                    1e-10 * std::max(1.0, std::fabs(exact)));
    }
}

TEST(SurvivalEntropy, ShiftInvariantAndScaleEquivariant) {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 100; ++trial) {
        const auto raw = oracle::random_sample(rng, 2 + trial);
        const double base = survival_entropy(SortedSample(raw));
        auto shifted = raw;
        auto scaled = raw;
        for (auto& v : shifted) v += 3.25;
        for (auto& v : scaled) v *= 2.0;
        EXPECT_NEAR(survival_entropy(SortedSample(shifted)), base, 1e-12 * std::max(1.0, base));
        EXPECT_NEAR(survival_entropy(SortedSample(scaled)), 2.0 * base, 1e-12 * std::max(1.0, base));
    }
}

TEST(SurvivalEntropy, UnboundedStepFunctionIsInfinite) {
    EXPECT_TRUE(std::isinf(survival_entropy(StepSurvival({1.0}, {0.5}))));
}

TEST(Xlogx, ZeroConvention) {
    EXPECT_EQ(xlogx(0.0), 0.0);
    EXPECT_EQ(xlogx(1.0), 0.0);
    EXPECT_DOUBLE_EQ(xlogx(0.5), 0.5 * std::log(0.5));
}
