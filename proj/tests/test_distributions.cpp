#include "esjs/distributions.hpp"
#include "esjs/survival.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

using namespace esjs;

namespace {

struct Case {
    ParametricModel model;
    double lower;  // integration start (support lower bound or far left tail)
    std::vector<double> grid;
};

std::vector<Case> cases() {
    return {
        {make_model(Family::Normal, {0.5, 2.0}), -40.0, {-3.0, 0.0, 0.5, 2.0, 6.0}},
        {make_model(Family::Uniform, {-1.0, 3.0}), -1.0, {-0.5, 0.0, 1.0, 2.9}},
        {make_model(Family::LogNormal, {0.0, 1.0}), 0.0, {0.1, 0.5, 1.0, 3.0, 10.0}},
        {make_model(Family::Gamma, {2.0, 2.0}), 0.0, {0.5, 2.0, 4.0, 10.0}},
        {make_model(Family::Gamma, {50.0, 2.0}), 0.0, {80.0, 100.0, 120.0}},
        {make_model(Family::Weibull, {1.5, 2.0}), 0.0, {0.3, 1.0, 2.0, 5.0}},
        {make_model(Family::Beta, {2.0, 2.0}), 0.0, {0.1, 0.5, 0.9}},
        {make_model(Family::Beta, {60.0, 30.0}), 0.0, {0.6, 0.66, 0.7}},
        {make_model(Family::QGaussian, {3.0, 1.5}), -1e4, {-2.0, 0.0, 1.0, 4.0}},
        {make_model(Family::Exponential, {2.0}), 0.0, {0.5, 2.0, 7.0}},
        {make_model(Family::Pareto, {2.5}), 1.0, {1.0, 1.5, 3.0, 10.0}},
    };
}

}  // namespace

TEST(Density, PointValues) {
    EXPECT_NEAR(density(make_model(Family::Normal, {0.0, 1.0}), 0.0), 1.0 / std::sqrt(2.0 * std::numbers::pi),
                1e-15);
    EXPECT_NEAR(density(make_model(Family::Normal, {0.0, 1.0}), 0.0), 0.39894, 1e-5);
    EXPECT_DOUBLE_EQ(density(make_model(Family::Uniform, {0.0, 2.0}), 1.0), 0.5);
    EXPECT_EQ(density(make_model(Family::Uniform, {0.0, 2.0}), 3.0), 0.0);
    EXPECT_EQ(density(make_model(Family::Beta, {2.0, 2.0}), 1.5), 0.0);
    EXPECT_EQ(density(make_model(Family::Pareto, {2.0}), 0.5), 0.0);
}

TEST(Density, GammaIntegratesToOne) {
    const auto m = make_model(Family::Gamma, {2.0, 2.0});
    const double total = oracle::integrate([&](double x) { return density(m, x); }, 0.0, 200.0, 1e-12);
    EXPECT_NEAR(total, 1.0, 1e-8);
}

TEST(Density, BetaUsesStandardNormalisation) {
    const auto m = make_model(Family::Beta, {2.0, 2.0});
    // 6 x (1 - x) at 0.5.
    EXPECT_NEAR(density(m, 0.5), 1.5, 1e-14);
    EXPECT_NEAR(oracle::integrate([&](double x) { return density(m, x); }, 0.0, 1.0), 1.0, 1e-10);
}

TEST(Density, QGaussianMatchesPrintedForm) {
    const double lambda = 4.0;
    const double x0 = 1.3;
    const auto m = make_model(Family::QGaussian, {lambda, x0});
    for (const double x : {-2.0, 0.0, 0.7, 5.0}) {
        const double printed = std::tgamma(lambda / 2.0) / (std::sqrt(std::numbers::pi * x0 * x0) *
                                                             std::tgamma((lambda - 1.0) / 2.0)) *
                               std::pow(x0 * x0 / (x0 * x0 + x * x), lambda / 2.0);
        EXPECT_NEAR(density(m, x), printed, 1e-14);
    }
}

TEST(Density, LogDensityAgrees) {
    for (const auto& c : cases()) {
        for (const double x : c.grid) {
            EXPECT_NEAR(log_density(c.model, x), std::log(density(c.model, x)), 1e-12)
                << family_name(c.model.family) << " at " << x;
        }
    }
}

TEST(SurvivalOf, ComplementOfIntegratedDensity) {
    for (const auto& c : cases()) {
        for (const double x : c.grid) {
            const double cdf = oracle::integrate([&](double t) { return density(c.model, t); }, c.lower, x, 1e-13);
            EXPECT_NEAR(1.0 - survival_of(c.model, x), cdf, 1e-7) << family_name(c.model.family) << " at " << x;
        }
    }
}

TEST(SurvivalOf, ClosedFormPoints) {
    EXPECT_NEAR(survival_of(make_model(Family::Exponential, {3.0}), 3.0), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(survival_of(make_model(Family::Exponential, {3.0}), 3.0), 0.36788, 1e-5);
    EXPECT_EQ(survival_of(make_model(Family::Pareto, {2.0}), 1.0), 1.0);
    EXPECT_NEAR(survival_of(make_model(Family::Beta, {2.0, 2.0}), 0.5), 0.5, 1e-15);
}

TEST(SurvivalOf, MonotoneWithLimits) {
    for (const auto& c : cases()) {
        double prev = 1.0;
        for (double x = c.lower - 1.0; x < c.grid.back() * 3.0 + 10.0; x += 0.25) {
            const double s = survival_of(c.model, x);
            EXPECT_LE(s, prev + 1e-15);
            EXPECT_GE(s, 0.0);
            EXPECT_LE(s, 1.0);
            prev = s;
        }
        EXPECT_NEAR(survival_of(c.model, 1e9), 0.0, 1e-3) << family_name(c.model.family);
    }
}

TEST(SampleFrom, UniformStaysInSupport) {
    const auto s = sample_from(make_model(Family::Uniform, {0.0, 1.0}), 10000, 3);
    EXPECT_GE(s.min(), 0.0);
    EXPECT_LE(s.max(), 1.0);
}

TEST(SampleFrom, NormalMoments) {
    const auto s = sample_from(make_model(Family::Normal, {0.0, 1.0}), 100000, 4);
    const auto v = s.values();
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / 1e5;
    double ss = 0.0;
    for (const double x : v) ss += (x - mean) * (x - mean);
    EXPECT_LT(std::fabs(mean), 0.02);
    EXPECT_LT(std::fabs(std::sqrt(ss / 1e5) - 1.0), 0.02);
}

TEST(SampleFrom, Deterministic) {
    for (const auto& c : cases()) {
        EXPECT_EQ(sample_from(c.model, 500, 77), sample_from(c.model, 500, 77));
        EXPECT_NE(sample_from(c.model, 500, 77), sample_from(c.model, 500, 78));
    }
}

TEST(SampleFrom, GlivenkoCantelli) {
    for (const auto& c : cases()) {
        const auto sample = sample_from(c.model, 100000, 5);
        const auto emp = empirical_survival(sample);
        double sup = 0.0;
        const auto xs = sample.values();
        for (std::size_t i = 0; i < xs.size(); i += 37) {
            sup = std::max(sup, std::fabs(emp(xs[i]) - survival_of(c.model, xs[i])));
        }
        EXPECT_LT(sup, 0.01) << family_name(c.model.family);
        for (const double x : xs) ASSERT_TRUE(in_support(c.model, x)) << family_name(c.model.family) << " " << x;
    }
}

TEST(LogLikelihood, HandValues) {
    EXPECT_EQ(log_likelihood(make_model(Family::Uniform, {0.0, 1.0}), SortedSample({0.5})), 0.0);
    EXPECT_NEAR(log_likelihood(make_model(Family::Exponential, {1.0}), SortedSample({1.0, 1.0})), -2.0, 1e-15);
    EXPECT_NEAR(log_likelihood(make_model(Family::Pareto, {2.0}), SortedSample({2.0})), std::log(2.0 / 8.0), 1e-15);
    EXPECT_NEAR(log_likelihood(make_model(Family::Pareto, {2.0}), SortedSample({2.0})), -1.3863, 1e-4);
}

TEST(LogLikelihood, OutsideSupportIsMinusInfinity) {
    const double ll = log_likelihood(make_model(Family::Beta, {2.0, 2.0}), SortedSample({0.5, 1.5}));
    EXPECT_TRUE(std::isinf(ll) && ll < 0.0);
}

TEST(LogLikelihood, GradientMatchesFiniteDifferences) {
    for (const auto& c : cases()) {
        if (c.model.family == Family::Uniform) {
            EXPECT_THROW((void)log_likelihood_gradient(c.model, SortedSample({0.0})), std::invalid_argument);
            continue;
        }
        const auto sample = sample_from(c.model, 200, 6);
        const auto grad = log_likelihood_gradient(c.model, sample);
        ASSERT_EQ(grad.size(), c.model.params.size());
        for (std::size_t k = 0; k < grad.size(); ++k) {
            auto up = c.model;
            auto down = c.model;
            const double h = 1e-5 * std::max(1.0, std::fabs(c.model.params[k]));
            up.params[k] += h;
            down.params[k] -= h;
            const double fd = (log_likelihood(up, sample) - log_likelihood(down, sample)) / (2.0 * h);
            EXPECT_NEAR(grad[k], fd, 1e-5 * std::max(1.0, std::fabs(fd)))
                << family_name(c.model.family) << " param " << k;
        }
    }
}

TEST(Family, NamesRoundTrip) {
    for (const Family f : kAllFamilies) EXPECT_EQ(parse_family(family_name(f)), f);
    EXPECT_EQ(parse_family("Log-Normal"), Family::LogNormal);
    EXPECT_EQ(parse_family("q-gaussian"), Family::QGaussian);
    EXPECT_EQ(parse_family("cauchy"), std::nullopt);
    EXPECT_EQ(parameter_count(Family::Exponential), 1u);
    EXPECT_EQ(parameter_count(Family::Pareto), 1u);
    EXPECT_EQ(parameter_count(Family::Beta), 2u);
}

TEST(Family, ParameterConstraints) {
    EXPECT_THROW((void)make_model(Family::Normal, {0.0, 0.0}), std::invalid_argument);
    EXPECT_THROW((void)make_model(Family::Uniform, {1.0, 1.0}), std::invalid_argument);
    EXPECT_THROW((void)make_model(Family::QGaussian, {1.0, 1.0}), std::invalid_argument);
    EXPECT_THROW((void)make_model(Family::Exponential, {1.0, 2.0}), std::invalid_argument);
    EXPECT_THROW((void)make_model(Family::Beta, {2.0, -1.0}), std::invalid_argument);
    EXPECT_NO_THROW((void)make_model(Family::Pareto, {0.5}));
}
