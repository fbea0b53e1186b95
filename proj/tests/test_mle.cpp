#include "esjs/distributions.hpp"
#include "esjs/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace esjs;

namespace {

double norm(const std::vector<double>& v) {
    double s = 0.0;
    for (const double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

TEST(FitMle, ExponentialIsSampleMean) {
    const auto m = fit_mle(Family::Exponential, SortedSample({1.0, 2.0, 3.0}));
    EXPECT_DOUBLE_EQ(m.params[0], 2.0);
}

TEST(FitMle, ParetoClosedForm) {
    const double e = std::numbers::e;
    const auto m = fit_mle(Family::Pareto, SortedSample({e, e, e}));
    EXPECT_NEAR(m.params[0], 1.0, 1e-15);
}

TEST(FitMle, UniformIsSampleRange) {
    const auto m = fit_mle(Family::Uniform, SortedSample({0.3, -1.0, 2.5}));
    EXPECT_EQ(m.params, (std::vector<double>{-1.0, 2.5}));
}

TEST(FitMle, NormalUsesMaximumLikelihoodScale) {
    const auto m = fit_mle(Family::Normal, SortedSample({1.0, 3.0}));
    EXPECT_DOUBLE_EQ(m.params[0], 2.0);
    EXPECT_DOUBLE_EQ(m.params[1], 1.0);  // divisor n, not n - 1
}

TEST(FitMle, LogNormalOnLogs) {
    const double e = std::numbers::e;
    const auto m = fit_mle(Family::LogNormal, SortedSample({1.0, e * e}));
    EXPECT_NEAR(m.params[0], 1.0, 1e-15);
    EXPECT_NEAR(m.params[1], 1.0, 1e-15);
}

TEST(FitMle, NormalRecoveryOnLargeSample) {
    const auto data = sample_from(make_model(Family::Normal, {0.0, 1.0}), 100000, 21);
    const auto m = fit_mle(Family::Normal, data);
    EXPECT_NEAR(m.params[0], 0.0, 0.02);
    EXPECT_NEAR(m.params[1], 1.0, 0.02);
}

TEST(FitMle, IterativeFamiliesAreStationaryAndBeatTruth) {
    const std::vector<ParametricModel> truths = {
        make_model(Family::Gamma, {2.0, 2.0}),      make_model(Family::Gamma, {50.0, 2.0}),
        make_model(Family::Weibull, {1.5, 3.0}),    make_model(Family::Weibull, {0.7, 1.0}),
        make_model(Family::Beta, {2.0, 2.0}),       make_model(Family::Beta, {60.0, 30.0}),
        make_model(Family::QGaussian, {3.0, 1.0}),  make_model(Family::QGaussian, {6.0, 2.5}),
    };
    for (const auto& truth : truths) {
        const auto data = sample_from(truth, 5000, 8);
        const auto fitted = fit_mle(truth.family, data);
        EXPECT_LE(norm(log_likelihood_gradient(fitted, data)), 1e-6) << family_name(truth.family);
        EXPECT_GE(log_likelihood(fitted, data), log_likelihood(truth, data) - 1e-6 * 5000.0)
            << family_name(truth.family);
        for (std::size_t k = 0; k < truth.params.size(); ++k) {
            EXPECT_NEAR(fitted.params[k], truth.params[k], 0.25 * truth.params[k]) << family_name(truth.family);
        }
    }
}

TEST(FitMle, SupportViolationNamesFamily) {
    try {
        (void)fit_mle(Family::Beta, SortedSample({0.5, 1.5}));
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("beta"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("1.5"), std::string::npos);
    }
    EXPECT_THROW((void)fit_mle(Family::Gamma, SortedSample({-1.0, 2.0})), DataError);
    EXPECT_THROW((void)fit_mle(Family::LogNormal, SortedSample({0.0, 2.0})), DataError);
    EXPECT_THROW((void)fit_mle(Family::Pareto, SortedSample({0.5, 2.0})), DataError);
}

TEST(FitMle, DegenerateSamplesRejected) {
    EXPECT_THROW((void)fit_mle(Family::Normal, SortedSample({2.0, 2.0, 2.0})), DataError);
    EXPECT_THROW((void)fit_mle(Family::Uniform, SortedSample({2.0, 2.0})), DataError);
    EXPECT_THROW((void)fit_mle(Family::Gamma, SortedSample({2.0, 2.0})), DataError);
    EXPECT_THROW((void)fit_mle(Family::Normal, SortedSample({2.0})), DataError);
}
