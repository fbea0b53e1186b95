#pragma once

#include "esjs/bootstrap.hpp"
#include "esjs/distributions.hpp"
#include "esjs/divergence.hpp"
#include "esjs/survival.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace esjs {

using Sampler = std::function<SortedSample(const ParametricModel&, std::size_t, std::uint64_t)>;

/// How survival functions are estimated from samples before scoring.
/// bins == 0 uses the exact empirical survival; otherwise the binned
/// Kaplan-Meier estimate over `range` (default: pooled range of both samples).
struct SurvivalOptions {
    std::size_t bins = 0;
    std::optional<std::pair<double, double>> range;
};

/// ESJS between two samples under the given survival estimator.
[[nodiscard]] double score_samples(const SortedSample& model_sample, const SortedSample& data,
                                   const SurvivalOptions& survival = {});

/// ESJS(P(D, phi), data): draws `model_sample_size` points from `model` and
/// scores them against the data. Deterministic given seed.
[[nodiscard]] double goodness_of_fit(const ParametricModel& model, const SortedSample& data,
                                     std::size_t model_sample_size, std::uint64_t seed,
                                     const Sampler& sampler = sample_from);

struct FitReport {
    Family family = Family::Normal;
    std::vector<double> params;
    double esjs = 0.0;
    double distance = 0.0;
    ConfidenceInterval ci;
    std::size_t n = 0;
    std::size_t model_sample_size = 0;
    std::uint64_t seed = 0;
};

struct SkippedHypothesis {
    Family family = Family::Normal;
    std::string reason;
};

struct ExperimentReport {
    std::optional<ParametricModel> given;  ///< absent for empirical data
    std::vector<FitReport> rows;
    std::vector<SkippedHypothesis> skipped;
    Family best = Family::Normal;
    std::optional<Family> challenger;
    EsjsFactor factor;
    /// No eligible challenger: factor reported as 1.
    bool single_hypothesis = false;
};

struct ExperimentOptions {
    BootstrapConfig bootstrap;               ///< bootstrap.seed is the run seed
    bool with_ci = true;                     ///< false skips the bootstrap
    std::size_t model_sample_size = 0;       ///< 0: same as the data size
    SurvivalOptions survival;
    std::vector<Family> exclude_from_factor;  ///< never chosen as challenger
    std::optional<Family> challenger;         ///< explicit challenger
    Sampler sampler = sample_from;
};

/// Fit `family` by maximum likelihood, draw the model sample, score it and
/// attach the bootstrap interval. Per replicate the model sample is resampled
/// iid and the data with options.bootstrap.scheme; `series` is the data in
/// its original order, which matters only for the moving-block scheme.
[[nodiscard]] FitReport fit_and_score(Family family, std::span<const double> series,
                                      const ExperimentOptions& options);

/// Scores every family against `data`, skipping the ones whose fit fails
/// (support violation, degenerate sample, no convergence) with the reason.
/// Best = minimal ESJS; factor = challenger / best with the challenger being
/// the explicit one or the best remaining family not excluded. Throws
/// DataError if every family is skipped.
[[nodiscard]] ExperimentReport compare_families(std::span<const double> series, std::span<const Family> families,
                                                const ExperimentOptions& options);

/// Full simulated methodology: draw n points from `given` (the data), then
/// compare_families over the hypotheses.
[[nodiscard]] ExperimentReport simulate_experiment(const ParametricModel& given,
                                                   std::span<const Family> hypotheses, std::size_t n,
                                                   const ExperimentOptions& options);

/// Convenience overload taking only the bootstrap configuration.
[[nodiscard]] ExperimentReport simulate_experiment(const ParametricModel& given,
                                                   std::span<const Family> hypotheses, std::size_t n,
                                                   const BootstrapConfig& config);

struct ScalingRow {
    std::size_t size = 0;
    std::vector<double> params;
    double esjs = 0.0;
};

/// For each size: draw data from `given`, fit given.family, draw a model
/// sample of the same size and record the ESJS.
[[nodiscard]] std::vector<ScalingRow> scaling_experiment(const ParametricModel& given,
                                                         std::span<const std::size_t> sizes, std::uint64_t seed);

struct PowerLaw {
    double amplitude = 0.0;
    double exponent = 0.0;
};

/// Ordinary least squares of log y on log x; y ~ amplitude * x^exponent.
[[nodiscard]] PowerLaw powerlaw_fit(std::span<const double> xs, std::span<const double> ys);

}  // namespace esjs
