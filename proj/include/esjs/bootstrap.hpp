#pragma once

#include "esjs/survival.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace esjs {

enum class ResampleScheme { Iid, MovingBlock };
enum class IntervalMethod { Percentile, Basic };

struct BootstrapConfig {
    std::size_t resamples = 1000;
    double level = 0.95;
    ResampleScheme scheme = ResampleScheme::Iid;
    IntervalMethod interval = IntervalMethod::Percentile;
    std::size_t block_length = 1;  ///< moving block only
    std::uint64_t seed = 0;
    /// Worker threads; 0 means hardware concurrency. Results do not depend on it.
    std::size_t workers = 1;
};

/// Throws std::invalid_argument on resamples == 0 or level outside (0, 1).
void validate(const BootstrapConfig& config);

struct ConfidenceInterval {
    double lb = 0.0;
    double ub = 0.0;
    double level = 0.95;
    double point = 0.0;
};

/// n draws with replacement, returned sorted. O(n): indices are counted,
/// not sorted.
[[nodiscard]] SortedSample iid_resample(const SortedSample& sample, std::uint64_t seed);

/**
 * Moving block bootstrap: ceil(n / block_length) block starts drawn uniformly
 * from the n - block_length + 1 overlapping positions, blocks concatenated in
 * draw order and truncated to n. Order within a block is preserved.
 */
[[nodiscard]] std::vector<double> moving_block_resample(std::span<const double> series,
                                                        std::size_t block_length, std::uint64_t seed);

/// Nearest-rank quantile of ascending `sorted`: element ceil(q * B), 1-based,
/// clamped to [1, B].
[[nodiscard]] double nearest_rank(std::span<const double> sorted, double q);

/// Percentile: (q_lo, q_hi). Basic: (2 point - q_hi, 2 point - q_lo).
/// q_lo = (1 - level) / 2, q_hi = (1 + level) / 2.
[[nodiscard]] ConfidenceInterval interval_from_replicates(double point, std::vector<double> replicates,
                                                          double level, IntervalMethod method);

/// Statistic over one or more data sets (e.g. data and model sample).
using Statistic = std::function<double(std::span<const std::vector<double>>)>;

/**
 * Bootstrap confidence interval. Each replicate resamples every data set
 * independently (iid or moving block, per config) with a seed derived from
 * config.seed, the replicate index and the data-set index, then evaluates the
 * statistic. Replicates may run on several threads; the result depends only on
 * (statistic, data, config) minus `workers`.
 *
 * Iid resamples are passed to the statistic sorted; moving-block resamples
 * keep their series order.
 */
[[nodiscard]] ConfidenceInterval bootstrap_ci(const Statistic& statistic,
                                              std::span<const std::vector<double>> data,
                                              const BootstrapConfig& config);

/// Replicate values only, in replicate order.
[[nodiscard]] std::vector<double> bootstrap_replicates(const Statistic& statistic,
                                                       std::span<const std::vector<double>> data,
                                                       const BootstrapConfig& config);

/// Same, with the resampling scheme chosen per data set (config.scheme is
/// ignored). Used when an iid model sample is paired with a time series.
[[nodiscard]] std::vector<double> bootstrap_replicates(const Statistic& statistic,
                                                       std::span<const std::vector<double>> data,
                                                       std::span<const ResampleScheme> schemes,
                                                       const BootstrapConfig& config);

}  // namespace esjs
