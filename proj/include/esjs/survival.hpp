#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace esjs {

/**
 * Order statistics x_(1) <= ... <= x_(n) of a real-valued sample.
 *
 * Construction sorts the input; `from_sorted` adopts an already ordered
 * vector after checking it. An empty sample is representable so that callers
 * get a descriptive error from the operation that needs data, not from here.
 */
class SortedSample {
public:
    SortedSample() = default;
    explicit SortedSample(std::vector<double> values);

    /// Adopts `values` without sorting; throws std::invalid_argument if they
    /// are not non-decreasing.
    [[nodiscard]] static SortedSample from_sorted(std::vector<double> values);

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }
    [[nodiscard]] double min() const noexcept { return values_.front(); }
    [[nodiscard]] double max() const noexcept { return values_.back(); }

    [[nodiscard]] const std::vector<double>& vector() const noexcept { return values_; }
    [[nodiscard]] std::vector<double> release() && noexcept { return std::move(values_); }

    friend bool operator==(const SortedSample&, const SortedSample&) = default;

private:
    std::vector<double> values_;
};

/**
 * Right-continuous, piecewise-constant survival function.
 *
 * S(x) = head for x < breakpoints[0], and S(x) = values[k] on
 * [breakpoints[k], breakpoints[k+1]). The last value extends to +infinity.
 * Breakpoints are strictly increasing; values are non-increasing and lie in
 * [0, 1].
 */
class StepSurvival {
public:
    StepSurvival() = default;

    /// Validates the invariants above; throws std::invalid_argument.
    StepSurvival(std::vector<double> breakpoints, std::vector<double> values, double head = 1.0);

    [[nodiscard]] std::span<const double> breakpoints() const noexcept { return breakpoints_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double head() const noexcept { return head_; }
    [[nodiscard]] double tail() const noexcept { return values_.empty() ? head_ : values_.back(); }
    [[nodiscard]] std::size_t size() const noexcept { return breakpoints_.size(); }

    [[nodiscard]] double operator()(double x) const noexcept;

    friend bool operator==(const StepSurvival&, const StepSurvival&) = default;

private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
    double head_ = 1.0;
};

/// Default cell count of the binned estimator.
inline constexpr std::size_t kDefaultBins = 1'000'000;

/// S(x) = #{x_i > x} / n. Ties collapse into one breakpoint. Throws DataError
/// on an empty sample.
[[nodiscard]] StepSurvival empirical_survival(const SortedSample& sample);

/**
 * Uncensored Kaplan-Meier estimate on a fixed grid: the empirical survival
 * evaluated at the right edges lo + k (hi - lo) / bins, k = 1..bins, held
 * constant until the next edge. Equivalent to rounding every observation up
 * to the nearest edge. Edges where the value does not change are elided, so
 * the result has at most min(bins, n) breakpoints.
 */
[[nodiscard]] StepSurvival km_binned_survival(const SortedSample& sample, std::size_t bins,
                                              std::pair<double, double> range);

/// Same, over [min, max] of the sample.
[[nodiscard]] StepSurvival km_binned_survival(const SortedSample& sample,
                                              std::size_t bins = kDefaultBins);

/// Pointwise (P + Q) / 2 on the union of breakpoints.
[[nodiscard]] StepSurvival mixture_survival(const StepSurvival& p, const StepSurvival& q);

/// Empirical survival entropy -sum_{i=1}^{n-1} U_{i+1} (1 - i/n) log(1 - i/n),
/// natural log. Zero for n = 1.
[[nodiscard]] double survival_entropy(const SortedSample& sample);

/// -integral of S log S over the real line, integrated exactly segment by
/// segment. Infinite if S is strictly between 0 and 1 on an unbounded segment.
[[nodiscard]] double survival_entropy(const StepSurvival& survival);

/// x log x with 0 log 0 = 0.
[[nodiscard]] double xlogx(double x) noexcept;

}  // namespace esjs
