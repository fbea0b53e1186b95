#pragma once

#include "esjs/survival.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace esjs {

// Parameter order follows the reporting columns:
//   Normal (mu, sigma)        Uniform (lower, upper)    LogNormal (mu, sigma)
//   Gamma (shape k, scale)    Weibull (shape k, scale)  Beta (alpha, beta)
//   QGaussian (lambda, x0)    Exponential (scale)       Pareto (alpha), x >= 1
enum class Family { Normal, Uniform, LogNormal, Gamma, Weibull, Beta, QGaussian, Exponential, Pareto };

inline constexpr std::array<Family, 9> kAllFamilies = {
    Family::Normal, Family::Uniform,   Family::LogNormal,   Family::Gamma, Family::Weibull,
    Family::Beta,   Family::QGaussian, Family::Exponential, Family::Pareto};

/// Lowercase ASCII name, e.g. "lognormal", "qgaussian".
[[nodiscard]] std::string_view family_name(Family family) noexcept;

/// Case-insensitive; accepts "log-normal" and "q-gaussian" spellings.
[[nodiscard]] std::optional<Family> parse_family(std::string_view name);

[[nodiscard]] std::size_t parameter_count(Family family) noexcept;

struct ParametricModel {
    Family family = Family::Normal;
    std::vector<double> params;

    friend bool operator==(const ParametricModel&, const ParametricModel&) = default;
};

/// Builds a model, throwing std::invalid_argument when the parameter count or
/// values violate the family constraints (positive scales, lower < upper,
/// lambda > 1).
[[nodiscard]] ParametricModel make_model(Family family, std::vector<double> params);

/// Throws std::invalid_argument if `model` violates its family constraints.
void validate(const ParametricModel& model);

/// True if x lies in the support of the family (for Uniform, of the model).
[[nodiscard]] bool in_support(const ParametricModel& model, double x);

[[nodiscard]] double density(const ParametricModel& model, double x);
[[nodiscard]] double log_density(const ParametricModel& model, double x);

/// P(X > x).
[[nodiscard]] double survival_of(const ParametricModel& model, double x);

/// n independent draws, sorted. Deterministic given seed; owns its generator.
[[nodiscard]] SortedSample sample_from(const ParametricModel& model, std::size_t n, std::uint64_t seed);

/// Sum of log densities; -infinity if any point lies outside the support.
[[nodiscard]] double log_likelihood(const ParametricModel& model, const SortedSample& sample);

/// Analytic gradient of the log-likelihood with respect to the parameters, in
/// parameter order. Not defined for Uniform (std::invalid_argument).
[[nodiscard]] std::vector<double> log_likelihood_gradient(const ParametricModel& model,
                                                          const SortedSample& sample);

/// Maximum-likelihood fit. Closed form for Normal, Uniform, LogNormal,
/// Exponential and Pareto; Newton iterations for Gamma, Weibull, Beta and
/// QGaussian. Throws DataError on support violations or degenerate samples,
/// NumericalError when the iteration does not converge.
[[nodiscard]] ParametricModel fit_mle(Family family, const SortedSample& sample);

}  // namespace esjs
