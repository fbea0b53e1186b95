#pragma once

#include "esjs/survival.hpp"

namespace esjs {

/**
 * Empirical survival Jensen-Shannon divergence
 *
 *   1/2 * integral of ( P log(P/M) + Q log(Q/M) ) dx,   M = (P + Q) / 2,
 *
 * evaluated exactly as a finite sum over the union of breakpoints, since the
 * integrand is constant between them. Natural log, 0 log 0 = 0. Symmetric
 * and non-negative; zero iff P and Q coincide. Returns +infinity when P and
 * Q differ on an unbounded segment (e.g. one tail never reaches 0).
 */
[[nodiscard]] double esjs(const StepSurvival& p, const StepSurvival& q);

/// The same quantity for two raw samples (empirical survivals of each),
/// computed from the order statistics without materializing step functions.
/// This is the hot path used by fitting and bootstrap.
[[nodiscard]] double esjs(const SortedSample& p, const SortedSample& q);

/// Same, for values the caller guarantees to be in ascending order. Avoids
/// the copy into a SortedSample on hot paths.
[[nodiscard]] double esjs_presorted(std::span<const double> p, std::span<const double> q);

/// The pooled sample p + q. For equal sizes its empirical survival is exactly
/// the mixture (P + Q) / 2, which makes it the mixture sample of the
/// spacings form.
[[nodiscard]] SortedSample mixture_sample(const SortedSample& p, const SortedSample& q);

/**
 * Spacings form of the divergence,
 *
 *   sum_i (U[P]_{i+1} + U[Q]_{i+1}) / 2 * w_i log w_i  -  sum_j U[M]_{j+1} v_j log v_j
 *
 * with w_i = 1 - i/n over the n order statistics of each input and
 * v_j = 1 - j/(2n) over the 2n order statistics of the pooled mixture sample.
 * Equals the entropy identity E(M) - E(P)/2 - E(Q)/2 and hence `esjs`.
 * Requires equal sizes n >= 2 (std::invalid_argument otherwise).
 */
[[nodiscard]] double esjs_spacings(const SortedSample& p, const SortedSample& q);

/// sqrt(esjs); a metric on survival functions.
[[nodiscard]] double esjs_distance(const StepSurvival& p, const StepSurvival& q);
[[nodiscard]] double esjs_distance(const SortedSample& p, const SortedSample& q);

struct EsjsFactor {
    double ratio = 1.0;
    double numerator_esjs = 0.0;
    double denominator_esjs = 0.0;
};

/// challenger / champion. Throws NumericalError("degenerate perfect fit") when
/// champion_esjs is zero, std::invalid_argument on negative inputs.
[[nodiscard]] EsjsFactor esjs_factor(double challenger_esjs, double champion_esjs);

}  // namespace esjs
