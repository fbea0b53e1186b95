// Maximum-likelihood fitting for the nine families.

#include "esjs/distributions.hpp"
#include "esjs/error.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

namespace esjs {
namespace {

constexpr int kMaxIterations = 200;
constexpr double kParamTolerance = 1e-10;
// Per-observation score norm accepted at the returned parameters.
constexpr double kMeanScoreTolerance = 1e-9;

using boost::math::digamma;
using boost::math::trigamma;

std::string name_of(Family f) { return std::string(family_name(f)); }

void require_support(Family family, const SortedSample& sample, const char* support_text) {
    const ParametricModel probe = family == Family::Uniform ? ParametricModel{family, {-INFINITY, INFINITY}}
                                                            : ParametricModel{family, {}};
    for (const double x : sample.values()) {
        if (!in_support(probe, x)) {
            std::ostringstream msg;
            msg << "fit_mle(" << family_name(family) << "): sample outside support " << support_text
                << "; offending value " << x;
            throw DataError(msg.str());
        }
    }
}

[[noreturn]] void degenerate(Family family, const char* why) {
    throw DataError("fit_mle(" + name_of(family) + "): degenerate sample, " + why);
}

[[noreturn]] void no_convergence(Family family, int iterations, double last_step,
                                 std::span<const double> params) {
    std::ostringstream msg;
    msg << "fit_mle(" << family_name(family) << "): no convergence after " << iterations
        << " iterations; last step " << last_step << "; parameters (";
    for (std::size_t i = 0; i < params.size(); ++i) msg << (i ? ", " : "") << params[i];
    msg << ")";
    throw NumericalError(msg.str());
}

double mean_of(std::span<const double> xs) {
    double s = 0.0;
    for (const double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

template <typename F>
double mean_map(std::span<const double> xs, F f) {
    double s = 0.0;
    for (const double x : xs) s += f(x);
    return s / static_cast<double>(xs.size());
}

void check_stationary(const ParametricModel& model, const SortedSample& sample, int iterations) {
    const auto grad = log_likelihood_gradient(model, sample);
    double norm = 0.0;
    for (const double g : grad) norm += g * g;
    norm = std::sqrt(norm) / static_cast<double>(sample.size());
    if (!(norm <= kMeanScoreTolerance)) {
        no_convergence(model.family, iterations, norm, model.params);
    }
}

ParametricModel fit_normal_like(Family family, const SortedSample& sample) {
    const bool log_scale = family == Family::LogNormal;
    auto tr = [log_scale](double x) { return log_scale ? std::log(x) : x; };
    const auto xs = sample.values();
    const double mu = mean_map(xs, tr);
    const double var = mean_map(xs, [&](double x) {
        const double d = tr(x) - mu;
        return d * d;
    });
    if (!(var > 0.0)) degenerate(family, "zero variance");
    return make_model(family, {mu, std::sqrt(var)});
}

// Shape equation log k - digamma(k) = log(mean) - mean(log x), solved by
// Newton from the closed-form approximation of the root.
ParametricModel fit_gamma(const SortedSample& sample) {
    const auto xs = sample.values();
    const double mean = mean_of(xs);
    const double mean_log = mean_map(xs, [](double x) { return std::log(x); });
    const double s = std::log(mean) - mean_log;
    if (!(s > 0.0)) degenerate(Family::Gamma, "all observations equal");

    double k = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
    double step = 0.0;
    int it = 0;
    for (; it < kMaxIterations; ++it) {
        const double f = std::log(k) - digamma(k) - s;
        const double fp = 1.0 / k - trigamma(k);
        step = f / fp;
        double next = k - step;
        if (!(next > 0.0)) next = 0.5 * k;
        const bool done = std::abs(next - k) <= kParamTolerance * next;
        k = next;
        if (done) break;
    }
    if (it == kMaxIterations) no_convergence(Family::Gamma, it, step, std::array{k, mean / k});
    ParametricModel model = make_model(Family::Gamma, {k, mean / k});
    check_stationary(model, sample, it);
    return model;
}

// Shape equation sum x^k log x / sum x^k - 1/k - mean(log x) = 0. Powers are
// taken relative to the largest observation to avoid overflow.
ParametricModel fit_weibull(const SortedSample& sample) {
    const auto xs = sample.values();
    const std::size_t n = xs.size();
    std::vector<double> y(n);
    const double top = std::log(xs.back());
    for (std::size_t i = 0; i < n; ++i) y[i] = std::log(xs[i]) - top;
    const double mean_y = mean_of(y);
    const double var_y = mean_map(y, [&](double v) { return (v - mean_y) * (v - mean_y); });
    if (!(var_y > 0.0)) degenerate(Family::Weibull, "all observations equal");

    double k = std::numbers::pi / std::sqrt(6.0 * var_y);
    double s0 = 0.0;
    double step = 0.0;
    int it = 0;
    for (; it < kMaxIterations; ++it) {
        s0 = 0.0;
        double s1 = 0.0;
        double s2 = 0.0;
        for (const double v : y) {
            const double w = std::exp(k * v);
            s0 += w;
            s1 += w * v;
            s2 += w * v * v;
        }
        const double a = s1 / s0;
        const double g = a - 1.0 / k - mean_y;
        const double gp = s2 / s0 - a * a + 1.0 / (k * k);
        step = g / gp;
        double next = k - step;
        if (!(next > 0.0)) next = 0.5 * k;
        const bool done = std::abs(next - k) <= kParamTolerance * next;
        k = next;
        if (done) break;
    }
    s0 = 0.0;
    for (const double v : y) s0 += std::exp(k * v);
    const double scale = std::exp(top + std::log(s0 / static_cast<double>(n)) / k);
    if (it == kMaxIterations) no_convergence(Family::Weibull, it, step, std::array{k, scale});
    ParametricModel model = make_model(Family::Weibull, {k, scale});
    check_stationary(model, sample, it);
    return model;
}

// Damped Newton ascent for a two-parameter per-observation log-likelihood,
// run in coordinates u = log(theta - lower) so that theta stays above lower.
struct Objective2 {
    std::function<double(const std::array<double, 2>&)> value;
    std::function<std::array<double, 2>(const std::array<double, 2>&)> gradient;
    std::function<std::array<double, 4>(const std::array<double, 2>&)> hessian;  // row-major
    std::array<double, 2> lower{};
};

struct AscentResult {
    std::array<double, 2> theta{};
    int iterations = 0;
    bool converged = false;
    double last_step = 0.0;
};

AscentResult newton_ascent(const Objective2& obj, std::array<double, 2> theta,
                           double max_theta = 1e12) {
    auto to_u = [&](const std::array<double, 2>& t) {
        return std::array{std::log(t[0] - obj.lower[0]), std::log(t[1] - obj.lower[1])};
    };
    auto to_theta = [&](const std::array<double, 2>& u) {
        return std::array{obj.lower[0] + std::exp(u[0]), obj.lower[1] + std::exp(u[1])};
    };

    AscentResult result;
    std::array<double, 2> u = to_u(theta);
    double f = obj.value(theta);
    for (int it = 0; it < kMaxIterations; ++it) {
        result.iterations = it + 1;
        const auto g = obj.gradient(theta);
        const auto h = obj.hessian(theta);
        const double e0 = theta[0] - obj.lower[0];
        const double e1 = theta[1] - obj.lower[1];
        // Chain rule into u-space.
        const std::array<double, 2> gu{g[0] * e0, g[1] * e1};
        const double h00 = h[0] * e0 * e0 + g[0] * e0;
        const double h11 = h[3] * e1 * e1 + g[1] * e1;
        const double h01 = h[1] * e0 * e1;
        const double det = h00 * h11 - h01 * h01;

        std::array<double, 2> du;
        const bool newton = h00 < 0.0 && det > 0.0;
        if (newton) {
            du = {-(h11 * gu[0] - h01 * gu[1]) / det, -(-h01 * gu[0] + h00 * gu[1]) / det};
        } else {
            const double gn = std::hypot(gu[0], gu[1]);
            du = {gu[0] / std::max(gn, 1.0), gu[1] / std::max(gn, 1.0)};
        }
        const double size = std::max(std::abs(du[0]), std::abs(du[1]));
        if (size > 1.0) {
            du[0] /= size;
            du[1] /= size;
        }

        // Near the optimum f is flat to rounding, so small Newton steps are
        // taken as they are.
        double t = 1.0;
        std::array<double, 2> next_u{};
        std::array<double, 2> next_theta{};
        double next_f = f;
        for (int halvings = 0; halvings < 60; ++halvings) {
            next_u = {u[0] + t * du[0], u[1] + t * du[1]};
            next_theta = to_theta(next_u);
            next_f = obj.value(next_theta);
            if (newton && size * t < 1e-6) break;
            if (next_f >= f) break;
            t *= 0.5;
        }
        result.last_step = size * t;
        u = next_u;
        theta = next_theta;
        f = next_f;
        if (!(theta[0] < max_theta && theta[1] < max_theta) || !std::isfinite(f)) break;
        if (size * t <= kParamTolerance) {
            result.converged = true;
            break;
        }
    }
    result.theta = theta;
    return result;
}

ParametricModel fit_beta(const SortedSample& sample) {
    const auto xs = sample.values();
    const double g1 = mean_map(xs, [](double x) { return std::log(x); });
    const double g2 = mean_map(xs, [](double x) { return std::log1p(-x); });
    const double m = mean_of(xs);
    const double v = mean_map(xs, [&](double x) { return (x - m) * (x - m); });
    if (!(v > 0.0)) degenerate(Family::Beta, "all observations equal");

    double common = m * (1.0 - m) / v - 1.0;
    if (!(common > 0.0)) common = 1.0;
    std::array<double, 2> theta{m * common, (1.0 - m) * common};

    Objective2 obj;
    obj.value = [&](const std::array<double, 2>& t) {
        return boost::math::lgamma(t[0] + t[1]) - boost::math::lgamma(t[0]) - boost::math::lgamma(t[1]) +
               (t[0] - 1.0) * g1 + (t[1] - 1.0) * g2;
    };
    obj.gradient = [&](const std::array<double, 2>& t) {
        const double ds = digamma(t[0] + t[1]);
        return std::array{ds - digamma(t[0]) + g1, ds - digamma(t[1]) + g2};
    };
    obj.hessian = [](const std::array<double, 2>& t) {
        const double ts = trigamma(t[0] + t[1]);
        return std::array{ts - trigamma(t[0]), ts, ts, ts - trigamma(t[1])};
    };

    const AscentResult r = newton_ascent(obj, theta);
    if (!r.converged) no_convergence(Family::Beta, r.iterations, r.last_step, r.theta);
    ParametricModel model = make_model(Family::Beta, {r.theta[0], r.theta[1]});
    check_stationary(model, sample, r.iterations);
    return model;
}

ParametricModel fit_qgaussian(const SortedSample& sample) {
    const auto xs = sample.values();
    const double n = static_cast<double>(xs.size());
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = xs[i] * xs[i];
    if (std::all_of(sq.begin(), sq.end(), [](double s) { return s == 0.0; })) {
        degenerate(Family::QGaussian, "all observations are zero");
    }

    // Start at nu = 4 with the scale refined by a few EM sweeps of the
    // Student-t scale update.
    const double nu0 = 4.0;
    double scale2 = mean_of(sq);
    for (int sweep = 0; sweep < 50; ++sweep) {
        double acc = 0.0;
        for (const double s : sq) acc += (nu0 + 1.0) * s / (nu0 + s / scale2);
        scale2 = acc / n;
    }
    std::array<double, 2> theta{nu0 + 1.0, std::sqrt(nu0 * scale2)};

    Objective2 obj;
    obj.lower = {1.0, 0.0};
    obj.value = [&](const std::array<double, 2>& t) {
        const double x02 = t[1] * t[1];
        const double ml = mean_map(sq, [&](double s) { return std::log1p(s / x02); });
        return boost::math::lgamma(0.5 * t[0]) - boost::math::lgamma(0.5 * (t[0] - 1.0)) -
               0.5 * std::log(std::numbers::pi) - std::log(t[1]) - 0.5 * t[0] * ml;
    };
    obj.gradient = [&](const std::array<double, 2>& t) {
        const double x0 = t[1];
        const double x02 = x0 * x0;
        double ml = 0.0;
        double ratio = 0.0;
        for (const double s : sq) {
            ml += std::log1p(s / x02);
            ratio += s / (x0 * (x02 + s));
        }
        return std::array{0.5 * (digamma(0.5 * t[0]) - digamma(0.5 * (t[0] - 1.0))) - 0.5 * ml / n,
                          -1.0 / x0 + t[0] * ratio / n};
    };
    obj.hessian = [&](const std::array<double, 2>& t) {
        const double x0 = t[1];
        const double x02 = x0 * x0;
        double ratio = 0.0;
        double curv = 0.0;
        for (const double s : sq) {
            const double d = x02 + s;
            ratio += s / (x0 * d);
            curv += s * (3.0 * x02 + s) / (x02 * d * d);
        }
        const double hll = 0.25 * (trigamma(0.5 * t[0]) - trigamma(0.5 * (t[0] - 1.0)));
        const double hlx = ratio / n;
        const double hxx = 1.0 / x02 - t[0] * curv / n;
        return std::array{hll, hlx, hlx, hxx};
    };

    const AscentResult r = newton_ascent(obj, theta, 1e8);
    if (!r.converged) {
        if (!(r.theta[0] < 1e8)) {
            throw NumericalError(
                "fit_mle(qgaussian): lambda diverges, the sample shows no heavy tail (Gaussian limit)");
        }
        no_convergence(Family::QGaussian, r.iterations, r.last_step, r.theta);
    }
    ParametricModel model = make_model(Family::QGaussian, {r.theta[0], r.theta[1]});
    check_stationary(model, sample, r.iterations);
    return model;
}

}  // namespace

ParametricModel fit_mle(Family family, const SortedSample& sample) {
    if (sample.size() < 2) {
        throw DataError("fit_mle(" + name_of(family) + "): need at least two observations");
    }
    const auto xs = sample.values();
    for (const double x : xs) {
        if (!std::isfinite(x)) throw DataError("fit_mle(" + name_of(family) + "): non-finite observation");
    }

    switch (family) {
        case Family::Normal: return fit_normal_like(family, sample);
        case Family::LogNormal:
            require_support(family, sample, "(0, inf)");
            return fit_normal_like(family, sample);
        case Family::Uniform:
            if (sample.min() == sample.max()) degenerate(family, "all observations equal");
            return make_model(family, {sample.min(), sample.max()});
        case Family::Gamma:
            require_support(family, sample, "(0, inf)");
            return fit_gamma(sample);
        case Family::Weibull:
            require_support(family, sample, "(0, inf)");
            return fit_weibull(sample);
        case Family::Beta:
            require_support(family, sample, "(0, 1)");
            return fit_beta(sample);
        case Family::QGaussian: return fit_qgaussian(sample);
        case Family::Exponential: {
            require_support(family, sample, "[0, inf)");
            const double mean = mean_of(xs);
            if (!(mean > 0.0)) degenerate(family, "all observations are zero");
            return make_model(family, {mean});
        }
        case Family::Pareto: {
            require_support(family, sample, "[1, inf)");
            const double mean_log = mean_map(xs, [](double x) { return std::log(x); });
            if (!(mean_log > 0.0)) degenerate(family, "all observations equal 1");
            return make_model(family, {1.0 / mean_log});
        }
    }
    throw std::invalid_argument("fit_mle: unknown family");
}

}  // namespace esjs
