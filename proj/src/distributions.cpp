#include "esjs/distributions.hpp"

#include "esjs/error.hpp"
#include "esjs/seed.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace esjs {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);
const double kLogSqrtPi = 0.5 * std::log(std::numbers::pi);

double lgamma(double x) { return boost::math::lgamma(x); }

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// Student-t with nu = lambda - 1 degrees of freedom and scale x0 / sqrt(nu)
// has exactly the q-Gaussian density used here.
double qgaussian_upper_tail(double lambda, double x0, double x) {
    const double nu = lambda - 1.0;
    const double t = x0 * x0 / (x0 * x0 + x * x);
    return 0.5 * boost::math::ibeta(0.5 * nu, 0.5, t);
}

}  // namespace

std::string_view family_name(Family family) noexcept {
    switch (family) {
        case Family::Normal: return "normal";
        case Family::Uniform: return "uniform";
        case Family::LogNormal: return "lognormal";
        case Family::Gamma: return "gamma";
        case Family::Weibull: return "weibull";
        case Family::Beta: return "beta";
        case Family::QGaussian: return "qgaussian";
        case Family::Exponential: return "exponential";
        case Family::Pareto: return "pareto";
    }
    return "unknown";
}

std::optional<Family> parse_family(std::string_view name) {
    const std::string key = lower(name);
    if (key == "log-normal") return Family::LogNormal;
    if (key == "q-gaussian") return Family::QGaussian;
    for (const Family f : kAllFamilies) {
        if (key == family_name(f)) return f;
    }
    return std::nullopt;
}

std::size_t parameter_count(Family family) noexcept {
    return family == Family::Exponential || family == Family::Pareto ? 1 : 2;
}

void validate(const ParametricModel& model) {
    const auto& p = model.params;
    const std::string name(family_name(model.family));
    if (p.size() != parameter_count(model.family)) {
        throw std::invalid_argument(name + ": expected " + std::to_string(parameter_count(model.family)) +
                                    " parameter(s), got " + std::to_string(p.size()));
    }
    for (const double v : p) {
        if (!std::isfinite(v)) throw std::invalid_argument(name + ": parameters must be finite");
    }
    auto positive = [&](std::size_t i, const char* what) {
        if (!(p[i] > 0.0)) throw std::invalid_argument(name + ": " + what + " must be positive");
    };
    switch (model.family) {
        case Family::Normal:
        case Family::LogNormal: positive(1, "sigma"); break;
        case Family::Uniform:
            if (!(p[0] < p[1])) throw std::invalid_argument(name + ": lower bound must be below upper bound");
            break;
        case Family::Gamma:
        case Family::Weibull:
            positive(0, "shape");
            positive(1, "scale");
            break;
        case Family::Beta:
            positive(0, "alpha");
            positive(1, "beta");
            break;
        case Family::QGaussian:
            if (!(p[0] > 1.0)) throw std::invalid_argument(name + ": lambda must exceed 1");
            positive(1, "x0");
            break;
        case Family::Exponential: positive(0, "scale"); break;
        case Family::Pareto: positive(0, "alpha"); break;
    }
}

ParametricModel make_model(Family family, std::vector<double> params) {
    ParametricModel model{family, std::move(params)};
    validate(model);
    return model;
}

bool in_support(const ParametricModel& model, double x) {
    if (std::isnan(x)) return false;
    switch (model.family) {
        case Family::Normal:
        case Family::QGaussian: return std::isfinite(x);
        case Family::Uniform: return x >= model.params[0] && x <= model.params[1];
        case Family::LogNormal:
        case Family::Gamma:
        case Family::Weibull: return x > 0.0 && std::isfinite(x);
        case Family::Beta: return x > 0.0 && x < 1.0;
        case Family::Exponential: return x >= 0.0 && std::isfinite(x);
        case Family::Pareto: return x >= 1.0 && std::isfinite(x);
    }
    return false;
}

double log_density(const ParametricModel& model, double x) {
    validate(model);
    if (!in_support(model, x)) return kNegInf;
    const auto& p = model.params;
    switch (model.family) {
        case Family::Normal: {
            const double z = (x - p[0]) / p[1];
            return -kLogSqrt2Pi - std::log(p[1]) - 0.5 * z * z;
        }
        case Family::Uniform: return -std::log(p[1] - p[0]);
        case Family::LogNormal: {
            const double lx = std::log(x);
            const double z = (lx - p[0]) / p[1];
            return -kLogSqrt2Pi - std::log(p[1]) - lx - 0.5 * z * z;
        }
        case Family::Gamma:
            return (p[0] - 1.0) * std::log(x) - lgamma(p[0]) - p[0] * std::log(p[1]) - x / p[1];
        case Family::Weibull:
            return std::log(p[0]) - p[0] * std::log(p[1]) + (p[0] - 1.0) * std::log(x) -
                   std::pow(x / p[1], p[0]);
        case Family::Beta:
            return lgamma(p[0] + p[1]) - lgamma(p[0]) - lgamma(p[1]) + (p[0] - 1.0) * std::log(x) +
                   (p[1] - 1.0) * std::log1p(-x);
        case Family::QGaussian: {
            const double r = x / p[1];
            return lgamma(0.5 * p[0]) - lgamma(0.5 * (p[0] - 1.0)) - kLogSqrtPi - std::log(p[1]) -
                   0.5 * p[0] * std::log1p(r * r);
        }
        case Family::Exponential: return -std::log(p[0]) - x / p[0];
        case Family::Pareto: return std::log(p[0]) - (p[0] + 1.0) * std::log(x);
    }
    return kNegInf;
}

double density(const ParametricModel& model, double x) {
    const double ld = log_density(model, x);
    return ld == kNegInf ? 0.0 : std::exp(ld);
}

double survival_of(const ParametricModel& model, double x) {
    validate(model);
    const auto& p = model.params;
    if (std::isnan(x)) throw std::invalid_argument("survival_of: x is NaN");
    switch (model.family) {
        case Family::Normal: return 0.5 * std::erfc((x - p[0]) / (p[1] * std::numbers::sqrt2));
        case Family::Uniform:
            if (x < p[0]) return 1.0;
            if (x >= p[1]) return 0.0;
            return (p[1] - x) / (p[1] - p[0]);
        case Family::LogNormal:
            if (x <= 0.0) return 1.0;
            return 0.5 * std::erfc((std::log(x) - p[0]) / (p[1] * std::numbers::sqrt2));
        case Family::Gamma:
            if (x <= 0.0) return 1.0;
            if (std::isinf(x)) return 0.0;
            return boost::math::gamma_q(p[0], x / p[1]);
        case Family::Weibull:
            if (x <= 0.0) return 1.0;
            return std::exp(-std::pow(x / p[1], p[0]));
        case Family::Beta:
            if (x <= 0.0) return 1.0;
            if (x >= 1.0) return 0.0;
            return boost::math::ibetac(p[0], p[1], x);
        case Family::QGaussian: {
            if (std::isinf(x)) return x > 0 ? 0.0 : 1.0;
            const double tail = qgaussian_upper_tail(p[0], p[1], x);
            return x >= 0.0 ? tail : 1.0 - tail;
        }
        case Family::Exponential:
            if (x <= 0.0) return 1.0;
            return std::exp(-x / p[0]);
        case Family::Pareto:
            if (x <= 1.0) return 1.0;
            return std::pow(x, -p[0]);
    }
    return 0.0;
}

SortedSample sample_from(const ParametricModel& model, std::size_t n, std::uint64_t seed) {
    validate(model);
    if (n == 0) throw std::invalid_argument("sample_from: n must be at least 1");
    Rng rng = make_rng(seed);
    const auto& p = model.params;
    std::vector<double> xs(n);

    switch (model.family) {
        case Family::Normal: {
            std::normal_distribution<double> dist(p[0], p[1]);
            for (auto& x : xs) x = dist(rng);
            break;
        }
        case Family::Uniform:
            for (auto& x : xs) x = p[0] + (p[1] - p[0]) * open_unit(rng);
            break;
        case Family::LogNormal: {
            std::normal_distribution<double> dist(p[0], p[1]);
            for (auto& x : xs) x = std::exp(dist(rng));
            break;
        }
        case Family::Gamma: {
            std::gamma_distribution<double> dist(p[0], p[1]);
            for (auto& x : xs) x = dist(rng);
            break;
        }
        case Family::Weibull:
            for (auto& x : xs) x = p[1] * std::pow(-std::log(open_unit(rng)), 1.0 / p[0]);
            break;
        case Family::Beta: {
            std::gamma_distribution<double> ga(p[0], 1.0);
            std::gamma_distribution<double> gb(p[1], 1.0);
            for (auto& x : xs) {
                const double a = ga(rng);
                const double b = gb(rng);
                x = a / (a + b);
            }
            break;
        }
        case Family::QGaussian: {
            const double nu = p[0] - 1.0;
            std::student_t_distribution<double> dist(nu);
            const double scale = p[1] / std::sqrt(nu);
            for (auto& x : xs) x = scale * dist(rng);
            break;
        }
        case Family::Exponential:
            for (auto& x : xs) x = -p[0] * std::log(open_unit(rng));
            break;
        case Family::Pareto:
            for (auto& x : xs) x = std::pow(open_unit(rng), -1.0 / p[0]);
            break;
    }
    return SortedSample(std::move(xs));
}

double log_likelihood(const ParametricModel& model, const SortedSample& sample) {
    validate(model);
    double sum = 0.0;
    for (const double x : sample.values()) {
        const double ld = log_density(model, x);
        if (ld == kNegInf) return kNegInf;
        sum += ld;
    }
    return sum;
}

std::vector<double> log_likelihood_gradient(const ParametricModel& model, const SortedSample& sample) {
    validate(model);
    const auto& p = model.params;
    const auto xs = sample.values();
    const double n = static_cast<double>(xs.size());
    for (const double x : xs) {
        if (!in_support(model, x)) {
            throw DataError(std::string(family_name(model.family)) + ": sample outside support");
        }
    }

    switch (model.family) {
        case Family::Normal:
        case Family::LogNormal: {
            const bool log_scale = model.family == Family::LogNormal;
            double s1 = 0.0;
            double s2 = 0.0;
            for (const double x : xs) {
                const double d = (log_scale ? std::log(x) : x) - p[0];
                s1 += d;
                s2 += d * d;
            }
            const double var = p[1] * p[1];
            return {s1 / var, -n / p[1] + s2 / (var * p[1])};
        }
        case Family::Uniform:
            throw std::invalid_argument("uniform: log-likelihood is not differentiable in its parameters");
        case Family::Gamma: {
            double sum_log = 0.0;
            double sum_x = 0.0;
            for (const double x : xs) {
                sum_log += std::log(x);
                sum_x += x;
            }
            return {sum_log - n * std::log(p[1]) - n * boost::math::digamma(p[0]),
                    -n * p[0] / p[1] + sum_x / (p[1] * p[1])};
        }
        case Family::Weibull: {
            double sum_log = 0.0;
            double sum_pow = 0.0;
            double sum_pow_log = 0.0;
            for (const double x : xs) {
                const double lr = std::log(x / p[1]);
                const double pw = std::exp(p[0] * lr);
                sum_log += std::log(x);
                sum_pow += pw;
                sum_pow_log += pw * lr;
            }
            return {n / p[0] - n * std::log(p[1]) + sum_log - sum_pow_log,
                    -n * p[0] / p[1] + p[0] / p[1] * sum_pow};
        }
        case Family::Beta: {
            double sum_log = 0.0;
            double sum_log1m = 0.0;
            for (const double x : xs) {
                sum_log += std::log(x);
                sum_log1m += std::log1p(-x);
            }
            const double dsum = boost::math::digamma(p[0] + p[1]);
            return {n * (dsum - boost::math::digamma(p[0])) + sum_log,
                    n * (dsum - boost::math::digamma(p[1])) + sum_log1m};
        }
        case Family::QGaussian: {
            const double lambda = p[0];
            const double x0 = p[1];
            double sum_log1p = 0.0;
            double sum_ratio = 0.0;
            for (const double x : xs) {
                const double r = x / x0;
                sum_log1p += std::log1p(r * r);
                sum_ratio += x * x / (x0 * (x0 * x0 + x * x));
            }
            return {n * 0.5 * (boost::math::digamma(0.5 * lambda) - boost::math::digamma(0.5 * (lambda - 1.0))) -
                        0.5 * sum_log1p,
                    -n / x0 + lambda * sum_ratio};
        }
        case Family::Exponential: {
            double sum_x = 0.0;
            for (const double x : xs) sum_x += x;
            return {-n / p[0] + sum_x / (p[0] * p[0])};
        }
        case Family::Pareto: {
            double sum_log = 0.0;
            for (const double x : xs) sum_log += std::log(x);
            return {n / p[0] - sum_log};
        }
    }
    return {};
}

}  // namespace esjs
