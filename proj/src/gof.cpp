#include "esjs/gof.hpp"

#include "esjs/error.hpp"
#include "esjs/seed.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace esjs {
namespace {

std::uint64_t family_index(Family f) { return static_cast<std::uint64_t>(f); }

bool contains(std::span<const Family> list, Family f) {
    return std::find(list.begin(), list.end(), f) != list.end();
}

double score_with_range(const SortedSample& model_sample, const SortedSample& data, std::size_t bins,
                        std::pair<double, double> range) {
    return esjs(km_binned_survival(model_sample, bins, range), km_binned_survival(data, bins, range));
}

// Bootstrap statistic: iid resamples arrive sorted and can be scored in place.
double score_sets(const std::vector<double>& a, const std::vector<double>& b, const SurvivalOptions& survival) {
    if (survival.bins == 0 && std::is_sorted(a.begin(), a.end()) && std::is_sorted(b.begin(), b.end())) {
        return esjs_presorted(a, b);
    }
    return score_samples(SortedSample(a), SortedSample(b), survival);
}

}  // namespace

double score_samples(const SortedSample& model_sample, const SortedSample& data, const SurvivalOptions& survival) {
    if (model_sample.empty() || data.empty()) throw DataError("empty sample");
    if (survival.bins == 0) return esjs(model_sample, data);
    const auto range = survival.range.value_or(
        std::pair{std::min(model_sample.min(), data.min()), std::max(model_sample.max(), data.max())});
    if (!(range.first < range.second)) return esjs(model_sample, data);
    return score_with_range(model_sample, data, survival.bins, range);
}

double goodness_of_fit(const ParametricModel& model, const SortedSample& data, std::size_t model_sample_size,
                       std::uint64_t seed, const Sampler& sampler) {
    if (data.empty()) throw DataError("empty sample");
    const SortedSample model_sample = sampler(model, model_sample_size, seed);
    return esjs(model_sample, data);
}

FitReport fit_and_score(Family family, std::span<const double> series, const ExperimentOptions& options) {
    const std::uint64_t seed = options.bootstrap.seed;
    const SortedSample data(std::vector<double>(series.begin(), series.end()));
    const ParametricModel model = fit_mle(family, data);
    const std::size_t m = options.model_sample_size == 0 ? data.size() : options.model_sample_size;
    const SortedSample model_sample = options.sampler(model, m, derive_seed(seed, "model", family_index(family)));

    SurvivalOptions survival = options.survival;
    if (survival.bins > 0 && !survival.range) {
        // Fix the grid once so every replicate is binned identically.
        survival.range = std::pair{std::min(model_sample.min(), data.min()), std::max(model_sample.max(), data.max())};
    }

    FitReport row;
    row.family = family;
    row.params = model.params;
    row.n = data.size();
    row.model_sample_size = m;
    row.seed = seed;
    row.esjs = score_samples(model_sample, data, survival);
    row.distance = std::sqrt(row.esjs);
    row.ci = ConfidenceInterval{row.esjs, row.esjs, options.bootstrap.level, row.esjs};

    if (options.with_ci) {
        BootstrapConfig config = options.bootstrap;
        config.seed = derive_seed(seed, "bootstrap", family_index(family));
        const Statistic statistic = [&survival](std::span<const std::vector<double>> sets) {
            return score_sets(sets[0], sets[1], survival);
        };
        const std::vector<std::vector<double>> sets{model_sample.vector(),
                                                    std::vector<double>(series.begin(), series.end())};
        const std::array schemes{ResampleScheme::Iid, config.scheme};
        const auto replicates = bootstrap_replicates(statistic, sets, schemes, config);
        row.ci = interval_from_replicates(row.esjs, replicates, config.level, config.interval);
    }
    return row;
}

ExperimentReport compare_families(std::span<const double> series, std::span<const Family> families,
                                  const ExperimentOptions& options) {
    if (families.empty()) throw std::invalid_argument("compare: no hypotheses given");
    if (series.empty()) throw DataError("empty sample");
    if (options.with_ci) validate(options.bootstrap);

    ExperimentReport report;
    for (const Family f : families) {
        try {
            report.rows.push_back(fit_and_score(f, series, options));
        } catch (const DataError& e) {
            report.skipped.push_back({f, e.what()});
        } catch (const NumericalError& e) {
            report.skipped.push_back({f, e.what()});
        }
    }
    if (report.rows.empty()) throw DataError("all hypotheses were skipped");

    const auto by_esjs = [](const FitReport& a, const FitReport& b) { return a.esjs < b.esjs; };
    const auto best = std::min_element(report.rows.begin(), report.rows.end(), by_esjs);
    report.best = best->family;

    const FitReport* challenger = nullptr;
    if (options.challenger) {
        for (const auto& row : report.rows) {
            if (row.family == *options.challenger && row.family != report.best) challenger = &row;
        }
    } else {
        for (const auto& row : report.rows) {
            if (row.family == report.best || contains(options.exclude_from_factor, row.family)) continue;
            if (!challenger || row.esjs < challenger->esjs) challenger = &row;
        }
    }

    if (challenger == nullptr) {
        report.single_hypothesis = true;
        report.factor = EsjsFactor{1.0, best->esjs, best->esjs};
    } else {
        report.challenger = challenger->family;
        report.factor = esjs_factor(challenger->esjs, best->esjs);
    }
    return report;
}

ExperimentReport simulate_experiment(const ParametricModel& given, std::span<const Family> hypotheses,
                                     std::size_t n, const ExperimentOptions& options) {
    if (n < 2) throw std::invalid_argument("simulate: n must be at least 2");
    const SortedSample data = options.sampler(given, n, derive_seed(options.bootstrap.seed, "data"));
    ExperimentReport report = compare_families(data.values(), hypotheses, options);
    report.given = given;
    return report;
}

ExperimentReport simulate_experiment(const ParametricModel& given, std::span<const Family> hypotheses,
                                     std::size_t n, const BootstrapConfig& config) {
    ExperimentOptions options;
    options.bootstrap = config;
    return simulate_experiment(given, hypotheses, n, options);
}

std::vector<ScalingRow> scaling_experiment(const ParametricModel& given, std::span<const std::size_t> sizes,
                                           std::uint64_t seed) {
    if (sizes.empty()) throw std::invalid_argument("scaling: no sizes given");
    validate(given);
    std::vector<ScalingRow> rows;
    rows.reserve(sizes.size());
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        const std::size_t size = sizes[k];
        if (size < 2) throw std::invalid_argument("scaling: every size must be at least 2");
        const SortedSample data = sample_from(given, size, derive_seed(seed, "scaling-data", k));
        const ParametricModel fitted = fit_mle(given.family, data);
        const SortedSample model_sample = sample_from(fitted, size, derive_seed(seed, "scaling-model", k));
        rows.push_back({size, fitted.params, esjs(model_sample, data)});
    }
    return rows;
}

PowerLaw powerlaw_fit(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("powerlaw_fit: x and y differ in length");
    if (xs.size() < 2) throw std::invalid_argument("powerlaw_fit: need at least two points");
    const std::size_t n = xs.size();
    std::vector<double> lx(n);
    std::vector<double> ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(xs[i] > 0.0 && ys[i] > 0.0)) {
            throw DataError("powerlaw_fit: all values must be positive (point " + std::to_string(i) + ")");
        }
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (!(sxx > 0.0)) throw DataError("powerlaw_fit: x values are all equal");
    const double slope = sxy / sxx;
    return {std::exp(my - slope * mx), slope};
}

}  // namespace esjs
