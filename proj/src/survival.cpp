#include "esjs/survival.hpp"

#include "esjs/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace esjs {

SortedSample::SortedSample(std::vector<double> values) : values_(std::move(values)) {
    if (!std::is_sorted(values_.begin(), values_.end())) std::sort(values_.begin(), values_.end());
}

SortedSample SortedSample::from_sorted(std::vector<double> values) {
    if (!std::is_sorted(values.begin(), values.end())) {
        throw std::invalid_argument("SortedSample::from_sorted: values are not non-decreasing");
    }
    SortedSample s;
    s.values_ = std::move(values);
    return s;
}

StepSurvival::StepSurvival(std::vector<double> breakpoints, std::vector<double> values, double head)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)), head_(head) {
    if (breakpoints_.size() != values_.size()) {
        throw std::invalid_argument("StepSurvival: breakpoints and values differ in length");
    }
    if (!(head_ >= 0.0 && head_ <= 1.0)) {
        throw std::invalid_argument("StepSurvival: head value outside [0, 1]");
    }
    double previous = head_;
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!std::isfinite(breakpoints_[k])) {
            throw std::invalid_argument("StepSurvival: non-finite breakpoint");
        }
        if (k > 0 && !(breakpoints_[k] > breakpoints_[k - 1])) {
            throw std::invalid_argument("StepSurvival: breakpoints must be strictly increasing");
        }
        if (!(values_[k] >= 0.0 && values_[k] <= previous)) {
            throw std::invalid_argument("StepSurvival: values must be non-increasing within [0, 1]");
        }
        previous = values_[k];
    }
}

double StepSurvival::operator()(double x) const noexcept {
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    if (it == breakpoints_.begin()) return head_;
    return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

double xlogx(double x) noexcept { return x > 0.0 ? x * std::log(x) : 0.0; }

StepSurvival empirical_survival(const SortedSample& sample) {
    if (sample.empty()) throw DataError("empty sample");
    const auto xs = sample.values();
    const std::size_t n = xs.size();
    const double dn = static_cast<double>(n);

    std::vector<double> breakpoints;
    std::vector<double> values;
    std::size_t i = 0;
    while (i < n) {
        const double v = xs[i];
        while (i < n && xs[i] == v) ++i;
        breakpoints.push_back(v);
        values.push_back(static_cast<double>(n - i) / dn);
    }
    return StepSurvival(std::move(breakpoints), std::move(values), 1.0);
}

StepSurvival km_binned_survival(const SortedSample& sample, std::size_t bins,
                                std::pair<double, double> range) {
    if (sample.empty()) throw DataError("empty sample");
    const auto [lo, hi] = range;
    if (bins == 0) throw std::invalid_argument("km_binned_survival: bins must be at least 1");
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
        throw std::invalid_argument("km_binned_survival: invalid range, need finite lo < hi");
    }

    const double span = hi - lo;
    const double dbins = static_cast<double>(bins);
    auto edge = [&](std::size_t k) {
        return k >= bins ? hi : lo + span * (static_cast<double>(k) / dbins);
    };

    const auto xs = sample.values();
    const std::size_t n = xs.size();
    const double dn = static_cast<double>(n);

    std::vector<double> breakpoints;
    std::vector<double> values;
    std::size_t i = 0;
    while (i < n && xs[i] <= hi) {
        const double x = xs[i];
        // Smallest k in [1, bins] with edge(k) >= x.
        double guess = std::ceil((x - lo) / span * dbins);
        std::size_t k = guess < 1.0 ? 1 : std::min(bins, static_cast<std::size_t>(guess));
        while (k > 1 && edge(k - 1) >= x) --k;
        while (k < bins && edge(k) < x) ++k;

        const double e = edge(k);
        while (i < n && xs[i] <= e) ++i;
        breakpoints.push_back(e);
        values.push_back(static_cast<double>(n - i) / dn);
    }
    return StepSurvival(std::move(breakpoints), std::move(values), 1.0);
}

StepSurvival km_binned_survival(const SortedSample& sample, std::size_t bins) {
    if (sample.empty()) throw DataError("empty sample");
    if (sample.min() == sample.max()) {
        // A constant sample has no spread to bin; its survival is one jump.
        return empirical_survival(sample);
    }
    return km_binned_survival(sample, bins, {sample.min(), sample.max()});
}

StepSurvival mixture_survival(const StepSurvival& p, const StepSurvival& q) {
    const auto pb = p.breakpoints();
    const auto qb = q.breakpoints();
    const auto pv = p.values();
    const auto qv = q.values();

    std::vector<double> breakpoints;
    std::vector<double> values;
    breakpoints.reserve(pb.size() + qb.size());
    values.reserve(pb.size() + qb.size());

    std::size_t i = 0;
    std::size_t j = 0;
    double pcur = p.head();
    double qcur = q.head();
    while (i < pb.size() || j < qb.size()) {
        double x;
        if (j == qb.size() || (i < pb.size() && pb[i] < qb[j])) {
            x = pb[i];
            pcur = pv[i++];
        } else if (i == pb.size() || qb[j] < pb[i]) {
            x = qb[j];
            qcur = qv[j++];
        } else {
            x = pb[i];
            pcur = pv[i++];
            qcur = qv[j++];
        }
        breakpoints.push_back(x);
        values.push_back(0.5 * (pcur + qcur));
    }
    return StepSurvival(std::move(breakpoints), std::move(values), 0.5 * (p.head() + q.head()));
}

double survival_entropy(const SortedSample& sample) {
    const auto xs = sample.values();
    const std::size_t n = xs.size();
    if (n < 2) return 0.0;
    const double dn = static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double spacing = xs[i] - xs[i - 1];
        if (spacing == 0.0) continue;
        sum += spacing * xlogx(static_cast<double>(n - i) / dn);
    }
    return -sum;
}

double survival_entropy(const StepSurvival& survival) {
    const auto b = survival.breakpoints();
    const auto v = survival.values();
    auto unbounded = [](double s) { return s > 0.0 && s < 1.0; };
    if (unbounded(survival.head()) || unbounded(survival.tail())) {
        return std::numeric_limits<double>::infinity();
    }
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < b.size(); ++k) {
        sum += (b[k + 1] - b[k]) * xlogx(v[k]);
    }
    return -sum;
}

}  // namespace esjs
