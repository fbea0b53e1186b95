#include "esjs/divergence.hpp"

#include "esjs/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <span>
#include <string>

namespace esjs {
namespace {

// P log(P/M), zero when P is zero. M >= P/2 > 0 whenever P > 0.
inline double kl_term(double p, double m) noexcept { return p > 0.0 ? p * std::log(p / m) : 0.0; }

// log(k / n) for k = 0..n (entry 0 unused). Bootstrap evaluates thousands of
// divergences at a fixed n, so a few tables are cached per thread.
class LogFractionCache {
public:
    using Table = std::shared_ptr<const std::vector<double>>;

    // Callers hold the shared pointer, so a later eviction cannot free a
    // table still in use.
    Table get(std::size_t n) {
        for (const auto& [size, table] : slots_) {
            if (table && size == n) return table;
        }
        auto table = std::make_shared<std::vector<double>>(n + 1);
        (*table)[0] = -std::numeric_limits<double>::infinity();
        const double dn = static_cast<double>(n);
        for (std::size_t k = 1; k <= n; ++k) (*table)[k] = std::log(static_cast<double>(k) / dn);
        slots_[next_] = {n, table};
        next_ = (next_ + 1) % slots_.size();
        return table;
    }

private:
    std::array<std::pair<std::size_t, Table>, 4> slots_{};
    std::size_t next_ = 0;
};

LogFractionCache::Table log_fractions(std::size_t n) {
    thread_local LogFractionCache cache;
    return cache.get(n);
}

// Equal sizes n: with a and b observations above x, the integrand is
// G[a] + G[b] - H[a + b], G[k] = (k/n) log(k/n), H[k] = (k/n) log(k/2n).
// Both are zero at k = 0, and H[2a] == 2 G[a] exactly, so segments where
// P == Q contribute exactly zero.
struct EqualSizeTables {
    std::size_t n = 0;
    std::vector<double> g;
    std::vector<double> h;
};

const EqualSizeTables& equal_size_tables(std::size_t n) {
    thread_local std::array<std::unique_ptr<EqualSizeTables>, 2> slots{};
    thread_local std::size_t next = 0;
    for (auto& slot : slots) {
        if (slot && slot->n == n) return *slot;
    }
    auto& slot = slots[next];
    next = (next + 1) % slots.size();
    slot = std::make_unique<EqualSizeTables>();
    slot->n = n;
    const double dn = static_cast<double>(n);
    slot->g.assign(n + 1, 0.0);
    slot->h.assign(2 * n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        const double f = static_cast<double>(k) / dn;
        slot->g[k] = f * std::log(f);
    }
    for (std::size_t k = 1; k <= 2 * n; ++k) {
        slot->h[k] = static_cast<double>(k) / dn * std::log(static_cast<double>(k) / (2.0 * dn));
    }
    return *slot;
}

// Branch-light merge for the bootstrap hot path. Ties need no special care:
// a repeated value opens a zero-width segment.
double esjs_equal_sizes(std::span<const double> xs, std::span<const double> ys) {
    const std::size_t n = xs.size();
    const auto& t = equal_size_tables(n);
    const double* g = t.g.data();
    const double* h = t.h.data();
    std::size_t i = 0;
    std::size_t j = 0;
    double left = std::min(xs[0], ys[0]);
    double sum = 0.0;
    while (i < n && j < n) {
        const bool take_p = xs[i] < ys[j];
        const double x = take_p ? xs[i] : ys[j];
        const std::size_t a = n - i;
        const std::size_t b = n - j;
        sum += (x - left) * (g[a] + g[b] - h[a + b]);
        i += take_p;
        j += !take_p;
        left = x;
    }
    for (; i < n; ++i) {
        const std::size_t a = n - i;
        sum += (xs[i] - left) * (g[a] - h[a]);
        left = xs[i];
    }
    for (; j < n; ++j) {
        const std::size_t b = n - j;
        sum += (ys[j] - left) * (g[b] - h[b]);
        left = ys[j];
    }
    return 0.5 * sum;
}

}  // namespace

double esjs(const StepSurvival& p, const StepSurvival& q) {
    // Unbounded head/tail segments contribute zero only if P == Q there.
    if (p.head() != q.head() || p.tail() != q.tail()) {
        return std::numeric_limits<double>::infinity();
    }

    const auto pb = p.breakpoints();
    const auto qb = q.breakpoints();
    const auto pv = p.values();
    const auto qv = q.values();

    std::size_t i = 0;
    std::size_t j = 0;
    double pcur = p.head();
    double qcur = q.head();
    double sum = 0.0;
    bool started = false;
    double left = 0.0;
    while (i < pb.size() || j < qb.size()) {
        double x;
        if (j == qb.size() || (i < pb.size() && pb[i] < qb[j])) {
            x = pb[i];
        } else {
            x = qb[j];
        }
        if (started && pcur != qcur) {
            const double m = 0.5 * (pcur + qcur);
            sum += (x - left) * (kl_term(pcur, m) + kl_term(qcur, m));
        }
        if (i < pb.size() && pb[i] == x) pcur = pv[i++];
        if (j < qb.size() && qb[j] == x) qcur = qv[j++];
        left = x;
        started = true;
    }
    return 0.5 * sum;
}

double esjs(const SortedSample& p, const SortedSample& q) { return esjs_presorted(p.values(), q.values()); }

double esjs_presorted(std::span<const double> xs, std::span<const double> ys) {
    if (xs.empty() || ys.empty()) throw DataError("empty sample");
    if (xs.size() == ys.size()) return esjs_equal_sizes(xs, ys);
    const std::size_t np = xs.size();
    const std::size_t nq = ys.size();
    const double dnp = static_cast<double>(np);
    const double dnq = static_cast<double>(nq);

    const auto p_table = log_fractions(np);
    const auto q_table = log_fractions(nq);
    const auto& log_p = *p_table;
    const auto& log_q = *q_table;

    // Counts of observations still above the current position.
    std::size_t above_p = np;
    std::size_t above_q = nq;
    std::size_t i = 0;
    std::size_t j = 0;
    double left = std::min(xs[0], ys[0]);
    double sum = 0.0;
    while (i < np || j < nq) {
        const double x = (j == nq || (i < np && xs[i] < ys[j])) ? xs[i] : ys[j];
        if (x > left && above_p * nq != above_q * np) {
            const double pcur = static_cast<double>(above_p) / dnp;
            const double qcur = static_cast<double>(above_q) / dnq;
            const double m = 0.5 * (pcur + qcur);
            const double lm = std::log(m);
            double seg = 0.0;
            if (above_p > 0) seg += pcur * (log_p[above_p] - lm);
            if (above_q > 0) seg += qcur * (log_q[above_q] - lm);
            sum += (x - left) * seg;
        }
        while (i < np && xs[i] == x) {
            ++i;
            --above_p;
        }
        while (j < nq && ys[j] == x) {
            ++j;
            --above_q;
        }
        left = x;
    }
    return 0.5 * sum;
}

SortedSample mixture_sample(const SortedSample& p, const SortedSample& q) {
    std::vector<double> pooled(p.size() + q.size());
    std::merge(p.values().begin(), p.values().end(), q.values().begin(), q.values().end(),
               pooled.begin());
    return SortedSample::from_sorted(std::move(pooled));
}

double esjs_spacings(const SortedSample& p, const SortedSample& q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("spacings form requires equal sizes; use esjs");
    }
    const std::size_t n = p.size();
    if (n < 2) throw std::invalid_argument("esjs_spacings: need at least two observations");

    const auto xs = p.values();
    const auto ys = q.values();
    const double dn = static_cast<double>(n);
    double pq_sum = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double spacing = 0.5 * (xs[i] - xs[i - 1]) + 0.5 * (ys[i] - ys[i - 1]);
        pq_sum += spacing * xlogx(static_cast<double>(n - i) / dn);
    }

    const SortedSample m = mixture_sample(p, q);
    const auto ms = m.values();
    const std::size_t nm = ms.size();
    const double dnm = static_cast<double>(nm);
    double m_sum = 0.0;
    for (std::size_t k = 1; k < nm; ++k) {
        m_sum += (ms[k] - ms[k - 1]) * xlogx(static_cast<double>(nm - k) / dnm);
    }
    return pq_sum - m_sum;
}

double esjs_distance(const StepSurvival& p, const StepSurvival& q) { return std::sqrt(esjs(p, q)); }

double esjs_distance(const SortedSample& p, const SortedSample& q) { return std::sqrt(esjs(p, q)); }

EsjsFactor esjs_factor(double challenger_esjs, double champion_esjs) {
    if (challenger_esjs < 0.0 || champion_esjs < 0.0) {
        throw std::invalid_argument("esjs_factor: divergences must be non-negative");
    }
    if (champion_esjs == 0.0) throw NumericalError("degenerate perfect fit");
    return {challenger_esjs / champion_esjs, challenger_esjs, champion_esjs};
}

}  // namespace esjs
