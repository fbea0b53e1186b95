#include "esjs/bootstrap.hpp"

#include "esjs/error.hpp"
#include "esjs/seed.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace esjs {

void validate(const BootstrapConfig& config) {
    if (config.resamples == 0) throw std::invalid_argument("bootstrap: resamples must be at least 1");
    if (!(config.level > 0.0 && config.level < 1.0)) {
        throw std::invalid_argument("bootstrap: level must lie in (0, 1)");
    }
    if (config.scheme == ResampleScheme::MovingBlock && config.block_length == 0) {
        throw std::invalid_argument("bootstrap: block length must be at least 1");
    }
}

namespace {

// Draws n indices with replacement and writes the selected values of the
// ascending `xs` to `out`, ascending. Buffers are reused across replicates.
void iid_resample_into(std::span<const double> xs, std::uint64_t seed, std::vector<std::uint32_t>& counts,
                       std::vector<double>& out) {
    const std::size_t n = xs.size();
    Rng rng = make_rng(seed);
    counts.assign(n, 0);
    if (n <= 0xFFFFFFFFu) {
        // Two 32-bit multiply-shift indices per 64-bit draw.
        const std::uint64_t bound = n;
        std::size_t k = 0;
        for (; k + 1 < n; k += 2) {
            const std::uint64_t r = rng();
            ++counts[((r & 0xFFFFFFFFu) * bound) >> 32];
            ++counts[((r >> 32) * bound) >> 32];
        }
        if (k < n) ++counts[uniform_index(rng, n)];
    } else {
        for (std::size_t k = 0; k < n; ++k) ++counts[uniform_index(rng, n)];
    }

    // Counts are almost always below 4, so four unconditional stores per
    // source value avoid a data-dependent branch; the slack is trimmed after.
    out.resize(n + 4);
    double* dst = out.data();
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = xs[i];
        const std::uint32_t c = counts[i];
        dst[pos] = x;
        dst[pos + 1] = x;
        dst[pos + 2] = x;
        dst[pos + 3] = x;
        if (c > 4) [[unlikely]] std::fill_n(dst + pos, c, x);
        pos += c;
    }
    out.resize(n);
}

}  // namespace

SortedSample iid_resample(const SortedSample& sample, std::uint64_t seed) {
    if (sample.empty()) throw DataError("empty sample");
    std::vector<std::uint32_t> counts;
    std::vector<double> out;
    iid_resample_into(sample.values(), seed, counts, out);
    return SortedSample::from_sorted(std::move(out));
}

std::vector<double> moving_block_resample(std::span<const double> series, std::size_t block_length,
                                          std::uint64_t seed) {
    const std::size_t n = series.size();
    if (n == 0) throw DataError("empty sample");
    if (block_length == 0 || block_length > n) {
        throw std::invalid_argument("moving_block_resample: block length must lie in [1, " +
                                    std::to_string(n) + "]");
    }
    Rng rng = make_rng(seed);
    const std::size_t starts = n - block_length + 1;
    std::vector<double> out;
    out.reserve(n + block_length);
    while (out.size() < n) {
        const std::size_t s = uniform_index(rng, starts);
        out.insert(out.end(), series.begin() + static_cast<std::ptrdiff_t>(s),
                   series.begin() + static_cast<std::ptrdiff_t>(s + block_length));
    }
    out.resize(n);
    return out;
}

double nearest_rank(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("nearest_rank: no replicates");
    const double b = static_cast<double>(sorted.size());
    // The 1e-9 guard keeps q * B at an integer (0.025 * 1000) from being
    // pushed to the next rank by the rounding of q.
    double rank = std::ceil(q * b - 1e-9);
    rank = std::clamp(rank, 1.0, b);
    return sorted[static_cast<std::size_t>(rank) - 1];
}

ConfidenceInterval interval_from_replicates(double point, std::vector<double> replicates, double level,
                                            IntervalMethod method) {
    if (replicates.empty()) throw std::invalid_argument("bootstrap: zero resamples");
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("bootstrap: level must lie in (0, 1)");
    std::sort(replicates.begin(), replicates.end());
    const double lo = nearest_rank(replicates, 0.5 * (1.0 - level));
    const double hi = nearest_rank(replicates, 0.5 * (1.0 + level));
    ConfidenceInterval ci;
    ci.level = level;
    ci.point = point;
    if (method == IntervalMethod::Percentile) {
        ci.lb = lo;
        ci.ub = hi;
    } else {
        ci.lb = 2.0 * point - hi;
        ci.ub = 2.0 * point - lo;
    }
    return ci;
}

std::vector<double> bootstrap_replicates(const Statistic& statistic, std::span<const std::vector<double>> data,
                                         const BootstrapConfig& config) {
    const std::vector<ResampleScheme> schemes(data.size(), config.scheme);
    return bootstrap_replicates(statistic, data, schemes, config);
}

std::vector<double> bootstrap_replicates(const Statistic& statistic, std::span<const std::vector<double>> data,
                                         std::span<const ResampleScheme> schemes, const BootstrapConfig& config) {
    validate(config);
    if (data.empty()) throw std::invalid_argument("bootstrap: no data sets");
    if (schemes.size() != data.size()) throw std::invalid_argument("bootstrap: one scheme per data set required");

    std::vector<SortedSample> sorted(data.size());
    for (std::size_t d = 0; d < data.size(); ++d) {
        if (data[d].empty()) throw DataError("empty sample");
        if (schemes[d] == ResampleScheme::Iid) {
            sorted[d] = SortedSample(data[d]);
        } else if (config.block_length == 0 || config.block_length > data[d].size()) {
            throw std::invalid_argument("bootstrap: block length must lie in [1, series length]");
        }
    }

    const std::size_t b_total = config.resamples;
    std::vector<double> replicates(b_total);
    // Per-worker scratch buffers, reused across that worker's replicates.
    struct Scratch {
        std::vector<std::vector<double>> resampled;
        std::vector<std::uint32_t> counts;
    };
    auto run_replicate = [&](std::size_t b, Scratch& scratch) {
        scratch.resampled.resize(data.size());
        for (std::size_t d = 0; d < data.size(); ++d) {
            const std::uint64_t seed = derive_seed(derive_seed(config.seed, "bootstrap", b), "dataset", d);
            if (schemes[d] == ResampleScheme::Iid) {
                iid_resample_into(sorted[d].values(), seed, scratch.counts, scratch.resampled[d]);
            } else {
                scratch.resampled[d] = moving_block_resample(data[d], config.block_length, seed);
            }
        }
        replicates[b] = statistic(scratch.resampled);
    };

    std::size_t workers = config.workers == 0 ? std::thread::hardware_concurrency() : config.workers;
    workers = std::clamp<std::size_t>(workers, 1, b_total);
    if (workers == 1) {
        Scratch scratch;
        for (std::size_t b = 0; b < b_total; ++b) run_replicate(b, scratch);
        return replicates;
    }

    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    Scratch scratch;
                    for (std::size_t b = w; b < b_total; b += workers) run_replicate(b, scratch);
                } catch (...) {
                    const std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
    return replicates;
}

ConfidenceInterval bootstrap_ci(const Statistic& statistic, std::span<const std::vector<double>> data,
                                const BootstrapConfig& config) {
    validate(config);
    const double point = statistic(data);
    return interval_from_replicates(point, bootstrap_replicates(statistic, data, config), config.level,
                                    config.interval);
}

}  // namespace esjs
