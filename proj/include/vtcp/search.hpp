#pragma once

// Deterministic random substreams and a derivative-free compass search used by
// the certificate searches.

#include "vtcp/tensor.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>

namespace vtcp {

/// SplitMix64 finalizer; mixes (seed, stream) into an independent engine seed.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Engine for task `stream` of a run seeded with `seed`. Results never depend
/// on the order in which streams are consumed.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(mix_seed(seed, stream));
}

inline Vector gaussian_vector(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Vector v(n);
    for (double& x : v)
        x = dist(rng);
    return v;
}

inline Vector uniform_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Vector v(n);
    for (double& x : v)
        x = dist(rng);
    return v;
}

/// Scale to unit 2-norm; false (and untouched) for the zero vector.
inline bool normalize(Vector& x) {
    double s = 0.0;
    for (double v : x)
        s += v * v;
    if (!(s > 0.0) || !std::isfinite(s))
        return false;
    s = std::sqrt(s);
    for (double& v : x)
        v /= s;
    return true;
}

/// Every vector with entries from `levels`, in lexicographic order; empty if
/// there would be more than `cap` of them.
inline std::vector<Vector> lattice_points(std::size_t n, std::span<const double> levels, std::size_t cap) {
    std::vector<Vector> out;
    std::size_t total = 1;
    for (std::size_t k = 0; k < n; ++k) {
        total *= levels.size();
        if (total > cap)
            return out;
    }
    MultiIndex idx(n, 0);
    do {
        Vector v(n);
        for (std::size_t k = 0; k < n; ++k)
            v[k] = levels[idx[k]];
        out.push_back(std::move(v));
    } while (detail::next_index(idx, levels.size()));
    return out;
}

struct PatternSearchResult {
    Vector x;
    double value = 0.0;
    int iterations = 0;
    int evaluations = 0;
};

/// Compass search minimizing `objective` over the set described by `project`
/// (which maps a trial point onto the feasible set, returning false to reject
/// it). One iteration polls the 2n coordinate directions; on success the step
/// is kept (and doubled after two consecutive successes), otherwise halved.
/// Stops early once the value drops to `target` or the step underflows.
template <class Objective, class Project>
PatternSearchResult pattern_search(Objective&& objective, Project&& project, Vector x0, double step,
                                   int max_iters, double target, double min_step = 1e-14) {
    PatternSearchResult res;
    res.x = std::move(x0);
    res.value = objective(res.x);
    res.evaluations = 1;
    int streak = 0;
    const std::size_t n = res.x.size();
    Vector trial(n);
    for (res.iterations = 0; res.iterations < max_iters; ++res.iterations) {
        if (res.value <= target || step < min_step)
            break;
        bool improved = false;
        for (std::size_t k = 0; k < n && !improved; ++k) {
            for (double sign : {1.0, -1.0}) {
                trial = res.x;
                trial[k] += sign * step;
                if (!project(trial))
                    continue;
                double v = objective(trial);
                ++res.evaluations;
                if (v < res.value) {
                    res.x = trial;
                    res.value = v;
                    improved = true;
                    break;
                }
            }
        }
        if (improved) {
            if (++streak >= 2) {
                step *= 2.0;
                streak = 0;
            }
        } else {
            step *= 0.5;
            streak = 0;
        }
    }
    return res;
}

} // namespace vtcp
