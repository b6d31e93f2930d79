#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "patchsel/errors.hpp"
#include "patchsel/simulate.hpp"

namespace patchsel {

inline double mean(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

inline double sample_stddev(std::span<const double> v) {
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

/// Kolmogorov-Smirnov statistic of `samples` against the distribution with
/// the given CDF: sup_x |F_emp(x) - F(x)|.
inline double ks_statistic(std::vector<double> samples,
                           const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const auto n = static_cast<double>(samples.size());
    double stat = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        stat = std::max({stat, std::abs(f - lo), std::abs(f - hi)});
    }
    return stat;
}

/// Takes `count` evenly spaced post-burn-in samples from one component.
inline std::vector<double> thin_samples(const Trajectory& traj, double burn_in,
                                        std::size_t count, int component = 0) {
    if (traj.times.empty() || burn_in >= traj.times.back())
        throw BurnInTooLong("burn-in exceeds trajectory horizon");
    const auto& x = traj.states[component];
    std::size_t first = 0;
    while (first < traj.times.size() && traj.times[first] < burn_in) ++first;
    const std::size_t avail = traj.times.size() - first;
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t k = first + i * avail / count;
        out.push_back(x[k]);
    }
    return out;
}

}  // namespace patchsel
