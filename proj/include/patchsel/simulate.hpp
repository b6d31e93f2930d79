#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "patchsel/analytic.hpp"
#include "patchsel/errors.hpp"
#include "patchsel/landscape.hpp"
#include "patchsel/rng.hpp"

namespace patchsel {

inline constexpr double kExtinctionThreshold = 1e-12;
inline constexpr double kOverflowGuard = 50.0;  // max |log increment| per step

enum class Scheme { LogEuler, Euler };

struct SimConfig {
    double dt = 1e-3;
    double t_max = 1000.0;
    double burn_in = 100.0;
    std::uint64_t seed = 42;
    int replicates = 8;
    Scheme scheme = Scheme::LogEuler;
};

inline void validate(const SimConfig& cfg) {
    if (!(cfg.dt > 0.0) || !(cfg.dt <= cfg.t_max))
        throw InvalidConfig("need 0 < dt <= t_max");
    if (!(cfg.burn_in >= 0.0) || !(cfg.burn_in < cfg.t_max))
        throw InvalidConfig("need 0 <= burn_in < t_max");
    if (cfg.replicates < 1)
        throw InvalidConfig("need replicates >= 1");
}

struct ComponentStats {
    double time_average = 0.0;  // post-burn-in Riemann average
    double log_slope = 0.0;     // log(x_T / x_0) / T over the full window
    double min = 0.0;
    double max = 0.0;
    bool extinct = false;       // dipped below kExtinctionThreshold
};

/// A discretized sample path on a uniform time grid. `states[c][k]` is
/// component c at time `times[k]`.
struct Trajectory {
    double dt = 0.0;
    double burn_in = 0.0;
    std::vector<double> times;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> states;
    std::vector<ComponentStats> stats;
};

enum class TimeAverageKind { Identity, IndicatorAbove, Log };

/// Riemann time average of h(x) over the post-burn-in grid of one component.
inline double time_average(const Trajectory& traj, TimeAverageKind h,
                           double burn_in, double threshold = 0.0,
                           int component = 0) {
    if (traj.times.empty() || burn_in >= traj.times.back())
        throw BurnInTooLong("burn-in " + std::to_string(burn_in) +
                            " >= trajectory horizon");
    if (component < 0 || component >= static_cast<int>(traj.states.size()))
        throw IndexOutOfRange("component " + std::to_string(component));
    const auto& x = traj.states[component];
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (traj.times[k] < burn_in) continue;
        switch (h) {
            case TimeAverageKind::Identity: acc += x[k]; break;
            case TimeAverageKind::IndicatorAbove: acc += x[k] > threshold ? 1.0 : 0.0; break;
            case TimeAverageKind::Log: acc += std::log(x[k]); break;
        }
        ++count;
    }
    return acc / static_cast<double>(count);
}

/// Per-patch occupancy fractions x_i / sum_j x_j averaged over the
/// post-burn-in grid.
inline std::vector<double> occupancy_time_average(const Trajectory& traj,
                                                  double burn_in) {
    if (traj.times.empty() || burn_in >= traj.times.back())
        throw BurnInTooLong("burn-in exceeds trajectory horizon");
    const std::size_t comps = traj.states.size();
    std::vector<double> acc(comps, 0.0);
    std::size_t count = 0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        if (traj.times[k] < burn_in) continue;
        double total = 0.0;
        for (std::size_t c = 0; c < comps; ++c) total += traj.states[c][k];
        for (std::size_t c = 0; c < comps; ++c) acc[c] += traj.states[c][k] / total;
        ++count;
    }
    for (double& a : acc) a /= static_cast<double>(count);
    return acc;
}

namespace detail {

inline std::size_t step_count(const SimConfig& cfg) {
    const auto steps = static_cast<std::size_t>(std::llround(cfg.t_max / cfg.dt));
    return std::max<std::size_t>(steps, 1);
}

inline std::vector<double> grid_times(std::size_t steps, double dt) {
    std::vector<double> t(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) t[k] = static_cast<double>(k) * dt;
    return t;
}

inline void guard_increment(double incr, double t) {
    if (!std::isfinite(incr) || std::abs(incr) > kOverflowGuard)
        throw UnstableStep("log increment " + std::to_string(incr) + " at t = " +
                           std::to_string(t) + "; decrease dt");
}

inline ComponentStats component_stats(const Trajectory& traj,
                                      const std::vector<double>& x) {
    ComponentStats s;
    s.min = std::numeric_limits<double>::infinity();
    s.max = -std::numeric_limits<double>::infinity();
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        s.min = std::min(s.min, x[k]);
        s.max = std::max(s.max, x[k]);
        if (traj.times[k] >= traj.burn_in) {
            acc += x[k];
            ++count;
        }
    }
    s.time_average = acc / static_cast<double>(count);
    const double horizon = traj.times.back();
    s.log_slope = (x.back() > 0.0 && x.front() > 0.0)
                      ? std::log(x.back() / x.front()) / horizon
                      : std::numeric_limits<double>::quiet_NaN();
    s.extinct = s.min < kExtinctionThreshold;
    return s;
}

inline void finalize_stats(Trajectory& traj) {
    traj.stats.clear();
    for (const auto& x : traj.states)
        traj.stats.push_back(component_stats(traj, x));
}

// gamma * v, i.e. per-patch loading of a strategy onto the Brownian axes.
inline std::vector<double> loading_times(const Landscape& land,
                                         std::span<const double> v) {
    std::vector<double> g(land.n, 0.0);
    for (int i = 0; i < land.n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < land.n; ++j) acc += land.loading(i, j) * v[j];
        g[i] = acc;
    }
    return g;
}

}  // namespace detail

/// Total abundance of a single population playing strategy `a`. The default
/// LogEuler scheme integrates
///   d log X = (alpha.mu - <a,a>_kappa X - alpha.Sigma alpha / 2) dt
///           + sqrt(alpha.Sigma alpha) dW
/// so paths stay strictly positive by construction; the plain Euler scheme
/// integrates the abundance itself and raises UnstableStep on a negative
/// excursion.
inline Trajectory simulate_monomorphic(const Landscape& land, const Strategy& a,
                                       double x0, const SimConfig& cfg,
                                       int replicate = 0) {
    validate(cfg);
    detail::require_dim(land, a, "simulate_monomorphic");
    if (!(x0 > 0.0))
        throw NonPositiveInitial("x0 = " + std::to_string(x0) + " must be > 0");

    const std::size_t steps = detail::step_count(cfg);
    const double dt = cfg.dt;
    const double sqdt = std::sqrt(dt);
    const auto ga = detail::loading_times(land, a.alpha);
    const double growth = stochastic_growth_rate(land, a);
    const double mean_growth = detail::dot(a.alpha, land.mu);
    const double self = kappa_inner(a, a, land);

    Trajectory traj;
    traj.dt = dt;
    traj.burn_in = cfg.burn_in;
    traj.times = detail::grid_times(steps, dt);
    traj.labels = {"x"};
    std::vector<double> xs(steps + 1);
    xs[0] = x0;

    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(replicate));
    std::vector<double> z(land.n);
    double logx = std::log(x0);
    double x = x0;
    for (std::size_t k = 0; k < steps; ++k) {
        rng.normals(k, z);
        const double noise = detail::dot(ga, z) * sqdt;
        if (cfg.scheme == Scheme::LogEuler) {
            const double incr = (growth - self * x) * dt + noise;
            detail::guard_increment(incr, traj.times[k]);
            logx += incr;
            x = std::exp(logx);
        } else {
            x += x * (mean_growth - self * x) * dt + x * noise;
            if (!std::isfinite(x) || x < 0.0)
                throw UnstableStep("abundance left (0, inf) at t = " +
                                   std::to_string(traj.times[k]) +
                                   "; decrease dt");
        }
        xs[k + 1] = x;
    }
    traj.states.push_back(std::move(xs));
    detail::finalize_stats(traj);
    return traj;
}

/// Two populations with strategies `a` and `b` competing through shared
/// patches. Both equations are driven by one n-dimensional Brownian
/// increment mapped through the noise loading, which realizes the cross
/// correlation alpha.Sigma beta exactly. With y0 = 0 the invader stays on its
/// extinct face and X reproduces simulate_monomorphic bit for bit.
inline Trajectory simulate_dimorphic(const Landscape& land, const Strategy& a,
                                     const Strategy& b, double x0, double y0,
                                     const SimConfig& cfg, int replicate = 0) {
    validate(cfg);
    detail::require_dim(land, a, "simulate_dimorphic");
    detail::require_dim(land, b, "simulate_dimorphic");
    if (!(x0 > 0.0))
        throw NonPositiveInitial("x0 = " + std::to_string(x0) + " must be > 0");
    if (!(y0 >= 0.0))
        throw NonPositiveInitial("y0 = " + std::to_string(y0) + " must be >= 0");

    const std::size_t steps = detail::step_count(cfg);
    const double dt = cfg.dt;
    const double sqdt = std::sqrt(dt);
    const auto ga = detail::loading_times(land, a.alpha);
    const auto gb = detail::loading_times(land, b.alpha);
    const double growth_a = stochastic_growth_rate(land, a);
    const double growth_b = stochastic_growth_rate(land, b);
    const double self_a = kappa_inner(a, a, land);
    const double self_b = kappa_inner(b, b, land);
    const double cross = kappa_inner(a, b, land);

    Trajectory traj;
    traj.dt = dt;
    traj.burn_in = cfg.burn_in;
    traj.times = detail::grid_times(steps, dt);
    traj.labels = {"x", "y"};
    std::vector<double> xs(steps + 1), ys(steps + 1);
    xs[0] = x0;
    ys[0] = y0;

    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(replicate));
    std::vector<double> z(land.n);
    double logx = std::log(x0);
    double x = x0;
    const bool y_alive = y0 > 0.0;
    double logy = y_alive ? std::log(y0) : 0.0;
    double y = y0;
    for (std::size_t k = 0; k < steps; ++k) {
        rng.normals(k, z);
        const double incr_x =
            ((growth_a - self_a * x) - cross * y) * dt +
            detail::dot(ga, z) * sqdt;
        detail::guard_increment(incr_x, traj.times[k]);
        if (y_alive) {
            const double incr_y =
                ((growth_b - self_b * y) - cross * x) * dt +
                detail::dot(gb, z) * sqdt;
            detail::guard_increment(incr_y, traj.times[k]);
            logy += incr_y;
            y = std::exp(logy);
        }
        logx += incr_x;
        x = std::exp(logx);
        xs[k + 1] = x;
        ys[k + 1] = y;
    }
    traj.states.push_back(std::move(xs));
    traj.states.push_back(std::move(ys));
    detail::finalize_stats(traj);
    return traj;
}

struct InvasionSlopeResult {
    Trajectory trajectory;  // replicate 0
    double slope = 0.0;     // mean of log(Y_T / Y_0) / T over replicates
    double slope_stderr = 0.0;
    std::vector<double> replicate_slopes;
};

/// Partially linearized invasion experiment: the resident runs at full
/// nonlinearity, the invader without self-limitation. The ensemble log-slope
/// of the invader estimates the invasion rate.
inline InvasionSlopeResult simulate_linearized_invasion(
    const Landscape& land, const Strategy& resident, const Strategy& invader,
    double x0, double y0, const SimConfig& cfg) {
    validate(cfg);
    detail::require_dim(land, resident, "simulate_linearized_invasion");
    detail::require_dim(land, invader, "simulate_linearized_invasion");
    if (!(x0 > 0.0) || !(y0 > 0.0))
        throw NonPositiveInitial("linearized invasion needs x0 > 0 and y0 > 0");

    const std::size_t steps = detail::step_count(cfg);
    const double dt = cfg.dt;
    const double sqdt = std::sqrt(dt);
    const auto ga = detail::loading_times(land, resident.alpha);
    const auto gb = detail::loading_times(land, invader.alpha);
    const double growth_a = stochastic_growth_rate(land, resident);
    const double growth_b = stochastic_growth_rate(land, invader);
    const double self_a = kappa_inner(resident, resident, land);
    const double cross = kappa_inner(resident, invader, land);

    InvasionSlopeResult out;
    std::vector<double> z(land.n);
    for (int rep = 0; rep < cfg.replicates; ++rep) {
        CounterRng rng(cfg.seed, static_cast<std::uint64_t>(rep));
        double logx = std::log(x0);
        double x = x0;
        double logy = std::log(y0);
        const double logy0 = logy;

        Trajectory traj;
        if (rep == 0) {
            traj.dt = dt;
            traj.burn_in = cfg.burn_in;
            traj.times = detail::grid_times(steps, dt);
            traj.labels = {"x", "y"};
            traj.states.assign(2, std::vector<double>(steps + 1));
            traj.states[0][0] = x0;
            traj.states[1][0] = y0;
        }
        for (std::size_t k = 0; k < steps; ++k) {
            rng.normals(k, z);
            const double incr_x =
                (growth_a - self_a * x) * dt + detail::dot(ga, z) * sqdt;
            const double incr_y =
                (growth_b - cross * x) * dt + detail::dot(gb, z) * sqdt;
            detail::guard_increment(incr_x, static_cast<double>(k) * dt);
            detail::guard_increment(incr_y, static_cast<double>(k) * dt);
            logx += incr_x;
            logy += incr_y;
            x = std::exp(logx);
            if (rep == 0) {
                traj.states[0][k + 1] = x;
                traj.states[1][k + 1] = std::exp(logy);
            }
        }
        out.replicate_slopes.push_back((logy - logy0) / cfg.t_max);
        if (rep == 0) {
            detail::finalize_stats(traj);
            out.trajectory = std::move(traj);
        }
    }

    const auto& slopes = out.replicate_slopes;
    double mean = 0.0;
    for (double s : slopes) mean += s;
    mean /= static_cast<double>(slopes.size());
    out.slope = mean;
    if (slopes.size() > 1) {
        double ss = 0.0;
        for (double s : slopes) ss += (s - mean) * (s - mean);
        const double sd = std::sqrt(ss / static_cast<double>(slopes.size() - 1));
        out.slope_stderr = sd / std::sqrt(static_cast<double>(slopes.size()));
    }
    return out;
}

/// Dispersal-explicit dynamics: per-patch abundances with inter-patch
/// transfer delta * sum_j x_j d_ji. The transfer term couples patches
/// additively, so the system is integrated with an arithmetic Euler scheme;
/// a step that produces a negative abundance raises UnstableStep rather than
/// being clamped.
inline Trajectory simulate_dispersal(const Landscape& land,
                                     const DispersalMatrix& disp,
                                     std::span<const double> x0,
                                     const SimConfig& cfg, int replicate = 0) {
    validate(cfg);
    if (disp.n != land.n)
        throw DimensionMismatch("dispersal matrix is " + std::to_string(disp.n) +
                                "x" + std::to_string(disp.n) + ", landscape has " +
                                std::to_string(land.n) + " patches");
    if (static_cast<int>(x0.size()) != land.n)
        throw DimensionMismatch("x0 must have one entry per patch");
    for (double v : x0)
        if (!(v > 0.0))
            throw NonPositiveInitial("every initial patch abundance must be > 0");

    const int n = land.n;
    const std::size_t steps = detail::step_count(cfg);
    const double dt = cfg.dt;
    const double sqdt = std::sqrt(dt);

    Trajectory traj;
    traj.dt = dt;
    traj.burn_in = cfg.burn_in;
    traj.times = detail::grid_times(steps, dt);
    traj.states.assign(n, std::vector<double>(steps + 1));
    for (int i = 0; i < n; ++i) {
        traj.labels.push_back("x" + std::to_string(i + 1));
        traj.states[i][0] = x0[i];
    }

    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(replicate));
    std::vector<double> x(x0.begin(), x0.end());
    std::vector<double> xn(n), z(n), noise(n);
    for (std::size_t k = 0; k < steps; ++k) {
        rng.normals(k, z);
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += land.loading(j, i) * z[j];
            noise[i] = acc * sqdt;
        }
        for (int i = 0; i < n; ++i) {
            double transfer = 0.0;
            for (int j = 0; j < n; ++j) transfer += x[j] * disp.rate(j, i);
            xn[i] = x[i] + x[i] * (land.mu[i] - land.kappa[i] * x[i]) * dt +
                    disp.delta * transfer * dt + x[i] * noise[i];
            if (!std::isfinite(xn[i]) || xn[i] < 0.0)
                throw UnstableStep("patch " + std::to_string(i + 1) +
                                   " abundance left (0, inf) at t = " +
                                   std::to_string(traj.times[k]) +
                                   "; decrease dt");
        }
        x = xn;
        for (int i = 0; i < n; ++i) traj.states[i][k + 1] = x[i];
    }
    detail::finalize_stats(traj);
    return traj;
}

namespace detail {

// Closed-form solution of the single-patch stochastic logistic equation on a
// sampled Brownian path, with trapezoidal quadrature for the pathwise
// integral:
//   Z_t = z0 e^{(mu - s2/2) t + sigma W_t}
//         / (1 + z0 kappa int_0^t e^{(mu - s2/2) s + sigma W_s} ds).
inline std::vector<double> logistic_exact_path(double mu, double kappa,
                                               double sigma2, double z0,
                                               double dt,
                                               std::span<const double> normals) {
    const double sigma = std::sqrt(sigma2);
    const double drift = mu - 0.5 * sigma2;
    const double sqdt = std::sqrt(dt);
    std::vector<double> out(normals.size() + 1);
    double w = 0.0;
    double expo_prev = 1.0;
    double integral = 0.0;
    out[0] = z0;
    for (std::size_t k = 0; k < normals.size(); ++k) {
        w += sqdt * normals[k];
        const double t = static_cast<double>(k + 1) * dt;
        const double expo = std::exp(drift * t + sigma * w);
        integral += 0.5 * (expo_prev + expo) * dt;
        expo_prev = expo;
        out[k + 1] = z0 * expo / (1.0 + z0 * kappa * integral);
    }
    return out;
}

inline std::vector<double> logistic_logeuler_path(double mu, double kappa,
                                                  double sigma2, double z0,
                                                  double dt,
                                                  std::span<const double> normals) {
    const double sigma = std::sqrt(sigma2);
    const double drift = mu - 0.5 * sigma2;
    const double sqdt = std::sqrt(dt);
    std::vector<double> out(normals.size() + 1);
    double logz = std::log(z0);
    double zv = z0;
    out[0] = z0;
    for (std::size_t k = 0; k < normals.size(); ++k) {
        logz += (drift - kappa * zv) * dt + sigma * sqdt * normals[k];
        zv = std::exp(logz);
        out[k + 1] = zv;
    }
    return out;
}

inline std::vector<double> unit_normals(std::uint64_t seed, int replicate,
                                        std::size_t steps) {
    CounterRng rng(seed, static_cast<std::uint64_t>(replicate));
    std::vector<double> z(steps);
    for (std::size_t k = 0; k < steps; ++k)
        rng.normals(k, std::span<double>(&z[k], 1));
    return z;
}

}  // namespace detail

/// Evaluates the explicit solution of the single-patch stochastic logistic
/// equation on a freshly sampled Brownian path. The same (seed, replicate)
/// key reproduces the path seen by simulate_monomorphic on a one-patch
/// landscape, so the two can be compared pathwise.
inline Trajectory exact_logistic_oracle(double mu, double kappa, double sigma2,
                                        double z0, const SimConfig& cfg,
                                        int replicate = 0) {
    validate(cfg);
    if (!(z0 > 0.0))
        throw NonPositiveInitial("z0 = " + std::to_string(z0) + " must be > 0");
    if (!(sigma2 >= 0.0))
        throw InvalidConfig("sigma2 must be >= 0");
    if (!(kappa > 0.0))
        throw NonPositiveKappa("kappa must be > 0");

    const std::size_t steps = detail::step_count(cfg);
    const auto z = detail::unit_normals(cfg.seed, replicate, steps);

    Trajectory traj;
    traj.dt = cfg.dt;
    traj.burn_in = cfg.burn_in;
    traj.times = detail::grid_times(steps, cfg.dt);
    traj.labels = {"x"};
    traj.states.push_back(detail::logistic_exact_path(mu, kappa, sigma2, z0,
                                                      cfg.dt, z));
    detail::finalize_stats(traj);
    return traj;
}

struct ComparisonReport {
    double fraction_x = 0.0;      // grid points with X <= Xbar
    double fraction_y = 0.0;      // grid points with Y <= Ybar
    double fraction_joint = 0.0;  // both at once
    std::size_t violations_x = 0;
    std::size_t violations_y = 0;
};

/// Shared-noise coupling of the competing pair (X, Y) with the decoupled
/// logistic pair (Xbar, Ybar). The decoupled system dominates the coupled one
/// pathwise; the report carries the fraction of grid points where the
/// discrete scheme preserves that domination. Requires dt small enough that
/// the discrete recursion is contraction-dominated, dt <= 1e-3 / max of the
/// kappa self-inner-products. `cross_scale` scales the cross-competition
/// terms and exists for tests (0 makes the two systems identical).
inline ComparisonReport coupled_comparison(const Landscape& land,
                                           const Strategy& a, const Strategy& b,
                                           double x0, double y0,
                                           const SimConfig& cfg,
                                           double cross_scale = 1.0) {
    validate(cfg);
    detail::require_dim(land, a, "coupled_comparison");
    detail::require_dim(land, b, "coupled_comparison");
    if (!(x0 > 0.0))
        throw NonPositiveInitial("x0 must be > 0");
    if (!(y0 >= 0.0))
        throw NonPositiveInitial("y0 must be >= 0");

    const double self_a = kappa_inner(a, a, land);
    const double self_b = kappa_inner(b, b, land);
    const double bound = 1e-3 / std::max(self_a, self_b);
    if (cfg.dt > bound)
        throw UnstableStep("dt = " + std::to_string(cfg.dt) +
                           " exceeds the comparison-coupling bound " +
                           std::to_string(bound));

    const std::size_t steps = detail::step_count(cfg);
    const double dt = cfg.dt;
    const double sqdt = std::sqrt(dt);
    const auto ga = detail::loading_times(land, a.alpha);
    const auto gb = detail::loading_times(land, b.alpha);
    const double growth_a = stochastic_growth_rate(land, a);
    const double growth_b = stochastic_growth_rate(land, b);
    const double cross = cross_scale * kappa_inner(a, b, land);

    CounterRng rng(cfg.seed, 0);
    std::vector<double> z(land.n);
    double x = x0, xbar = x0;
    double logx = std::log(x0), logxbar = logx;
    const bool y_alive = y0 > 0.0;
    double y = y0, ybar = y0;
    double logy = y_alive ? std::log(y0) : 0.0, logybar = logy;

    ComparisonReport rep;
    std::size_t ok_x = 1, ok_y = 1, ok_joint = 1;  // grid point at t = 0
    for (std::size_t k = 0; k < steps; ++k) {
        rng.normals(k, z);
        const double nx = detail::dot(ga, z) * sqdt;
        const double ny = detail::dot(gb, z) * sqdt;

        const double ix = ((growth_a - self_a * x) - cross * y) * dt + nx;
        const double ixbar = (growth_a - self_a * xbar) * dt + nx;
        detail::guard_increment(ix, static_cast<double>(k) * dt);
        detail::guard_increment(ixbar, static_cast<double>(k) * dt);
        double iy = 0.0, iybar = 0.0;
        if (y_alive) {
            iy = ((growth_b - self_b * y) - cross * x) * dt + ny;
            iybar = (growth_b - self_b * ybar) * dt + ny;
            detail::guard_increment(iy, static_cast<double>(k) * dt);
            detail::guard_increment(iybar, static_cast<double>(k) * dt);
        }
        logx += ix;
        logxbar += ixbar;
        x = std::exp(logx);
        xbar = std::exp(logxbar);
        if (y_alive) {
            logy += iy;
            logybar += iybar;
            y = std::exp(logy);
            ybar = std::exp(logybar);
        }

        const bool dom_x = x <= xbar;
        const bool dom_y = y <= ybar;
        ok_x += dom_x;
        ok_y += dom_y;
        ok_joint += dom_x && dom_y;
        rep.violations_x += !dom_x;
        rep.violations_y += !dom_y;
    }
    const auto points = static_cast<double>(steps + 1);
    rep.fraction_x = static_cast<double>(ok_x) / points;
    rep.fraction_y = static_cast<double>(ok_y) / points;
    rep.fraction_joint = static_cast<double>(ok_joint) / points;
    return rep;
}

}  // namespace patchsel
