#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>

#include "patchsel/errors.hpp"
#include "patchsel/landscape.hpp"

namespace patchsel {

inline constexpr double kTolZero = 1e-9;        // sign classification margin
inline constexpr double kTolDegenerate = 1e-12; // strategies closer than this are one strategy

namespace detail {

inline void require_dim(const Landscape& land, const Strategy& s,
                        const char* where) {
    if (s.n() != land.n)
        throw DimensionMismatch(std::string(where) + ": strategy has " +
                                std::to_string(s.n()) + " entries, landscape has " +
                                std::to_string(land.n) + " patches");
}

inline double dot(std::span<const double> x, std::span<const double> y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return acc;
}

// x . Sigma y
inline double sigma_quad(const Landscape& land, std::span<const double> x,
                         std::span<const double> y) {
    double acc = 0.0;
    for (int i = 0; i < land.n; ++i) {
        double row = 0.0;
        for (int j = 0; j < land.n; ++j) row += land.cov(i, j) * y[j];
        acc += x[i] * row;
    }
    return acc;
}

}  // namespace detail

/// Stationary law of the total abundance of a persisting monomorphic
/// population: Gamma with scale theta and shape k, mean k*theta.
struct GammaStationary {
    double theta = 0.0;
    double k = 0.0;
    double mean = 0.0;
};

enum class Outcome {
    Coexistence,
    AlphaExcludesBeta,
    BetaExcludesAlpha,
    BothExtinct,
    Boundary,
    Degenerate,
};

inline const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Coexistence: return "Coexistence";
        case Outcome::AlphaExcludesBeta: return "AlphaExcludesBeta";
        case Outcome::BetaExcludesAlpha: return "BetaExcludesAlpha";
        case Outcome::BothExtinct: return "BothExtinct";
        case Outcome::Boundary: return "Boundary";
        case Outcome::Degenerate: return "Degenerate";
    }
    return "?";
}

/// Everything the invasion calculus says about a strategy pair.
struct InvasionReport {
    double r_alpha = 0.0;  // stochastic growth rate of alpha alone
    double r_beta = 0.0;
    double i_ab = 0.0;     // invasion rate of beta against resident alpha
    double i_ba = 0.0;
    double c_ab = 0.0;     // competitive effect of alpha on beta
    double c_ba = 0.0;
    Outcome outcome = Outcome::Boundary;
};

/// alpha . (mu - Sigma alpha / 2): the almost-sure exponential growth rate of
/// a rare population playing alpha. Positive means the population persists.
inline double stochastic_growth_rate(const Landscape& land, const Strategy& a) {
    detail::require_dim(land, a, "stochastic_growth_rate");
    return detail::dot(a.alpha, land.mu) -
           0.5 * detail::sigma_quad(land, a.alpha, a.alpha);
}

/// Gamma(k, theta) parameters of the stationary abundance distribution,
/// theta = alpha.Sigma alpha / (2 <alpha,alpha>_kappa),
/// k = 2 alpha.mu / (alpha.Sigma alpha) - 1.
inline GammaStationary stationary_gamma(const Landscape& land, const Strategy& a) {
    detail::require_dim(land, a, "stationary_gamma");
    const double growth = stochastic_growth_rate(land, a);
    const double noise = detail::sigma_quad(land, a.alpha, a.alpha);
    if (noise <= 0.0)
        throw DegenerateNoise("alpha.Sigma alpha = 0: deterministic limit has no Gamma law");
    if (growth <= 0.0)
        throw NoStationaryDistribution(
            "stochastic growth rate " + std::to_string(growth) +
            " <= 0: abundance has no stationary distribution");
    const double self = kappa_inner(a, a, land);
    GammaStationary g;
    g.theta = noise / (2.0 * self);
    g.k = 2.0 * detail::dot(a.alpha, land.mu) / noise - 1.0;
    g.mean = g.k * g.theta;
    return g;
}

/// Invasion rate I(resident, invader): the long-run exponential growth rate
/// of a rare invader against the resident at stationarity. When the resident
/// cannot persist on its own the invader grows at its intrinsic rate.
inline double invasion_rate(const Landscape& land, const Strategy& resident,
                            const Strategy& invader) {
    detail::require_dim(land, resident, "invasion_rate");
    detail::require_dim(land, invader, "invasion_rate");
    const double r_res = stochastic_growth_rate(land, resident);
    const double r_inv = stochastic_growth_rate(land, invader);
    if (r_res > 0.0) {
        const double cross = kappa_inner(resident, invader, land);
        const double self = kappa_inner(resident, resident, land);
        return r_inv - cross / self * r_res;
    }
    return r_inv;
}

/// Competitive effects (C_{alpha,beta}, C_{beta,alpha}):
/// C_{alpha,beta} = <beta,alpha>_kappa / <beta,beta>_kappa measures how
/// strongly the alpha population suppresses the beta population.
inline std::pair<double, double> competitive_effects(const Landscape& land,
                                                     const Strategy& a,
                                                     const Strategy& b) {
    detail::require_dim(land, a, "competitive_effects");
    detail::require_dim(land, b, "competitive_effects");
    const double self_a = kappa_inner(a, a, land);
    const double self_b = kappa_inner(b, b, land);
    if (self_a <= 0.0 || self_b <= 0.0)
        throw DegenerateStrategy("strategy with vanishing kappa-norm");
    const double cross = kappa_inner(a, b, land);
    return {cross / self_b, cross / self_a};
}

/// Computes the full invasion report for a strategy pair and classifies the
/// long-term outcome from the signs of the invasion rates.
inline InvasionReport classify_outcome(const Landscape& land, const Strategy& a,
                                       const Strategy& b,
                                       double tol_zero = kTolZero) {
    detail::require_dim(land, a, "classify_outcome");
    detail::require_dim(land, b, "classify_outcome");

    InvasionReport rep;
    rep.r_alpha = stochastic_growth_rate(land, a);
    rep.r_beta = stochastic_growth_rate(land, b);
    rep.i_ab = invasion_rate(land, a, b);
    rep.i_ba = invasion_rate(land, b, a);
    std::tie(rep.c_ab, rep.c_ba) = competitive_effects(land, a, b);

    double max_diff = 0.0;
    for (int i = 0; i < land.n; ++i)
        max_diff = std::max(max_diff, std::abs(a.alpha[i] - b.alpha[i]));

    if (max_diff < kTolDegenerate)
        rep.outcome = Outcome::Degenerate;
    else if (rep.r_alpha <= 0.0 && rep.r_beta <= 0.0)
        rep.outcome = Outcome::BothExtinct;
    else if (rep.i_ab > tol_zero && rep.i_ba > tol_zero)
        rep.outcome = Outcome::Coexistence;
    else if (rep.r_alpha > 0.0 && rep.i_ab < -tol_zero)
        rep.outcome = Outcome::AlphaExcludesBeta;
    else if (rep.r_beta > 0.0 && rep.i_ba < -tol_zero)
        rep.outcome = Outcome::BetaExcludesAlpha;
    else
        rep.outcome = Outcome::Boundary;
    return rep;
}

}  // namespace patchsel
