#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "patchsel/analytic.hpp"
#include "patchsel/errors.hpp"
#include "patchsel/landscape.hpp"
#include "patchsel/rng.hpp"

namespace patchsel {

enum class EssKind { PureESS, MixedESS, NotFound };

inline const char* to_string(EssKind k) {
    switch (k) {
        case EssKind::PureESS: return "PureESS";
        case EssKind::MixedESS: return "MixedESS";
        case EssKind::NotFound: return "NotFound";
    }
    return "?";
}

/// Monte Carlo invasion certificate: the candidate passes when no tested
/// deviation strategy has an invasion rate above -tol_zero against it.
struct EssCertificate {
    int samples = 0;              // random simplex draws requested
    int deterministic_points = 0; // vertices and edge midpoints
    int tested = 0;               // points actually evaluated (after exclusion)
    int violations = 0;
    double worst_invasion_rate = -std::numeric_limits<double>::infinity();
    bool passed = false;
};

struct EssOptions {
    double tol_residual = 1e-10;
    int max_iterations = 50000;
    int certificate_samples = 1000;
    std::uint64_t seed = 42;
    double tol_zero = kTolZero;
    // Floor for the certificate's exclusion ball around the candidate;
    // verify_ess widens it when the noise covariance is nearly flat along the
    // simplex (invasion rates there are quadratically small, below what the
    // -tol_zero threshold can resolve).
    double exclusion_radius = 1e-4;
};

struct EssResult {
    Strategy strategy;
    std::vector<int> support;
    std::vector<double> residuals;  // stationarity residuals on the support
    double residual_norm = std::numeric_limits<double>::infinity();
    double lambda = 0.0;            // -alpha.Sigma alpha / 2
    EssKind kind = EssKind::NotFound;
    std::optional<EssCertificate> certificate;
    int trace_length = 0;           // solver iterations consumed
};

namespace detail {

inline std::vector<double> residual_all(const Landscape& land,
                                        std::span<const double> alpha) {
    const int n = land.n;
    const double quad = sigma_quad(land, alpha, alpha);
    const double growth = dot(alpha, land.mu) - 0.5 * quad;
    double self = 0.0;
    for (int i = 0; i < n; ++i) self += land.kappa[i] * alpha[i] * alpha[i];
    const double pressure = growth / self;  // stationary abundance of the resident
    std::vector<double> res(n);
    for (int i = 0; i < n; ++i) {
        double sig_row = 0.0;
        for (int j = 0; j < n; ++j) sig_row += land.cov(i, j) * alpha[j];
        res[i] = land.mu[i] - land.kappa[i] * alpha[i] * pressure - sig_row +
                 0.5 * quad;
    }
    return res;
}

inline double residual_norm_on(const std::vector<double>& res,
                               const std::vector<int>& idx) {
    double norm = 0.0;
    for (int i : idx) norm = std::max(norm, std::abs(res[i]));
    return norm;
}

// Smallest curvature of beta -> I(alpha, beta) along the simplex: the minimum
// eigenvalue of Sigma restricted to the sum-zero tangent space.
inline double min_tangent_curvature(const Landscape& land) {
    const int n = land.n;
    if (n < 2) return 0.0;
    Eigen::MatrixXd basis(n, n - 1);
    basis.setZero();
    for (int j = 0; j < n - 1; ++j) {
        // orthonormal sum-zero vectors (Helmert basis)
        const double norm = std::sqrt(static_cast<double>(j + 1) * (j + 2));
        for (int i = 0; i <= j; ++i) basis(i, j) = 1.0 / norm;
        basis(j + 1, j) = -static_cast<double>(j + 1) / norm;
    }
    const Eigen::MatrixXd reduced =
        basis.transpose() * as_matrix(land.sigma, n) * basis;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(reduced);
    return eig.eigenvalues().minCoeff();
}

}  // namespace detail

/// Margin of the pure-strategy ESS condition for patch i: the strategy
/// concentrated on patch i is an ESS iff this is strictly positive,
///   min over j != i of (sigma_ij - sigma_ii/2 - mu_j).
inline double pure_ess_margin(const Landscape& land, int patch) {
    if (patch < 0 || patch >= land.n)
        throw IndexOutOfRange("patch " + std::to_string(patch) + " not in [0, " +
                              std::to_string(land.n) + ")");
    double margin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < land.n; ++j) {
        if (j == patch) continue;
        const double lhs = land.mu[j] - 0.5 * land.cov(j, j);
        const double rhs = -0.5 * land.cov(j, j) + land.cov(patch, j) -
                           0.5 * land.cov(patch, patch);
        margin = std::min(margin, rhs - lhs);
    }
    return margin;
}

inline bool pure_ess_check(const Landscape& land, int patch) {
    return pure_ess_margin(land, patch) > 0.0;
}

/// Stationarity residuals of the mixed-ESS equations over the support of
/// `a`. A full-support ESS has residuals identically zero.
inline std::vector<double> ess_residual(const Landscape& land, const Strategy& a) {
    detail::require_dim(land, a, "ess_residual");
    if (!(stochastic_growth_rate(land, a) > 0.0))
        throw NonpersistentStrategy(
            "strategy has nonpositive stochastic growth rate");
    const auto res = detail::residual_all(land, a.alpha);
    std::vector<double> out;
    for (int i : support(a)) out.push_back(res[i]);
    return out;
}

/// Fixed-point form of the stationarity equations for two-patch landscapes:
/// a mixed ESS alpha satisfies alpha_i = rhs_i with
///   rhs_i = (mu_i + alpha.Sigma alpha / 2 - sigma_ij alpha_j)
///         / (kappa_i (mu.alpha - alpha.Sigma alpha/2) / <alpha,alpha>_kappa + sigma_ii).
inline std::array<double, 2> two_patch_ess_identity(const Landscape& land,
                                                    const Strategy& a) {
    if (land.n != 2)
        throw DimensionMismatch("two_patch_ess_identity needs n = 2");
    detail::require_dim(land, a, "two_patch_ess_identity");
    const double quad = detail::sigma_quad(land, a.alpha, a.alpha);
    const double pressure = stochastic_growth_rate(land, a) / kappa_inner(a, a, land);
    std::array<double, 2> rhs{};
    for (int i = 0; i < 2; ++i) {
        const int j = 1 - i;
        rhs[i] = (land.mu[i] + 0.5 * quad - land.cov(i, j) * a.alpha[j]) /
                 (land.kappa[i] * pressure + land.cov(i, i));
    }
    return rhs;
}

/// The ideal-free distribution of the noise-free model: occupancy
/// proportional to the patch carrying capacity mu_i / kappa_i over patches
/// with mu_i > 0.
inline Strategy deterministic_limit_ess(const Landscape& land) {
    std::vector<double> alpha(land.n, 0.0);
    double total = 0.0;
    for (int i = 0; i < land.n; ++i)
        if (land.mu[i] > 0.0) {
            alpha[i] = land.mu[i] / land.kappa[i];
            total += alpha[i];
        }
    if (total <= 0.0)
        throw NoViablePatch("no patch has mu_i > 0");
    for (double& a : alpha) a /= total;
    return make_strategy(std::move(alpha));
}

/// Returns a copy of the landscape with Sigma + eps * identity, used to stay
/// strictly positive definite when a covariance entry is exactly zero.
inline Landscape regularized(const Landscape& land, double eps = 1e-8) {
    std::vector<double> sigma = land.sigma;
    for (int i = 0; i < land.n; ++i)
        sigma[static_cast<std::size_t>(i) * land.n + i] += eps;
    return build_landscape(land.n, land.mu, land.kappa, std::move(sigma));
}

/// Monte Carlo certificate that `a` repels every other strategy: tests all
/// vertices, all edge midpoints, and `samples` uniform simplex draws, and
/// counts deviations with invasion rate >= -tol_zero.
inline EssCertificate verify_ess(const Landscape& land, const Strategy& a,
                                 int samples, std::uint64_t seed,
                                 double tol_zero = kTolZero,
                                 double exclusion_radius = 1e-4) {
    detail::require_dim(land, a, "verify_ess");
    const int n = land.n;

    EssCertificate cert;
    cert.samples = samples;

    // Near the candidate the invasion rate is of order curvature * d^2, so
    // below d = sqrt(tol_zero / curvature) negative rates cannot be resolved
    // against the -tol_zero threshold. Widen the exclusion ball accordingly,
    // capped so the certificate never ignores a macroscopic neighborhood.
    double radius = exclusion_radius;
    const double curvature = detail::min_tangent_curvature(land);
    if (curvature > 0.0)
        radius = std::max(radius, 3.0 * std::sqrt(2.0 * tol_zero / curvature));
    radius = std::min(radius, 0.1);

    std::vector<std::vector<double>> points;
    for (int i = 0; i < n; ++i) {
        std::vector<double> v(n, 0.0);
        v[i] = 1.0;
        points.push_back(std::move(v));
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            std::vector<double> v(n, 0.0);
            v[i] = v[j] = 0.5;
            points.push_back(std::move(v));
        }
    cert.deterministic_points = static_cast<int>(points.size());

    std::vector<double> u(n);
    for (int s = 0; s < samples; ++s) {
        CounterRng rng(seed, static_cast<std::uint64_t>(s));
        rng.uniforms(0, u);
        std::vector<double> v(n);
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            v[i] = -std::log(u[i]);  // Dirichlet(1,...,1)
            total += v[i];
        }
        for (double& x : v) x /= total;
        points.push_back(std::move(v));
    }

    for (const auto& beta : points) {
        double dist = 0.0;
        for (int i = 0; i < n; ++i)
            dist = std::max(dist, std::abs(beta[i] - a.alpha[i]));
        if (dist < radius) continue;
        const double rate = invasion_rate(land, a, make_strategy(beta));
        ++cert.tested;
        cert.worst_invasion_rate = std::max(cert.worst_invasion_rate, rate);
        if (rate >= -tol_zero) ++cert.violations;
    }
    cert.passed = cert.violations == 0;
    return cert;
}

namespace detail {

inline EssResult make_candidate(const Landscape& land, Strategy alpha,
                                EssKind kind) {
    EssResult r;
    r.lambda = -0.5 * sigma_quad(land, alpha.alpha, alpha.alpha);
    r.support = support(alpha);
    const auto res = residual_all(land, alpha.alpha);
    for (int i : r.support) r.residuals.push_back(res[i]);
    r.residual_norm = residual_norm_on(res, r.support);
    r.kind = kind;
    r.strategy = std::move(alpha);
    return r;
}

// Damped multiplicative fixed-point iteration on the stationarity residuals,
// restricted to the given support. Keeps iterates strictly inside the face.
inline std::optional<std::vector<double>> fixed_point_on_face(
    const Landscape& land, const std::vector<int>& face, int max_iterations,
    int& trace) {
    const int n = land.n;
    std::vector<double> alpha(n, 0.0);
    for (int i : face) alpha[i] = 1.0 / static_cast<double>(face.size());

    double eta = 0.1;
    auto res = residual_all(land, alpha);
    double norm = residual_norm_on(res, face);
    std::vector<double> trial(n, 0.0);
    for (int it = 0; it < max_iterations && norm > 1e-13; ++it) {
        ++trace;
        double total = 0.0;
        for (int i : face) {
            const double e = std::clamp(eta * res[i], -30.0, 30.0);
            trial[i] = alpha[i] * std::exp(e);
            total += trial[i];
        }
        for (int i : face) trial[i] /= total;
        const auto res_trial = residual_all(land, trial);
        const double norm_trial = residual_norm_on(res_trial, face);
        if (norm_trial < norm) {
            for (int i : face) alpha[i] = trial[i];
            res = res_trial;
            norm = norm_trial;
            eta = std::min(eta * 1.1, 0.5);
        } else {
            eta *= 0.5;
            if (eta < 1e-10) break;
        }
    }
    if (norm > 1e-13) return std::nullopt;
    return alpha;
}

// g(a) = res_1 - res_2 along the edge alpha = (a, 1-a) of the two-patch
// simplex; interior roots are mixed-ESS candidates, and the endpoint signs
// reproduce the pure-strategy conditions.
inline double two_patch_g(const Landscape& land, double a) {
    const std::array<double, 2> alpha{a, 1.0 - a};
    const auto res = residual_all(land, std::span<const double>(alpha));
    return res[0] - res[1];
}

inline std::vector<double> two_patch_roots(const Landscape& land, int& trace) {
    constexpr int kScan = 2048;
    std::vector<double> roots;
    double prev_a = 0.0;
    double prev_g = two_patch_g(land, 0.0);
    for (int k = 1; k <= kScan; ++k) {
        const double a = static_cast<double>(k) / kScan;
        const double g = two_patch_g(land, a);
        if (prev_g == 0.0 && prev_a > 0.0) roots.push_back(prev_a);
        if (prev_g * g < 0.0) {
            double lo = prev_a, hi = a;
            double glo = prev_g;
            for (int it = 0; it < 200; ++it) {
                ++trace;
                const double mid = 0.5 * (lo + hi);
                const double gm = two_patch_g(land, mid);
                if (gm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((glo < 0.0) == (gm < 0.0)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_a = a;
        prev_g = g;
    }
    return roots;
}

}  // namespace detail

/// Searches for an evolutionarily stable strategy: pure strategies first,
/// then the two-patch bisection or, for n > 2, an interior fixed-point
/// iteration with face enumeration as fallback. Every candidate must pass the
/// Monte Carlo certificate before it is returned; if nothing passes, the best
/// candidate is returned with kind = NotFound.
inline EssResult solve_ess(const Landscape& land, const EssOptions& opts = {}) {
    const int n = land.n;

    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
            detail::as_matrix(land.sigma, n));
        const double lmin = eig.eigenvalues().minCoeff();
        const double lmax = eig.eigenvalues().maxCoeff();
        if (lmin <= 1e-12 * std::max(lmax, 1.0))
            throw SigmaNotPositiveDefinite(
                "sigma must be positive definite (min eigenvalue " +
                std::to_string(lmin) + ")");
    }

    {
        double best = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            std::vector<double> v(n, 0.0);
            v[i] = 1.0;
            best = std::max(best, stochastic_growth_rate(land, Strategy{v}));
        }
        best = std::max(best,
                        stochastic_growth_rate(
                            land, Strategy{std::vector<double>(
                                      n, 1.0 / static_cast<double>(n))}));
        if (!(best > 0.0))
            throw NoPersistentStrategy(
                "no vertex or uniform strategy has positive stochastic growth "
                "rate");
    }

    auto certify = [&](EssResult& cand) {
        cand.certificate =
            verify_ess(land, cand.strategy, opts.certificate_samples, opts.seed,
                       opts.tol_zero, opts.exclusion_radius);
        return cand.certificate->passed;
    };

    int trace = 0;
    std::optional<EssResult> best;
    auto keep_best = [&](EssResult&& cand) {
        if (!best || cand.residual_norm < best->residual_norm)
            best = std::move(cand);
    };

    for (int i = 0; i < n; ++i) {
        ++trace;
        if (!pure_ess_check(land, i)) continue;
        std::vector<double> v(n, 0.0);
        v[i] = 1.0;
        auto cand = detail::make_candidate(land, make_strategy(v), EssKind::PureESS);
        cand.trace_length = trace;
        if (certify(cand)) return cand;
        keep_best(std::move(cand));
    }

    // n = 1 never reaches this point: the pure condition is vacuous for a
    // single patch, so the scan above already returned.

    if (n == 2) {
        for (double root : detail::two_patch_roots(land, trace)) {
            auto strat = make_strategy({root, 1.0 - root});
            if (!(stochastic_growth_rate(land, strat) > 0.0)) continue;
            auto cand = detail::make_candidate(land, std::move(strat), EssKind::MixedESS);
            cand.trace_length = trace;
            if (cand.residual_norm > opts.tol_residual) {
                keep_best(std::move(cand));
                continue;
            }
            if (certify(cand)) return cand;
            keep_best(std::move(cand));
        }
    } else {
        // Interior first, then every proper face by decreasing size.
        std::vector<std::vector<int>> faces;
        faces.emplace_back();
        for (int i = 0; i < n; ++i) faces.back().push_back(i);
        std::vector<std::vector<int>> proper;
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            std::vector<int> face;
            for (int i = 0; i < n; ++i)
                if (mask & (1u << i)) face.push_back(i);
            if (static_cast<int>(face.size()) >= 2 &&
                static_cast<int>(face.size()) < n)
                proper.push_back(std::move(face));
        }
        std::sort(proper.begin(), proper.end(),
                  [](const auto& a, const auto& b) { return a.size() > b.size(); });
        faces.insert(faces.end(), proper.begin(), proper.end());

        for (const auto& face : faces) {
            auto alpha = detail::fixed_point_on_face(land, face,
                                                     opts.max_iterations, trace);
            if (!alpha) continue;

            // A component collapsing toward zero means the true optimum lives
            // on a smaller face; the enumeration will reach it.
            bool interior = true;
            for (int i : face) interior = interior && (*alpha)[i] > kTolSupport;
            if (!interior) continue;

            // Off-support patches must be strictly excluded to first order.
            const auto res = detail::residual_all(land, *alpha);
            bool excluded = true;
            for (int j = 0; j < n; ++j)
                if ((*alpha)[j] == 0.0 && res[j] >= 0.0) excluded = false;
            if (!excluded) continue;

            auto strat = make_strategy(*alpha);
            if (!(stochastic_growth_rate(land, strat) > 0.0)) continue;
            auto cand = detail::make_candidate(land, std::move(strat), EssKind::MixedESS);
            cand.trace_length = trace;
            if (cand.residual_norm > opts.tol_residual) {
                keep_best(std::move(cand));
                continue;
            }
            if (certify(cand)) return cand;
            keep_best(std::move(cand));
        }
    }

    if (!best)
        best = detail::make_candidate(
            land,
            make_strategy(std::vector<double>(n, 1.0 / static_cast<double>(n))),
            EssKind::NotFound);
    if (!best->certificate)
        best->certificate =
            verify_ess(land, best->strategy, opts.certificate_samples, opts.seed,
                       opts.tol_zero, opts.exclusion_radius);
    best->kind = EssKind::NotFound;
    best->trace_length = trace;
    return *best;
}

}  // namespace patchsel
