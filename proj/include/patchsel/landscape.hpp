#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "patchsel/errors.hpp"

namespace patchsel {

// Validation tolerances. The model itself is exact; these only absorb
// floating-point noise in user input.
inline constexpr double kTolPsd = 1e-10;      // relative to the largest eigenvalue
inline constexpr double kTolSimplex = 1e-9;   // |sum(alpha) - 1| accepted for renormalization
inline constexpr double kTolSupport = 1e-12;  // alpha_i above this counts as occupied

/// A patchy environment: per-patch growth rates mu, competition strengths
/// kappa, and the covariance Sigma of the driving environmental noise.
/// `gamma` is a loading matrix with gamma^T gamma = sigma, fixed at
/// construction and shared by all simulators so that coupled equations see
/// exactly the covariance structure of sigma.
struct Landscape {
    int n = 0;
    std::vector<double> mu;
    std::vector<double> kappa;
    std::vector<double> sigma;  // n*n, row-major, symmetric PSD
    std::vector<double> gamma;  // n*n, row-major

    double cov(int i, int j) const { return sigma[static_cast<std::size_t>(i) * n + j]; }
    double loading(int i, int j) const { return gamma[static_cast<std::size_t>(i) * n + j]; }
};

/// A patch-selection strategy: a probability vector over patches.
struct Strategy {
    std::vector<double> alpha;

    int n() const { return static_cast<int>(alpha.size()); }
};

/// Inter-patch movement rates with zero row sums, scaled by the speed
/// multiplier delta.
struct DispersalMatrix {
    int n = 0;
    std::vector<double> d;  // n*n, row-major, d_ii = -sum_{j != i} d_ij
    double delta = 1.0;

    double rate(int i, int j) const { return d[static_cast<std::size_t>(i) * n + j]; }
};

namespace detail {

using MatrixRM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline Eigen::Map<const MatrixRM> as_matrix(const std::vector<double>& m, int n) {
    return Eigen::Map<const MatrixRM>(m.data(), n, n);
}

inline std::string vec_to_string(std::span<const double> v) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ")";
    return os.str();
}

}  // namespace detail

/// Validates and renormalizes a strategy vector. Entries must be nonnegative
/// and sum to 1 within kTolSimplex; vectors inside the tolerance band are
/// rescaled exactly onto the simplex, anything else is rejected.
inline Strategy make_strategy(std::vector<double> alpha) {
    if (alpha.empty())
        throw InvalidStrategy("strategy vector is empty");
    double sum = 0.0;
    for (double a : alpha) {
        if (!(a >= 0.0))
            throw InvalidStrategy("strategy has negative entry in " +
                                  detail::vec_to_string(alpha));
        sum += a;
    }
    if (std::abs(sum - 1.0) > kTolSimplex)
        throw InvalidStrategy("strategy entries sum to " + std::to_string(sum) +
                              ", not 1");
    if (sum != 1.0)
        for (double& a : alpha) a /= sum;
    bool occupied = false;
    for (double a : alpha) occupied = occupied || a > kTolSupport;
    if (!occupied)
        throw InvalidStrategy("strategy has empty support");
    return Strategy{std::move(alpha)};
}

inline std::vector<int> support(const Strategy& s) {
    std::vector<int> idx;
    for (int i = 0; i < s.n(); ++i)
        if (s.alpha[i] > kTolSupport) idx.push_back(i);
    return idx;
}

/// Builds a validated landscape. Sigma is symmetrized as (S + S^T)/2 before
/// the positive-semidefiniteness check; the noise loading gamma comes from a
/// Cholesky factorization when sigma is positive definite and from a
/// symmetric eigendecomposition with negative eigenvalues clipped to zero
/// when it is merely PSD.
inline Landscape build_landscape(int n, std::vector<double> mu,
                                 std::vector<double> kappa,
                                 std::vector<double> sigma) {
    if (n < 1)
        throw DimensionMismatch("patch count must be >= 1, got " + std::to_string(n));
    const auto un = static_cast<std::size_t>(n);
    if (mu.size() != un || kappa.size() != un || sigma.size() != un * un) {
        std::ostringstream os;
        os << "expected mu, kappa of length " << n << " and sigma of size " << n
           << "x" << n << "; got " << mu.size() << ", " << kappa.size() << ", "
           << sigma.size();
        throw DimensionMismatch(os.str());
    }
    for (int i = 0; i < n; ++i)
        if (!(kappa[i] > 0.0))
            throw NonPositiveKappa("kappa[" + std::to_string(i) + "] = " +
                                   std::to_string(kappa[i]) + " must be > 0");

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) {
            const double s = 0.5 * (sigma[un * i + j] + sigma[un * j + i]);
            sigma[un * i + j] = sigma[un * j + i] = s;
        }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        detail::as_matrix(sigma, n));
    const Eigen::VectorXd evals = eig.eigenvalues();
    const double lambda_max = std::max(evals.maxCoeff(), 0.0);
    const double lambda_min = evals.minCoeff();
    if (lambda_min < -kTolPsd * std::max(lambda_max, 1.0)) {
        std::ostringstream os;
        os << "sigma has negative eigenvalue " << lambda_min;
        throw NotPositiveSemidefinite(os.str());
    }

    std::vector<double> gamma(un * un, 0.0);
    Eigen::Map<detail::MatrixRM> g(gamma.data(), n, n);
    Eigen::LLT<Eigen::MatrixXd> llt(detail::as_matrix(sigma, n));
    if (llt.info() == Eigen::Success) {
        g = llt.matrixU();  // gamma^T gamma = L L^T = sigma
    } else {
        Eigen::VectorXd clipped = evals.cwiseMax(0.0).cwiseSqrt();
        g = clipped.asDiagonal() * eig.eigenvectors().transpose();
    }

    return Landscape{n, std::move(mu), std::move(kappa), std::move(sigma),
                     std::move(gamma)};
}

/// kappa-weighted inner product <x,y>_kappa = sum_i kappa_i x_i y_i.
inline double kappa_inner(std::span<const double> x, std::span<const double> y,
                          const Landscape& land) {
    const auto un = static_cast<std::size_t>(land.n);
    if (x.size() != un || y.size() != un)
        throw DimensionMismatch("kappa_inner: vectors must have length " +
                                std::to_string(land.n));
    double acc = 0.0;
    for (std::size_t i = 0; i < un; ++i) acc += land.kappa[i] * x[i] * y[i];
    return acc;
}

inline double kappa_inner(const Strategy& a, const Strategy& b,
                          const Landscape& land) {
    return kappa_inner(std::span<const double>(a.alpha),
                       std::span<const double>(b.alpha), land);
}

/// Builds a dispersal rate matrix from the given rates; the diagonal is
/// recomputed as minus the off-diagonal row sum.
inline DispersalMatrix make_dispersal(int n, std::vector<double> rates,
                                      double delta = 1.0) {
    const auto un = static_cast<std::size_t>(n);
    if (n < 1 || rates.size() != un * un)
        throw DimensionMismatch("dispersal matrix must be " + std::to_string(n) +
                                "x" + std::to_string(n));
    if (!(delta >= 0.0))
        throw InvalidConfig("dispersal speed delta must be >= 0");
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            if (!(rates[un * i + j] >= 0.0))
                throw InvalidConfig("off-diagonal dispersal rate d[" +
                                    std::to_string(i) + "][" + std::to_string(j) +
                                    "] must be >= 0");
            row += rates[un * i + j];
        }
        rates[un * i + i] = -row;
    }
    return DispersalMatrix{n, std::move(rates), delta};
}

/// Stationary distribution alpha of the rate matrix D: sum_j alpha_j d_ji = 0
/// with alpha on the simplex, solved as a linear system with the
/// normalization row appended. Unique exactly when rank(D) = n - 1.
inline Strategy dispersal_stationary(const DispersalMatrix& disp) {
    const int n = disp.n;
    const Eigen::MatrixXd dmat = detail::as_matrix(disp.d, n);

    Eigen::FullPivLU<Eigen::MatrixXd> lu(dmat.transpose());
    lu.setThreshold(1e-12);
    const auto rank = lu.rank();
    if (rank != n - 1) {
        std::ostringstream os;
        os << "rate matrix does not have a unique stationary distribution "
           << "(rank " << rank << ", need " << n - 1 << "; deficiency "
           << n - 1 - rank << ")";
        throw NoUniqueStationary(os.str());
    }

    Eigen::MatrixXd system(n + 1, n);
    system.topRows(n) = dmat.transpose();
    system.bottomRows(1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    rhs(n) = 1.0;
    Eigen::VectorXd alpha = system.colPivHouseholderQr().solve(rhs);

    std::vector<double> out(alpha.data(), alpha.data() + n);
    for (double& a : out) a = std::max(a, 0.0);  // clip solver noise
    const double sum = std::accumulate(out.begin(), out.end(), 0.0);
    for (double& a : out) a /= sum;
    return make_strategy(std::move(out));
}

}  // namespace patchsel
