#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "patchsel/analytic.hpp"
#include "patchsel/ess.hpp"

using namespace patchsel;
using Catch::Approx;

namespace {

Landscape symmetric2(double s2 = 1.0) {
    return build_landscape(2, {1.0, 1.0}, {1.0, 1.0}, {s2, 0.0, 0.0, s2});
}

// Fig-style source-sink landscape with the singular covariance entry
// regularized so sigma stays positive definite.
Landscape source_sink(double mu2, double s2 = 1.0) {
    return regularized(
        build_landscape(2, {1.0, mu2}, {1.0, 1.0}, {s2, 0.0, 0.0, 0.0}), 1e-8);
}

}  // namespace

TEST_CASE("pure strategy condition", "[ess]") {
    // patch 1 keeps the population only if the sink declines fast enough
    const auto strong_sink = build_landscape(2, {1.0, -0.6}, {1, 1}, {1, 0, 0, 0});
    CHECK(pure_ess_check(strong_sink, 0));

    const auto weak_sink = build_landscape(2, {1.0, -0.4}, {1, 1}, {1, 0, 0, 0});
    CHECK_FALSE(pure_ess_check(weak_sink, 0));

    CHECK_FALSE(pure_ess_check(symmetric2(), 0));
    CHECK_THROWS_AS(pure_ess_check(symmetric2(), 2), IndexOutOfRange);
    CHECK_THROWS_AS(pure_ess_check(symmetric2(), -1), IndexOutOfRange);
}

TEST_CASE("stationarity residuals", "[ess]") {
    const auto land = symmetric2();

    const auto zero = ess_residual(land, make_strategy({0.5, 0.5}));
    REQUIRE(zero.size() == 2);
    CHECK(zero[0] == Approx(0.0).margin(1e-14));
    CHECK(zero[1] == Approx(0.0).margin(1e-14));

    // off-ESS strategy: signs say move weight from patch 1 to patch 2
    const auto off = ess_residual(land, make_strategy({0.9, 0.1}));
    CHECK(off[0] == Approx(-0.1375609756097561).margin(1e-12));
    CHECK(off[1] == Approx(1.2380487804878049).margin(1e-12));
    CHECK(off[0] < 0.0);
    CHECK(off[1] > 0.0);

    // single-patch face: the constraint is vacuous
    const auto face = ess_residual(land, make_strategy({1.0, 0.0}));
    REQUIRE(face.size() == 1);
    CHECK(face[0] == Approx(0.0).margin(1e-15));

    const auto doomed = build_landscape(2, {0.1, 0.1}, {1, 1}, {1, 0, 0, 1});
    CHECK_THROWS_AS(ess_residual(doomed, make_strategy({0.5, 0.5})),
                    NonpersistentStrategy);
}

TEST_CASE("solver finds the uniform ESS in the homogeneous landscape", "[ess]") {
    const auto res = solve_ess(symmetric2());
    REQUIRE(res.kind == EssKind::MixedESS);
    CHECK(res.strategy.alpha[0] == Approx(0.5).margin(1e-10));
    CHECK(res.strategy.alpha[1] == Approx(0.5).margin(1e-10));
    CHECK(res.residual_norm < 1e-10);
    CHECK(res.lambda == Approx(-0.25));
    CHECK(res.support == std::vector<int>{0, 1});
    REQUIRE(res.certificate.has_value());
    CHECK(res.certificate->passed);
    CHECK(res.certificate->violations == 0);
}

TEST_CASE("solver reproduces the source-sink mixed ESS", "[ess]") {
    // mu = (1, -0.4), sigma = diag(1, 1e-8): mixed because -0.4 > -1/2
    const auto land = build_landscape(2, {1.0, -0.4}, {1.0, 1.0},
                                      {1.0, 0.0, 0.0, 1e-8});
    const auto res = solve_ess(land);
    REQUIRE(res.kind == EssKind::MixedESS);
    // frozen from an independent bisection of the stationarity equations
    CHECK(res.strategy.alpha[0] == Approx(0.9335429369474142).margin(1e-9));
    CHECK(res.strategy.alpha[1] == Approx(0.06645706305258581).margin(1e-9));
    CHECK(res.residual_norm < 1e-10);

    const auto rhs = two_patch_ess_identity(land, res.strategy);
    CHECK(rhs[0] == Approx(res.strategy.alpha[0]).margin(1e-8));
    CHECK(rhs[1] == Approx(res.strategy.alpha[1]).margin(1e-8));
}

TEST_CASE("solver returns the pure ESS when the sink is too deep", "[ess]") {
    const auto res = solve_ess(source_sink(-0.6));
    REQUIRE(res.kind == EssKind::PureESS);
    CHECK(res.strategy.alpha[0] == 1.0);
    CHECK(res.strategy.alpha[1] == 0.0);
    CHECK(res.support == std::vector<int>{0});
    CHECK(res.certificate->passed);
}

TEST_CASE("single patch: staying put is trivially stable", "[ess]") {
    const auto res = solve_ess(build_landscape(1, {1.0}, {1.0}, {1.0}));
    REQUIRE(res.kind == EssKind::PureESS);
    CHECK(res.strategy.alpha == std::vector<double>{1.0});
    CHECK(res.certificate->passed);
    CHECK(res.certificate->tested == 0);  // no distinct deviations exist
}

TEST_CASE("an unresolvable landscape is reported as NotFound", "[ess]") {
    // Noise almost perfectly correlated across patches: invasion rates near
    // the stationary point sit below the certificate's resolution, so no
    // candidate can be certified. The solver must say so rather than guess.
    const auto land = build_landscape(2, {1.0, 1.0}, {1.0, 1.0},
                                      {1.0, 0.9999999, 0.9999999, 1.0});
    const auto res = solve_ess(land);
    CHECK(res.kind == EssKind::NotFound);
    REQUIRE(res.certificate.has_value());
    CHECK_FALSE(res.certificate->passed);
    // the stationarity conditions themselves still locate the uniform point
    CHECK(res.strategy.alpha[0] == Approx(0.5).margin(1e-6));
}

TEST_CASE("solver error paths", "[ess]") {
    CHECK_THROWS_AS(
        solve_ess(build_landscape(2, {1.0, 1.0}, {1, 1}, {1, 0, 0, 0})),
        SigmaNotPositiveDefinite);
    CHECK_THROWS_AS(
        solve_ess(build_landscape(2, {0.1, 0.1}, {1, 1}, {1, 0, 0, 1})),
        NoPersistentStrategy);
}

TEST_CASE("three-patch interior ESS via fixed point", "[ess]") {
    const auto sym = build_landscape(3, {1, 1, 1}, {1, 1, 1},
                                     {1, 0, 0, 0, 1, 0, 0, 0, 1});
    const auto res = solve_ess(sym);
    REQUIRE(res.kind == EssKind::MixedESS);
    for (double a : res.strategy.alpha)
        CHECK(a == Approx(1.0 / 3.0).margin(1e-10));
    CHECK(res.certificate->passed);

    const auto asym = build_landscape(3, {1.2, 1.0, 0.8}, {1, 1, 1},
                                      {0.2, 0, 0, 0, 0.2, 0, 0, 0, 0.2});
    const auto res2 = solve_ess(asym);
    REQUIRE(res2.kind == EssKind::MixedESS);
    CHECK(res2.strategy.alpha[0] == Approx(0.39779761).margin(1e-6));
    CHECK(res2.strategy.alpha[1] == Approx(0.33333333).margin(1e-6));
    CHECK(res2.strategy.alpha[2] == Approx(0.26886905).margin(1e-6));
    CHECK(res2.residual_norm < 1e-10);
    CHECK(res2.certificate->passed);
}

TEST_CASE("three-patch ESS on a face when one patch is hopeless", "[ess]") {
    const auto land = build_landscape(3, {1.0, 0.8, -2.0}, {1, 1, 1},
                                      {0.3, 0, 0, 0, 0.3, 0, 0, 0, 0.3});
    const auto res = solve_ess(land);
    REQUIRE(res.kind == EssKind::MixedESS);
    CHECK(res.support == std::vector<int>{0, 1});
    CHECK(res.strategy.alpha[0] == Approx(0.55124066).margin(1e-6));
    CHECK(res.strategy.alpha[1] == Approx(0.44875934).margin(1e-6));
    CHECK(res.strategy.alpha[2] == 0.0);
    CHECK(res.certificate->passed);
}

TEST_CASE("certificate accepts the ESS and rejects an interior pretender",
          "[ess]") {
    const auto land = symmetric2();

    const auto good = verify_ess(land, make_strategy({0.5, 0.5}), 1000, 42);
    CHECK(good.passed);
    CHECK(good.violations == 0);
    CHECK(good.tested > 1000);  // deterministic points are added on top

    const auto bad = verify_ess(land, make_strategy({0.9, 0.1}), 1000, 42);
    CHECK_FALSE(bad.passed);
    CHECK(bad.violations > 0);
    // the uniform deviation is tested deterministically (edge midpoint) and
    // invades at rate 0.39024...
    CHECK(bad.worst_invasion_rate >= Approx(0.3902439024390244).margin(1e-12));

    const auto deterministic_only = verify_ess(land, make_strategy({0.9, 0.1}), 0, 42);
    CHECK(deterministic_only.tested == 3);  // two vertices + one midpoint
    CHECK_FALSE(deterministic_only.passed);
}

TEST_CASE("deterministic-limit ESS follows the carrying capacities", "[ess]") {
    const auto two = deterministic_limit_ess(
        build_landscape(2, {2.0, 1.0}, {1, 1}, {1, 0, 0, 1}));
    CHECK(two.alpha[0] == Approx(2.0 / 3.0));
    CHECK(two.alpha[1] == Approx(1.0 / 3.0));

    const auto sink = deterministic_limit_ess(
        build_landscape(2, {1.0, -1.0}, {1, 1}, {1, 0, 0, 1}));
    CHECK(sink.alpha[0] == 1.0);
    CHECK(sink.alpha[1] == 0.0);

    const auto flat = deterministic_limit_ess(symmetric2());
    CHECK(flat.alpha[0] == Approx(0.5));

    CHECK_THROWS_AS(deterministic_limit_ess(build_landscape(
                        2, {-1.0, -0.1}, {1, 1}, {1, 0, 0, 1})),
                    NoViablePatch);
}

TEST_CASE("solved ESS approaches the deterministic limit as noise vanishes",
          "[ess][property]") {
    const auto det = deterministic_limit_ess(
        build_landscape(2, {2.0, 1.0}, {1, 1}, {1, 0, 0, 1}));
    double prev = 1.0;
    for (double eps : {1e-2, 1e-4, 1e-6}) {
        const auto land = build_landscape(2, {2.0, 1.0}, {1, 1},
                                          {eps, 0.0, 0.0, eps});
        const auto res = solve_ess(land);
        REQUIRE(res.kind == EssKind::MixedESS);
        double dist = 0.0;
        for (int i = 0; i < 2; ++i)
            dist = std::max(dist, std::abs(res.strategy.alpha[i] - det.alpha[i]));
        CHECK(dist < prev);
        prev = dist;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("deterministic continuity also holds with three patches",
          "[ess][property]") {
    std::vector<double> mu{2.0, 1.0, 0.5};
    std::vector<double> kappa{1.0, 1.0, 2.0};
    const auto det = deterministic_limit_ess(build_landscape(
        3, mu, kappa, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
    double prev = 1.0;
    for (double eps : {1e-2, 1e-4, 1e-6}) {
        const auto res = solve_ess(build_landscape(
            3, mu, kappa, {eps, 0, 0, 0, eps, 0, 0, 0, eps}));
        REQUIRE(res.kind == EssKind::MixedESS);
        double dist = 0.0;
        for (int i = 0; i < 3; ++i)
            dist = std::max(dist, std::abs(res.strategy.alpha[i] - det.alpha[i]));
        CHECK(dist < prev);
        prev = dist;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("noise pushes the ESS off the high-capacity patch", "[ess][property]") {
    // kappa = (1, 3): patch 1 has the larger carrying capacity, and its ESS
    // share shrinks as sigma^2 grows.
    double prev = 1.0;
    for (double s2 : {0.25, 0.5, 1.0, 1.5}) {
        const auto land = build_landscape(2, {1.0, 1.0}, {1.0, 3.0},
                                          {s2, 0.0, 0.0, s2});
        const auto res = solve_ess(land);
        REQUIRE(res.kind == EssKind::MixedESS);
        CHECK(res.strategy.alpha[0] < prev);
        prev = res.strategy.alpha[0];
    }
    CHECK(prev == Approx(0.624161).margin(1e-4));
}

TEST_CASE("source-sink threshold between pure and mixed", "[ess][property]") {
    // mixed exactly when mu_2 > -sigma_11 / 2 = -1/2
    for (double mu2 : {-0.8, -0.6, -0.52}) {
        const auto res = solve_ess(source_sink(mu2));
        CHECK(res.kind == EssKind::PureESS);
    }
    for (double mu2 : {-0.48, -0.3, 0.2}) {
        const auto res = solve_ess(source_sink(mu2));
        CHECK(res.kind == EssKind::MixedESS);
        CHECK(res.strategy.alpha[1] > 0.0);
        CHECK(res.strategy.alpha[1] < 1.0);
    }
}

TEST_CASE("returned ESS results are internally consistent", "[ess][property]") {
    for (double mu2 : {-0.45, -0.2, 0.0, 0.3}) {
        const auto land = source_sink(mu2);
        const auto res = solve_ess(land);
        REQUIRE(res.kind != EssKind::NotFound);
        // lambda is recomputed from the strategy
        const double quad = [&] {
            double acc = 0.0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    acc += res.strategy.alpha[i] * land.cov(i, j) * res.strategy.alpha[j];
            return acc;
        }();
        CHECK(res.lambda == Approx(-quad / 2).margin(1e-15));
        CHECK(res.residual_norm <= 1e-10);
        CHECK(res.certificate->passed);
        CHECK(res.support == support(res.strategy));
    }
}

TEST_CASE("two_patch_ess_identity rejects other dimensions", "[ess]") {
    const auto three = build_landscape(3, {1, 1, 1}, {1, 1, 1},
                                       {1, 0, 0, 0, 1, 0, 0, 0, 1});
    CHECK_THROWS_AS(two_patch_ess_identity(three, make_strategy({0.4, 0.3, 0.3})),
                    DimensionMismatch);
}

TEST_CASE("regularized landscape shifts only the diagonal", "[ess]") {
    const auto base = build_landscape(2, {1.0, 0.5}, {1, 1}, {1.0, 0.2, 0.2, 0.5});
    const auto reg = regularized(base, 1e-6);
    CHECK(reg.cov(0, 0) == Approx(1.0 + 1e-6));
    CHECK(reg.cov(1, 1) == Approx(0.5 + 1e-6));
    CHECK(reg.cov(0, 1) == Approx(0.2));
}
