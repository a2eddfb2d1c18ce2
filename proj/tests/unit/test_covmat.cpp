#include "doctest.h"

#include "nlab/covmat.hpp"
#include "nlab/dynamics.hpp"
#include "nlab/errors.hpp"
#include "nlab/oracle.hpp"

#include <cmath>

using namespace nlab;

namespace {

const std::vector<Mode> kMech{Mode::mech1, Mode::mech2};
const std::vector<Mode> kAll{Mode::cavity, Mode::mech1, Mode::mech2};

}  // namespace

TEST_SUITE("covmat") {

TEST_CASE("construction checks shape, labels and symmetry") {
    CHECK_THROWS_AS(CovMat(MatX::Identity(4, 4), {Mode::mech1}), InvalidParameter);
    CHECK_THROWS_AS(CovMat(MatX::Identity(4, 4), {Mode::mech1, Mode::mech1}), InvalidParameter);
    MatX a = MatX::Identity(4, 4);
    a(0, 1) = 1e-3;
    CHECK_THROWS_AS(CovMat(a, kMech), MatrixNotPhysical);
    a(1, 0) = 1e-3 * (1 + 1e-14);
    const CovMat ok(a, kMech);
    CHECK(ok(0, 1) == ok(1, 0));
    MatX n = MatX::Identity(2, 2);
    n(0, 0) = std::numeric_limits<Real>::quiet_NaN();
    CHECK_THROWS_AS(CovMat(n, {Mode::mech1}), MatrixNotPhysical);
}

TEST_CASE("thermal product: symplectic eigenvalues are the occupations plus one half") {
    const CovMat V = initial_state(1.0, 3.0);
    const auto nu = V.symplectic_eigenvalues();
    REQUIRE(nu.size() == 3);
    CHECK(static_cast<double>(nu[0]) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(static_cast<double>(nu[1]) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(static_cast<double>(nu[2]) == doctest::Approx(3.5).epsilon(1e-15));
}

TEST_CASE("pure two-mode squeezed states sit on the physical boundary") {
    for (double r : {0.1, 1.0, 3.0, 5.0}) {
        const auto nu = oracle::tmsv_cm(r).symplectic_eigenvalues();
        CHECK(std::abs(static_cast<double>(nu[0]) - 0.5) < 1e-9);
        CHECK(std::abs(static_cast<double>(nu[1]) - 0.5) < 1e-9);
        CHECK(oracle::tmsv_cm(r).is_physical());
    }
    // entries near 3e5: only the rounding-aware tolerance accepts the state
    CHECK(oracle::tmsv_cm(7.0).is_physical());
}

TEST_CASE("symplectic eigenvalues are invariant under symplectic congruence") {
    MatX V(4, 4);
    V << 2.0, 0.3, 0.4, 0.1, 0.3, 1.5, -0.2, 0.5, 0.4, -0.2, 1.8, 0.0, 0.1, 0.5, 0.0, 2.2;
    MatX S = MatX::Identity(4, 4);
    S(0, 0) = 3.0;
    S(1, 1) = 1.0 / 3.0;
    S(2, 3) = 0.7;  // shear, det 1 on the second mode
    const MatX W = S * V * S.transpose();
    const auto a = symplectic_eigenvalues(V), b = symplectic_eigenvalues(W);
    for (int k = 0; k < 2; ++k) CHECK(static_cast<double>(b[k]) == doctest::Approx(static_cast<double>(a[k])).epsilon(1e-12));
}

TEST_CASE("physicality detects uncertainty violations") {
    const CovMat squashed(MatX::Identity(4, 4) * Real(0.4), kMech);
    CHECK_FALSE(squashed.is_physical());
    CHECK_THROWS_AS(squashed.require_physical(), MatrixNotPhysical);
    MatX indefinite = MatX::Identity(2, 2);
    indefinite(0, 0) = -1;
    CHECK_FALSE(CovMat(indefinite, {Mode::mech1}).is_physical());
    CHECK(CovMat(MatX::Identity(2, 2) * Real(0.5), {Mode::mech1}).is_physical());
    CHECK(physicality_tolerance(MatX::Identity(2, 2)) == doctest::Approx(kPhysicalityTol).epsilon(1e-6));
}

TEST_CASE("reduce") {
    const CovMat vac(MatX::Identity(6, 6) / 2, kAll);
    const CovMat m = reduce(vac, kMech);
    CHECK(m.size() == 4);
    CHECK((m.matrix() - MatX::Identity(4, 4) / 2).norm() == 0.0L);

    MatX X(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) X(i, j) = (i == j ? 10 : 0) + Real(1) / (1 + i + j);
    const CovMat V(X, kAll);
    const CovMat twice = V.reduce(kMech).reduce({Mode::mech2});
    const CovMat direct = V.reduce({Mode::mech2});
    CHECK((twice.matrix() - direct.matrix()).norm() == 0.0L);
    CHECK(direct(0, 0) == X(4, 4));
    CHECK(direct(0, 1) == X(4, 5));

    const CovMat swapped = V.reduce({Mode::mech2, Mode::mech1});
    CHECK(swapped(0, 2) == X(4, 2));
    CHECK(swapped.offset(Mode::mech1) == 2);
    CHECK_THROWS_AS(direct.offset(Mode::cavity), InvalidParameter);
    CHECK_THROWS_AS(V.reduce({}), InvalidParameter);
}

}  // TEST_SUITE
