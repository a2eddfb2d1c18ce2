#include "doctest.h"
#include "fixtures.hpp"

#include "nlab/dynamics.hpp"
#include "nlab/errors.hpp"
#include "nlab/measures.hpp"
#include "nlab/oracle.hpp"

#include <cmath>
#include <random>

using namespace nlab;

namespace {

const std::vector<Mode> kMech{Mode::mech1, Mode::mech2};

CovMat thermal_pair(double n1, double n2) {
    MatX V = MatX::Zero(4, 4);
    V.diagonal() << n1 + 0.5, n1 + 0.5, n2 + 0.5, n2 + 0.5;
    return CovMat(V, kMech);
}

CovMat steady_mech(const SystemParams& p) {
    return mechanical_block(steady_state_cm(build_model(p)));
}

// Random single-mode symplectic: rotation * squeeze * rotation.
Eigen::Matrix<Real, 2, 2> random_symplectic(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ang(0, 6.28), sq(-1.0, 1.0);
    auto rot = [](Real a) {
        Eigen::Matrix<Real, 2, 2> R;
        R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
        return R;
    };
    Eigen::Matrix<Real, 2, 2> S = Eigen::Matrix<Real, 2, 2>::Zero();
    const Real s = sq(rng);
    S(0, 0) = std::exp(s);
    S(1, 1) = std::exp(-s);
    return rot(ang(rng)) * S * rot(ang(rng));
}

}  // namespace

TEST_SUITE("measures") {

TEST_CASE("Renyi-2 entropy") {
    CHECK(renyi2_entropy(MatX::Identity(2, 2)) == 0.0L);
    const double n = 3.0;
    CHECK(static_cast<double>(renyi2_entropy(MatX::Identity(2, 2) * Real(2 * (n + 0.5)))) ==
          doctest::Approx(std::log(2 * n + 1)).epsilon(1e-14));
    for (double r : {0.3, 1.0, 2.0}) {
        CHECK(std::abs(static_cast<double>(renyi2_entropy(2 * oracle::tmsv_cm(r).matrix()))) < 1e-12);
    }
    CHECK_THROWS_AS(renyi2_entropy(-MatX::Identity(2, 2)), MatrixNotPhysical);
}

TEST_CASE("product states carry no correlations") {
    const CovMat V = thermal_pair(0.7, 4.0);
    CHECK(steering(V, SteeringDirection::one_to_two) == 0.0L);
    CHECK(steering(V, SteeringDirection::two_to_one) == 0.0L);
    CHECK(log_negativity(V) == 0.0L);
    const MeasureReport r = report(V);
    CHECK(r.E_N == 0.0);
    CHECK(r.G12 == 0.0);
    CHECK(r.G21 == 0.0);
    CHECK_FALSE(r.two_way);
    CHECK(r.a == doctest::Approx(1.2));
    CHECK(r.b == doctest::Approx(4.5));
}

TEST_CASE("two-mode squeezed vacuum closed forms") {
    for (double r : {0.25, 0.5, 0.7, 1.0, 2.0}) {
        const CovMat V = oracle::tmsv_cm(r);
        CHECK(std::abs(static_cast<double>(log_negativity(V)) - 2 * r) < 1e-9);
        const double g = std::log(std::cosh(2 * r));
        CHECK(std::abs(static_cast<double>(steering(V, SteeringDirection::one_to_two)) - g) < 1e-9);
        CHECK(std::abs(static_cast<double>(steering(V, SteeringDirection::two_to_one)) - g) < 1e-9);
        CHECK(std::abs(static_cast<double>(partial_transpose_min_eigenvalue(V)) - std::exp(-2 * r) / 2) < 1e-12);
    }
    CHECK(report(oracle::tmsv_cm(0.7)).two_way);
}

TEST_CASE("signed values expose the distance below threshold") {
    const CovMat V = thermal_pair(1.0, 1.0);
    CHECK(log_negativity_signed(V) < 0.0L);
    CHECK(static_cast<double>(log_negativity_signed(V)) == doctest::Approx(-std::log(3.0)));
    CHECK(steering_signed(V, SteeringDirection::one_to_two) < 0.0L);
}

TEST_CASE("measures need a physical two-mode matrix") {
    CHECK_THROWS_AS(log_negativity(initial_state(0, 0)), InvalidParameter);
    CHECK_THROWS_AS(report(CovMat(MatX::Identity(4, 4) * Real(0.3), kMech)), MatrixNotPhysical);
}

TEST_CASE("local symplectic transforms leave all measures unchanged") {
    std::mt19937_64 rng(5);
    const std::vector<CovMat> states{oracle::tmsv_cm(0.8), steady_mech(fixtures::panel_b()),
                                     steady_mech(fixtures::steering_point(0.3, 0.85, 5.0))};
    for (const auto& V : states) {
        const MeasureReport base = report(V);
        for (int k = 0; k < 10; ++k) {
            MatX S = MatX::Zero(4, 4);
            S.block(0, 0, 2, 2) = random_symplectic(rng);
            S.block(2, 2, 2, 2) = random_symplectic(rng);
            const CovMat W(S * V.matrix() * S.transpose(), kMech);
            const MeasureReport r = report(W);
            CHECK(std::abs(r.E_N - base.E_N) < 1e-10);
            CHECK(std::abs(r.G12 - base.G12) < 1e-10);
            CHECK(std::abs(r.G21 - base.G21) < 1e-10);
        }
    }
}

TEST_CASE("symmetric reduced states steer equally in both directions") {
    const CovMat V = oracle::tmsv_cm(1.3);
    CHECK(steering(V, SteeringDirection::one_to_two) == steering(V, SteeringDirection::two_to_one));
}

TEST_CASE("steady-state steering asymmetry follows the variances") {
    for (double r_B : {0.1, 0.5, 0.9}) {
        for (double ratio : {0.85, 0.95, 0.99}) {
            for (double nbar : {0.0, 200.0}) {
                const MeasureReport r = report(steady_mech(fixtures::steering_point(r_B, ratio, nbar)));
                CHECK(r.a > r.b);
                CHECK(r.G12 >= r.G21);
                if (r.G12 > 0 && r.G21 > 0) {
                    CHECK(std::abs((r.G12 - r.G21) - std::log(r.a / r.b)) < 1e-9);
                }
            }
        }
    }
}

TEST_CASE("E_N above ln 3 implies two-way steering over a coarse grid") {
    for (int i = 0; i <= 10; ++i) {
        for (int j = 0; j <= 10; ++j) {
            for (double nbar : {0.0, 200.0}) {
                const SystemParams p = fixtures::steering_point(0.095 * j, 0.8 + 0.02 * i, nbar);
                const LinearModel m = build_model(p);
                if (!is_stable(m)) continue;
                const MeasureReport r = report(mechanical_block(steady_state_cm(m)));
                if (r.E_N > std::log(3.0)) CHECK(r.two_way);
                CHECK(r.two_way == (r.G12 > 0 && r.G21 > 0));
            }
        }
    }
}

TEST_CASE("steady entanglement degrades monotonically with nbar1") {
    for (double ratio : {0.8, 0.95}) {
        double prev = 1e300;
        for (double n1 : {0.0, 0.5, 5.0, 50.0, 500.0}) {
            SystemParams p = fixtures::steering_point(0.5, ratio, 0.0);
            p.nbar1 = n1;
            const double e = report(steady_mech(p)).E_N;
            CHECK(e <= prev);
            prev = e;
        }
    }
}

TEST_CASE("hot early-time states are entangled without steering") {
    const SystemParams p = fixtures::panel_c();
    const LinearModel m = build_model(p);
    std::vector<double> t;
    for (int i = 0; i <= 100; ++i) t.push_back(i * 2e-6);
    bool found = false;
    for (const auto& pt : evolve_cm(m, initial_state(p.nbar1, p.nbar2), t)) {
        const MeasureReport r = report(mechanical_block(pt.V));
        if (r.E_N > 1e-6 && r.G12 == 0.0 && r.G21 == 0.0) found = true;
    }
    CHECK(found);
}

TEST_CASE("csv serialization") {
    MeasureReport r;
    r.E_N = 1.5;
    r.G12 = 0.25;
    r.G21 = 0.0;
    r.a = 3.0;
    r.b = 2.0;
    r.two_way = false;
    CHECK(MeasureReport::csv_header() == "E_N,G12,G21,a,b,two_way");
    CHECK(r.csv_row() == "1.5,0.25,0,3,2,false");
}

}  // TEST_SUITE
