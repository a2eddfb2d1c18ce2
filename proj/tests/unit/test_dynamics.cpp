#include "doctest.h"
#include "fixtures.hpp"

#include "nlab/dynamics.hpp"
#include "nlab/errors.hpp"
#include "nlab/measures.hpp"

#include <cmath>
#include <numbers>

using namespace nlab;

namespace {

const std::vector<Mode> kMech{Mode::mech1, Mode::mech2};

Real max_abs(const MatX& m) { return m.cwiseAbs().maxCoeff(); }

// Fast-relaxing stable point so long-time checks stay cheap.
SystemParams fast_point() {
    SystemParams p = fixtures::steering_point(0.3, 0.6, 2.0);
    p.gamma1 = p.gamma2 = 1e4;
    return p;
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("scalar balance: A = -k I, D = d I gives V = d / 2k") {
    LinearModel m;
    m.drift = -3.0L * Mat6::Identity();
    m.diffusion = 4.5L * Mat6::Identity();
    const CovMat V = steady_state_cm(m);
    CHECK((V.matrix() - MatX::Identity(6, 6) * Real(0.75)).norm() < 1e-15L);
}

TEST_CASE("an uncoupled resonator thermalizes") {
    SystemParams p = fixtures::steering_point(0.5, 0.0, 4.0);
    const CovMat V = steady_state_cm(build_model(p));
    const MatX b1 = V.reduce({Mode::mech1}).matrix();
    CHECK((b1 - MatX::Identity(2, 2) * Real(4.5)).norm() < 1e-10L);
}

TEST_CASE("steady state meets the residual bound on caption parameters") {
    for (const auto& p : {fixtures::panel_a(), fixtures::panel_b(), fixtures::panel_c(),
                          fixtures::steering_point(0.5, 0.9, 0.0)}) {
        const LinearModel m = build_model(p);
        const CovMat V = steady_state_cm(m);
        CHECK(lyapunov_residual(m, V.matrix()) <= kLyapunovTol);
        CHECK(V.is_physical());
    }
}

TEST_CASE("residual tolerance widens only with the rounding floor") {
    const LinearModel m = build_model(fixtures::panel_b());
    const CovMat V = steady_state_cm(m);
    CHECK(lyapunov_tolerance(m, V.matrix()) == kLyapunovTol);
    const LinearModel edge = build_model(fixtures::steering_point(0.8, 1.0, 0.0));
    const CovMat W = steady_state_cm(edge);
    CHECK(lyapunov_tolerance(edge, W.matrix()) > kLyapunovTol);
    CHECK(lyapunov_residual(edge, W.matrix()) <= lyapunov_tolerance(edge, W.matrix()));
}

TEST_CASE("strongly entangled steady state") {
    const CovMat V = steady_state_cm(build_model(fixtures::panel_a()));
    const CovMat mech = V.reduce(kMech);
    CHECK(log_negativity(mech) > std::log(3.0L));
    CHECK(mech(0, 0) > mech(2, 2));  // a > b
}

TEST_CASE("stability") {
    LinearModel m;
    m.drift = -Mat6::Identity();
    CHECK(is_stable(m));
    CHECK_FALSE(is_stable(build_model(fixtures::transient())));
    CHECK(is_stable(build_model(fixtures::panel_a())));
    SystemParams bad = fixtures::steering_base();
    bad.G1 = 3e5;
    CHECK_FALSE(is_stable(build_model(bad)));
    try {
        steady_state_cm(build_model(bad));
        FAIL("expected UnstableModel");
    } catch (const UnstableModel& e) {
        CHECK(e.max_real_eigenvalue() > 0.0);
    }
}

TEST_CASE("initial state") {
    CHECK((initial_state(0, 0).matrix() - MatX::Identity(6, 6) / 2).norm() == 0.0L);
    const MatX v = initial_state(1, 0).matrix();
    CHECK(v(2, 2) == 1.5L);
    CHECK(v(3, 3) == 1.5L);
    CHECK(v(4, 4) == 0.5L);
    CHECK(v(0, 0) == 0.5L);
    CHECK_THROWS_AS(initial_state(-1, 0), InvalidParameter);
}

TEST_CASE("trajectory grid handling") {
    const LinearModel m = build_model(fixtures::panel_b());
    const CovMat V0 = initial_state(200, 100);
    const std::vector<double> t0{0.0};
    const auto one = evolve_cm(m, V0, t0);
    REQUIRE(one.size() == 1);
    CHECK(one[0].t == 0.0);
    CHECK((one[0].V.matrix() - V0.matrix()).norm() == 0.0L);

    const std::vector<double> t{0.0, 1e-5, 2e-5};
    const auto tr = evolve_cm(m, V0, t);
    REQUIRE(tr.size() == 3);
    CHECK((tr[0].V.matrix() - V0.matrix()).norm() == 0.0L);
    CHECK(tr[2].t == 2e-5);

    const std::vector<double> bad1{1e-5, 2e-5}, bad2{0.0, 2e-5, 1e-5};
    CHECK_THROWS_AS(evolve_cm(m, V0, bad1), InvalidParameter);
    CHECK_THROWS_AS(evolve_cm(m, V0, bad2), InvalidParameter);
    const CovMat wrong(MatX::Identity(6, 6) / 2, {Mode::mech1, Mode::cavity, Mode::mech2});
    CHECK_THROWS_AS(evolve_cm(m, wrong, t), InvalidParameter);
}

TEST_CASE("step cap honors the fastest time scale") {
    const LinearModel m = build_model(fixtures::transient());
    const double h = rk4_step_cap(m);
    CHECK(h <= fixtures::period(m.params) / 200);
    CHECK(h <= 1.0 / (200 * m.params.G2));
}

TEST_CASE("noiseless flow preserves the symplectic spectrum") {
    SystemParams p = fixtures::transient();
    p.G1 = 0.7e5;
    const LinearModel m = build_model(p);
    const CovMat V0 = initial_state(0.3, 1.2);
    const auto nu0 = V0.symplectic_eigenvalues();
    std::vector<double> t;
    for (int i = 0; i <= 10; ++i) t.push_back(i * 2e-5);
    for (const auto& pt : evolve_cm(m, V0, t)) {
        const auto nu = pt.V.symplectic_eigenvalues();
        for (int k = 0; k < 3; ++k) {
            CHECK(std::abs(static_cast<double>(nu[k] / nu0[k] - 1)) < 1e-6);
        }
    }
}

TEST_CASE("long trajectories relax to the steady state from any start") {
    const LinearModel m = build_model(fast_point());
    const CovMat Vss = steady_state_cm(m);
    const std::vector<double> t{0.0, 5e-3};
    const auto a = evolve_cm(m, initial_state(0, 0), t);
    const auto b = evolve_cm(m, initial_state(5, 2), t);
    CHECK((a.back().V.matrix() - Vss.matrix()).norm() < 1e-8L);
    CHECK((b.back().V.matrix() - Vss.matrix()).norm() < 1e-8L);
    CHECK((a.back().V.matrix() - b.back().V.matrix()).norm() < 1e-8L);
}

TEST_CASE("halving the step leaves the equal-coupling trajectory unchanged") {
    const LinearModel m = build_model(fixtures::transient());
    const double T = fixtures::period(m.params);
    const std::vector<double> t{0.0, T / 4, T / 2, T};
    EvolveOptions half;
    half.max_step = rk4_step_cap(m) / 2;
    const auto a = evolve_cm(m, initial_state(0, 0), t);
    const auto b = evolve_cm(m, initial_state(0, 0), t, half);
    for (std::size_t i = 1; i < t.size(); ++i) {
        const MatX d = a[i].V.matrix() - b[i].V.matrix();
        CHECK(max_abs(d) / max_abs(b[i].V.matrix()) < 1e-8L);
    }
}

TEST_CASE("resonators decouple from the cavity after one detuning period") {
    const LinearModel m = build_model(fixtures::transient());
    const double T = fixtures::period(m.params);
    const std::vector<double> t{0.0, T / 2, T};
    const auto tr = evolve_cm(m, initial_state(0, 0), t);
    const Real half = decoupling_defect(tr[1].V), full = decoupling_defect(tr[2].V);
    CHECK(full <= 1e-3L * tr[2].V.matrix().norm());
    CHECK(half > full);
    CHECK(decoupling_defect(initial_state(2, 1)) == 0.0L);
    CHECK(mechanical_block(tr[2].V).size() == 4);
}

TEST_CASE("extra thermal noise never lowers a mechanical variance") {
    for (double r_B : {0.2, 0.6}) {
        for (double ratio : {0.5, 0.9}) {
            MatX prev;
            for (double n1 : {0.0, 1.0, 10.0, 100.0}) {
                SystemParams p = fixtures::steering_point(r_B, ratio, 0.0);
                p.nbar1 = n1;
                const MatX V = mechanical_block(steady_state_cm(build_model(p))).matrix();
                if (prev.size()) {
                    for (int i = 0; i < 4; ++i) CHECK(V(i, i) >= prev(i, i));
                }
                prev = V;
            }
        }
    }
}

TEST_CASE("rounding noise does not accumulate over a million steps") {
    // the n = 0 start already holds the steady dark-mode variance, so after
    // 200 periods of 2pi/G2 the exact gap is negligible next to |V| ~ 7e5
    const SystemParams p = fixtures::panel_a();
    const LinearModel m = build_model(p);
    const std::vector<double> t{0.0, 200 * 2 * std::numbers::pi / p.G2};
    const CovMat V = evolve_cm(m, initial_state(0.0, 0.0), t).back().V;
    const MatX Vss = steady_state_cm(m).matrix();
    CHECK(static_cast<double>((V.matrix() - Vss).norm() / Vss.norm()) < 1e-12);
}

}  // TEST_SUITE
