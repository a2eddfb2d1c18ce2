// fixtures.hpp — parameter sets shared by the unit tests.
#pragma once

#include "nlab/config.hpp"
#include "nlab/model.hpp"

#include <numbers>

namespace fixtures {

// G2 = 2 kappa1 = 2 kappa2 = 1e5, gamma = 10, Delta = theta = 0.
inline nlab::SystemParams steering_base() {
    nlab::SystemParams p;
    p.kappa1 = p.kappa2 = 5e4;
    p.G2 = 1e5;
    p.gamma1 = p.gamma2 = 10.0;
    p.omega1 = 1e7;
    p.omega2 = 2e7;
    return p;
}

inline nlab::SystemParams steering_point(double r_B, double ratio, double nbar) {
    nlab::SystemParams p = steering_base();
    p.r_B = r_B;
    nlab::apply_axis(p, "G1_over_G2", ratio);
    nlab::apply_axis(p, "nbar", nbar);
    return p;
}

inline nlab::SystemParams panel_a() { return steering_point(0.95, 0.999, 0.0); }
inline nlab::SystemParams panel_b() { return steering_point(0.7, 0.953, 200.0); }
inline nlab::SystemParams panel_c() { return steering_point(0.5, 0.869, 1000.0); }

// Equal couplings, Delta = 1e4, no losses.
inline nlab::SystemParams transient() {
    nlab::SystemParams p;
    p.G1 = p.G2 = 1e5;
    p.Delta = 1e4;
    p.omega1 = 1e7;
    p.omega2 = 2e7;
    return p;
}

inline double period(const nlab::SystemParams& p) { return 2 * std::numbers::pi / p.Delta; }

}  // namespace fixtures
