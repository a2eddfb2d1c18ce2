// types.hpp — scalar and matrix aliases plus the quadrature ordering tag.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <string_view>

namespace nlab {

// Covariance dynamics run in extended precision. Steady states of strongly
// entangled configurations have entries ~1e5 while the Lyapunov residual is
// required to sit ten orders below the diffusion scale; plain double storage
// cannot represent such a solution accurately enough.
using Real = long double;

using Mat6 = Eigen::Matrix<Real, 6, 6>;
using MatX = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using VecX = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

enum class Mode { cavity, mech1, mech2 };

std::string_view to_string(Mode m) noexcept;

// Fixed ordering of the six quadrature fluctuations (X, Y, q1, p1, q2, p2).
// Everything that indexes the full covariance or drift matrix goes through
// this tag instead of hard-coded integers.
struct QuadratureOrder {
    static constexpr std::array<Mode, 3> modes{Mode::cavity, Mode::mech1, Mode::mech2};

    static constexpr int position(Mode m) noexcept {
        for (std::size_t i = 0; i < modes.size(); ++i) {
            if (modes[i] == m) return 2 * static_cast<int>(i);
        }
        return -1;
    }
    static constexpr int momentum(Mode m) noexcept { return position(m) + 1; }
    static constexpr int dimension() noexcept { return 2 * static_cast<int>(modes.size()); }
};

}  // namespace nlab
