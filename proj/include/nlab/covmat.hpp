// covmat.hpp — labeled covariance matrices with vacuum = I/2 normalization.
#pragma once

#include "nlab/types.hpp"

#include <initializer_list>
#include <vector>

namespace nlab {

/// Block-diagonal symplectic form with [[0, 1], [-1, 0]] per mode.
MatX symplectic_form(int n_modes);

/// Symplectic eigenvalues of a 2n x 2n covariance matrix, ascending, one per mode.
/// Moduli of the eigenvalues of Omega V (via the congruent antisymmetric form).
std::vector<Real> symplectic_eigenvalues(const MatX& V);

inline constexpr Real kPhysicalityTol = 1e-9L;

/// Tolerance actually applied to V: kPhysicalityTol plus the rounding floor
/// 256 eps ||V||_F^2 that any stored CM with large entries carries on its
/// smallest symplectic eigenvalue (strongly squeezed transient states).
Real physicality_tolerance(const MatX& V);

class CovMat {
public:
    /// Checks shape and symmetry (1e-12 relative) and symmetrizes exactly.
    CovMat(MatX entries, std::vector<Mode> modes);

    const MatX& matrix() const noexcept { return m_; }
    const std::vector<Mode>& modes() const noexcept { return modes_; }
    int size() const noexcept { return static_cast<int>(m_.rows()); }
    int n_modes() const noexcept { return static_cast<int>(modes_.size()); }

    Real operator()(int i, int j) const { return m_(i, j); }

    bool has(Mode m) const noexcept;
    /// Row of the position quadrature of `m`; throws InvalidParameter if absent.
    int offset(Mode m) const;

    std::vector<Real> symplectic_eigenvalues() const { return nlab::symplectic_eigenvalues(m_); }
    Real min_symplectic_eigenvalue() const;
    /// All symplectic eigenvalues >= 1/2 - tol; tol < 0 selects physicality_tolerance.
    bool is_physical(Real tol = -1) const;
    /// Throws MatrixNotPhysical unless is_physical(tol).
    void require_physical(Real tol = -1) const;

    /// Principal submatrix on the given modes, in the order given.
    CovMat reduce(const std::vector<Mode>& keep) const;

    /// Matrix converted to double, for the phase-space evaluators.
    Eigen::MatrixXd to_double() const { return m_.cast<double>(); }

private:
    MatX m_;
    std::vector<Mode> modes_;
};

CovMat reduce(const CovMat& V, const std::vector<Mode>& keep);

}  // namespace nlab
