#include "nlab/covmat.hpp"

#include "nlab/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace nlab {

MatX symplectic_form(int n_modes) {
    MatX om = MatX::Zero(2 * n_modes, 2 * n_modes);
    for (int k = 0; k < n_modes; ++k) {
        om(2 * k, 2 * k + 1) = 1;
        om(2 * k + 1, 2 * k) = -1;
    }
    return om;
}

std::vector<Real> symplectic_eigenvalues(const MatX& V) {
    const int n = static_cast<int>(V.rows()) / 2;
    const MatX om = symplectic_form(n);
    std::vector<Real> mods;
    mods.reserve(V.rows());

    // For V > 0 with V = L L^T, Omega V is similar to the antisymmetric L^T Omega L,
    // whose spectrum +/- i nu is well conditioned even for strongly squeezed
    // states. Indefinite input falls back to the eigenvalues of Omega V.
    Eigen::LLT<MatX> llt(V);
    if (llt.info() == Eigen::Success) {
        const MatX L = llt.matrixL();
        const MatX M = L.transpose() * om * L;
        Eigen::JacobiSVD<MatX> svd(M);
        for (Eigen::Index i = 0; i < M.rows(); ++i) mods.push_back(svd.singularValues()(i));
    } else {
        Eigen::EigenSolver<MatX> es(om * V, false);
        if (es.info() != Eigen::Success) {
            throw SolverFailure("symplectic eigenvalue decomposition failed");
        }
        for (Eigen::Index i = 0; i < V.rows(); ++i) mods.push_back(std::abs(es.eigenvalues()(i)));
    }
    std::sort(mods.begin(), mods.end());
    // moduli come in equal pairs; average each sorted pair
    std::vector<Real> nu(n);
    for (int k = 0; k < n; ++k) nu[k] = (mods[2 * k] + mods[2 * k + 1]) / 2;
    return nu;
}

CovMat::CovMat(MatX entries, std::vector<Mode> modes) : m_(std::move(entries)), modes_(std::move(modes)) {
    if (m_.rows() != m_.cols() || m_.rows() != 2 * static_cast<Eigen::Index>(modes_.size()) ||
        modes_.empty()) {
        throw InvalidParameter("CovMat: matrix shape does not match mode labels");
    }
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        for (std::size_t j = i + 1; j < modes_.size(); ++j) {
            if (modes_[i] == modes_[j]) throw InvalidParameter("CovMat: duplicate mode label");
        }
    }
    if (!m_.allFinite()) throw MatrixNotPhysical("CovMat: non-finite entries");
    const Real scale = m_.cwiseAbs().maxCoeff();
    const Real asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
    if (asym > Real(1e-12) * scale) {
        throw MatrixNotPhysical("CovMat: matrix is not symmetric");
    }
    m_ = (m_ + m_.transpose()).eval() / 2;
}

bool CovMat::has(Mode m) const noexcept {
    return std::find(modes_.begin(), modes_.end(), m) != modes_.end();
}

int CovMat::offset(Mode m) const {
    const auto it = std::find(modes_.begin(), modes_.end(), m);
    if (it == modes_.end()) {
        throw InvalidParameter("CovMat: no mode '" + std::string(to_string(m)) + "'");
    }
    return 2 * static_cast<int>(it - modes_.begin());
}

Real CovMat::min_symplectic_eigenvalue() const { return symplectic_eigenvalues().front(); }

Real physicality_tolerance(const MatX& V) {
    const Real n = V.norm();
    return kPhysicalityTol + 256 * std::numeric_limits<Real>::epsilon() * n * n;
}

bool CovMat::is_physical(Real tol) const {
    if (tol < 0) tol = physicality_tolerance(m_);
    return Eigen::LLT<MatX>(m_).info() == Eigen::Success && min_symplectic_eigenvalue() >= Real(0.5) - tol;
}

void CovMat::require_physical(Real tol) const {
    if (tol < 0) tol = physicality_tolerance(m_);
    if (Eigen::LLT<MatX>(m_).info() != Eigen::Success) {
        throw MatrixNotPhysical("covariance matrix is not positive definite");
    }
    const Real nu = min_symplectic_eigenvalue();
    if (nu < Real(0.5) - tol) {
        throw MatrixNotPhysical("covariance matrix violates the uncertainty principle "
                                "(min symplectic eigenvalue " +
                                std::to_string(static_cast<double>(nu)) + ")");
    }
}

CovMat CovMat::reduce(const std::vector<Mode>& keep) const {
    if (keep.empty()) throw InvalidParameter("reduce: empty mode selection");
    std::vector<int> rows;
    for (Mode m : keep) {
        const int o = offset(m);
        rows.push_back(o);
        rows.push_back(o + 1);
    }
    const int n = static_cast<int>(rows.size());
    MatX sub(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) sub(i, j) = m_(rows[i], rows[j]);
    }
    return CovMat(std::move(sub), keep);
}

CovMat reduce(const CovMat& V, const std::vector<Mode>& keep) { return V.reduce(keep); }

}  // namespace nlab
