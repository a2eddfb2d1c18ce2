#include "nlab/measures.hpp"

#include "nlab/errors.hpp"
#include "nlab/csv.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>

namespace nlab {

namespace {

void require_two_mode(const CovMat& V) {
    if (V.n_modes() != 2) throw InvalidParameter("two-mode covariance matrix required");
}

}  // namespace

std::string MeasureReport::csv_row() const {
    return csv::join({csv::num(E_N), csv::num(G12), csv::num(G21), csv::num(a), csv::num(b),
                      csv::boolean(two_way)});
}

Real renyi2_entropy(const MatX& sigma) {
    const Eigen::LLT<MatX> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw MatrixNotPhysical("Renyi-2 entropy of a matrix that is not positive definite");
    }
    return llt.matrixLLT().diagonal().array().log().sum();
}

Real steering_signed(const CovMat& V, SteeringDirection dir) {
    require_two_mode(V);
    V.require_physical();
    const int o = dir == SteeringDirection::one_to_two ? 0 : 2;
    const MatX local = V.matrix().block(o, o, 2, 2);
    return renyi2_entropy(2 * local) - renyi2_entropy(2 * V.matrix());
}

Real steering(const CovMat& V, SteeringDirection dir) {
    return std::max(Real(0), steering_signed(V, dir));
}

Real partial_transpose_min_eigenvalue(const CovMat& V) {
    require_two_mode(V);
    MatX pt = V.matrix();
    // p2 -> -p2
    pt.row(3) *= -1;
    pt.col(3) *= -1;
    return symplectic_eigenvalues(pt).front();
}

Real log_negativity_signed(const CovMat& V) {
    V.require_physical();
    return -std::log(2 * partial_transpose_min_eigenvalue(V));
}

Real log_negativity(const CovMat& V) { return std::max(Real(0), log_negativity_signed(V)); }

MeasureReport report(const CovMat& V) {
    MeasureReport r;
    r.E_N = static_cast<double>(log_negativity(V));
    r.G12 = static_cast<double>(steering(V, SteeringDirection::one_to_two));
    r.G21 = static_cast<double>(steering(V, SteeringDirection::two_to_one));
    r.a = static_cast<double>(V(0, 0));
    r.b = static_cast<double>(V(2, 2));
    r.two_way = r.G12 > 0.0 && r.G21 > 0.0;
    return r;
}

}  // namespace nlab
