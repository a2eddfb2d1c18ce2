// measures.hpp — Gaussian entanglement and EPR-steering quantifiers of a
// two-mode covariance matrix (natural logarithms throughout).
#pragma once

#include "nlab/covmat.hpp"

#include <string>

namespace nlab {

enum class SteeringDirection { one_to_two, two_to_one };

struct MeasureReport {
    double E_N = 0.0;
    double G12 = 0.0;
    double G21 = 0.0;
    double a = 0.0;  // <dq1^2> of the first mode
    double b = 0.0;  // <dq2^2> of the second mode
    bool two_way = false;

    static std::string csv_header() { return "E_N,G12,G21,a,b,two_way"; }
    std::string csv_row() const;
};

/// Renyi-2 entropy 1/2 ln det(sigma). Callers pass 2V for a covariance V.
Real renyi2_entropy(const MatX& sigma);

/// S(2 V_j) - S(2 V) before clamping; j is the steering party.
Real steering_signed(const CovMat& V, SteeringDirection dir);
Real steering(const CovMat& V, SteeringDirection dir);

/// Smallest symplectic eigenvalue of the partial transpose (p of the second mode flipped).
Real partial_transpose_min_eigenvalue(const CovMat& V);
/// -ln(2 nu_min) before clamping.
Real log_negativity_signed(const CovMat& V);
Real log_negativity(const CovMat& V);

MeasureReport report(const CovMat& V);

}  // namespace nlab
