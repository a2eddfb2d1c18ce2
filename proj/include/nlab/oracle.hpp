// oracle.hpp — brute-force reference computations used to check the
// phase-space closed forms. Nothing here calls into phasespace, and the
// linear algebra is done by hand.
#pragma once

#include "nlab/covmat.hpp"

#include <array>
#include <complex>
#include <functional>

namespace nlab::oracle {

struct GridSpec {
    double half_width = 8.0;  // L: axis covers [-L, L]
    int points = 64;          // N per axis, endpoints included
};

using Point4 = std::array<double, 4>;

/// Tensor-product trapezoidal rule over [-L, L]^4.
double quadrature_integral(const std::function<double(const Point4&)>& f, const GridSpec& grid);

/// Q at beta from (4/pi^2) * integral W(alpha) exp(-2|a1-b1|^2 - 2|a2-b2|^2) d^2a1 d^2a2,
/// with points given as (Re a1, Im a1, Re a2, Im a2).
double husimi_convolution(const CovMat& V, const Point4& beta, const GridSpec& grid);

/// Wigner density evaluated with a hand-rolled 4x4 inverse.
double wigner_reference(const CovMat& V, const Point4& u);

/// Covariance matrix of the two-mode squeezed vacuum with squeezing r.
CovMat tmsv_cm(double r);

/// <psi_r| Pi(a1) (x) Pi(a2) |psi_r> in a Fock basis truncated at `cutoff`,
/// psi_r = sqrt(1 - l^2) sum_n l^n |n, n>, l = tanh r.
/// Throws CutoffTooSmall if l^(2 cutoff) >= 1e-12.
double fock_parity(double r, std::complex<double> alpha1, std::complex<double> alpha2, int cutoff);

/// <m| D(beta) |n> from the associated Laguerre form.
std::complex<double> displacement_element(int m, int n, std::complex<double> beta);

}  // namespace nlab::oracle
