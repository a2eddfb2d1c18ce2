// phasespace.hpp — Wigner and Husimi functions of a zero-mean two-mode
// Gaussian state and the displaced-parity / on-off Bell functionals.
//
// Phase-space points are u = (Re a1, Im a1, Re a2, Im a2) for displacement
// amplitudes a_j. In these coordinates
//     W(u) = exp(-u V^-1 u^T) / (pi^2 sqrt(det V))
// is a normalized density for a covariance matrix V with vacuum = I/2, and
// the displaced parity of each mode is (pi/2) W.
#pragma once

#include "nlab/covmat.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>

namespace nlab {

using PhasePoint = std::array<double, 4>;
using ModePoint = std::array<double, 2>;

struct BellSettings {
    ModePoint u1{}, u2{}, u1p{}, u2p{};

    static BellSettings from_flat(std::span<const double> x);
    std::array<double, 8> flat() const;
};

enum class BellKind { parity, onoff };

std::string to_string(BellKind k);
BellKind bell_kind_from_string(const std::string& s);

/// Normalized Gaussian exp(-u M^-1 u^T) / (pi^n sqrt(det M)) in 2n dimensions.
template <int N>
class GaussianDensity {
public:
    using Mat = Eigen::Matrix<double, N, N>;
    using Vec = Eigen::Matrix<double, N, 1>;
    using RealMat = Eigen::Matrix<Real, N, N>;

    /// Factorized in extended precision: strongly squeezed states have det << entries^N.
    explicit GaussianDensity(const RealMat& M);
    double operator()(const Vec& u) const { return norm_ * std::exp(-u.dot(inv_ * u)); }
    double peak() const noexcept { return norm_; }

private:
    Mat inv_;
    double norm_;
};

extern template class GaussianDensity<2>;
extern template class GaussianDensity<4>;

double wigner(const CovMat& V, const PhasePoint& u);
/// <Pi(a1) (x) Pi(a2)> = (pi^2/4) W at u = (Re a1, Im a1, Re a2, Im a2).
double parity_expectation(const CovMat& V, std::complex<double> alpha1,
                          std::complex<double> alpha2);
double chsh_parity(const CovMat& V, const BellSettings& s);

/// Q(u) = exp(-u (V + I/2)^-1 u^T) / (pi^2 sqrt(det(V + I/2))).
double husimi(const CovMat& V, const PhasePoint& u);
/// Single-mode marginal of Q for `mode` of the two-mode state.
double husimi_marginal(const CovMat& V, Mode mode, const ModePoint& u);
/// Clauser-Horne type combination; marginals at the unprimed settings.
double bell_onoff(const CovMat& V, const BellSettings& s);

/// Precomputed Bell functional over the flat 8-vector (u1, u2, u1', u2').
class BellFunctional {
public:
    BellFunctional(const CovMat& V, BellKind kind);
    double operator()(std::span<const double> x) const;
    BellKind kind() const noexcept { return kind_; }
    /// Length scale of the narrowest feature of the underlying quasiprobability.
    double feature_scale() const noexcept { return scale_; }

private:
    BellKind kind_;
    GaussianDensity<4> joint_;
    GaussianDensity<2> marg1_;
    GaussianDensity<2> marg2_;
    double scale_;
};

struct OptConfig {
    std::uint64_t seed = 1;
    int n_starts = 64;
    long budget = 200000;  // objective evaluations per maximization
    double box = 3.0;      // starts drawn from [-box, box]^8
    double f_tol = 1e-10;
    double initial_step = 0.5;
};

struct BellResult {
    BellKind kind = BellKind::parity;
    double value = 0.0;  // max |B| or |B'|
    BellSettings settings;
    int n_starts = 0;
    long n_evals = 0;
    std::uint64_t seed = 0;

    std::string to_json() const;
};

inline constexpr double kTsirelson = 2.8284271247461903;

/// Multi-start simplex maximization of |B| over the eight settings. Start 0
/// is the origin; the others follow a seeded, shifted Halton sequence in the
/// search box. Deterministic for a given config.
BellResult maximize_bell(const CovMat& V, BellKind kind, const OptConfig& cfg = {});

/// Start points used by maximize_bell, exposed for tests.
std::vector<std::array<double, 8>> bell_start_points(const OptConfig& cfg);

}  // namespace nlab
