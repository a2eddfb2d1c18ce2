// dynamics.hpp — steady-state and time-dependent covariance matrices of the
// linearized model (Lyapunov and differential Lyapunov equations).
#pragma once

#include "nlab/covmat.hpp"
#include "nlab/measures.hpp"
#include "nlab/model.hpp"

#include <optional>
#include <span>
#include <vector>

namespace nlab {

struct TrajectoryPoint {
    double t = 0.0;  // seconds
    CovMat V;
    std::optional<MeasureReport> measures;
};

Real max_real_eigenvalue(const LinearModel& model);

/// True iff every eigenvalue of the drift has real part below -tol.
/// A negative `tol` selects the default 1e-12 * ||A||_F.
bool is_stable(const LinearModel& model, Real tol = -1);

/// ||A V + V A^T + D||_F / ||D||_F (absolute norm when D = 0).
Real lyapunov_residual(const LinearModel& model, const MatX& V);

inline constexpr Real kLyapunovTol = 1e-10L;

/// Residual accepted for V: kLyapunovTol, or the rounding floor
/// 8 eps ||A||_F ||V||_F / ||D||_F when that is larger (G1 -> G2 edge,
/// where ||V|| grows without bound and no stored solution can do better).
Real lyapunov_tolerance(const LinearModel& model, const MatX& V);

/// Solves A V + V A^T + D = 0 through its 36x36 Kronecker form.
/// Throws UnstableModel if A is not Hurwitz, SolverFailure if the residual
/// exceeds lyapunov_tolerance.
CovMat steady_state_cm(const LinearModel& model);

/// Cavity vacuum and thermal mechanical modes.
CovMat initial_state(double nbar1, double nbar2);

/// Largest fixed RK4 step allowed for this model: 1/1000 of the fastest
/// time scale among 2pi/|Delta_eff|, 1/G, 1/kappa_eff and 1/gamma.
double rk4_step_cap(const LinearModel& model);

struct EvolveOptions {
    /// Overrides the step cap when positive (must not exceed it).
    double max_step = 0.0;
};

/// Fixed-step RK4 integration of dV/dt = A V + V A^T + D sampled at `times`,
/// which must start at 0 and increase strictly. Throws StepTooLarge if a
/// sample leaves the physical set.
std::vector<TrajectoryPoint> evolve_cm(const LinearModel& model, const CovMat& V0,
                                       std::span<const double> times, EvolveOptions opts = {});

/// Frobenius norm of the cavity/mechanics off-diagonal block.
Real decoupling_defect(const CovMat& V);

/// Mechanical two-mode block (MR1, MR2).
inline CovMat mechanical_block(const CovMat& V) { return V.reduce({Mode::mech1, Mode::mech2}); }

}  // namespace nlab
