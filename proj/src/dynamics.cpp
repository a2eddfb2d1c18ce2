#include "nlab/dynamics.hpp"

#include "nlab/csv.hpp"
#include "nlab/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace nlab {

namespace {

const std::vector<Mode> kAllModes{QuadratureOrder::modes.begin(), QuadratureOrder::modes.end()};

}  // namespace

Real max_real_eigenvalue(const LinearModel& model) {
    Eigen::EigenSolver<Mat6> es(model.drift, false);
    if (es.info() != Eigen::Success) throw SolverFailure("drift eigen decomposition failed");
    return es.eigenvalues().real().maxCoeff();
}

bool is_stable(const LinearModel& model, Real tol) {
    if (tol < 0) tol = Real(1e-12) * model.drift.norm();
    return max_real_eigenvalue(model) < -tol;
}

Real lyapunov_residual(const LinearModel& model, const MatX& V) {
    const Mat6 AV = model.drift * V;
    const Mat6 R = AV + AV.transpose() + model.diffusion;
    const Real dn = model.diffusion.norm();
    return dn > 0 ? R.norm() / dn : R.norm();
}

Real lyapunov_tolerance(const LinearModel& model, const MatX& V) {
    Real dn = model.diffusion.norm();
    if (dn == 0) dn = 1;
    const Real floor = 8 * std::numeric_limits<Real>::epsilon() * model.drift.norm() * V.norm() / dn;
    return std::max(kLyapunovTol, floor);
}

CovMat steady_state_cm(const LinearModel& model) {
    const Real lam = max_real_eigenvalue(model);
    if (!(lam < -Real(1e-12) * model.drift.norm())) {
        throw UnstableModel("drift matrix is not Hurwitz: max Re(eigenvalue) = " +
                                csv::num(static_cast<double>(lam)),
                            static_cast<double>(lam));
    }
    constexpr int n = 6;
    const Mat6& A = model.drift;
    const Mat6 I = Mat6::Identity();
    // vec(A V + V A^T) = (I (x) A + A (x) I) vec(V), column-major vec
    Eigen::Matrix<Real, n * n, n * n> K;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            K.block<n, n>(i * n, j * n) = I(i, j) * A + A(i, j) * I;
        }
    }
    Eigen::Matrix<Real, n * n, 1> rhs = -Eigen::Map<const Eigen::Matrix<Real, n * n, 1>>(
        model.diffusion.data());
    Eigen::PartialPivLU<Eigen::Matrix<Real, n * n, n * n>> lu(K);
    Eigen::Matrix<Real, n * n, 1> x = lu.solve(rhs);
    for (int it = 0; it < 2; ++it) x += lu.solve(rhs - K * x);

    MatX V = Eigen::Map<Mat6>(x.data());
    V = (V + V.transpose()).eval() / 2;
    const Real res = lyapunov_residual(model, V);
    if (!(res <= lyapunov_tolerance(model, V))) {
        throw SolverFailure("Lyapunov residual " + csv::num(static_cast<double>(res)) +
                            " exceeds tolerance");
    }
    CovMat out(std::move(V), kAllModes);
    out.require_physical();
    return out;
}

CovMat initial_state(double nbar1, double nbar2) {
    if (!(nbar1 >= 0.0) || !(nbar2 >= 0.0)) {
        throw InvalidParameter("thermal occupations must be >= 0");
    }
    using Q = QuadratureOrder;
    MatX V = MatX::Zero(6, 6);
    V(Q::position(Mode::cavity), Q::position(Mode::cavity)) = Real(0.5);
    V(Q::momentum(Mode::cavity), Q::momentum(Mode::cavity)) = Real(0.5);
    V(Q::position(Mode::mech1), Q::position(Mode::mech1)) = Real(nbar1) + Real(0.5);
    V(Q::momentum(Mode::mech1), Q::momentum(Mode::mech1)) = Real(nbar1) + Real(0.5);
    V(Q::position(Mode::mech2), Q::position(Mode::mech2)) = Real(nbar2) + Real(0.5);
    V(Q::momentum(Mode::mech2), Q::momentum(Mode::mech2)) = Real(nbar2) + Real(0.5);
    return CovMat(std::move(V), kAllModes);
}

double rk4_step_cap(const LinearModel& model) {
    const SystemParams& p = model.params;
    double fastest = 0.0;  // largest rate
    const double d = std::abs(model.cavity.Delta_eff);
    if (d > 0) fastest = std::max(fastest, d / (2 * std::numbers::pi));
    fastest = std::max({fastest, p.G1, p.G2, model.cavity.kappa_eff, p.gamma1, p.gamma2});
    if (fastest == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / (1000.0 * fastest);
}

std::vector<TrajectoryPoint> evolve_cm(const LinearModel& model, const CovMat& V0,
                                       std::span<const double> times, EvolveOptions opts) {
    if (V0.size() != 6) throw InvalidParameter("evolve_cm: initial state must be 6x6");
    for (Mode m : QuadratureOrder::modes) {
        if (V0.offset(m) != QuadratureOrder::position(m)) {
            throw InvalidParameter("evolve_cm: initial state not in quadrature order");
        }
    }
    if (times.empty() || times.front() != 0.0) {
        throw InvalidParameter("evolve_cm: time grid must start at 0");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw InvalidParameter("evolve_cm: time grid must be strictly increasing");
        }
    }
    V0.require_physical();

    double h_cap = rk4_step_cap(model);
    if (opts.max_step > 0.0) h_cap = std::min(h_cap, opts.max_step);

    const Mat6& A = model.drift;
    const Mat6& D = model.diffusion;
    auto rhs = [&](const Mat6& V) -> Mat6 {
        const Mat6 AV = A * V;
        return AV + AV.transpose() + D;
    };

    std::vector<TrajectoryPoint> out;
    out.reserve(times.size());
    out.push_back({0.0, V0, std::nullopt});

    // Compensated (Kahan) accumulation of the increments: near a steady state with
    // large entries, plain V += dV rounds away eps |V| per step, and the part of
    // that noise landing on slowly damped modes piles up over millions of steps.
    Mat6 V = V0.matrix();
    Mat6 carry = Mat6::Zero();
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double span = times[i] - times[i - 1];
        const auto steps = static_cast<long long>(std::ceil(span / h_cap));
        const Real h = Real(span) / Real(std::max(1LL, steps));
        for (long long s = 0; s < std::max(1LL, steps); ++s) {
            const Mat6 k1 = rhs(V);
            const Mat6 k2 = rhs(V + (h / 2) * k1);
            const Mat6 k3 = rhs(V + (h / 2) * k2);
            const Mat6 k4 = rhs(V + h * k3);
            const Mat6 dV = (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4) - carry;
            const Mat6 next = V + dV;
            carry = (next - V) - dV;
            V = next;
        }
        CovMat cm(MatX(V), kAllModes);
        if (!cm.is_physical()) {
            throw StepTooLarge("trajectory left the physical set at t = " + csv::num(times[i]) +
                               " (min symplectic eigenvalue " +
                               csv::num(static_cast<double>(cm.min_symplectic_eigenvalue())) +
                               "); refine the step");
        }
        out.push_back({times[i], std::move(cm), std::nullopt});
    }
    return out;
}

Real decoupling_defect(const CovMat& V) {
    const int c = V.offset(Mode::cavity);
    const int m1 = V.offset(Mode::mech1);
    const int m2 = V.offset(Mode::mech2);
    Real s = 0;
    for (int i = c; i < c + 2; ++i) {
        for (int j : {m1, m1 + 1, m2, m2 + 1}) s += V(i, j) * V(i, j);
    }
    return std::sqrt(s);
}

}  // namespace nlab
