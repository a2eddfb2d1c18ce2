#include "nlab/phasespace.hpp"

#include "nlab/errors.hpp"
#include "nlab/csv.hpp"
#include "nlab/nelder_mead.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace nlab {

namespace {

constexpr double pi = std::numbers::pi;

using RealMat4 = Eigen::Matrix<Real, 4, 4>;

RealMat4 two_mode_matrix(const CovMat& V) {
    if (V.n_modes() != 2) throw InvalidParameter("two-mode covariance matrix required");
    V.require_physical();
    return V.matrix();
}

Eigen::Vector4d joint(const ModePoint& a, const ModePoint& b) { return {a[0], a[1], b[0], b[1]}; }

Eigen::Vector2d vec(const ModePoint& a) { return {a[0], a[1]}; }

}  // namespace

BellSettings BellSettings::from_flat(std::span<const double> x) {
    if (x.size() != 8) throw InvalidParameter("Bell settings need 8 coordinates");
    BellSettings s;
    s.u1 = {x[0], x[1]};
    s.u2 = {x[2], x[3]};
    s.u1p = {x[4], x[5]};
    s.u2p = {x[6], x[7]};
    return s;
}

std::array<double, 8> BellSettings::flat() const {
    return {u1[0], u1[1], u2[0], u2[1], u1p[0], u1p[1], u2p[0], u2p[1]};
}

std::string to_string(BellKind k) { return k == BellKind::parity ? "parity" : "onoff"; }

BellKind bell_kind_from_string(const std::string& s) {
    if (s == "parity") return BellKind::parity;
    if (s == "onoff") return BellKind::onoff;
    throw InvalidParameter("unknown Bell kind '" + s + "' (expected parity|onoff)");
}

template <int N>
GaussianDensity<N>::GaussianDensity(const RealMat& M) {
    Eigen::LDLT<RealMat> ldlt(M);
    const auto d = ldlt.vectorD();
    if (ldlt.info() != Eigen::Success || !(d.minCoeff() > 0)) {
        throw MatrixNotPhysical("Gaussian density needs a positive definite matrix");
    }
    RealMat inv = ldlt.solve(RealMat::Identity());
    inv_ = ((inv + inv.transpose()) / 2).template cast<double>();
    norm_ = static_cast<double>(1 / (std::pow(Real(pi), Real(N) / 2) * std::sqrt(d.prod())));
}

template class GaussianDensity<2>;
template class GaussianDensity<4>;

double wigner(const CovMat& V, const PhasePoint& u) {
    const GaussianDensity<4> W(two_mode_matrix(V));
    return W(Eigen::Vector4d(u[0], u[1], u[2], u[3]));
}

double parity_expectation(const CovMat& V, std::complex<double> alpha1,
                          std::complex<double> alpha2) {
    return pi * pi / 4 * wigner(V, {alpha1.real(), alpha1.imag(), alpha2.real(), alpha2.imag()});
}

double chsh_parity(const CovMat& V, const BellSettings& s) {
    const auto x = s.flat();
    return BellFunctional(V, BellKind::parity)(x);
}

double husimi(const CovMat& V, const PhasePoint& u) {
    const RealMat4 M = two_mode_matrix(V) + Real(0.5) * RealMat4::Identity();
    return GaussianDensity<4>(M)(Eigen::Vector4d(u[0], u[1], u[2], u[3]));
}

double husimi_marginal(const CovMat& V, Mode mode, const ModePoint& u) {
    const RealMat4 M = two_mode_matrix(V) + Real(0.5) * RealMat4::Identity();
    const int o = V.offset(mode);
    return GaussianDensity<2>(M.block<2, 2>(o, o))(vec(u));
}

double bell_onoff(const CovMat& V, const BellSettings& s) {
    const auto x = s.flat();
    return BellFunctional(V, BellKind::onoff)(x);
}

namespace {

RealMat4 functional_matrix(const CovMat& V, BellKind kind) {
    RealMat4 M = two_mode_matrix(V);
    if (kind == BellKind::onoff) M += Real(0.5) * RealMat4::Identity();
    return M;
}

}  // namespace

BellFunctional::BellFunctional(const CovMat& V, BellKind kind)
    : kind_(kind),
      joint_(functional_matrix(V, kind)),
      marg1_(functional_matrix(V, kind).block<2, 2>(0, 0)),
      marg2_(functional_matrix(V, kind).block<2, 2>(2, 2)) {
    const Eigen::SelfAdjointEigenSolver<RealMat4> es(functional_matrix(V, kind),
                                                     Eigen::EigenvaluesOnly);
    scale_ = static_cast<double>(std::sqrt(std::max(Real(0), es.eigenvalues()(0))));
}

double BellFunctional::operator()(std::span<const double> x) const {
    const ModePoint u1{x[0], x[1]}, u2{x[2], x[3]}, u1p{x[4], x[5]}, u2p{x[6], x[7]};
    const double corr = joint_(joint(u1, u2)) + joint_(joint(u1p, u2)) + joint_(joint(u1, u2p)) -
                        joint_(joint(u1p, u2p));
    if (kind_ == BellKind::parity) return pi * pi / 4 * corr;
    return 4 * pi * pi * corr - 4 * pi * (marg1_(vec(u1)) + marg2_(vec(u2))) + 2;
}

std::string BellResult::to_json() const {
    nlohmann::ordered_json j;
    j["kind"] = to_string(kind);
    j["value"] = value;
    j["settings"] = settings.flat();
    j["n_starts"] = n_starts;
    j["n_evals"] = n_evals;
    j["seed"] = seed;
    return j.dump();
}

namespace {

double radical_inverse(std::uint64_t i, unsigned base) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

}  // namespace

std::vector<std::array<double, 8>> bell_start_points(const OptConfig& cfg) {
    static constexpr unsigned primes[8] = {2, 3, 5, 7, 11, 13, 17, 19};
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::array<double, 8> shift{};
    for (double& s : shift) s = unit(rng);

    std::vector<std::array<double, 8>> pts;
    pts.reserve(std::max(cfg.n_starts, 0));
    for (int s = 0; s < cfg.n_starts; ++s) {
        std::array<double, 8> x{};
        if (s > 0) {
            for (int k = 0; k < 8; ++k) {
                double h = radical_inverse(static_cast<std::uint64_t>(s), primes[k]) + shift[k];
                h -= std::floor(h);
                x[k] = cfg.box * (2 * h - 1);
            }
        }
        pts.push_back(x);
    }
    return pts;
}

BellResult maximize_bell(const CovMat& V, BellKind kind, const OptConfig& cfg) {
    if (cfg.n_starts < 1) throw InvalidParameter("maximize_bell: need at least one start");
    if (!(cfg.box > 0)) throw InvalidParameter("maximize_bell: search box must be > 0");
    const BellFunctional B(V, kind);

    opt::NelderMeadOptions nm;
    nm.f_tol = cfg.f_tol;
    nm.initial_step = std::min(cfg.initial_step, std::max(B.feature_scale(), 1e-9));
    nm.x_tol = 1e-6 * nm.initial_step;

    BellResult best;
    best.kind = kind;
    best.seed = cfg.seed;
    best.value = -1.0;
    bool any_converged = false;
    long used = 0;
    constexpr long per_run_cap = 20000;
    constexpr int max_polish = 3;

    for (const auto& start : bell_start_points(cfg)) {
        if (used >= cfg.budget) break;
        for (double sign : {1.0, -1.0}) {
            if (used >= cfg.budget) break;
            auto obj = [&](std::span<const double> x) { return -sign * B(x); };
            std::vector<double> x0(start.begin(), start.end());
            double fprev = std::numeric_limits<double>::infinity();
            opt::NelderMeadResult r;
            for (int pass = 0; pass <= max_polish && used < cfg.budget; ++pass) {
                nm.max_evals = std::min(per_run_cap, cfg.budget - used);
                r = opt::nelder_mead(obj, x0, nm);
                used += r.evals;
                any_converged = any_converged || r.converged;
                const double v = std::abs(r.f);
                if (v > best.value) {
                    best.value = v;
                    best.settings = BellSettings::from_flat(r.x);
                }
                if (!r.converged || fprev - r.f <= cfg.f_tol) break;
                fprev = r.f;
                x0 = r.x;
            }
        }
        ++best.n_starts;
    }
    best.n_evals = used;
    if (!any_converged) {
        throw OptBudgetExhausted("Bell maximization used its budget of " +
                                 std::to_string(cfg.budget) +
                                 " evaluations without a converged local search");
    }
    if (kind == BellKind::parity && best.value > kTsirelson + 1e-6) {
        throw SolverFailure("parity Bell value " + csv::num(best.value) +
                            " exceeds the Tsirelson bound");
    }
    return best;
}

}  // namespace nlab
