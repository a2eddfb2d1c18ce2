#include "nlab/model.hpp"

#include "nlab/errors.hpp"

#include <cmath>
#include <limits>

namespace nlab {

std::string_view to_string(Mode m) noexcept {
    switch (m) {
        case Mode::cavity: return "cavity";
        case Mode::mech1: return "mech1";
        case Mode::mech2: return "mech2";
    }
    return "?";
}

namespace {

void require_nonnegative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw InvalidParameter(std::string(name) + " must be finite and >= 0");
    }
}

void require_reflectivity(double r_B) {
    if (!(r_B >= 0.0 && r_B < 1.0)) {
        throw InvalidParameter("r_B must lie in [0, 1)");
    }
}

}  // namespace

void SystemParams::validate() const {
    require_nonnegative(kappa1, "kappa1");
    require_nonnegative(kappa2, "kappa2");
    require_reflectivity(r_B);
    require_nonnegative(G1, "G1");
    require_nonnegative(G2, "G2");
    require_nonnegative(gamma1, "gamma1");
    require_nonnegative(gamma2, "gamma2");
    require_nonnegative(nbar1, "nbar1");
    require_nonnegative(nbar2, "nbar2");
    require_nonnegative(omega1, "omega1");
    require_nonnegative(omega2, "omega2");
    if (!std::isfinite(theta) || !std::isfinite(Delta)) {
        throw InvalidParameter("theta and Delta must be finite");
    }
}

const std::vector<std::string>& SystemParams::field_names() {
    static const std::vector<std::string> names{
        "kappa1", "kappa2", "r_B",   "theta", "Delta",  "G1",    "G2",
        "gamma1", "gamma2", "nbar1", "nbar2", "omega1", "omega2"};
    return names;
}

namespace {

template <typename Self>
auto field(Self& p, const std::string& name) -> decltype(&p.kappa1) {
    if (name == "kappa1") return &p.kappa1;
    if (name == "kappa2") return &p.kappa2;
    if (name == "r_B") return &p.r_B;
    if (name == "theta") return &p.theta;
    if (name == "Delta") return &p.Delta;
    if (name == "G1") return &p.G1;
    if (name == "G2") return &p.G2;
    if (name == "gamma1") return &p.gamma1;
    if (name == "gamma2") return &p.gamma2;
    if (name == "nbar1") return &p.nbar1;
    if (name == "nbar2") return &p.nbar2;
    if (name == "omega1") return &p.omega1;
    if (name == "omega2") return &p.omega2;
    throw InvalidParameter("unknown parameter '" + name + "'");
}

}  // namespace

double SystemParams::get(const std::string& name) const { return *field(*this, name); }

void SystemParams::set(const std::string& name, double value) { *field(*this, name) = value; }

CavityParams effective_cavity_params(double kappa1, double kappa2, double r_B, double theta,
                                     double Delta) {
    require_nonnegative(kappa1, "kappa1");
    require_nonnegative(kappa2, "kappa2");
    require_reflectivity(r_B);
    const double root = std::sqrt(kappa1 * kappa2);
    const double cross = 2.0 * root * r_B;
    CavityParams c;
    // theta = 0 is the common case; keep it free of cos/sin rounding.
    const double ct = theta == 0.0 ? 1.0 : std::cos(theta);
    const double st = theta == 0.0 ? 0.0 : std::sin(theta);
    if (r_B * ct <= 0.5) {
        c.kappa_eff = kappa1 + kappa2 - cross * ct;
    } else {
        // (sqrt k1 - sqrt k2)^2 + 2 sqrt(k1 k2)(1 - r_B cos theta): no cancellation as r_B -> 1
        const double diff = std::sqrt(kappa1) - std::sqrt(kappa2);
        c.kappa_eff = diff * diff + 2.0 * root * (1.0 - r_B * ct);
    }
    c.kappa_eff = std::max(0.0, c.kappa_eff);
    c.Delta_eff = Delta - cross * st;
    return c;
}

CavityParams effective_cavity_params(const SystemParams& p) {
    return effective_cavity_params(p.kappa1, p.kappa2, p.r_B, p.theta, p.Delta);
}

double drive_amplitude(double power, double kappa1, double omegaL) {
    require_nonnegative(power, "P");
    require_nonnegative(kappa1, "kappa1");
    if (!(omegaL > 0.0)) throw InvalidParameter("drive frequency omegaL must be > 0");
    return std::sqrt(2.0 * power * kappa1 / (hbar * omegaL));
}

DriveConfig DriveConfig::bichromatic(const SystemParams& p, double g1, double g2, double P1,
                                     double P2, double omega_c, double omega_0) {
    require_nonnegative(P1, "P1");
    require_nonnegative(P2, "P2");
    DriveConfig d;
    d.g1 = g1;
    d.g2 = g2;
    d.P1 = P1;
    d.P2 = P2;
    d.omega_c = omega_c;
    d.omega_0 = omega_0;
    d.omegaL1 = omega_0 + p.omega1;
    d.omegaL2 = omega_0 - p.omega2;
    return d;
}

std::complex<double> effective_coupling(Sideband sideband, double g, double E, double omega,
                                        const CavityParams& cavity) {
    const double re = (sideband == Sideband::blue ? omega : -omega) - cavity.Delta_eff;
    const std::complex<double> denom(re, cavity.kappa_eff);
    if (denom == 0.0) {
        throw SingularConfiguration("effective coupling denominator vanishes");
    }
    if (g == 0.0 || E == 0.0) return {0.0, 0.0};
    return g * E / denom;
}

EffectiveCouplings effective_couplings(const DriveConfig& drive, const SystemParams& p) {
    const CavityParams cav = effective_cavity_params(p);
    const double E1 = drive_amplitude(drive.P1, p.kappa1, drive.omegaL1);
    const double E2 = drive_amplitude(drive.P2, p.kappa1, drive.omegaL2);
    return {effective_coupling(Sideband::blue, drive.g1, E1, p.omega1, cav),
            effective_coupling(Sideband::red, drive.g2, E2, p.omega2, cav)};
}

bool RegimeReport::ok() const noexcept {
    if (degenerate_frequencies) return false;
    for (const auto& c : checks) {
        if (!c.ok) return false;
    }
    return true;
}

std::vector<std::string> RegimeReport::warnings() const {
    std::vector<std::string> out;
    if (degenerate_frequencies) out.emplace_back("omega1 == omega2: sideband processes overlap");
    for (const auto& c : checks) {
        if (!c.ok) {
            out.push_back(c.name + " = " + std::to_string(c.ratio) + " exceeds " +
                          std::to_string(threshold));
        }
    }
    return out;
}

RegimeReport validate_regime(const SystemParams& p, double threshold) {
    RegimeReport rep;
    rep.threshold = threshold;
    const double kt = effective_cavity_params(p).kappa_eff;
    const double split = std::abs(p.omega1 - p.omega2);
    rep.degenerate_frequencies = split == 0.0;

    auto ratio = [](double num, double den) {
        if (num == 0.0) return 0.0;
        if (den == 0.0) return std::numeric_limits<double>::infinity();
        return num / den;
    };
    auto add = [&](std::string name, double num, double den) {
        const double r = ratio(num, den);
        rep.checks.push_back({std::move(name), r, r <= threshold});
    };

    const std::pair<const char*, double> rates[] = {{"G1", p.G1}, {"G2", p.G2}, {"kappa_eff", kt}};
    for (const auto& [name, v] : rates) {
        const std::string n(name);
        add(n + "/omega1", v, p.omega1);
        add(n + "/omega2", v, p.omega2);
        add(n + "/|omega1-omega2|", v, split);
    }
    return rep;
}

LinearModel build_model(const SystemParams& p) {
    p.validate();
    LinearModel m;
    m.params = p;
    m.cavity = effective_cavity_params(p);

    using Q = QuadratureOrder;
    const int X = Q::position(Mode::cavity), Y = Q::momentum(Mode::cavity);
    const int q1 = Q::position(Mode::mech1), p1 = Q::momentum(Mode::mech1);
    const int q2 = Q::position(Mode::mech2), p2 = Q::momentum(Mode::mech2);

    const Real k = m.cavity.kappa_eff;
    const Real d = m.cavity.Delta_eff;
    const Real G1 = p.G1, G2 = p.G2;
    const Real h1 = Real(p.gamma1) / 2, h2 = Real(p.gamma2) / 2;

    Mat6& A = m.drift;
    A(X, X) = -k;
    A(X, Y) = d;
    A(X, p1) = -G1;
    A(X, p2) = G2;

    A(Y, X) = -d;
    A(Y, Y) = -k;
    A(Y, q1) = -G1;
    A(Y, q2) = -G2;

    A(q1, Y) = -G1;
    A(q1, q1) = -h1;
    A(p1, X) = -G1;
    A(p1, p1) = -h1;

    A(q2, Y) = G2;
    A(q2, q2) = -h2;
    A(p2, X) = -G2;
    A(p2, p2) = -h2;

    Mat6& D = m.diffusion;
    D(X, X) = k;
    D(Y, Y) = k;
    D(q1, q1) = D(p1, p1) = Real(p.gamma1) * (Real(p.nbar1) + Real(0.5));
    D(q2, q2) = D(p2, p2) = Real(p.gamma2) * (Real(p.nbar2) + Real(0.5));
    return m;
}

}  // namespace nlab
