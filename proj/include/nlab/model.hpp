// model.hpp — physical parameters, feedback-modified cavity quantities and
// assembly of the linearized drift/diffusion matrices.
#pragma once

#include "nlab/types.hpp"

#include <complex>
#include <string>
#include <vector>

namespace nlab {

/// Physical inputs. Rates are angular (rad/s); occupations are dimensionless.
/// G1 and G2 are the moduli of the effective optomechanical couplings.
struct SystemParams {
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double r_B = 0.0;
    double theta = 0.0;
    double Delta = 0.0;
    double G1 = 0.0;
    double G2 = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double nbar1 = 0.0;
    double nbar2 = 0.0;
    double omega1 = 0.0;
    double omega2 = 0.0;

    /// Throws InvalidParameter on negative rates/occupations or r_B outside [0, 1).
    void validate() const;

    /// Field names in declaration order; also the accepted JSON keys.
    static const std::vector<std::string>& field_names();
    double get(const std::string& name) const;
    void set(const std::string& name, double value);

    bool operator==(const SystemParams&) const = default;
};

struct CavityParams {
    double kappa_eff = 0.0;
    double Delta_eff = 0.0;
};

CavityParams effective_cavity_params(double kappa1, double kappa2, double r_B, double theta,
                                     double Delta);
CavityParams effective_cavity_params(const SystemParams& p);

inline constexpr double hbar = 1.0545718e-34;  // J s

/// Drive amplitude sqrt(2 P kappa1 / (hbar omegaL)) in rad/s.
double drive_amplitude(double power, double kappa1, double omegaL);

/// Bichromatic drive description. The two tones sit at omega_0 + omega1
/// (blue sideband of MR1) and omega_0 - omega2 (red sideband of MR2).
struct DriveConfig {
    double g1 = 0.0;
    double g2 = 0.0;
    double P1 = 0.0;
    double P2 = 0.0;
    double omegaL1 = 0.0;
    double omegaL2 = 0.0;
    double omega_c = 0.0;
    double omega_0 = 0.0;

    static DriveConfig bichromatic(const SystemParams& p, double g1, double g2, double P1,
                                   double P2, double omega_c, double omega_0);

    double bare_detuning() const noexcept { return omega_c - omega_0; }
};

enum class Sideband { blue, red };

/// Complex effective coupling. Blue: g E / (omega - Delta_eff + i kappa_eff);
/// red: g E / (-omega - Delta_eff + i kappa_eff).
std::complex<double> effective_coupling(Sideband sideband, double g, double E, double omega,
                                        const CavityParams& cavity);

struct EffectiveCouplings {
    std::complex<double> G1;
    std::complex<double> G2;
};

EffectiveCouplings effective_couplings(const DriveConfig& drive, const SystemParams& p);

struct RegimeCheck {
    std::string name;
    double ratio = 0.0;
    bool ok = true;
};

struct RegimeReport {
    double threshold = 0.01;
    bool degenerate_frequencies = false;
    std::vector<RegimeCheck> checks;

    bool ok() const noexcept;
    std::vector<std::string> warnings() const;
};

/// Checks how far the parameters sit inside the resolved-sideband regime
/// where the linearized equations hold. Advisory only.
RegimeReport validate_regime(const SystemParams& p, double threshold = 0.01);

/// Drift and diffusion of the quadrature vector in QuadratureOrder.
struct LinearModel {
    Mat6 drift = Mat6::Zero();
    Mat6 diffusion = Mat6::Zero();
    QuadratureOrder order{};
    CavityParams cavity{};
    SystemParams params{};
};

LinearModel build_model(const SystemParams& p);

}  // namespace nlab
