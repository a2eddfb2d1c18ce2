// config.hpp — JSON run configurations for the CLI.
#pragma once

#include "nlab/model.hpp"
#include "nlab/phasespace.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nlab {

enum class TimeUnit { seconds, periods };  // periods of 2pi/|Delta_eff|

struct TimeGrid {
    double end = 0.0;
    int samples = 2;
    TimeUnit unit = TimeUnit::seconds;
};

/// Sweep axis over a SystemParams field or one of the derived axes
/// G1_over_G2 (G1 = v G2), nbar (nbar1 = v, nbar2 = v/2),
/// gamma (gamma1 = gamma2 = v), kappa_eff (symmetric mirrors tuned so the
/// feedback-modified decay rate equals v).
struct SweepAxis {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    int count = 2;

    std::vector<double> values() const;
};

enum class SweepMode { steady, transient };

struct SweepGrid {
    std::vector<SweepAxis> axes;
    SweepMode mode = SweepMode::steady;
    double at = 0.0;  // evaluation time for transient sweeps
    TimeUnit unit = TimeUnit::seconds;
};

struct RunConfig {
    SystemParams params;
    std::optional<TimeGrid> time;
    std::optional<SweepGrid> sweep;
    std::vector<BellKind> bell;
    OptConfig optimizer;
};

bool is_axis_name(const std::string& name);
void apply_axis(SystemParams& p, const std::string& name, double value);

/// Seconds per time unit for the given parameters. Throws ConfigError for
/// periods when the effective detuning vanishes.
double time_scale(const SystemParams& p, TimeUnit unit);

SystemParams params_from_json(const nlohmann::json& j);
nlohmann::ordered_json params_to_json(const SystemParams& p);

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json config_to_json(const RunConfig& c);

nlohmann::json read_json_file(const std::string& path);

}  // namespace nlab
