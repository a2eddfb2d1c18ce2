// runner.hpp — steady/evolve/sweep/figure computations behind the CLI.
#pragma once

#include "nlab/config.hpp"
#include "nlab/dynamics.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace nlab {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitUnstable = 2,
    kExitIntegrator = 3,
    kExitUnknownFigure = 4,
};

/// Seed for grid point / sample `index`, independent of execution order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

struct SteadyOutcome {
    MeasureReport report;
    std::vector<BellResult> bell;
};

SteadyOutcome run_steady(const RunConfig& cfg);

struct EvolveRow {
    double t = 0.0;
    CovMat V;
    MeasureReport report;
    double defect = 0.0;
    std::vector<BellResult> bell;
};

std::vector<double> evolve_times(const RunConfig& cfg);
std::vector<EvolveRow> run_evolve(const RunConfig& cfg);

struct SweepRow {
    std::vector<double> coords;
    bool stable = false;
    MeasureReport report;
    std::vector<double> bell;  // |B| per configured kind
};

struct SweepTable {
    std::vector<std::string> axes;
    std::vector<BellKind> bell;
    std::vector<SweepRow> rows;  // row-major over the axes
};

/// Evaluates one grid point; exposed so tests can compare against run_steady.
SweepRow evaluate_point(const RunConfig& cfg, const SystemParams& p, std::uint64_t index);
SweepTable run_sweep(const RunConfig& cfg, int workers = 1);

std::string steady_csv(const RunConfig& cfg, const SteadyOutcome& out);
std::string evolve_csv(const RunConfig& cfg, const std::vector<EvolveRow>& rows);
std::string trajectory_csv(const std::vector<EvolveRow>& rows);
std::string sweep_csv(const SweepTable& table);

struct RunOptions {
    std::filesystem::path out_dir = ".";
    std::string stem;  // output file stem; defaults to the command name
    int workers = 1;
};

int cmd_steady(const RunConfig& cfg, const RunOptions& opts, std::ostream& log);
int cmd_evolve(const RunConfig& cfg, const RunOptions& opts, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, const RunOptions& opts, std::ostream& log);

struct FigureJob {
    std::string name;
    std::string command;  // steady | evolve | sweep
    RunConfig config;
};

/// Caption parameter sets of figures 1-5. Grid counts and sample counts are
/// multiplied by `resolution` (minimum 2). Throws InvalidParameter for n outside 1..5.
std::vector<FigureJob> figure_jobs(int n, double resolution = 1.0);

nlohmann::ordered_json figure_manifest(int n, const std::vector<FigureJob>& jobs);
std::vector<FigureJob> jobs_from_manifest(const nlohmann::json& manifest, int& figure);

/// Writes <name>.csv per job plus manifest.json into opts.out_dir.
int cmd_figure(int n, std::vector<FigureJob> jobs, const RunOptions& opts, std::ostream& log);

}  // namespace nlab
