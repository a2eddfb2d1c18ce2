// nlab — batch front end: steady | evolve | sweep | figure.
#include "nlab/config.hpp"
#include "nlab/errors.hpp"
#include "nlab/runner.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Covariance-matrix laboratory for two optomechanically entangled resonators"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    int workers = 1;
    int figure = 0;
    double resolution = 1.0;

    auto common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("--config", config_path, "JSON configuration");
        if (config_required) opt->required();
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        sub->add_option("--seed", seed, "optimizer seed (overrides the config)");
        sub->add_option("--workers", workers, "parallel workers for sweeps")->check(CLI::PositiveNumber);
    };
    auto* steady = app.add_subcommand("steady", "steady-state measures");
    auto* evolve = app.add_subcommand("evolve", "covariance trajectory from the thermal initial state");
    auto* sweep = app.add_subcommand("sweep", "one- or two-parameter grid");
    auto* fig = app.add_subcommand("figure", "regenerate the datasets of a figure (1-5)");
    common(steady, true);
    common(evolve, true);
    common(sweep, true);
    common(fig, false);
    fig->add_option("--figure", figure, "figure index");
    fig->add_option("--resolution", resolution, "scale factor for grid and sample counts")
        ->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    nlab::RunOptions opts;
    opts.out_dir = out_dir;
    opts.workers = workers;

    try {
        if (fig->parsed()) {
            std::vector<nlab::FigureJob> jobs;
            if (!config_path.empty()) {
                jobs = nlab::jobs_from_manifest(nlab::read_json_file(config_path), figure);
            } else {
                if (figure < 1 || figure > 5) {
                    std::cerr << "unknown figure index " << figure << " (expected 1-5)\n";
                    return nlab::kExitUnknownFigure;
                }
                jobs = nlab::figure_jobs(figure, resolution);
            }
            if (seed) {
                for (auto& j : jobs) j.config.optimizer.seed = *seed;
            }
            return nlab::cmd_figure(figure, std::move(jobs), opts, std::cerr);
        }

        nlab::RunConfig cfg = nlab::config_from_json(nlab::read_json_file(config_path));
        if (seed) cfg.optimizer.seed = *seed;
        if (steady->parsed()) return nlab::cmd_steady(cfg, opts, std::cerr);
        if (evolve->parsed()) return nlab::cmd_evolve(cfg, opts, std::cerr);
        return nlab::cmd_sweep(cfg, opts, std::cerr);
    } catch (const nlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return nlab::kExitUsage;
    }
}
