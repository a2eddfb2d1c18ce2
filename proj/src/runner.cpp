#include "nlab/runner.hpp"

#include "nlab/csv.hpp"
#include "nlab/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

namespace nlab {

using nlohmann::json;
using nlohmann::ordered_json;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 finalizer over (seed, index)
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

MeasureReport nan_report() {
    MeasureReport r;
    r.E_N = r.G12 = r.G21 = r.a = r.b = kNaN;
    r.two_way = false;
    return r;
}

std::vector<BellResult> bell_for(const RunConfig& cfg, const CovMat& mech, std::uint64_t index) {
    std::vector<BellResult> out;
    OptConfig oc = cfg.optimizer;
    oc.seed = derive_seed(cfg.optimizer.seed, index);
    for (BellKind k : cfg.bell) out.push_back(maximize_bell(mech, k, oc));
    return out;
}

std::string bell_header(const std::vector<BellKind>& kinds) {
    std::string h;
    for (auto k : kinds) h += ",B_" + to_string(k);
    return h;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << content;
}

std::filesystem::path output_path(const RunOptions& opts, const std::string& fallback,
                                  const std::string& suffix = ".csv") {
    std::filesystem::create_directories(opts.out_dir);
    return opts.out_dir / ((opts.stem.empty() ? fallback : opts.stem) + suffix);
}

}  // namespace

SteadyOutcome run_steady(const RunConfig& cfg) {
    const LinearModel model = build_model(cfg.params);
    const CovMat V = steady_state_cm(model);
    const CovMat mech = mechanical_block(V);
    return {report(mech), bell_for(cfg, mech, 0)};
}

std::vector<double> evolve_times(const RunConfig& cfg) {
    if (!cfg.time) throw ConfigError("evolve: config needs a 'time' section");
    const double scale = time_scale(cfg.params, cfg.time->unit);
    const int n = cfg.time->samples;
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) {
        t[i] = i + 1 == n ? cfg.time->end * scale : cfg.time->end * scale * i / (n - 1);
    }
    return t;
}

std::vector<EvolveRow> run_evolve(const RunConfig& cfg) {
    const LinearModel model = build_model(cfg.params);
    const std::vector<double> times = evolve_times(cfg);
    const CovMat V0 = initial_state(cfg.params.nbar1, cfg.params.nbar2);
    auto traj = evolve_cm(model, V0, times);

    std::vector<EvolveRow> rows;
    rows.reserve(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const CovMat mech = mechanical_block(traj[i].V);
        EvolveRow r{traj[i].t, traj[i].V, report(mech),
                    static_cast<double>(decoupling_defect(traj[i].V)), {}};
        r.bell = bell_for(cfg, mech, i);
        rows.push_back(std::move(r));
    }
    return rows;
}

SweepRow evaluate_point(const RunConfig& cfg, const SystemParams& p, std::uint64_t index) {
    SweepRow row;
    const LinearModel model = build_model(p);
    const bool transient = cfg.sweep && cfg.sweep->mode == SweepMode::transient;
    std::optional<CovMat> full;
    if (transient) {
        const double t = cfg.sweep->at * time_scale(p, cfg.sweep->unit);
        const double times[2] = {0.0, t};
        try {
            full = evolve_cm(model, initial_state(p.nbar1, p.nbar2), times).back().V;
        } catch (const StepTooLarge&) {
        }
    } else if (is_stable(model)) {
        full = steady_state_cm(model);
    }
    if (!full) {
        row.stable = false;
        row.report = nan_report();
        row.bell.assign(cfg.bell.size(), kNaN);
        return row;
    }
    const CovMat mech = mechanical_block(*full);
    row.stable = true;
    row.report = report(mech);
    for (const auto& b : bell_for(cfg, mech, index)) row.bell.push_back(b.value);
    return row;
}

SweepTable run_sweep(const RunConfig& cfg, int workers) {
    if (!cfg.sweep) throw ConfigError("sweep: config needs a 'sweep' section");
    const auto& axes = cfg.sweep->axes;
    SweepTable table;
    table.bell = cfg.bell;
    std::vector<std::vector<double>> values;
    std::size_t total = 1;
    for (const auto& a : axes) {
        table.axes.push_back(a.name);
        values.push_back(a.values());
        total *= values.back().size();
    }
    table.rows.resize(total);

    auto coords_of = [&](std::size_t idx) {
        std::vector<double> c(axes.size());
        for (std::size_t k = axes.size(); k-- > 0;) {
            c[k] = values[k][idx % values[k].size()];
            idx /= values[k].size();
        }
        return c;
    };

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < total; i = next++) {
            try {
                const auto c = coords_of(i);
                SystemParams p = cfg.params;
                for (std::size_t k = 0; k < axes.size(); ++k) apply_axis(p, axes[k].name, c[k]);
                SweepRow row = evaluate_point(cfg, p, i);
                row.coords = c;
                table.rows[i] = std::move(row);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const int n = std::max(1, workers);
    if (n == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < n; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return table;
}

std::string steady_csv(const RunConfig& cfg, const SteadyOutcome& out) {
    std::string s = MeasureReport::csv_header() + bell_header(cfg.bell) + "\n";
    s += out.report.csv_row();
    for (const auto& b : out.bell) s += "," + csv::num(b.value);
    return s + "\n";
}

std::string evolve_csv(const RunConfig& cfg, const std::vector<EvolveRow>& rows) {
    const double d = effective_cavity_params(cfg.params).Delta_eff;
    const bool periods = d != 0.0;
    const double period = periods ? time_scale(cfg.params, TimeUnit::periods) : 1.0;
    std::string s = std::string("t") + (periods ? ",t_period," : ",") + MeasureReport::csv_header() +
                    ",decoupling_defect" + bell_header(cfg.bell) + "\n";
    for (const auto& r : rows) {
        s += csv::num(r.t) + ",";
        if (periods) s += csv::num(r.t / period) + ",";
        s += r.report.csv_row() + "," + csv::num(r.defect);
        for (const auto& b : r.bell) s += "," + csv::num(b.value);
        s += "\n";
    }
    return s;
}

std::string trajectory_csv(const std::vector<EvolveRow>& rows) {
    std::string s = "t";
    for (int i = 1; i <= 6; ++i) {
        for (int j = i; j <= 6; ++j) s += ",V" + std::to_string(i) + std::to_string(j);
    }
    s += "\n";
    for (const auto& r : rows) {
        s += csv::num(r.t);
        for (int i = 0; i < 6; ++i) {
            for (int j = i; j < 6; ++j) s += "," + csv::num(static_cast<double>(r.V(i, j)));
        }
        s += "\n";
    }
    return s;
}

std::string sweep_csv(const SweepTable& table) {
    std::string s;
    for (const auto& a : table.axes) s += a + ",";
    s += "stable," + MeasureReport::csv_header() + bell_header(table.bell) + "\n";
    for (const auto& r : table.rows) {
        for (double c : r.coords) s += csv::num(c) + ",";
        s += csv::boolean(r.stable) + "," + r.report.csv_row();
        for (double b : r.bell) s += "," + csv::num(b);
        s += "\n";
    }
    return s;
}

int cmd_steady(const RunConfig& cfg, const RunOptions& opts, std::ostream& log) {
    SteadyOutcome out;
    try {
        out = run_steady(cfg);
    } catch (const UnstableModel& e) {
        log << "unstable model: " << e.what() << "\n";
        return kExitUnstable;
    }
    write_file(output_path(opts, "steady"), steady_csv(cfg, out));
    if (!out.bell.empty()) {
        std::string js = "[";
        for (std::size_t i = 0; i < out.bell.size(); ++i) js += (i ? "," : "") + out.bell[i].to_json();
        write_file(output_path(opts, "steady", "_bell.json"), js + "]\n");
    }
    return kExitOk;
}

int cmd_evolve(const RunConfig& cfg, const RunOptions& opts, std::ostream& log) {
    std::vector<EvolveRow> rows;
    try {
        rows = run_evolve(cfg);
    } catch (const StepTooLarge& e) {
        log << "integrator failure: " << e.what() << "\n";
        return kExitIntegrator;
    }
    write_file(output_path(opts, "evolve"), evolve_csv(cfg, rows));
    write_file(output_path(opts, "evolve", "_trajectory.csv"), trajectory_csv(rows));
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, const RunOptions& opts, std::ostream& log) {
    const SweepTable table = run_sweep(cfg, opts.workers);
    write_file(output_path(opts, "sweep"), sweep_csv(table));
    const bool any = std::any_of(table.rows.begin(), table.rows.end(),
                                 [](const SweepRow& r) { return r.stable; });
    if (!any) {
        log << "every sweep point is unstable\n";
        return kExitUnstable;
    }
    return kExitOk;
}

namespace {

SystemParams steering_base() {
    SystemParams p;
    p.kappa1 = p.kappa2 = 5e4;
    p.G2 = 1e5;
    p.gamma1 = p.gamma2 = 10.0;
    p.omega1 = 1e7;
    p.omega2 = 2e7;
    return p;
}

SystemParams transient_base() {
    SystemParams p;
    p.G1 = p.G2 = 1e5;
    p.Delta = 1e4;
    p.omega1 = 1e7;
    p.omega2 = 2e7;
    return p;
}

int scaled(int count, double resolution) {
    return std::max(2, static_cast<int>(std::lround(count * resolution)));
}

RunConfig sweep_config(SystemParams base, std::vector<SweepAxis> axes, double resolution) {
    RunConfig c;
    c.params = base;
    SweepGrid g;
    for (auto& a : axes) a.count = scaled(a.count, resolution);
    g.axes = std::move(axes);
    c.sweep = g;
    return c;
}

}  // namespace

std::vector<FigureJob> figure_jobs(int n, double resolution) {
    std::vector<FigureJob> jobs;
    switch (n) {
        case 1: {
            for (double nbar : {0.0, 200.0}) {
                SystemParams p = steering_base();
                apply_axis(p, "nbar", nbar);
                jobs.push_back({nbar == 0.0 ? "fig1_abc" : "fig1_def", "sweep",
                                sweep_config(p, {{"G1_over_G2", 0.8, 1.0, 40}, {"r_B", 0.0, 0.95, 40}},
                                             resolution)});
            }
            break;
        }
        case 2: {
            const struct { const char* name; double r_B, ratio, nbar; } panels[] = {
                {"fig2a", 0.95, 0.999, 0.0}, {"fig2b", 0.7, 0.953, 200.0}, {"fig2c", 0.5, 0.869, 1000.0}};
            for (const auto& panel : panels) {
                RunConfig c;
                c.params = steering_base();
                c.params.r_B = panel.r_B;
                apply_axis(c.params, "G1_over_G2", panel.ratio);
                apply_axis(c.params, "nbar", panel.nbar);
                c.time = TimeGrid{0.01, scaled(501, resolution), TimeUnit::seconds};
                jobs.push_back({panel.name, "evolve", c});
            }
            break;
        }
        case 3: {
            for (double gamma : {0.0, 3e-4}) {
                RunConfig c;
                c.params = transient_base();
                apply_axis(c.params, "gamma", gamma);
                c.time = TimeGrid{3.0, scaled(151, resolution), TimeUnit::periods};
                c.bell = {BellKind::parity};
                jobs.push_back({gamma == 0.0 ? "fig3a" : "fig3b", "evolve", c});
            }
            break;
        }
        case 4: {
            for (double nbar : {0.0, 0.05}) {
                SystemParams p = transient_base();
                apply_axis(p, "nbar", nbar);
                RunConfig c = sweep_config(
                    p, {{"gamma", 0.0, 5e-4, 21}, {"kappa_eff", 0.0, 0.5, 21}}, resolution);
                c.sweep->mode = SweepMode::transient;
                c.sweep->at = 1.0;
                c.sweep->unit = TimeUnit::periods;
                c.bell = {BellKind::parity};
                jobs.push_back({nbar == 0.0 ? "fig4a" : "fig4b", "sweep", c});
            }
            break;
        }
        case 5: {
            SystemParams a = steering_base();
            apply_axis(a, "gamma", 1.0);
            RunConfig ca = sweep_config(
                a, {{"G1_over_G2", 0.6, 0.99, 30}, {"r_B", 0.0, 0.95, 30}}, resolution);
            ca.bell = {BellKind::onoff};
            jobs.push_back({"fig5a", "sweep", ca});
            for (double gamma : {1.0, 100.0}) {
                SystemParams p = steering_base();
                p.r_B = 0.5;
                apply_axis(p, "gamma", gamma);
                RunConfig c = sweep_config(
                    p, {{"G1_over_G2", 0.6, 0.99, 30}, {"nbar", 0.0, 2.0, 30}}, resolution);
                c.bell = {BellKind::onoff};
                jobs.push_back({gamma == 1.0 ? "fig5b" : "fig5c", "sweep", c});
            }
            break;
        }
        default:
            throw InvalidParameter("unknown figure index " + std::to_string(n) + " (expected 1-5)");
    }
    return jobs;
}

ordered_json figure_manifest(int n, const std::vector<FigureJob>& jobs) {
    ordered_json m;
    m["figure"] = n;
    ordered_json arr = ordered_json::array();
    for (const auto& j : jobs) {
        arr.push_back({{"name", j.name}, {"command", j.command}, {"config", config_to_json(j.config)}});
    }
    m["jobs"] = arr;
    return m;
}

std::vector<FigureJob> jobs_from_manifest(const json& manifest, int& figure) {
    try {
        for (const auto& [key, _] : manifest.items()) {
            if (key != "figure" && key != "jobs") {
                throw ConfigError("manifest: unknown key '" + key + "'");
            }
        }
        figure = manifest.at("figure").get<int>();
        std::vector<FigureJob> jobs;
        for (const auto& j : manifest.at("jobs")) {
            FigureJob job{j.at("name").get<std::string>(), j.at("command").get<std::string>(),
                          config_from_json(j.at("config"))};
            if (job.command != "steady" && job.command != "evolve" && job.command != "sweep") {
                throw ConfigError("manifest: unknown command '" + job.command + "'");
            }
            jobs.push_back(std::move(job));
        }
        return jobs;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("manifest: ") + e.what());
    }
}

int cmd_figure(int n, std::vector<FigureJob> jobs, const RunOptions& opts, std::ostream& log) {
    std::filesystem::create_directories(opts.out_dir);
    write_file(opts.out_dir / "manifest.json", figure_manifest(n, jobs).dump(2) + "\n");
    int code = kExitOk;
    for (const auto& job : jobs) {
        RunOptions o = opts;
        o.stem = job.name;
        int rc = kExitOk;
        if (job.command == "steady") rc = cmd_steady(job.config, o, log);
        if (job.command == "evolve") rc = cmd_evolve(job.config, o, log);
        if (job.command == "sweep") rc = cmd_sweep(job.config, o, log);
        log << job.name << ": exit " << rc << "\n";
        code = std::max(code, rc);
    }
    return code;
}

}  // namespace nlab
