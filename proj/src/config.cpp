#include "nlab/config.hpp"

#include "nlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

namespace nlab {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void require_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : j.items()) {
        if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

double number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
    if (!j.at(key).is_number()) throw ConfigError(where + "." + key + ": expected a number");
    return j.at(key).get<double>();
}

TimeUnit unit_from(const json& j, const std::string& where) {
    if (!j.contains("unit")) return TimeUnit::seconds;
    const std::string u = j.at("unit").get<std::string>();
    if (u == "s") return TimeUnit::seconds;
    if (u == "period") return TimeUnit::periods;
    throw ConfigError(where + ".unit: expected \"s\" or \"period\"");
}

const char* unit_name(TimeUnit u) { return u == TimeUnit::seconds ? "s" : "period"; }

}  // namespace

std::vector<double> SweepAxis::values() const {
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) {
        v[i] = i + 1 == count ? max : min + (max - min) * i / (count - 1);
    }
    return v;
}

bool is_axis_name(const std::string& name) {
    static const std::set<std::string> derived{"G1_over_G2", "nbar", "gamma", "kappa_eff"};
    const auto& fields = SystemParams::field_names();
    return derived.count(name) || std::find(fields.begin(), fields.end(), name) != fields.end();
}

void apply_axis(SystemParams& p, const std::string& name, double value) {
    if (name == "G1_over_G2") {
        p.G1 = value * p.G2;
    } else if (name == "nbar") {
        p.nbar1 = value;
        p.nbar2 = value / 2;
    } else if (name == "gamma") {
        p.gamma1 = p.gamma2 = value;
    } else if (name == "kappa_eff") {
        const double c = p.theta == 0.0 ? 1.0 : std::cos(p.theta);
        p.kappa1 = p.kappa2 = value / (2 * (1 - p.r_B * c));
    } else {
        p.set(name, value);
    }
}

double time_scale(const SystemParams& p, TimeUnit unit) {
    if (unit == TimeUnit::seconds) return 1.0;
    const double d = std::abs(effective_cavity_params(p).Delta_eff);
    if (d == 0.0) throw ConfigError("time unit 'period' needs a nonzero detuning");
    return 2 * std::numbers::pi / d;
}

SystemParams params_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("params: expected a JSON object");
    SystemParams p;
    const auto& names = SystemParams::field_names();
    for (const auto& [key, val] : j.items()) {
        if (std::find(names.begin(), names.end(), key) == names.end()) {
            throw ConfigError("params: unknown key '" + key + "'");
        }
        if (!val.is_number()) throw ConfigError("params." + key + ": expected a number");
        p.set(key, val.get<double>());
    }
    try {
        p.validate();
    } catch (const InvalidParameter& e) {
        throw ConfigError(std::string("params: ") + e.what());
    }
    return p;
}

ordered_json params_to_json(const SystemParams& p) {
    ordered_json j;
    for (const auto& name : SystemParams::field_names()) j[name] = p.get(name);
    return j;
}

namespace {

RunConfig parse_config(const json& j) {
    require_keys(j, {"params", "time", "sweep", "bell", "optimizer"}, "config");
    RunConfig c;
    if (!j.contains("params")) throw ConfigError("config: missing 'params'");
    c.params = params_from_json(j.at("params"));

    if (j.contains("time")) {
        const json& t = j.at("time");
        require_keys(t, {"end", "samples", "unit"}, "time");
        TimeGrid g;
        g.end = number(t, "end", "time");
        g.samples = static_cast<int>(number(t, "samples", "time"));
        g.unit = unit_from(t, "time");
        if (!(g.end > 0) || g.samples < 2) throw ConfigError("time: need end > 0 and samples >= 2");
        c.time = g;
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        require_keys(s, {"axes", "mode", "at", "unit"}, "sweep");
        SweepGrid g;
        if (!s.contains("axes") || !s.at("axes").is_array() || s.at("axes").empty() ||
            s.at("axes").size() > 2) {
            throw ConfigError("sweep.axes: expected one or two axes");
        }
        for (const auto& a : s.at("axes")) {
            require_keys(a, {"name", "min", "max", "count"}, "sweep.axes[]");
            SweepAxis ax;
            ax.name = a.at("name").get<std::string>();
            if (!is_axis_name(ax.name)) throw ConfigError("sweep: unknown axis '" + ax.name + "'");
            ax.min = number(a, "min", "sweep.axes[]");
            ax.max = number(a, "max", "sweep.axes[]");
            ax.count = static_cast<int>(number(a, "count", "sweep.axes[]"));
            if (ax.count < 2) throw ConfigError("sweep: axis '" + ax.name + "' needs count >= 2");
            g.axes.push_back(ax);
        }
        const std::string mode = s.value("mode", std::string("steady"));
        if (mode == "steady") {
            g.mode = SweepMode::steady;
        } else if (mode == "transient") {
            g.mode = SweepMode::transient;
            g.at = number(s, "at", "sweep");
            if (!(g.at > 0)) throw ConfigError("sweep.at must be > 0");
        } else {
            throw ConfigError("sweep.mode: expected \"steady\" or \"transient\"");
        }
        g.unit = unit_from(s, "sweep");
        c.sweep = g;
    }
    if (j.contains("bell")) {
        for (const auto& k : j.at("bell")) {
            try {
                c.bell.push_back(bell_kind_from_string(k.get<std::string>()));
            } catch (const InvalidParameter& e) {
                throw ConfigError(std::string("bell: ") + e.what());
            }
        }
    }
    if (j.contains("optimizer")) {
        const json& o = j.at("optimizer");
        require_keys(o, {"seed", "starts", "budget", "box"}, "optimizer");
        if (o.contains("seed")) c.optimizer.seed = o.at("seed").get<std::uint64_t>();
        if (o.contains("starts")) c.optimizer.n_starts = o.at("starts").get<int>();
        if (o.contains("budget")) c.optimizer.budget = o.at("budget").get<long>();
        if (o.contains("box")) c.optimizer.box = o.at("box").get<double>();
        if (c.optimizer.n_starts < 1 || c.optimizer.budget < 1 || !(c.optimizer.box > 0)) {
            throw ConfigError("optimizer: starts, budget and box must be positive");
        }
    }
    return c;
}

}  // namespace

RunConfig config_from_json(const json& j) {
    try {
        return parse_config(j);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

ordered_json config_to_json(const RunConfig& c) {
    ordered_json j;
    j["params"] = params_to_json(c.params);
    if (c.time) {
        j["time"] = {{"end", c.time->end}, {"samples", c.time->samples}, {"unit", unit_name(c.time->unit)}};
    }
    if (c.sweep) {
        ordered_json axes = ordered_json::array();
        for (const auto& a : c.sweep->axes) {
            axes.push_back({{"name", a.name}, {"min", a.min}, {"max", a.max}, {"count", a.count}});
        }
        ordered_json s;
        s["axes"] = axes;
        s["mode"] = c.sweep->mode == SweepMode::steady ? "steady" : "transient";
        if (c.sweep->mode == SweepMode::transient) s["at"] = c.sweep->at;
        s["unit"] = unit_name(c.sweep->unit);
        j["sweep"] = s;
    }
    if (!c.bell.empty()) {
        ordered_json b = ordered_json::array();
        for (auto k : c.bell) b.push_back(to_string(k));
        j["bell"] = b;
    }
    j["optimizer"] = {{"seed", c.optimizer.seed},
                      {"starts", c.optimizer.n_starts},
                      {"budget", c.optimizer.budget},
                      {"box", c.optimizer.box}};
    return j;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("invalid JSON in '" + path + "': " + e.what());
    }
}

}  // namespace nlab
