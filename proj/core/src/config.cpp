#include "torwave/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "torwave/errors.hpp"

namespace torwave {

using nlohmann::json;

DampingProfile make_damping(const DampingConfig& cfg) {
    if (cfg.kind == "disk")
        return make_disk_damping(cfg.cx, cfg.cy, cfg.r0, cfg.beta);
    if (cfg.kind == "strip")
        return make_strip_damping(cfg.intervals, cfg.gamma);
    if (cfg.kind == "constant") {
        const double c = cfg.value;
        if (c < 0.0) throw InvalidInput("damping.value: must be >= 0");
        return DampingProfile::custom(
            [c](double, double) { return c; },
            HolderParams(1.0, 10, 0),
            [](double, double) { return Eigen::Vector2d::Zero().eval(); },
            [](double, double) { return Eigen::Matrix2d::Zero().eval(); });
    }
    if (cfg.kind == "zero")
        return DampingProfile::custom(
            [](double, double) { return 0.0; }, std::nullopt,
            [](double, double) { return Eigen::Vector2d::Zero().eval(); },
            [](double, double) { return Eigen::Matrix2d::Zero().eval(); });
    throw InvalidInput("damping.kind: unknown kind '" + cfg.kind + "'");
}

namespace {

template <typename T>
void read_field(const json& j, const char* name, T& out) {
    if (!j.contains(name)) return;
    try {
        out = j.at(name).get<T>();
    } catch (const json::exception&) {
        throw InvalidInput(std::string("config field '") + name +
                           "': wrong type");
    }
}

DampingConfig parse_damping(const json& j) {
    DampingConfig d;
    read_field(j, "kind", d.kind);
    read_field(j, "beta", d.beta);
    read_field(j, "gamma", d.gamma);
    read_field(j, "cx", d.cx);
    read_field(j, "cy", d.cy);
    read_field(j, "r0", d.r0);
    read_field(j, "value", d.value);
    if (j.contains("intervals")) {
        d.intervals.clear();
        for (const auto& iv : j.at("intervals")) {
            if (!iv.is_array() || iv.size() != 2)
                throw InvalidInput("damping.intervals: expected [lo, hi] pairs");
            d.intervals.emplace_back(iv[0].get<double>(), iv[1].get<double>());
        }
    }
    return d;
}

json damping_to_json(const DampingConfig& d) {
    json j;
    j["kind"] = d.kind;
    j["beta"] = d.beta;
    j["gamma"] = d.gamma;
    j["cx"] = d.cx;
    j["cy"] = d.cy;
    j["r0"] = d.r0;
    j["value"] = d.value;
    json ivs = json::array();
    for (const auto& [a, b] : d.intervals) ivs.push_back({a, b});
    j["intervals"] = ivs;
    return j;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("config: not valid JSON: ") + e.what());
    }
    ExperimentConfig cfg;
    if (!j.contains("experiment"))
        throw InvalidInput("config field 'experiment': missing");
    read_field(j, "experiment", cfg.experiment);
    static const std::vector<std::string> kinds = {
        "resolvent2d", "resolvent1d",      "averaging",
        "normalform",  "decay",            "generator-spectrum"};
    if (std::find(kinds.begin(), kinds.end(), cfg.experiment) == kinds.end())
        throw InvalidInput("config field 'experiment': unknown kind '" +
                           cfg.experiment + "'");
    if (j.contains("damping")) cfg.damping = parse_damping(j.at("damping"));
    read_field(j, "h_list", cfg.h_list);
    read_field(j, "k_factor", cfg.k_factor);
    read_field(j, "k_offset", cfg.k_offset);
    read_field(j, "method", cfg.method);
    read_field(j, "grid_n", cfg.grid_n);
    read_field(j, "trunc", cfg.trunc);
    read_field(j, "lambda_per_decade", cfg.lambda_per_decade);
    read_field(j, "c1", cfg.c1);
    if (j.contains("window")) {
        const auto& w = j.at("window");
        if (!w.is_array() || w.size() != 2)
            throw InvalidInput("config field 'window': expected [lo, hi]");
        cfg.window = {w[0].get<double>(), w[1].get<double>()};
    }
    read_field(j, "tolerance", cfg.tolerance);
    read_field(j, "T", cfg.T);
    read_field(j, "dt", cfg.dt);
    read_field(j, "out_dir", cfg.out_dir);
    read_field(j, "seed", cfg.seed);
    read_field(j, "threads", cfg.threads);

    for (double h : cfg.h_list)
        if (!(h > 0.0 && h < 1.0))
            throw InvalidInput("config field 'h_list': entries must lie in (0,1)");
    if (cfg.grid_n < 64) throw InvalidInput("config field 'grid_n': too small");
    if (cfg.threads < 1) throw InvalidInput("config field 'threads': must be >= 1");
    if (!(cfg.dt > 0.0)) throw InvalidInput("config field 'dt': must be > 0");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["experiment"] = cfg.experiment;
    j["damping"] = damping_to_json(cfg.damping);
    j["h_list"] = cfg.h_list;
    j["k_factor"] = cfg.k_factor;
    j["k_offset"] = cfg.k_offset;
    j["method"] = cfg.method;
    j["grid_n"] = cfg.grid_n;
    j["trunc"] = cfg.trunc;
    j["lambda_per_decade"] = cfg.lambda_per_decade;
    j["c1"] = cfg.c1;
    j["window"] = {cfg.window.first, cfg.window.second};
    j["tolerance"] = cfg.tolerance;
    j["T"] = cfg.T;
    j["dt"] = cfg.dt;
    j["out_dir"] = cfg.out_dir;
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    return j.dump(2);
}

}  // namespace torwave
