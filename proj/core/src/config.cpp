#include "gravattn/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "gravattn/error.hpp"

namespace gravattn {

using nlohmann::json;

std::string to_string(ModelKind model) { return model == ModelKind::Grav ? "GRAV" : "WTA"; }

ModelKind parse_model_kind(const std::string& text) {
    std::string t = text;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::toupper(c); });
    if (t == "GRAV") return ModelKind::Grav;
    if (t == "WTA") return ModelKind::Wta;
    throw ConfigError("unknown model '" + text + "' (expected GRAV or WTA)");
}

RunConfig RunConfig::resolve(double exposure, std::optional<double> dataset_ppd) const {
    if (!(exposure > 0.0)) throw ConfigError("exposure must be positive");
    RunConfig r = *this;
    if (!r.pixels_per_degree) r.pixels_per_degree = dataset_ppd.value_or(kDefaultPixelsPerDegree);
    const double ppd = *r.pixels_per_degree;
    if (!r.ior_sigma) r.ior_sigma = 14.0 * ppd / kDefaultPixelsPerDegree;
    if (!r.duration) r.duration = exposure;
    if (!r.wta_radius) r.wta_radius = 2.0 * ppd;
    if (!r.wta_num_fixations) {
        r.wta_num_fixations = static_cast<std::size_t>(std::ceil(3.0 * exposure - 1e-9));
    }
    if (!r.wta_fixation_duration) {
        r.wta_fixation_duration = exposure / static_cast<double>(std::max<std::size_t>(*r.wta_num_fixations, 1));
    }
    return r;
}

void RunConfig::validate() const {
    if (working_size.width < 16 || working_size.height < 16) {
        throw ConfigError("working_size must be at least 16x16");
    }
    if (pixels_per_degree && !(*pixels_per_degree > 0.0)) throw ConfigError("pixels_per_degree must be positive");
    gravity.validate(mode == FeatureMode::Basic ? 8 : 1);
    IorParams{ior_beta, ior_sigma.value_or(1.0), ior_enabled}.validate();
    if (ior_sigma && !(*ior_sigma > 0.0)) throw ConfigError("ior.sigma must be positive");
    SimConfig probe = SimConfig{};
    probe.lambda = lambda;
    probe.duration = duration.value_or(std::max(sample_dt, kDefaultExposure));
    probe.sample_dt = sample_dt;
    probe.time_scale = time_scale;
    probe.init_vel = init_vel;
    probe.rtol = rtol;
    probe.atol = atol;
    probe.validate();
    if (init_pos) {
        if (init_pos->x < 0.0 || init_pos->y < 0.0 || init_pos->x > static_cast<double>(working_size.width) - 1.0 ||
            init_pos->y > static_cast<double>(working_size.height) - 1.0) {
            throw ConfigError("sim.init_pos lies outside the working raster");
        }
    }
    if (!(fixation.vel_threshold > 0.0)) throw ConfigError("fixation.vel_threshold must be positive");
    if (!(fixation.min_duration >= 0.0)) throw ConfigError("fixation.min_duration must be non-negative");
    if (wta_radius && !(*wta_radius > 0.0)) throw ConfigError("wta.inhibition_radius must be positive");
    if (wta_num_fixations && *wta_num_fixations < 1) throw ConfigError("wta.num_fixations must be at least 1");
    if (wta_fixation_duration && !(*wta_fixation_duration > 0.0)) {
        throw ConfigError("wta.fixation_duration must be positive");
    }
    metrics.validate();
}

IorParams RunConfig::ior() const {
    if (!ior_sigma) throw ConfigError("RunConfig::ior on an unresolved config");
    return {ior_beta, *ior_sigma, ior_enabled};
}

SimConfig RunConfig::sim() const {
    if (!duration) throw ConfigError("RunConfig::sim on an unresolved config");
    SimConfig s;
    s.lambda = lambda;
    s.duration = *duration;
    s.sample_dt = sample_dt;
    s.time_scale = time_scale;
    s.init_pos = init_pos;
    s.init_vel = init_vel;
    s.rtol = rtol;
    s.atol = atol;
    s.rng_seed = rng_seed;
    return s;
}

WtaConfig RunConfig::wta() const {
    if (!wta_radius || !wta_num_fixations || !wta_fixation_duration) {
        throw ConfigError("RunConfig::wta on an unresolved config");
    }
    return {*wta_radius, *wta_num_fixations, *wta_fixation_duration};
}

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError("config: '" + where + "' must be an object");
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.contains(key)) throw ConfigError("config: unknown key '" + where + key + "'");
    }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config: field '") + key + "' has the wrong type");
    }
}

template <typename T>
void read_opt(const json& obj, const char* key, std::optional<T>& out) {
    if (!obj.contains(key)) return;
    if (obj.at(key).is_null()) {
        out.reset();
        return;
    }
    T v{};
    read(obj, key, v);
    out = v;
}

Vec2 read_vec2(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError(std::string("config: '") + what + "' must be [x, y]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

template <typename T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

}  // namespace

namespace {
RunConfig parse_run_config_impl(const std::string& text);
}

RunConfig parse_run_config(const std::string& text) {
    try {
        return parse_run_config_impl(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

namespace {

RunConfig parse_run_config_impl(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(doc,
               {"mode", "model", "working_size", "pixels_per_degree", "gravity", "ior", "sim", "fixation", "wta",
                "metrics", "output_dir", "threads"},
               "");
    RunConfig c;
    if (doc.contains("mode")) c.mode = parse_feature_mode(doc["mode"].get<std::string>());
    if (doc.contains("model")) c.model = parse_model_kind(doc["model"].get<std::string>());
    if (doc.contains("working_size")) {
        const auto& ws = doc["working_size"];
        if (!ws.is_array() || ws.size() != 2) throw ConfigError("config: 'working_size' must be [w, h]");
        c.working_size = {ws[0].get<std::size_t>(), ws[1].get<std::size_t>()};
    }
    read_opt(doc, "pixels_per_degree", c.pixels_per_degree);
    if (doc.contains("gravity")) {
        const auto& g = doc["gravity"];
        check_keys(g, {"alphas", "global_gain"}, "gravity.");
        read(g, "alphas", c.gravity.alphas);
        read(g, "global_gain", c.gravity.global_gain);
    }
    if (doc.contains("ior")) {
        const auto& i = doc["ior"];
        check_keys(i, {"beta", "sigma", "enabled"}, "ior.");
        read(i, "beta", c.ior_beta);
        read_opt(i, "sigma", c.ior_sigma);
        read(i, "enabled", c.ior_enabled);
    }
    if (doc.contains("sim")) {
        const auto& s = doc["sim"];
        check_keys(s, {"lambda", "duration", "sample_dt", "time_scale", "init_pos", "init_vel", "rtol", "atol", "rng_seed"}, "sim.");
        read(s, "lambda", c.lambda);
        read_opt(s, "duration", c.duration);
        read(s, "sample_dt", c.sample_dt);
        read(s, "time_scale", c.time_scale);
        if (s.contains("init_pos")) {
            if (s["init_pos"].is_null()) c.init_pos.reset();
            else c.init_pos = read_vec2(s["init_pos"], "sim.init_pos");
        }
        if (s.contains("init_vel")) c.init_vel = read_vec2(s["init_vel"], "sim.init_vel");
        read(s, "rtol", c.rtol);
        read(s, "atol", c.atol);
        read(s, "rng_seed", c.rng_seed);
    }
    if (doc.contains("fixation")) {
        const auto& f = doc["fixation"];
        check_keys(f, {"vel_threshold", "min_duration"}, "fixation.");
        read(f, "vel_threshold", c.fixation.vel_threshold);
        read(f, "min_duration", c.fixation.min_duration);
    }
    if (doc.contains("wta")) {
        const auto& w = doc["wta"];
        check_keys(w, {"inhibition_radius", "num_fixations", "fixation_duration"}, "wta.");
        read_opt(w, "inhibition_radius", c.wta_radius);
        read_opt(w, "num_fixations", c.wta_num_fixations);
        read_opt(w, "fixation_duration", c.wta_fixation_duration);
    }
    if (doc.contains("metrics")) {
        const auto& m = doc["metrics"];
        check_keys(m, {"sed_grid", "tde_window"}, "metrics.");
        read(m, "sed_grid", c.metrics.sed_grid);
        read(m, "tde_window", c.metrics.tde_window);
    }
    if (doc.contains("output_dir")) c.output_dir = doc["output_dir"].get<std::string>();
    read(doc, "threads", c.threads);
    return c;
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

std::string to_json(const RunConfig& c, int indent) {
    json j;
    j["mode"] = to_string(c.mode);
    j["model"] = to_string(c.model);
    j["working_size"] = {c.working_size.width, c.working_size.height};
    j["pixels_per_degree"] = opt(c.pixels_per_degree);
    j["gravity"] = {{"alphas", c.gravity.alphas}, {"global_gain", c.gravity.global_gain}};
    j["ior"] = {{"beta", c.ior_beta}, {"sigma", opt(c.ior_sigma)}, {"enabled", c.ior_enabled}};
    j["sim"] = {{"lambda", c.lambda},
                {"duration", opt(c.duration)},
                {"sample_dt", c.sample_dt},
                {"time_scale", c.time_scale},
                {"init_pos", c.init_pos ? json{c.init_pos->x, c.init_pos->y} : json(nullptr)},
                {"init_vel", {c.init_vel.x, c.init_vel.y}},
                {"rtol", c.rtol},
                {"atol", c.atol},
                {"rng_seed", c.rng_seed}};
    j["fixation"] = {{"vel_threshold", c.fixation.vel_threshold}, {"min_duration", c.fixation.min_duration}};
    j["wta"] = {{"inhibition_radius", opt(c.wta_radius)},
                {"num_fixations", opt(c.wta_num_fixations)},
                {"fixation_duration", opt(c.wta_fixation_duration)}};
    j["metrics"] = {{"sed_grid", c.metrics.sed_grid}, {"tde_window", c.metrics.tde_window}};
    j["output_dir"] = c.output_dir.string();
    j["threads"] = c.threads;
    return j.dump(indent);
}

}  // namespace gravattn
