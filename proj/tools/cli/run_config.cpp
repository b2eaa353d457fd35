// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <random>
#include <sstream>

namespace ucabank::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw ValidationError(where + ": expected a JSON object");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || key == a;
        if (!known) throw ValidationError(where + ": unknown key '" + key + "'");
    }
}

template <typename T>
void read_opt(const json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(where + "." + key + ": wrong type");
    }
}

std::size_t read_count(const json& j, const char* key, std::size_t fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ValidationError(where + "." + key + ": expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

json parse_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

ArrayParams parse_array(const json& j, const ArrayParams& defaults, const std::string& where,
                        bool allow_pattern) {
    if (allow_pattern) {
        check_keys(j, {"num_mics", "radius_m", "sound_speed", "pattern"}, where);
    } else {
        check_keys(j, {"num_mics", "radius_m", "sound_speed"}, where);
    }
    ArrayParams a = defaults;
    a.num_mics = read_count(j, "num_mics", a.num_mics, where);
    read_opt(j, "radius_m", a.radius_m, where);
    read_opt(j, "sound_speed", a.sound_speed, where);
    return a;
}

}  // namespace

UcaGeometry ArrayParams::geometry() const { return make_uca(num_mics, radius_m, sound_speed); }

Scene SceneParams::load(const StftConfig& cfg) const {
    Scene scene;
    scene.images = images;
    scene.noise_kind = noise_kind;
    scene.snr_db = snr_db;
    scene.seed = seed;
    if (source_wav) {
        WavData wav = read_wav(*source_wav);
        if (wav.channels.size() != 1) {
            throw ValidationError(source_wav->string() + ": source must be mono, found " +
                                  std::to_string(wav.channels.size()) + " channels");
        }
        if (wav.sample_rate != cfg.sample_rate_hz) {
            throw ValidationError(source_wav->string() + ": sample rate " +
                                  std::to_string(wav.sample_rate) + " Hz differs from " +
                                  std::to_string(cfg.sample_rate_hz) + " Hz");
        }
        scene.source = std::move(wav.channels.front());
    } else if (source_noise) {
        const auto n = static_cast<std::size_t>(std::llround(source_noise->duration_s * cfg.sample_rate_hz));
        std::mt19937_64 rng(source_noise->seed);
        std::normal_distribution<double> gauss(0.0, 0.1);
        scene.source.resize(n);
        for (auto& v : scene.source) v = gauss(rng);
    } else {
        throw ValidationError("scene needs source_wav or source_noise");
    }
    if (scene.source.size() < cfg.win_len) {
        throw ValidationError("scene source is shorter than one STFT window");
    }
    return scene;
}

json SceneParams::to_json() const {
    json j;
    if (source_wav) j["source_wav"] = source_wav->string();
    if (source_noise) {
        j["source_noise"] = {{"duration_s", source_noise->duration_s}, {"seed", source_noise->seed}};
    }
    auto& imgs = j["images"] = json::array();
    for (const auto& img : images) {
        imgs.push_back({{"gain", img.gain},
                        {"delay_s", img.delay_s},
                        {"azimuth_deg", rad_to_deg(img.azimuth)}});
    }
    j["noise"] = {{"kind", noise_kind == NoiseKind::White ? "white" : "none"},
                  {"snr_db", snr_db},
                  {"seed", seed}};
    return j;
}

PatternChoice parse_pattern(const json& j) {
    if (j.is_string()) {
        const auto name = j.get<std::string>();
        auto preset = pattern_preset(name);
        if (!preset) throw ValidationError("unknown pattern preset '" + name + "'");
        return {*preset, name};
    }
    check_keys(j, {"order", "coeffs"}, "pattern");
    if (!j.contains("order") || !j.contains("coeffs")) {
        throw ValidationError("pattern object needs 'order' and 'coeffs'");
    }
    int order = 0;
    std::vector<double> coeffs;
    read_opt(j, "order", order, "pattern");
    read_opt(j, "coeffs", coeffs, "pattern");
    try {
        return {make_pattern(order, std::move(coeffs)), "order" + std::to_string(order) + "-custom"};
    } catch (const Error& e) {
        throw ValidationError(std::string("pattern: ") + e.what());
    }
}

SceneParams parse_scene(const json& j, const fs::path& base_dir) {
    check_keys(j, {"source_wav", "source_noise", "images", "noise"}, "scene");
    SceneParams s;
    if (j.contains("source_wav")) {
        std::string p;
        read_opt(j, "source_wav", p, "scene");
        s.source_wav = resolve(base_dir, p);
    }
    if (j.contains("source_noise")) {
        const auto& n = j.at("source_noise");
        check_keys(n, {"duration_s", "seed"}, "scene.source_noise");
        SyntheticSource src;
        read_opt(n, "duration_s", src.duration_s, "scene.source_noise");
        read_opt(n, "seed", src.seed, "scene.source_noise");
        s.source_noise = src;
    }
    if (j.contains("images")) {
        const auto& imgs = j.at("images");
        if (!imgs.is_array()) throw ValidationError("scene.images: expected an array");
        for (std::size_t l = 0; l < imgs.size(); ++l) {
            const std::string where = "scene.images[" + std::to_string(l) + "]";
            check_keys(imgs[l], {"gain", "delay_s", "azimuth_deg"}, where);
            ImageSource img;
            double az_deg = 0.0;
            read_opt(imgs[l], "gain", img.gain, where);
            read_opt(imgs[l], "delay_s", img.delay_s, where);
            read_opt(imgs[l], "azimuth_deg", az_deg, where);
            img.azimuth = deg_to_rad(az_deg);
            s.images.push_back(img);
        }
    }
    if (j.contains("noise")) {
        const auto& n = j.at("noise");
        check_keys(n, {"kind", "snr_db", "seed"}, "scene.noise");
        std::string kind = "none";
        read_opt(n, "kind", kind, "scene.noise");
        if (kind == "white") {
            s.noise_kind = NoiseKind::White;
        } else if (kind == "none") {
            s.noise_kind = NoiseKind::None;
        } else {
            throw ValidationError("scene.noise.kind must be 'white' or 'none'");
        }
        read_opt(n, "snr_db", s.snr_db, "scene.noise");
        read_opt(n, "seed", s.seed, "scene.noise");
    }
    return s;
}

SceneParams load_scene(const fs::path& path) {
    return parse_scene(parse_file(path), path.parent_path());
}

RunConfig parse_run_config(const json& j, const fs::path& base_dir) {
    check_keys(j, {"array", "stft", "bank", "scene", "geometries", "tau_feat", "outputs"}, "config");
    RunConfig cfg;
    if (j.contains("array")) cfg.array = parse_array(j.at("array"), cfg.array, "array", false);
    if (j.contains("stft")) {
        const auto& s = j.at("stft");
        check_keys(s, {"sample_rate_hz", "win_len", "hop", "fft_size"}, "stft");
        read_opt(s, "sample_rate_hz", cfg.stft.sample_rate_hz, "stft");
        cfg.stft.win_len = read_count(s, "win_len", cfg.stft.win_len, "stft");
        cfg.stft.hop = read_count(s, "hop", cfg.stft.hop, "stft");
        // fft_size follows win_len unless given explicitly
        cfg.stft.fft_size = read_count(s, "fft_size", cfg.stft.win_len, "stft");
    }
    if (j.contains("bank")) {
        const auto& b = j.at("bank");
        check_keys(b, {"pattern", "num_filters", "compression", "regularize"}, "bank");
        if (b.contains("pattern")) cfg.bank.pattern = parse_pattern(b.at("pattern"));
        cfg.bank.num_filters = read_count(b, "num_filters", cfg.bank.num_filters, "bank");
        read_opt(b, "compression", cfg.bank.compression, "bank");
        read_opt(b, "regularize", cfg.bank.regularize, "bank");
    }
    if (j.contains("scene")) cfg.scene = parse_scene(j.at("scene"), base_dir);
    if (j.contains("geometries")) {
        const auto& g = j.at("geometries");
        if (!g.is_array()) throw ValidationError("geometries: expected an array");
        for (std::size_t i = 0; i < g.size(); ++i) {
            const std::string where = "geometries[" + std::to_string(i) + "]";
            GeometryEntry entry;
            entry.array = parse_array(g[i], cfg.array, where, true);
            if (g[i].contains("pattern")) entry.pattern = parse_pattern(g[i].at("pattern"));
            cfg.geometries.push_back(entry);
        }
    }
    read_opt(j, "tau_feat", cfg.tau_feat, "config");
    if (j.contains("outputs")) {
        const auto& o = j.at("outputs");
        check_keys(o, {"design", "features", "wav", "beampattern_dir"}, "outputs");
        std::string p;
        if (o.contains("design")) { read_opt(o, "design", p, "outputs"); cfg.outputs.design = p; }
        if (o.contains("features")) { read_opt(o, "features", p, "outputs"); cfg.outputs.features = p; }
        if (o.contains("wav")) { read_opt(o, "wav", p, "outputs"); cfg.outputs.wav = p; }
        if (o.contains("beampattern_dir")) {
            read_opt(o, "beampattern_dir", p, "outputs");
            cfg.outputs.beampattern_dir = p;
        }
    }
    return cfg;
}

RunConfig load_run_config(const fs::path& path) {
    return parse_run_config(parse_file(path), path.parent_path());
}

std::vector<GeometryEntry> parse_geometry_list(const std::string& spec, double sound_speed) {
    std::vector<GeometryEntry> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw ValidationError("geometry '" + item + "' must look like M:radius_m");
        }
        GeometryEntry e;
        try {
            std::size_t used = 0;
            const long long m = std::stoll(item.substr(0, colon), &used);
            if (used != colon || m < 0) throw std::invalid_argument("count");
            e.array.num_mics = static_cast<std::size_t>(m);
            const std::string r = item.substr(colon + 1);
            e.array.radius_m = std::stod(r, &used);
            if (used != r.size()) throw std::invalid_argument("radius");
        } catch (const std::exception&) {
            throw ValidationError("geometry '" + item + "' must look like M:radius_m");
        }
        e.array.sound_speed = sound_speed;
        out.push_back(e);
    }
    if (out.empty()) throw ValidationError("empty geometry list");
    return out;
}

void validate_geometry(const ArrayParams& array, const IdealPattern& pattern) {
    try {
        (void)array.geometry();
    } catch (const Error& e) {
        throw ValidationError(std::string("array: ") + e.what());
    }
    if (array.num_mics < static_cast<std::size_t>(2 * pattern.order + 1)) {
        throw ValidationError("array of M=" + std::to_string(array.num_mics) +
                              " microphones cannot realize a pattern of order N=" +
                              std::to_string(pattern.order) + ": need M >= 2N+1");
    }
}

void validate_scene(const SceneParams& scene) {
    if (scene.source_wav.has_value() == scene.source_noise.has_value()) {
        throw ValidationError("scene needs exactly one of source_wav or source_noise");
    }
    if (scene.source_wav && !fs::exists(*scene.source_wav)) {
        throw ValidationError("source_wav not found: " + scene.source_wav->string());
    }
    if (scene.source_noise && !(scene.source_noise->duration_s > 0.0)) {
        throw ValidationError("scene.source_noise.duration_s must be > 0");
    }
    Scene probe;
    probe.images = scene.images;
    probe.snr_db = scene.snr_db;
    try {
        probe.validate();
    } catch (const Error& e) {
        throw ValidationError(std::string("scene: ") + e.what());
    }
}

void RunConfig::validate() const {
    try {
        stft.validate();
    } catch (const Error& e) {
        throw ValidationError(std::string("stft: ") + e.what());
    }
    if (stft.hop > stft.win_len) {
        throw ValidationError("stft: hop must not exceed win_len");
    }
    validate_geometry(array, bank.pattern.pattern);
    if (bank.num_filters < 1) throw ValidationError("bank.num_filters must be >= 1");
    if (!(bank.compression > 0.0 && bank.compression <= 1.0)) {
        throw ValidationError("bank.compression must be in (0, 1]");
    }
    if (!(tau_feat > 0.0)) throw ValidationError("tau_feat must be > 0");
    for (const auto& g : geometries) {
        validate_geometry(g.array, g.pattern ? g.pattern->pattern : bank.pattern.pattern);
    }
    if (scene) validate_scene(*scene);
}

}  // namespace ucabank::cli
