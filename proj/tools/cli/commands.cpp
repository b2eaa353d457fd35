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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "run_config.hpp"

namespace ucabank::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct CommonOptions {
    std::string config;
    std::optional<std::size_t> num_mics;
    std::optional<double> radius_m;
    std::optional<double> sound_speed;
    std::optional<std::string> pattern;
    std::optional<std::size_t> num_filters;
    std::optional<double> compression;
    std::optional<double> sample_rate_hz;
    bool no_regularize = false;
};

struct BeampatternOptions {
    double freq_hz = 4000.0;
    double steer_deg = 0.0;
    std::string geoms;
    std::string format = "csv";
    std::string out_dir;
    std::size_t grid = kDefaultGridSize;
    bool magnitude_only = false;
};

struct SimulateOptions {
    std::string scene;
    std::string out;
    std::string encoding = "float32";
};

struct ExtractOptions {
    std::string input;
    std::string out;
    std::string csv_dir;
};

struct CheckOptions {
    std::string scene;
    std::string geoms;
    std::optional<double> tau;
};

void add_common(CLI::App* sub, CommonOptions& o) {
    sub->add_option("--config", o.config, "Run configuration JSON");
    sub->add_option("--num-mics", o.num_mics, "Override array.num_mics");
    sub->add_option("--radius-m", o.radius_m, "Override array.radius_m");
    sub->add_option("--sound-speed", o.sound_speed, "Override array.sound_speed (m/s)");
    sub->add_option("--pattern", o.pattern, "Pattern preset name");
    sub->add_option("--num-filters", o.num_filters, "Override bank.num_filters");
    sub->add_option("--compression", o.compression, "Override bank.compression");
    sub->add_option("--sample-rate-hz", o.sample_rate_hz, "Override stft.sample_rate_hz");
    sub->add_flag("--no-regularize", o.no_regularize, "Disable Bessel denominator flooring");
}

RunConfig load_with_overrides(const CommonOptions& o) {
    RunConfig cfg = o.config.empty() ? RunConfig{} : load_run_config(o.config);
    if (o.num_mics) cfg.array.num_mics = *o.num_mics;
    if (o.radius_m) cfg.array.radius_m = *o.radius_m;
    if (o.sound_speed) {
        cfg.array.sound_speed = *o.sound_speed;
        for (auto& g : cfg.geometries) g.array.sound_speed = *o.sound_speed;
    }
    if (o.pattern) cfg.bank.pattern = parse_pattern(json(*o.pattern));
    if (o.num_filters) cfg.bank.num_filters = *o.num_filters;
    if (o.compression) cfg.bank.compression = *o.compression;
    if (o.sample_rate_hz) cfg.stft.sample_rate_hz = *o.sample_rate_hz;
    if (o.no_regularize) cfg.bank.regularize = false;
    return cfg;
}

json geometry_json(const ArrayParams& a) {
    return {{"num_mics", a.num_mics}, {"radius_m", a.radius_m}, {"sound_speed", a.sound_speed}};
}

json stft_json(const StftConfig& s) {
    return {{"sample_rate_hz", s.sample_rate_hz},
            {"win_len", s.win_len},
            {"hop", s.hop},
            {"fft_size", s.fft_size}};
}

void ensure_parent(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

// Runs `validate` then `work`, mapping failures to exit codes. Nothing is
// written to disk before `validate` returns.
int guarded(std::ostream& err, const std::function<void()>& validate,
            const std::function<int()>& work) {
    try {
        validate();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    try {
        return work();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

std::vector<GeometryEntry> resolve_geometries(const RunConfig& cfg, const std::string& flag) {
    if (!flag.empty()) return parse_geometry_list(flag, cfg.array.sound_speed);
    if (!cfg.geometries.empty()) return cfg.geometries;
    return {GeometryEntry{cfg.array, std::nullopt}};
}

SceneParams resolve_scene(const RunConfig& cfg, const std::string& flag) {
    if (!flag.empty()) return load_scene(flag);
    if (cfg.scene) return *cfg.scene;
    throw ValidationError("no scene given (use --scene or a 'scene' block in the config)");
}

int cmd_design(const CommonOptions& common, const std::string& out_flag, std::ostream& out,
               std::ostream& err) {
    RunConfig cfg;
    fs::path out_path;
    return guarded(
        err,
        [&] {
            cfg = load_with_overrides(common);
            cfg.validate();
            out_path = out_flag.empty() ? cfg.outputs.design : fs::path(out_flag);
        },
        [&] {
            const auto bank = build_filterbank(cfg.array.geometry(), cfg.bank.pattern.pattern,
                                               cfg.bank.num_filters, cfg.stft,
                                               cfg.bank.design_options());
            const auto dump = to_sfbf(bank);
            ensure_parent(out_path);
            write_sfbf(out_path, dump);
            out << json{{"command", "design"},
                        {"output", out_path.string()},
                        {"dims", dump.dims},
                        {"pattern", cfg.bank.pattern.label},
                        {"array", geometry_json(cfg.array)},
                        {"regularize", cfg.bank.regularize}}
                       .dump()
                << '\n';
            return kExitOk;
        });
}

int cmd_beampattern(const CommonOptions& common, const BeampatternOptions& o, std::ostream& out,
                    std::ostream& err) {
    RunConfig cfg;
    std::vector<GeometryEntry> geoms;
    ExportFormat format = ExportFormat::Csv;
    fs::path dir;
    return guarded(
        err,
        [&] {
            cfg = load_with_overrides(common);
            cfg.validate();
            geoms = resolve_geometries(cfg, o.geoms);
            for (const auto& g : geoms) validate_geometry(g.array, cfg.bank.pattern.pattern);
            if (!std::isfinite(o.freq_hz) || o.freq_hz < 0.0) {
                throw ValidationError("--freq must be a finite frequency >= 0 Hz");
            }
            if (o.grid < 1) throw ValidationError("--grid must be >= 1");
            if (o.format == "csv") {
                format = ExportFormat::Csv;
            } else if (o.format == "json") {
                format = ExportFormat::Json;
            } else {
                throw ValidationError("--format must be csv or json");
            }
            dir = o.out_dir.empty() ? cfg.outputs.beampattern_dir : fs::path(o.out_dir);
        },
        [&] {
            const double steer = deg_to_rad(o.steer_deg);
            const auto grid = azimuth_grid(o.grid);
            const auto options = cfg.bank.design_options();
            fs::create_directories(dir);
            json files = json::array();
            std::vector<UcaGeometry> built;
            bool regularized = false;
            for (const auto& g : geoms) {
                const auto geom = g.array.geometry();
                const auto h = design_filter(geom, cfg.bank.pattern.pattern, steer, o.freq_hz, options);
                regularized = regularized || h.regularized;
                const auto path = dir / beampattern_filename(geom, o.freq_hz, format);
                export_beampattern(realized_beampattern(h, geom, o.freq_hz, grid), path, format);
                files.push_back(path.string());
                built.push_back(geom);
            }
            json summary{{"command", "beampattern"},
                         {"frequency_hz", o.freq_hz},
                         {"steer_deg", o.steer_deg},
                         {"files", files},
                         {"dc_fallback", o.freq_hz == 0.0},
                         {"regularized", regularized}};
            if (o.freq_hz == 0.0) {
                summary["note"] = "f = 0 Hz: uniform averaging filter used for every geometry";
            }
            if (built.size() >= 2) {
                const auto report = invariance_report(
                    built, cfg.bank.pattern.pattern, steer, o.freq_hz, o.grid, options,
                    o.magnitude_only ? DeviationMode::Magnitude : DeviationMode::Complex);
                summary["report"] = json::parse(report_to_json(report));
            }
            out << summary.dump() << '\n';
            return kExitOk;
        });
}

int cmd_simulate(const CommonOptions& common, const SimulateOptions& o, std::ostream& out,
                 std::ostream& err) {
    RunConfig cfg;
    SceneParams scene_params;
    Scene scene;
    WavEncoding encoding = WavEncoding::Float32;
    fs::path out_path;
    return guarded(
        err,
        [&] {
            cfg = load_with_overrides(common);
            cfg.validate();
            scene_params = resolve_scene(cfg, o.scene);
            validate_scene(scene_params);
            scene = scene_params.load(cfg.stft);
            if (o.encoding == "float32") {
                encoding = WavEncoding::Float32;
            } else if (o.encoding == "pcm16") {
                encoding = WavEncoding::Pcm16;
            } else {
                throw ValidationError("--encoding must be float32 or pcm16");
            }
            out_path = o.out.empty() ? cfg.outputs.wav : fs::path(o.out);
        },
        [&] {
            const auto result = simulate(scene, cfg.array.geometry(), cfg.stft);
            ensure_parent(out_path);
            render_to_wav(result.observed(), out_path, encoding);

            json meta{{"command", "simulate"},
                      {"output", out_path.string()},
                      {"array", geometry_json(cfg.array)},
                      {"stft", stft_json(cfg.stft)},
                      {"scene", scene_params.to_json()},
                      {"seed", scene.seed},
                      {"encoding", o.encoding},
                      {"num_samples", scene.source.size()}};
            if (result.noisy) {
                meta["snr_db"] = scene.snr_db;
                meta["realized_snr_db"] = result.noisy->realized_snr_db;
            } else {
                meta["snr_db"] = nullptr;
                meta["realized_snr_db"] = nullptr;
            }
            const fs::path sidecar = out_path.string() + ".json";
            std::ofstream side(sidecar, std::ios::trunc);
            side << meta.dump(2) << '\n';
            if (!side) throw Error(ErrorCode::Io, "failed writing " + sidecar.string());
            out << meta.dump() << '\n';
            return kExitOk;
        });
}

int cmd_extract(const CommonOptions& common, const ExtractOptions& o, std::ostream& out,
                std::ostream& err) {
    RunConfig cfg;
    WavData wav;
    fs::path out_path;
    return guarded(
        err,
        [&] {
            cfg = load_with_overrides(common);
            cfg.validate();
            if (o.input.empty()) throw ValidationError("--input is required");
            if (!fs::exists(o.input)) throw ValidationError("input WAV not found: " + o.input);
            wav = read_wav(o.input);
            if (wav.channels.size() != cfg.array.num_mics) {
                throw ValidationError(o.input + " has " + std::to_string(wav.channels.size()) +
                                      " channels but the array has M=" +
                                      std::to_string(cfg.array.num_mics) + " microphones");
            }
            if (wav.sample_rate != cfg.stft.sample_rate_hz) {
                throw ValidationError(o.input + " is sampled at " + std::to_string(wav.sample_rate) +
                                      " Hz, configuration expects " +
                                      std::to_string(cfg.stft.sample_rate_hz) + " Hz");
            }
            if (wav.channels.front().size() < cfg.stft.win_len) {
                throw ValidationError(o.input + " is shorter than one STFT window");
            }
            out_path = o.out.empty() ? cfg.outputs.features : fs::path(o.out);
        },
        [&] {
            const auto bank = build_filterbank(cfg.array.geometry(), cfg.bank.pattern.pattern,
                                               cfg.bank.num_filters, cfg.stft,
                                               cfg.bank.design_options());
            const auto features = extract_features(wav.channels, bank, cfg.bank.compression);
            const auto dump = to_sfbf(features);
            ensure_parent(out_path);
            write_sfbf(out_path, dump);
            if (!o.csv_dir.empty()) export_features_csv(o.csv_dir, features);
            out << json{{"command", "extract"},
                        {"input", o.input},
                        {"output", out_path.string()},
                        {"dims", dump.dims},
                        {"layout", "channel 2i = Re(Z'_i), 2i+1 = Im(Z'_i)"},
                        {"compression", cfg.bank.compression}}
                       .dump()
                << '\n';
            return kExitOk;
        });
}

int cmd_check_invariance(const CommonOptions& common, const CheckOptions& o, std::ostream& out,
                         std::ostream& err) {
    RunConfig cfg;
    Scene scene;
    std::vector<GeometryEntry> geoms;
    double tau = 0.0;
    return guarded(
        err,
        [&] {
            cfg = load_with_overrides(common);
            cfg.validate();
            const auto scene_params = resolve_scene(cfg, o.scene);
            validate_scene(scene_params);
            scene = scene_params.load(cfg.stft);
            geoms = o.geoms.empty() ? cfg.geometries : parse_geometry_list(o.geoms, cfg.array.sound_speed);
            if (geoms.size() < 2) {
                throw ValidationError("check-invariance needs at least two geometries");
            }
            for (const auto& g : geoms) {
                validate_geometry(g.array, g.pattern ? g.pattern->pattern : cfg.bank.pattern.pattern);
            }
            tau = o.tau.value_or(cfg.tau_feat);
            if (!(tau > 0.0)) throw ValidationError("--tau must be > 0");
        },
        [&] {
            std::vector<UcaGeometry> built;
            std::vector<IdealPattern> patterns;
            std::vector<std::string> labels;
            for (const auto& g : geoms) {
                built.push_back(g.array.geometry());
                const auto& choice = g.pattern ? *g.pattern : cfg.bank.pattern;
                patterns.push_back(choice.pattern);
                labels.push_back(choice.label);
            }
            const auto errors = feature_invariance(scene, built, patterns, cfg.bank.num_filters,
                                                   cfg.stft, cfg.bank.compression,
                                                   cfg.bank.design_options());

            const bool same_pattern = std::all_of(patterns.begin(), patterns.end(),
                                                  [&](const auto& p) { return p == patterns.front(); });
            double worst = 0.0;
            json pairs = json::array();
            for (const auto& e : errors) {
                worst = std::max(worst, e.rel_l2);
                pairs.push_back({{"first", {{"num_mics", e.first.num_mics}, {"radius_m", e.first.radius_m}}},
                                 {"second", {{"num_mics", e.second.num_mics}, {"radius_m", e.second.radius_m}}},
                                 {"feature_rel_l2", e.rel_l2},
                                 {"pass", e.rel_l2 <= tau}});
            }
            const bool within = worst <= tau;
            const bool pass = within && same_pattern;

            std::string message;
            if (!same_pattern) {
                message = "geometries were processed with different ideal patterns (";
                for (std::size_t i = 0; i < labels.size(); ++i) {
                    message += (i ? ", " : "") + labels[i] + " order " + std::to_string(patterns[i].order);
                }
                message += "); their features are not comparable";
            }
            if (!within) {
                if (!message.empty()) message += "; ";
                message += "max feature relative L2 " + std::to_string(worst) + " exceeds tau_feat " +
                           std::to_string(tau);
            }
            if (pass) message = "all geometry pairs within tau_feat";

            out << json{{"command", "check-invariance"},
                        {"pass", pass},
                        {"tau_feat", tau},
                        {"max_feature_rel_l2", worst},
                        {"noise_included", false},
                        {"pairs", pairs},
                        {"message", message}}
                       .dump()
                << '\n';
            if (!pass) err << "check-invariance: " << message << '\n';
            return pass ? kExitOk : kExitCheckFailed;
        });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Geometry-invariant spatial filter banks for uniform circular arrays", "ucabank"};
    bool show_version = false;
    app.add_flag("--version", show_version, "Print version and SFBF format version");

    CommonOptions common;
    std::string design_out;
    BeampatternOptions bp;
    SimulateOptions sim;
    ExtractOptions ex;
    CheckOptions chk;

    auto* design = app.add_subcommand("design", "Design the filter bank and dump its weights");
    add_common(design, common);
    design->add_option("--out", design_out, "Output SFBF file");

    auto* beampattern = app.add_subcommand("beampattern", "Export realized beampatterns");
    add_common(beampattern, common);
    beampattern->add_option("--freq", bp.freq_hz, "Frequency in Hz");
    beampattern->add_option("--steer", bp.steer_deg, "Steering azimuth in degrees");
    beampattern->add_option("--geoms", bp.geoms, "Geometries as M:radius_m,...");
    beampattern->add_option("--format", bp.format, "csv or json");
    beampattern->add_option("--out-dir", bp.out_dir, "Directory for exports");
    beampattern->add_option("--grid", bp.grid, "Number of azimuth samples");
    beampattern->add_flag("--magnitude-only", bp.magnitude_only, "Compare magnitudes only");

    auto* simulate_cmd = app.add_subcommand("simulate", "Render a multichannel scene to WAV");
    add_common(simulate_cmd, common);
    simulate_cmd->add_option("--scene", sim.scene, "Scene JSON");
    simulate_cmd->add_option("--out", sim.out, "Output WAV");
    simulate_cmd->add_option("--encoding", sim.encoding, "float32 or pcm16");

    auto* extract = app.add_subcommand("extract", "Extract compressed filter-bank features");
    add_common(extract, common);
    extract->add_option("--input", ex.input, "Multichannel WAV");
    extract->add_option("--out", ex.out, "Output SFBF file");
    extract->add_option("--csv-dir", ex.csv_dir, "Also write one CSV per feature channel");

    auto* check = app.add_subcommand("check-invariance", "Compare features across geometries");
    add_common(check, common);
    check->add_option("--scene", chk.scene, "Scene JSON");
    check->add_option("--geoms", chk.geoms, "Geometries as M:radius_m,...");
    check->add_option("--tau", chk.tau, "Relative L2 tolerance");

    app.require_subcommand(0, 1);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    if (show_version) {
        out << "ucabank " << kVersion << " (SFBF format version " << int{kSfbfVersion} << ")\n";
        return kExitOk;
    }
    if (design->parsed()) return cmd_design(common, design_out, out, err);
    if (beampattern->parsed()) return cmd_beampattern(common, bp, out, err);
    if (simulate_cmd->parsed()) return cmd_simulate(common, sim, out, err);
    if (extract->parsed()) return cmd_extract(common, ex, out, err);
    if (check->parsed()) return cmd_check_invariance(common, chk, out, err);

    err << app.help();
    return kExitValidation;
}

}  // namespace ucabank::cli
