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

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli/commands.hpp"
#include "cli/run_config.hpp"
#include "test_util.hpp"

using namespace ucabank;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
    json summary() const { return json::parse(out); }
};

RunResult run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    RunResult r;
    r.code = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

void write_json(const fs::path& p, const json& j) {
    std::ofstream(p) << j.dump(2);
}

json acceptance_scene_json(bool noisy) {
    json j{{"source_noise", {{"duration_s", 2.0}, {"seed", 7}}},
           {"images",
            {{{"gain", 1.0}, {"delay_s", 0.0}, {"azimuth_deg", 30.0}},
             {{"gain", 0.5}, {"delay_s", 0.002}, {"azimuth_deg", 100.0}},
             {{"gain", 0.3}, {"delay_s", 0.005}, {"azimuth_deg", 250.0}}}}};
    if (noisy) j["noise"] = {{"kind", "white"}, {"snr_db", 5.0}, {"seed", 3}};
    return j;
}

}  // namespace

TEST_CASE("version and usage") {
    const auto v = run_cli({"--version"});
    CHECK(v.code == cli::kExitOk);
    CHECK(v.out.find("SFBF format version 1") != std::string::npos);
    CHECK(run_cli({}).code == cli::kExitValidation);
    CHECK(run_cli({"frobnicate"}).code == cli::kExitValidation);
    CHECK(run_cli({"design", "--num-mics", "five"}).code == cli::kExitValidation);
    CHECK(run_cli({"--help"}).code == cli::kExitOk);
}

TEST_CASE("design") {
    testutil::TempDir tmp;
    const auto a = run_cli({"design", "--out", (tmp / "a.sfbf").string()});
    REQUIRE(a.code == cli::kExitOk);
    CHECK(a.summary().at("dims") == json::array({9, 201, 5, 2}));
    const auto dump = read_sfbf(tmp / "a.sfbf");
    CHECK(dump.dims == std::vector<std::uint32_t>{9, 201, 5, 2});
    CHECK(dump.kind == SfbfKind::FilterWeights);

    REQUIRE(run_cli({"design", "--out", (tmp / "b.sfbf").string()}).code == cli::kExitOk);
    CHECK(testutil::read_bytes(tmp / "a.sfbf") == testutil::read_bytes(tmp / "b.sfbf"));

    const auto bad = run_cli({"design", "--num-mics", "4", "--out", (tmp / "c.sfbf").string()});
    CHECK(bad.code == cli::kExitValidation);
    CHECK(bad.err.find("M >= 2N+1") != std::string::npos);
    CHECK_FALSE(fs::exists(tmp / "c.sfbf"));

    const auto cfg = tmp / "cfg.json";
    write_json(cfg, {{"array", {{"num_mics", 7}, {"radius_m", 0.01}}}, {"bank", {{"num_filters", 4}}}});
    const auto c = run_cli({"design", "--config", cfg.string(), "--out", (tmp / "d.sfbf").string()});
    REQUIRE(c.code == cli::kExitOk);
    CHECK(read_sfbf(tmp / "d.sfbf").dims == std::vector<std::uint32_t>{4, 201, 7, 2});
}

TEST_CASE("beampattern") {
    testutil::TempDir tmp;
    const auto dir = (tmp / "bp").string();
    SUBCASE("two geometries with report") {
        const auto r = run_cli({"beampattern", "--geoms", "5:0.005,9:0.015", "--freq", "4000", "--out-dir", dir});
        REQUIRE(r.code == cli::kExitOk);
        const auto s = r.summary();
        CHECK(s.at("files").size() == 2);
        CHECK(fs::exists(tmp / "bp" / "beampattern_M5_r5mm_f4000.csv"));
        CHECK(fs::exists(tmp / "bp" / "beampattern_M9_r15mm_f4000.csv"));
        CHECK(s.at("report").at("max_abs_deviation").get<double>() <= 0.1);
    }
    SUBCASE("single geometry omits the report") {
        const auto r = run_cli({"beampattern", "--freq", "2000", "--format", "json", "--out-dir", dir});
        REQUIRE(r.code == cli::kExitOk);
        CHECK_FALSE(r.summary().contains("report"));
        CHECK(fs::exists(tmp / "bp" / "beampattern_M5_r5mm_f2000.json"));
    }
    SUBCASE("DC uses the averaging filter") {
        const auto r = run_cli({"beampattern", "--freq", "0", "--out-dir", dir});
        REQUIRE(r.code == cli::kExitOk);
        CHECK(r.summary().at("dc_fallback") == true);
    }
    SUBCASE("numeric failure without regularization") {
        const auto r = run_cli({"beampattern", "--freq", "40", "--no-regularize", "--out-dir", dir});
        CHECK(r.code == cli::kExitRuntime);
        CHECK_FALSE(r.err.empty());
    }
    SUBCASE("invalid options") {
        CHECK(run_cli({"beampattern", "--format", "xml", "--out-dir", dir}).code == cli::kExitValidation);
        CHECK(run_cli({"beampattern", "--freq", "-5", "--out-dir", dir}).code == cli::kExitValidation);
        CHECK(run_cli({"beampattern", "--geoms", "5-0.005", "--out-dir", dir}).code == cli::kExitValidation);
        CHECK_FALSE(fs::exists(tmp / "bp"));
    }
}

TEST_CASE("simulate") {
    testutil::TempDir tmp;
    SUBCASE("sidecar metadata and realized SNR") {
        auto scene = acceptance_scene_json(true);
        scene["noise"]["snr_db"] = 0.0;
        write_json(tmp / "scene.json", scene);
        const auto r = run_cli({"simulate", "--scene", (tmp / "scene.json").string(), "--out", (tmp / "s.wav").string()});
        REQUIRE(r.code == cli::kExitOk);
        const auto w = read_wav(tmp / "s.wav");
        CHECK(w.channels.size() == 5);
        std::ifstream side(tmp / "s.wav.json");
        const auto meta = json::parse(side);
        CHECK(meta.at("seed") == 3);
        CHECK(std::abs(meta.at("realized_snr_db").get<double>()) <= 0.01);
        CHECK(meta.at("scene").at("images").size() == 3);
    }
    SUBCASE("zero radius copies a WAV source to every channel") {
        std::vector<double> src = oracle::gaussian_noise(8000, 99);
        for (auto& v : src) v *= 0.1;
        write_wav(tmp / "src.wav", MultiSignal{src}, 16000.0);
        write_json(tmp / "scene.json",
                   {{"source_wav", "src.wav"}, {"images", {{{"gain", 1.0}, {"delay_s", 0.0}, {"azimuth_deg", 45.0}}}}});
        write_json(tmp / "cfg.json", {{"array", {{"num_mics", 5}, {"radius_m", 0.0}}}});
        const auto r = run_cli({"simulate", "--config", (tmp / "cfg.json").string(), "--scene",
                                (tmp / "scene.json").string(), "--out", (tmp / "r0.wav").string()});
        REQUIRE(r.code == cli::kExitOk);
        const auto w = read_wav(tmp / "r0.wav");
        const auto s = read_wav(tmp / "src.wav").channels[0];
        for (std::size_t m = 0; m < 5; ++m) {
            for (std::size_t n = 400; n + 400 < s.size(); ++n) CHECK(std::abs(w.channels[m][n] - s[n]) <= 1e-5);
        }
    }
    SUBCASE("invalid scenes write nothing") {
        auto scene = acceptance_scene_json(true);
        scene["images"][1]["delay_s"] = 2.0;
        write_json(tmp / "bad1.json", scene);
        scene = acceptance_scene_json(true);
        scene["noise"]["snr_db"] = 99.0;
        write_json(tmp / "bad2.json", scene);
        scene = acceptance_scene_json(false);
        scene["colour"] = "red";
        write_json(tmp / "bad3.json", scene);
        write_json(tmp / "bad4.json", {{"source_wav", "missing.wav"}, {"images", acceptance_scene_json(false)["images"]}});
        for (const char* name : {"bad1.json", "bad2.json", "bad3.json", "bad4.json"}) {
            const auto r = run_cli({"simulate", "--scene", (tmp / name).string(), "--out", (tmp / "out" / "x.wav").string()});
            CHECK(r.code == cli::kExitValidation);
        }
        CHECK_FALSE(fs::exists(tmp / "out"));
    }
}

TEST_CASE("extract") {
    testutil::TempDir tmp;
    write_json(tmp / "scene.json", acceptance_scene_json(true));
    REQUIRE(run_cli({"simulate", "--scene", (tmp / "scene.json").string(), "--out", (tmp / "s.wav").string()}).code == 0);

    SUBCASE("default dims and CSV export") {
        const auto r = run_cli({"extract", "--input", (tmp / "s.wav").string(), "--out",
                                (tmp / "f.sfbf").string(), "--csv-dir", (tmp / "csv").string()});
        REQUIRE(r.code == cli::kExitOk);
        const auto f = read_sfbf(tmp / "f.sfbf");
        CHECK(f.dims == std::vector<std::uint32_t>{18, 317, 201});
        CHECK(testutil::count_entries(tmp / "csv") == 18);
    }
    SUBCASE("channel mismatch") {
        write_wav(tmp / "four.wav", MultiSignal(4, std::vector<double>(2000)), 16000.0);
        const auto r = run_cli({"extract", "--input", (tmp / "four.wav").string(), "--out", (tmp / "g.sfbf").string()});
        CHECK(r.code == cli::kExitValidation);
        CHECK_FALSE(fs::exists(tmp / "g.sfbf"));
    }
    SUBCASE("silence") {
        write_wav(tmp / "quiet.wav", MultiSignal(5, std::vector<double>(2000)), 16000.0);
        REQUIRE(run_cli({"extract", "--input", (tmp / "quiet.wav").string(), "--out", (tmp / "q.sfbf").string()}).code == 0);
        for (float v : read_sfbf(tmp / "q.sfbf").payload) CHECK(v == 0.0f);
    }
    SUBCASE("sample-rate mismatch and missing input") {
        write_wav(tmp / "fast.wav", MultiSignal(5, std::vector<double>(2000)), 48000.0);
        CHECK(run_cli({"extract", "--input", (tmp / "fast.wav").string(), "--out", (tmp / "h.sfbf").string()}).code ==
              cli::kExitValidation);
        CHECK(run_cli({"extract", "--input", (tmp / "nope.wav").string()}).code == cli::kExitValidation);
        CHECK(run_cli({"extract"}).code == cli::kExitValidation);
    }
}

TEST_CASE("check-invariance") {
    testutil::TempDir tmp;
    write_json(tmp / "scene.json", acceptance_scene_json(true));
    const auto scene = (tmp / "scene.json").string();

    SUBCASE("identical geometries") {
        const auto r = run_cli({"check-invariance", "--scene", scene, "--geoms", "7:0.01,7:0.01"});
        REQUIRE(r.code == cli::kExitOk);
        CHECK(r.summary().at("max_feature_rel_l2").get<double>() == 0.0);
        CHECK(r.summary().at("pass") == true);
    }
    SUBCASE("train and test geometries") {
        const auto r = run_cli({"check-invariance", "--scene", scene, "--geoms",
                                "5:0.005,7:0.01,7:0.015,9:0.01,9:0.015"});
        REQUIRE(r.code == cli::kExitOk);
        CHECK(r.summary().at("pairs").size() == 10);
        CHECK(r.summary().at("noise_included") == false);
    }
    SUBCASE("mismatched pattern order fails with a reason") {
        write_json(tmp / "cfg.json",
                   {{"geometries",
                     {{{"num_mics", 5}, {"radius_m", 0.005}},
                      {{"num_mics", 9}, {"radius_m", 0.015}, {"pattern", {{"order", 1}, {"coeffs", {0.25, 0.5, 0.25}}}}}}}});
        const auto r = run_cli({"check-invariance", "--config", (tmp / "cfg.json").string(), "--scene", scene});
        CHECK(r.code == cli::kExitCheckFailed);
        CHECK(r.summary().at("pass") == false);
        CHECK(r.summary().at("message").get<std::string>().find("different ideal patterns") != std::string::npos);
    }
    SUBCASE("tight tolerance fails") {
        const auto r = run_cli({"check-invariance", "--scene", scene, "--geoms", "5:0.005,9:0.015", "--tau", "0.001"});
        CHECK(r.code == cli::kExitCheckFailed);
    }
    SUBCASE("validation") {
        CHECK(run_cli({"check-invariance", "--scene", scene, "--geoms", "5:0.005"}).code == cli::kExitValidation);
        CHECK(run_cli({"check-invariance", "--geoms", "5:0.005,9:0.015"}).code == cli::kExitValidation);
        CHECK(run_cli({"check-invariance", "--scene", scene, "--geoms", "3:0.005,9:0.015"}).code ==
              cli::kExitValidation);
        CHECK(run_cli({"check-invariance", "--scene", scene, "--geoms", "5:0.005,9:0.015", "--tau", "0"}).code ==
              cli::kExitValidation);
    }
}

TEST_CASE("configuration parsing") {
    testutil::TempDir tmp;
    SUBCASE("full document") {
        const json j{{"array", {{"num_mics", 9}, {"radius_m", 0.015}, {"sound_speed", 340.0}}},
                     {"stft", {{"sample_rate_hz", 16000}, {"win_len", 512}, {"hop", 128}}},
                     {"bank", {{"pattern", "supercardioid2"}, {"num_filters", 6}, {"compression", 0.5}, {"regularize", false}}},
                     {"tau_feat", 0.2},
                     {"outputs", {{"design", "w.sfbf"}}}};
        const auto cfg = cli::parse_run_config(j, tmp.path());
        CHECK(cfg.array.num_mics == 9);
        CHECK(cfg.array.sound_speed == 340.0);
        CHECK(cfg.stft.fft_size == 512);
        CHECK(cfg.bank.num_filters == 6);
        CHECK_FALSE(cfg.bank.regularize);
        CHECK(cfg.tau_feat == 0.2);
        CHECK(cfg.outputs.design == "w.sfbf");
        CHECK_NOTHROW(cfg.validate());
    }
    SUBCASE("custom pattern") {
        const auto p = cli::parse_pattern(json{{"order", 1}, {"coeffs", {0.25, 0.5, 0.25}}});
        CHECK(p.pattern.order == 1);
        CHECK_THROWS_AS(cli::parse_pattern(json{{"order", 1}, {"coeffs", {0.5}}}), cli::ValidationError);
        CHECK_THROWS_AS(cli::parse_pattern(json("cardioid")), cli::ValidationError);
    }
    SUBCASE("every bad field is a validation error") {
        const std::vector<json> bad{
            {{"array", {{"num_mics", 5}, {"radius_cm", 0.5}}}},
            {{"array", {{"radius_m", -0.1}}}},
            {{"array", {{"num_mics", "five"}}}},
            {{"array", {{"pattern", "supercardioid2"}}}},
            {{"stft", {{"hop", 500}}}},
            {{"stft", {{"win_len", 1}}}},
            {{"bank", {{"compression", 0.0}}}},
            {{"bank", {{"compression", 1.5}}}},
            {{"bank", {{"num_filters", 0}}}},
            {{"tau_feat", -1.0}},
            {{"geometries", {{{"num_mics", 3}, {"radius_m", 0.01}}}}},
            {{"mystery", 1}},
        };
        for (const auto& j : bad) {
            INFO(j.dump());
            CHECK_THROWS_AS(cli::parse_run_config(j, tmp.path()).validate(), cli::ValidationError);
        }
    }
    SUBCASE("invalid configs leave the output directory empty") {
        write_json(tmp / "bad.json", {{"bank", {{"compression", 2.0}}}});
        fs::create_directories(tmp / "out");
        for (const std::vector<std::string>& args :
             {std::vector<std::string>{"design", "--config", (tmp / "bad.json").string(), "--out",
                                       (tmp / "out" / "a.sfbf").string()},
              {"beampattern", "--config", (tmp / "bad.json").string(), "--out-dir", (tmp / "out" / "bp").string()},
              {"extract", "--config", (tmp / "bad.json").string(), "--input", (tmp / "none.wav").string(), "--out",
               (tmp / "out" / "f.sfbf").string()}}) {
            CHECK(run_cli(args).code == cli::kExitValidation);
        }
        CHECK(testutil::count_entries(tmp / "out") == 0);
        CHECK(run_cli({"design", "--config", (tmp / "absent.json").string()}).code == cli::kExitValidation);
        std::ofstream(tmp / "broken.json") << "{ not json";
        CHECK(run_cli({"design", "--config", (tmp / "broken.json").string()}).code == cli::kExitValidation);
    }
}

TEST_CASE("repeated runs are bit-identical") {
    testutil::TempDir tmp;
    write_json(tmp / "scene.json", acceptance_scene_json(true));
    for (const char* tag : {"1", "2"}) {
        const std::string wav = (tmp / (std::string("s") + tag + ".wav")).string();
        REQUIRE(run_cli({"simulate", "--scene", (tmp / "scene.json").string(), "--out", wav}).code == 0);
        REQUIRE(run_cli({"extract", "--input", wav, "--out", (tmp / (std::string("f") + tag + ".sfbf")).string()}).code == 0);
    }
    CHECK(testutil::read_bytes(tmp / "s1.wav") == testutil::read_bytes(tmp / "s2.wav"));
    CHECK(testutil::read_bytes(tmp / "f1.sfbf") == testutil::read_bytes(tmp / "f2.sfbf"));
    CHECK_FALSE(testutil::read_bytes(tmp / "s1.wav").empty());
}
