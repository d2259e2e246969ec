// SPDX-License-Identifier: Apache-2.0
//
// qlos - quasi line-of-sight THz channel and beam training simulator
// Copyright (C) 2026 The qlos authors
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
// ------------------------------------------------------------------------

#include <qlos/config.hpp>
#include <qlos/io.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

using namespace qlos;

namespace
{
    std::string error_of(const json &j)
    {
        try
        {
            parse_config(j);
        }
        catch (const ConfigError &e)
        {
            return e.what();
        }
        return "";
    }
} // namespace

TEST(Config, DefaultsFromEmptyObject)
{
    auto rc = parse_config(json::object());
    const auto &s = rc.experiment.scenario;
    EXPECT_EQ(s.tx.num_elements, 256);
    EXPECT_EQ(s.rx.num_elements, 256);
    EXPECT_DOUBLE_EQ(s.carrier.frequency, 140e9);
    EXPECT_DOUBLE_EQ(s.link_distance, 3.0);
    EXPECT_FALSE(s.blockage.has_value());
    EXPECT_EQ(rc.experiment.model, ChannelModel::CGWCM);
    EXPECT_EQ(rc.experiment.training.rx_probe_combiner, ProbeCombiner::FullArrayNorm);
    EXPECT_DOUBLE_EQ(rc.experiment.targets.xi_a, 0.4);
    EXPECT_DOUBLE_EQ(rc.experiment.targets.xi_r, 0.15);
}

TEST(Config, ParsesSections)
{
    auto j = json::parse(R"({
      "tx": {"elements": 32, "center_offset_m": 0.01},
      "link": {"distance_m": 1.0},
      "blockage": {"distance_m": 0.5, "width_m": 0.004, "extent_above_m": 0.002, "extent_below_m": 1.0},
      "virtual_arrays": {"count": 3},
      "channel": {"model": "wcm", "nlos": [{"gain_db": -20, "departure_deg": 30, "arrival_deg": -10, "excess_m": 0.1}]},
      "training": {"probe": "omni", "seed": 42},
      "sweep": {"variable": "power", "grid": [0, 3], "schemes": ["exhaustive", "ff"], "repetitions": 2}
    })");
    auto rc = parse_config(j);
    const auto &e = rc.experiment;
    EXPECT_EQ(e.scenario.tx.num_elements, 32);
    EXPECT_DOUBLE_EQ(e.scenario.tx.center_offset, 0.01);
    ASSERT_TRUE(e.scenario.blockage);
    EXPECT_DOUBLE_EQ(e.scenario.blockage->extent_above, 0.002);
    EXPECT_EQ(e.scenario.virtual_arrays.count, 3);
    EXPECT_DOUBLE_EQ(e.scenario.virtual_arrays.plane_spacing, 0.002);
    EXPECT_EQ(e.model, ChannelModel::WCM);
    ASSERT_EQ(e.rays.size(), 1u);
    EXPECT_NEAR(e.rays[0].departure, M_PI / 6, 1e-15);
    EXPECT_EQ(e.training.rx_probe_combiner, ProbeCombiner::Omnidirectional);
    EXPECT_EQ(e.training.rng_seed, 42u);
    EXPECT_EQ(rc.sweep.swept_variable, SweepVariable::TransmitPower);
    ASSERT_EQ(rc.sweep.schemes.size(), 2u);
    EXPECT_EQ(rc.sweep.schemes[1], EvalScheme::FarField);
    EXPECT_EQ(rc.sweep.base_seed, 42u);
}

TEST(Config, ErrorsNameTheField)
{
    EXPECT_NE(error_of(json::parse(R"({"tx": {"elemnts": 4}})")).find("tx.elemnts"), std::string::npos);
    EXPECT_NE(error_of(json::parse(R"({"colour": 1})")).find("config.colour"), std::string::npos);
    EXPECT_NE(error_of(json::parse(R"({"link": {"distance_m": -1}})")).find("link.distance_m"), std::string::npos);
    EXPECT_NE(error_of(json::parse(R"({"tx": {"elements": "many"}})")).find("tx.elements"), std::string::npos);
    EXPECT_NE(error_of(json::parse(R"({"channel": {"model": "ray"}})")).find("channel.model"), std::string::npos);
    EXPECT_NE(error_of(json::parse(R"({"channel": {"nlos": [{"gain_db": 3}]}})")).find("channel.nlos[0].gain_db"),
              std::string::npos);
    EXPECT_NE(error_of(json::parse(R"({"codebook": {"xi_a": 1.5}})")).find("codebook.xi_a"), std::string::npos);
    EXPECT_NE(error_of(json::parse(R"({"training": {"probe": "dipole"}})")).find("training.probe"), std::string::npos);
    EXPECT_NE(error_of(json::parse(R"({"sweep": {"grid": []}})")).find("grid"), std::string::npos);
    EXPECT_NE(error_of(json::parse(R"({"blockage": {"distance_m": 2.999, "width_m": 0.01}})")).find("blockage"),
              std::string::npos);
    EXPECT_THROW(load_config("/nonexistent/qlos.json"), ConfigError);
}

TEST(Config, ResolvedJsonRoundTrips)
{
    auto j = json::parse(R"({"tx": {"elements": 16}, "rx": {"elements": 16}, "link": {"distance_m": 1.0},
      "blockage": {"distance_m": 0.5, "width_m": 0.004, "extent_above_m": 0.0, "extent_below_m": 1.0},
      "channel": {"nlos": [{"gain_db": -25, "departure_deg": 10, "arrival_deg": 20, "excess_m": 0.3}]}})");
    auto a = parse_config(j);
    auto b = parse_config(to_json(a));
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
    auto none = parse_config(json::object());
    EXPECT_FALSE(parse_config(to_json(none)).experiment.scenario.blockage.has_value());
}

TEST(Io, NumberFormatRoundTrips)
{
    for (double v : {0.1, -1.0 / 3.0, 6.02214076e23, 0.0})
        EXPECT_EQ(std::stod(num(v)), v);
}

TEST(Io, SweepCsvHeaderAndRow)
{
    std::ostringstream os;
    write_sweep_csv(os, {{"height", 0.01, "hier", 5, 12.5, 96, "occlusion=0.5"}});
    EXPECT_EQ(os.str(), "sweep_variable,value,scheme,seed,spectral_efficiency_bps_hz,overhead_slots,notes\n"
                        "height,0.01,hier,5,12.5,96,occlusion=0.5\n");
}

TEST(Io, TraceCsv)
{
    SearchResult r;
    r.trace.push_back({1, 1, 0, {0.5, 2.0, 0.1}, 100.0});
    std::ostringstream os;
    write_trace_csv(os, r);
    EXPECT_EQ(os.str(), "slot,codeword_id,a,r,theta,measured_power_db\n1,0,0.5,2,0.1,20\n");
}

TEST(Io, FieldMapBinaryRoundTrip)
{
    FieldMap m;
    m.xs = {0.1, 0.2, 0.3};
    m.ys = {-1.0, 1.0};
    m.power_db.resize(2, 3);
    m.power_db << 0, -3, -60, -1, -2, -5;
    std::stringstream ss;
    write_fieldmap_bin(ss, m);
    auto r = read_fieldmap_bin(ss);
    EXPECT_EQ(r.xs, m.xs);
    EXPECT_EQ(r.ys, m.ys);
    EXPECT_EQ(r.power_db, m.power_db);
    EXPECT_EQ(r.floor_db, -60.0);
    std::stringstream bad("QLOSGRIX");
    EXPECT_THROW(read_fieldmap_bin(bad), std::runtime_error);
}

TEST(Io, ChannelBinaryRoundTrip)
{
    ChannelMatrix h{CMat::Random(3, 2), ChannelModel::CGWCM, true};
    std::stringstream ss;
    write_channel_bin(ss, h, {0.25, -1.5});
    auto f = read_channel_bin(ss);
    EXPECT_EQ(f.model, "cgwcm");
    EXPECT_TRUE(f.calibrated);
    EXPECT_EQ(f.calibration.amplitude, 0.25);
    EXPECT_EQ(f.calibration.phase, -1.5);
    EXPECT_EQ(f.entries, h.entries);
    std::stringstream cut;
    write_channel_bin(cut, h, {});
    std::stringstream truncated(cut.str().substr(0, cut.str().size() - 4));
    EXPECT_THROW(read_channel_bin(truncated), std::runtime_error);
}

TEST(Io, CodebookManifestListsEveryCodeword)
{
    ScenarioBuilder sb;
    sb.num_tx = sb.num_rx = 8;
    auto s = sb.build();
    auto plan = solve_sampling_plan({}, s);
    auto cb = build_farfield_codebook(plan, s);
    std::ostringstream os;
    write_codebook_manifest(os, cb);
    std::string text = os.str();
    EXPECT_EQ(text.rfind("scheme=farfield_steering\nsize=7\n", 0), 0u);
    EXPECT_NE(text.find("\nV=7\n"), std::string::npos);
    auto table = text.substr(text.find("id,a,r,theta\n"));
    EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 1 + 7);
}

TEST(Io, ManifestEmbedsResolvedConfig)
{
    RunManifest m;
    m.command = "codebook";
    m.config = parse_config(json::parse(R"({"tx": {"elements": 8}, "rx": {"elements": 8}})"));
    m.seed = 9;
    std::ostringstream os;
    write_manifest(os, m);
    std::string t = os.str();
    EXPECT_NE(t.find("version=" + std::string(tool_version)), std::string::npos);
    EXPECT_NE(t.find("seed=9"), std::string::npos);
    auto cfg = json::parse(t.substr(t.find("[config]\n") + 9));
    EXPECT_EQ(cfg["tx"]["elements"], 8);
}
