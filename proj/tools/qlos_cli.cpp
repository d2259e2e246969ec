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

#include <qlos/qlos.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace qlos;

namespace
{
    struct Common
    {
        std::string config;
        std::string out = "out";
        std::optional<std::uint64_t> seed;
    };

    RunConfig load(const Common &c)
    {
        RunConfig rc = c.config.empty() ? parse_config(json::object()) : load_config(c.config);
        if (c.seed)
        {
            rc.experiment.training.rng_seed = *c.seed;
            rc.sweep.base_seed = *c.seed;
        }
        return rc;
    }

    // Manifest goes out before any result file
    void begin(const Common &c, const RunConfig &rc, const std::string &command)
    {
        fs::create_directories(fs::path(c.out) / "results");
        fs::create_directories(fs::path(c.out) / "grids");
        RunManifest m{c.config, rc, c.out, command, rc.experiment.training.rng_seed};
        auto f = open_out(fs::path(c.out) / "manifest.txt");
        write_manifest(f, m);
    }

    int cmd_channel(const Common &c, const std::string &model_name, bool compare, bool los)
    {
        RunConfig rc = load(c);
        begin(c, rc, "channel");
        const auto &s = rc.experiment.scenario;
        ChannelModel model = parse_channel_model(model_name);
        CalibrationParams cal = calibration_for(s, model);
        ChannelMatrix h = calibrated_channel(s, model, !los);
        {
            auto f = open_out(fs::path(c.out) / "grids" / ("channel_" + model_name + ".bin"), true);
            write_channel_bin(f, h, cal);
        }
        auto f = open_out(fs::path(c.out) / "results" / ("channel_" + model_name + ".csv"));
        f << "model,rows,cols,frobenius_norm,blocked_fraction,calibration_amplitude,calibration_phase";
        if (compare)
            f << ",err_gcm_db,err_cgwcm_db";
        f << '\n'
          << model_name << ',' << h.rows() << ',' << h.cols() << ',' << num(h.norm()) << ','
          << num(los ? 0.0 : occlusion_fraction(s)) << ',' << num(cal.amplitude) << ',' << num(cal.phase);
        std::cout << "model=" << model_name << " dims=" << h.rows() << "x" << h.cols() << " norm=" << num(h.norm())
                  << "\n";
        if (compare)
        {
            ChannelMatrix w = calibrated_channel(s, ChannelModel::WCM, !los);
            double eg = 20.0 * std::log10(relative_error(calibrated_channel(s, ChannelModel::GCM, !los).entries, w.entries));
            double ec = 20.0 * std::log10(relative_error(calibrated_channel(s, ChannelModel::CGWCM, !los).entries, w.entries));
            f << ',' << num(eg) << ',' << num(ec);
            std::cout << "err_gcm_db=" << num(eg) << " err_cgwcm_db=" << num(ec) << "\n";
        }
        f << '\n';
        return 0;
    }

    int cmd_fieldmap(const Common &c, const BeamParams &p, const GridSpec &g)
    {
        RunConfig rc = load(c);
        begin(c, rc, "fieldmap");
        const auto &s = rc.experiment.scenario;
        BeamVector b = airy_beam_vector(p, s.tx, rc.experiment.scenario.carrier);
        FieldMap m = render_field_map(b, s, g);
        {
            auto f = open_out(fs::path(c.out) / "results" / "fieldmap.csv");
            write_fieldmap_csv(f, m);
        }
        auto f = open_out(fs::path(c.out) / "grids" / "fieldmap.bin", true);
        write_fieldmap_bin(f, m);
        std::cout << "fieldmap " << g.nx << "x" << g.ny << " written\n";
        return 0;
    }

    int cmd_codebook(const Common &c, const std::string &scheme_name)
    {
        RunConfig rc = load(c);
        begin(c, rc, "codebook");
        const auto &e = rc.experiment;
        SamplingPlan plan = solve_sampling_plan(e.targets, e.scenario, e.plan_options);
        Codebook cb;
        switch (parse_search_scheme(scheme_name))
        {
        case SearchScheme::Exhaustive:
            cb = build_exhaustive_codebook(plan, e.scenario);
            break;
        case SearchScheme::Hierarchical:
            cb = build_hierarchical_codebooks(plan, e.scenario).stage1;
            break;
        case SearchScheme::LowComplexity:
            cb = build_low_complexity_codebooks(e.scenario, plan).stage1;
            break;
        case SearchScheme::FarField:
            cb = build_farfield_codebook(plan, e.scenario);
            break;
        case SearchScheme::NearField:
            cb = build_nearfield_codebook(plan, e.scenario);
            break;
        }
        auto f = open_out(fs::path(c.out) / "results" / ("codebook_" + scheme_name + ".txt"));
        write_codebook_manifest(f, cb);
        std::cout << "codebook " << to_string(cb.scheme()) << " size=" << cb.size() << " J=" << plan.J()
                  << " K=" << plan.K() << " V=" << plan.V() << "\n";
        return 0;
    }

    int cmd_search(const Common &c, const std::string &scheme_name, const std::optional<std::string> &model)
    {
        RunConfig rc = load(c);
        if (model)
            rc.experiment.model = parse_channel_model(*model);
        begin(c, rc, "search");
        const auto &e = rc.experiment;
        SamplingPlan plan = solve_sampling_plan(e.targets, e.scenario, e.plan_options);
        LinkChannels l = build_link(e, e.scenario);
        EvalScheme es = parse_eval_scheme(scheme_name);
        SearchResult r;
        SchemeOutcome o = evaluate_scheme(es, e, e.scenario, plan, l, e.training.rng_seed, &r);
        if (is_search_scheme(es))
        {
            auto f = open_out(fs::path(c.out) / "results" / ("trace_" + scheme_name + ".csv"));
            write_trace_csv(f, r);
        }
        auto f = open_out(fs::path(c.out) / "results" / ("search_" + scheme_name + ".csv"));
        f << "scheme,spectral_efficiency_bps_hz,overhead_slots,a,r,theta,occlusion\n"
          << scheme_name << ',' << num(o.spectral_efficiency) << ',' << o.overhead << ',' << num(o.selected.a) << ','
          << num(o.selected.r) << ',' << num(o.selected.theta) << ',' << num(l.occlusion) << '\n';
        std::cout << "scheme=" << scheme_name << " se=" << num(o.spectral_efficiency) << " overhead=" << o.overhead << "\n";
        return 0;
    }

    int cmd_sweep(const Common &c, const std::optional<std::string> &var)
    {
        RunConfig rc = load(c);
        if (var)
            rc.sweep.swept_variable = parse_sweep_variable(*var);
        begin(c, rc, "sweep");
        auto rows = run_sweep(rc.sweep, rc.experiment);
        auto f = open_out(fs::path(c.out) / "results" / ("sweep_" + to_string(rc.sweep.swept_variable) + ".csv"));
        write_sweep_csv(f, rows);
        std::cout << "sweep " << to_string(rc.sweep.swept_variable) << " rows=" << rows.size() << "\n";
        return 0;
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"qlos: quasi line-of-sight THz channel models and Airy beam training"};
    app.require_subcommand(1);
    Common c;
    auto common = [&](CLI::App *sub)
    {
        sub->add_option("--config", c.config, "Configuration file (JSON)")->check(CLI::ExistingFile);
        sub->add_option("--out", c.out, "Output directory");
        sub->add_option("--seed", c.seed, "Seed override");
    };

    auto *ch = app.add_subcommand("channel", "Build and export a channel matrix");
    common(ch);
    std::string model = "cgwcm";
    bool compare = false, los = false;
    ch->add_option("--model", model, "gcm|wcm|cgwcm")->check(CLI::IsMember({"gcm", "wcm", "cgwcm"}));
    ch->add_flag("--compare", compare, "Report errors of GCM and CGWCM against WCM");
    ch->add_flag("--los", los, "Ignore the blockage");

    auto *fm = app.add_subcommand("fieldmap", "Render the field radiated by one beam");
    common(fm);
    BeamParams bp{0.0, 3.0, 0.0};
    GridSpec g;
    bool no_block = false;
    fm->add_option("--a", bp.a, "Curving coefficient [1/m^2]");
    fm->add_option("--r", bp.r, "Focus distance [m]");
    fm->add_option("--theta", bp.theta, "Focus angle [rad]");
    fm->add_option("--nx", g.nx);
    fm->add_option("--ny", g.ny);
    fm->add_option("--xmin", g.x_min);
    fm->add_option("--xmax", g.x_max);
    fm->add_option("--ymin", g.y_min);
    fm->add_option("--ymax", g.y_max);
    fm->add_flag("--no-blockage", no_block, "Propagate without the blockage");

    auto *cb = app.add_subcommand("codebook", "Dump a codebook manifest");
    common(cb);
    std::string cb_scheme = "exhaustive";
    cb->add_option("--scheme", cb_scheme, "exhaustive|hier|lowc|ff|nf")
        ->check(CLI::IsMember({"exhaustive", "hier", "lowc", "ff", "nf"}));

    auto *se = app.add_subcommand("search", "Run one beam search on the configured link");
    common(se);
    std::string se_scheme = "hier";
    std::optional<std::string> se_model;
    se->add_option("--scheme", se_scheme, "exhaustive|hier|lowc|ff|nf|perfect_csi|nonblocked_los|nlos_only");
    se->add_option("--model", se_model, "gcm|wcm|cgwcm")->check(CLI::IsMember({"gcm", "wcm", "cgwcm"}));

    auto *sw = app.add_subcommand("sweep", "Run a parameter sweep");
    common(sw);
    std::optional<std::string> sweep_var;
    sw->add_option("--sweep", sweep_var, "height|distance|overhead|power")
        ->check(CLI::IsMember({"height", "distance", "overhead", "power"}));

    CLI11_PARSE(app, argc, argv);
    g.x_max = std::max(g.x_max, g.x_min);
    try
    {
        if (*ch)
            return cmd_channel(c, model, compare, los);
        if (*fm)
        {
            g.apply_blockage = !no_block;
            return cmd_fieldmap(c, bp, g);
        }
        if (*cb)
            return cmd_codebook(c, cb_scheme);
        if (*se)
            return cmd_search(c, se_scheme, se_model);
        if (*sw)
            return cmd_sweep(c, sweep_var);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
