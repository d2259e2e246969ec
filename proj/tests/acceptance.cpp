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

// Acceptance suite: one PASS/FAIL line per criterion, details indented below it.

#include <qlos/qlos.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace qlos;

namespace
{
    int failures = 0;

    struct Report
    {
        bool pass = true;
        std::vector<std::string> lines;
        void check(bool ok, const std::string &what)
        {
            pass = pass && ok;
            lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
        }
        void info(const std::string &s) { lines.push_back("     " + s); }
    };

    std::string f(double v, int prec = 6)
    {
        char b[64];
        std::snprintf(b, sizeof b, "%.*g", prec, v);
        return b;
    }

    void run(int id, const std::string &title, double limit_s, const std::function<void(Report &)> &body)
    {
        Report r;
        auto t0 = std::chrono::steady_clock::now();
        try
        {
            body(r);
        }
        catch (const std::exception &e)
        {
            r.check(false, std::string("exception: ") + e.what());
        }
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.check(dt < limit_s, "runtime " + f(dt, 4) + " s < " + f(limit_s) + " s");
        std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << "\n";
        for (const auto &l : r.lines)
            std::cout << "    " << l << "\n";
        std::cout.flush();
        failures += !r.pass;
    }

    ScenarioConfig link(int n, std::optional<BlockageGeometry> b, int planes = 2)
    {
        ScenarioBuilder sb;
        sb.num_tx = sb.num_rx = n;
        sb.link_distance = 3.0;
        sb.blockage = b;
        sb.num_planes = planes;
        return sb.build();
    }

    BlockageGeometry height_blockage(double h) { return {1.5, 0.01, h, 1.0}; }

    double db(double x) { return 10.0 * std::log10(x); }

    // ---------- 1 ----------
    void sampling_plan(Report &r)
    {
        ScenarioConfig s = link(256, std::nullopt);
        SamplingPlan p = solve_sampling_plan({0.4, 0.15, 1}, s, {});
        r.check(std::abs(p.alpha_bar - 1.69) <= 0.02, "alpha_bar = " + f(p.alpha_bar) + " (expected 1.69 +- 0.02)");
        r.check(std::abs(p.beta_bar - 4.59) <= 0.05, "beta_bar = " + f(p.beta_bar) + " (expected 4.59 +- 0.05)");
        r.check(std::abs(p.gamma_bar - 0.0245) <= 1e-4, "gamma_bar = " + f(p.gamma_bar) + " (expected 0.0245 +- 1e-4)");
        r.check(std::abs(p.s_a - 0.25) <= 0.01, "s_a = " + f(p.s_a) + " (expected 0.25 +- 0.01)");
        r.check(std::abs(p.s_r - 1.0 / 3.0) <= 0.01, "s_r = " + f(p.s_r) + " (expected 0.3333 +- 0.01)");
        r.check(p.s_theta == 2.0 / 256.0, "s_theta = " + f(p.s_theta, 17) + " (expected exactly 2/256)");
        r.info("closed-form check: |A(1.69)/1.69| = " + f(curving_correlation_closed(1.69)) +
               ", |B+jD|(4.59)/4.59 = " + f(distance_correlation_closed(4.59)));
        r.info("empirical intervals: s_a = " + f(p.s_a_empirical) + ", s_r = " + f(p.s_r_empirical));
    }

    // ---------- 2 ----------
    void correlations(Report &r)
    {
        ScenarioConfig s = link(256, std::nullopt);
        const double k = s.carrier.wavenumber(), d = s.tx.spacing;
        const int n = 256;
        auto y = element_positions(s.tx);
        std::mt19937_64 rng(20260416);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        double worst_int = 0.0, worst_ang = 0.0;
        int count[3] = {0, 0, 0};
        for (int i = 0; i < 50; ++i)
        {
            int kind = i % 3;
            ++count[kind];
            double a0 = -2.0 + 4.0 * U(rng);
            double th0 = -0.6 + 1.2 * U(rng);
            double r0 = 0.5 + 2.5 * U(rng);
            if (kind == 0)
            {
                double ab = 0.1 + 3.0 * U(rng);
                double da = std::pow(ab / (0.5 * n * d), 3) * pi / (2.0 * k);
                auto v1 = airy_beam_vector({a0, r0, th0}, y, s.carrier);
                auto v2 = airy_beam_vector({a0 + da, r0, th0}, y, s.carrier);
                double num = beam_correlation_numeric(v1, v2);
                double cf = curving_correlation_closed(alpha_bar_of(da, d, n, k));
                worst_int = std::max(worst_int, std::abs(num - cf));
            }
            else if (kind == 1)
            {
                double bb = 0.1 + 5.0 * U(rng);
                double dq = std::pow(bb / (0.5 * n * d), 2) * pi / k;
                double c2 = std::cos(th0) * std::cos(th0);
                double q0 = c2 / r0;
                double r1 = c2 / (q0 + dq);
                auto v1 = airy_beam_vector({a0, r0, th0}, y, s.carrier);
                auto v2 = airy_beam_vector({a0, r1, th0}, y, s.carrier);
                double num = beam_correlation_numeric(v1, v2);
                double cf = distance_correlation_closed(beta_bar_of(dq, d, n, k));
                worst_int = std::max(worst_int, std::abs(num - cf));
            }
            else
            {
                double s0 = std::sin(th0), ds = (-0.2 + 0.4 * U(rng)) * 8.0 / n;
                double inf = std::numeric_limits<double>::infinity();
                auto v1 = airy_beam_vector({a0, inf, th0}, y, s.carrier);
                auto v2 = airy_beam_vector({a0, inf, std::asin(s0 + ds)}, y, s.carrier);
                double num = beam_correlation_numeric(v1, v2);
                double g = gamma_bar_of(std::sin(std::asin(s0 + ds)) - s0, d, k);
                double cf = angle_correlation_closed(g, n);
                worst_ang = std::max(worst_ang, std::abs(num - cf));
            }
        }
        r.info("pairs: curving " + std::to_string(count[0]) + ", distance " + std::to_string(count[1]) + ", angle " +
               std::to_string(count[2]));
        r.check(worst_int <= 0.03, "max |closed - numeric| curving/distance = " + f(worst_int) + " <= 0.03");
        r.check(worst_ang <= 1e-10, "max |closed - numeric| angle = " + f(worst_ang) + " <= 1e-10");
    }

    // ---------- 3 ----------
    void accuracy(Report &r)
    {
        std::vector<double> hs;
        for (int i = 0; i < 10; ++i)
            hs.push_back(-0.03 + 0.06 * i / 9.0);
        double gap_sum = 0.0;
        bool all = true;
        for (double h : hs)
        {
            ScenarioConfig s = link(64, height_blockage(h));
            ChannelMatrix w = calibrated_channel(s, ChannelModel::WCM);
            double eg = 20.0 * std::log10(relative_error(gcm_channel(s).entries, w.entries));
            double ec = 20.0 * std::log10(relative_error(calibrated_channel(s, ChannelModel::CGWCM).entries, w.entries));
            all = all && ec < eg;
            gap_sum += eg - ec;
            r.info("h = " + f(h, 4) + " m, occlusion " + f(occlusion_fraction(s), 3) + ": err GCM " + f(eg, 4) +
                   " dB, err CGWCM " + f(ec, 4) + " dB");
        }
        r.check(all, "err(CGWCM) < err(GCM) at all " + std::to_string(hs.size()) + " heights");
        r.check(gap_sum / hs.size() >= 3.0, "mean gap " + f(gap_sum / hs.size(), 4) + " dB >= 3 dB");
    }

    // ---------- 4 ----------
    void shadow(Report &r)
    {
        ScenarioConfig s = link(256, height_blockage(0.036));
        auto yr = element_positions(s.rx);
        CVec f0 = airy_beam_vector({0.0, s.link_distance, 0.0}, s.tx, s.carrier).weights;
        CVec pg = gcm_channel(s).entries * f0;
        CVec pw = calibrated_channel(s, ChannelModel::WCM).entries * f0;
        CVec pc = calibrated_channel(s, ChannelModel::CGWCM).entries * f0;
        auto yt = element_positions(s.tx);
        std::vector<int> blocked;
        for (int j = 0; j < (int)yr.size(); ++j)
        {
            bool all = true;
            for (double t : yt)
                all = all && ray_blocked(t, yr[j], *s.blockage, s.link_distance);
            if (all)
                blocked.push_back(j);
        }
        double sg = 0, sw = 0, sc = 0;
        int close = 0;
        for (int j : blocked)
        {
            sg += std::norm(pg[j]);
            sw += std::norm(pw[j]);
            sc += std::norm(pc[j]);
            close += std::abs(db(std::norm(pc[j]) / std::norm(pw[j]))) <= 3.0;
        }
        r.info("blocked Rx indices: " + std::to_string(blocked.size()) + " spanning y = [" + f(yr[blocked.front()], 4) +
               ", " + f(yr[blocked.back()], 4) + "] m");
        r.check(!blocked.empty() && sg == 0.0, "GCM power over blocked indices = " + f(sg) + " (exactly 0)");
        r.check(sw > 0.0 && sc > 0.0, "WCM " + f(sw) + " and CGWCM " + f(sc) + " shadow power > 0");
        double frac = blocked.empty() ? 0.0 : double(close) / blocked.size();
        r.check(frac >= 0.8, "CGWCM within 3 dB of WCM on " + f(100 * frac, 4) + " % of blocked indices (>= 80 %)");
    }

    // ---------- 5 ----------
    void calibration(Report &r)
    {
        ScenarioConfig s = link(64, height_blockage(0.0));
        ChannelMatrix g = gcm_channel(s, false), c = cgwcm_channel(s, false);
        auto p = calibrate(c, g);
        ChannelMatrix cc = apply_calibration(c, p);
        double rel = std::abs(cc.norm() - g.norm()) / g.norm();
        r.check(rel <= 1e-12, "calibrated Frobenius norm mismatch " + f(rel) + " <= 1e-12");
        ChannelMatrix scaled{g.entries * std::polar(2.0, pi / 4.0), ChannelModel::CGWCM, false};
        auto q = calibrate(scaled, g);
        r.check(std::abs(q.amplitude - 0.5) <= 1e-9 && std::abs(q.phase + pi / 4.0) <= 1e-9,
                "2 exp(j pi/4) scaling recovered as (" + f(q.amplitude, 12) + ", " + f(q.phase, 12) + ")");
    }

    // ---------- 6 ----------
    void airy(Report &r)
    {
        ScenarioConfig s = link(256, std::nullopt);
        auto y = element_positions(s.tx);
        double worst = 0.0;
        std::mt19937_64 rng(6);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        for (int i = 0; i < 200; ++i)
        {
            auto b = airy_beam_vector({4.0 * U(rng), 1.0 + 2.0 * std::abs(U(rng)), 0.7 * U(rng)}, y, s.carrier);
            for (Eigen::Index j = 0; j < b.weights.size(); ++j)
                worst = std::max(worst, std::abs(std::abs(b.weights[j]) - 1.0 / 16.0));
        }
        r.check(worst <= 4 * std::numeric_limits<double>::epsilon(), "constant modulus deviation " + f(worst) + " (<= 4 ulp)");

        // symmetric obstacle so masking is exercised
        ScenarioConfig so = link(256, BlockageGeometry{1.5, 0.01, 0.02, 0.02});
        GridSpec g;
        g.nx = g.ny = 200;
        g.x_min = 0.05;
        g.x_max = 3.0;
        g.y_min = -0.3;
        g.y_max = 0.3;
        auto mp = render_field_map(airy_beam_vector({2.0, 3.0, 0.0}, y, s.carrier), so, g);
        auto mm = render_field_map(airy_beam_vector({-2.0, 3.0, 0.0}, y, s.carrier), so, g);
        double mirror = (mp.power_db - mm.power_db.colwise().reverse()).cwiseAbs().maxCoeff();
        r.check(mirror <= 1e-9, "mirror symmetry a -> -a on 200x200 map: max dB difference " + f(mirror));

        // obstruct the main lobe at mid range and compare Rx-plane peaks
        BeamParams bp{2.0, 3.0, 0.0};
        CVec w = airy_beam_vector(bp, y, s.carrier).weights;
        auto ys = GridSpec::axis(-0.4, 0.4, 801);
        FieldPropagator free_prop(s, w, false);
        CVec mid = free_prop.field(1.5, ys);
        Eigen::Index ipk;
        mid.cwiseAbs2().maxCoeff(&ipk);
        double yc = ys[ipk];
        ScenarioConfig sb = link(256, BlockageGeometry{1.5, 0.01, yc + 0.015, -(yc - 0.015)});
        FieldPropagator blk(sb, w, true);
        double p_free = free_prop.field(3.0, ys).cwiseAbs2().maxCoeff();
        double p_blk = blk.field(3.0, ys).cwiseAbs2().maxCoeff();
        r.info("main lobe at x = 1.5 m centred at y = " + f(yc, 4) + " m, obstacle y in [" + f(yc - 0.015, 4) + ", " +
               f(yc + 0.015, 4) + "]");
        r.check(db(p_blk / p_free) >= -6.0, "self-healing: obstructed Rx-plane peak " + f(db(p_blk / p_free), 4) +
                                                " dB relative to unobstructed (>= -6 dB)");
    }

    // ---------- 7 / 8 ----------
    struct SchemeStats
    {
        std::vector<std::array<double, 6>> se; // PCSI, EX, HI, LC, NF, FF
        std::vector<double> occlusion, ex_blocked_design;
        int te = 0, tf = 0, tl = 0;
        double seconds = 0.0;
    };

    ExperimentConfig search_experiment()
    {
        ExperimentConfig e;
        e.scenario = link(256, height_blockage(0.0));
        e.model = ChannelModel::CGWCM;
        e.rays = {{-30.0, 25.0 * pi / 180, -25.0 * pi / 180, 0.4},
                  {-33.0, -30.0 * pi / 180, 30.0 * pi / 180, 0.6},
                  {-35.0, 40.0 * pi / 180, 40.0 * pi / 180, 1.0}};
        e.training.noise_power = 1.0;
        e.training.rx_probe_combiner = ProbeCombiner::FullArrayNorm;
        e.target_los_se = 15.4;
        return e;
    }

    SchemeStats &search_stats()
    {
        static SchemeStats st;
        static bool done = false;
        if (done)
            return st;
        auto t0 = std::chrono::steady_clock::now();
        ExperimentConfig e = search_experiment();
        SamplingPlan plan = solve_sampling_plan(e.targets, e.scenario, e.plan_options);
        const EvalScheme order[6] = {EvalScheme::PerfectCSI, EvalScheme::Exhaustive, EvalScheme::Hierarchical,
                                     EvalScheme::LowComplexity, EvalScheme::NearField, EvalScheme::FarField};
        for (int sc = 0; sc < 20; ++sc)
        {
            double h = 0.005 + 0.06 * sc / 19.0;
            ScenarioConfig s = with_blockage(e.scenario, h);
            LinkChannels l = build_link(e, s);
            std::array<double, 6> row{};
            for (int i = 0; i < 6; ++i)
            {
                SearchResult tr;
                auto o = evaluate_scheme(order[i], e, s, plan, l, 1000 + sc, &tr);
                row[i] = o.spectral_efficiency;
                if (order[i] == EvalScheme::Exhaustive)
                {
                    st.te = o.overhead;
                    auto b = airy_beamformers(tr.selected, l.blocked, e.rx_rf_chains, e.streams);
                    st.ex_blocked_design.push_back(spectral_efficiency(b, l.blocked, l.rho, e.training.noise_power));
                }
                if (order[i] == EvalScheme::Hierarchical)
                    st.tf = o.overhead;
                if (order[i] == EvalScheme::LowComplexity)
                    st.tl = o.overhead;
            }
            st.se.push_back(row);
            st.occlusion.push_back(l.occlusion);
        }
        st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        done = true;
        return st;
    }

    void ordering(Report &r)
    {
        auto &st = search_stats();
        const char *names[6] = {"PerfectCSI", "exhaustive", "hierarchical", "low-complexity", "NF focusing", "FF steering"};
        double omin = 1.0, omax = 0.0;
        for (double o : st.occlusion)
            omin = std::min(omin, o), omax = std::max(omax, o);
        r.check(omin > 0.5, "occlusion range [" + f(omin, 3) + ", " + f(omax, 3) + "] (> 50 %)");
        std::array<double, 6> mean{};
        for (const auto &row : st.se)
            for (int i = 0; i < 6; ++i)
                mean[i] += row[i] / st.se.size();
        std::string ms = "mean SE:";
        for (int i = 0; i < 6; ++i)
            ms += std::string(" ") + names[i] + " " + f(mean[i], 4);
        r.info(ms);
        for (int i = 0; i < 5; ++i)
        {
            int hold = 0;
            for (const auto &row : st.se)
                hold += row[i] >= row[i + 1] - 1e-12;
            double frac = double(hold) / st.se.size();
            r.check(frac >= 0.9, std::string("SE(") + names[i] + ") >= SE(" + names[i + 1] + ") in " + f(100 * frac, 4) +
                                     " % of scenarios (>= 90 %)");
        }
        r.check(mean[2] - mean[4] > 0.0, "mean hierarchical - NF focusing gap " + f(mean[2] - mean[4], 4) + " > 0");
        r.check(mean[2] - mean[5] > 0.0, "mean hierarchical - FF steering gap " + f(mean[2] - mean[5], 4) + " > 0");
        r.check(st.tl < st.tf && st.tf < st.te, "overhead T_l = " + std::to_string(st.tl) + " < T_f = " +
                                                  std::to_string(st.tf) + " < T_e = " + std::to_string(st.te));
        r.check(st.tf <= 0.3 * st.te, "T_f <= 0.3 T_e");
        r.check(st.tl <= 0.2 * st.tf, "T_l <= 0.2 T_f (" + f(double(st.tl) / st.tf, 4) + ")");
    }

    void robustness(Report &r)
    {
        auto &st = search_stats();
        double worst = 0.0;
        int n = 0;
        for (std::size_t i = 0; i < st.se.size(); ++i)
            if (st.occlusion[i] < 0.75)
            {
                ++n;
                worst = std::max(worst, st.ex_blocked_design[i] - st.se[i][1]);
            }
        r.info("shares the exhaustive searches of criterion 7; " + std::to_string(n) + " scenarios below 75 % occlusion");
        r.check(n > 0, "at least one scenario below 75 % occlusion");
        r.check(worst <= 1.0, "max SE loss of the non-blocked design " + f(worst, 4) + " bits/s/Hz <= 1");
    }

    // ---------- 9 ----------
    std::string sweep_csv(const RunConfig &rc)
    {
        std::ostringstream os;
        write_sweep_csv(os, run_sweep(rc.sweep, rc.experiment));
        return os.str();
    }

    void determinism(Report &r)
    {
        json j = {{"tx", {{"elements", 32}}},
                  {"rx", {{"elements", 32}}},
                  {"link", {{"distance_m", 1.0}}},
                  {"blockage", {{"distance_m", 0.5}, {"width_m", 0.005}, {"extent_above_m", 0.0}, {"extent_below_m", 1.0}}},
                  {"channel", {{"nlos", {{{"gain_db", -30}, {"departure_deg", 25}, {"arrival_deg", -25}, {"excess_m", 0.2}}}}}},
                  {"sweep", {{"grid", {-0.005, 0.0, 0.005}}, {"repetitions", 2}}}};
        RunConfig rc = parse_config(j);
        int same = 0;
        for (auto var : {SweepVariable::BlockageHeight, SweepVariable::Overhead})
        {
            rc.sweep.swept_variable = var;
            if (var == SweepVariable::Overhead)
                rc.sweep.grid = {1, 5, 10, 20, 40, 80, 200};
            std::string a = sweep_csv(rc), b = sweep_csv(rc);
            setenv("QLOS_THREADS", "3", 1);
            std::string c = sweep_csv(rc);
            unsetenv("QLOS_THREADS");
            bool ok = a == b && a == c && !a.empty();
            same += ok;
            r.check(ok, to_string(var) + " sweep reruns byte-identical (" + std::to_string(a.size()) +
                            " bytes, also with 3 worker threads)");
        }
    }
} // namespace

int main()
{
    std::cout << "qlos acceptance suite\n";
    run(1, "sampling-plan numerics", 1.0, sampling_plan);
    run(2, "closed-form vs numeric beam correlation", 10.0, correlations);
    run(3, "channel-model accuracy ordering", 300.0, accuracy);
    run(4, "diffraction into the shadow", 120.0, shadow);
    run(5, "calibration correctness", 1.0, calibration);
    run(6, "Airy beam invariants", 180.0, airy);
    run(7, "search-scheme ordering and overhead", 900.0, ordering);
    run(8, "non-blocked precoder robustness", 300.0, robustness);
    run(9, "determinism", 300.0, determinism);
    std::cout << (failures ? "ACCEPTANCE: " + std::to_string(failures) + " criterion(s) failed\n" : "ACCEPTANCE: all criteria passed\n");
    return failures ? 1 : 0;
}
