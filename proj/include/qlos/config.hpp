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

#ifndef QLOS_CONFIG_HPP
#define QLOS_CONFIG_HPP

#include "eval.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qlos
{
    using json = nlohmann::json;

    struct RunConfig
    {
        ExperimentConfig experiment;
        SweepSpec sweep;
        double aperture_factor = 2.0;
    };

    class ConfigError : public std::invalid_argument
    {
      public:
        using std::invalid_argument::invalid_argument;
    };

    namespace detail
    {
        inline void only_keys(const json &j, const std::string &path, std::initializer_list<const char *> keys)
        {
            if (!j.is_object())
                throw ConfigError(path + ": expected an object");
            std::set<std::string> ok(keys.begin(), keys.end());
            for (auto it = j.begin(); it != j.end(); ++it)
                if (!ok.count(it.key()))
                    throw ConfigError(path + "." + it.key() + ": unknown field");
        }

        template <typename T>
        T get(const json &j, const std::string &path, const char *key, T fallback)
        {
            if (!j.contains(key) || j.at(key).is_null())
                return fallback;
            try
            {
                return j.at(key).get<T>();
            }
            catch (const json::exception &)
            {
                throw ConfigError(path + "." + key + ": wrong type");
            }
        }

        inline double positive(double v, const std::string &field)
        {
            if (!(v > 0.0))
                throw ConfigError(field + ": must be > 0");
            return v;
        }
    } // namespace detail

    inline RunConfig parse_config(const json &root)
    {
        using detail::get;
        detail::only_keys(root, "config",
                          {"carrier", "tx", "rx", "link", "blockage", "virtual_arrays", "channel", "codebook", "training",
                           "eval", "sweep"});
        RunConfig rc;
        auto sect = [&](const char *k) { return root.contains(k) ? root.at(k) : json::object(); };

        ScenarioBuilder sb;
        json car = sect("carrier");
        detail::only_keys(car, "carrier", {"frequency_hz"});
        sb.frequency = detail::positive(get(car, "carrier", "frequency_hz", 140e9), "carrier.frequency_hz");

        json tx = sect("tx"), rx = sect("rx");
        detail::only_keys(tx, "tx", {"elements", "center_offset_m"});
        detail::only_keys(rx, "rx", {"elements", "center_offset_m"});
        sb.num_tx = get(tx, "tx", "elements", 256);
        sb.num_rx = get(rx, "rx", "elements", 256);
        if (sb.num_tx < 1)
            throw ConfigError("tx.elements: must be >= 1");
        if (sb.num_rx < 1)
            throw ConfigError("rx.elements: must be >= 1");
        sb.tx_offset = get(tx, "tx", "center_offset_m", 0.0);
        sb.rx_offset = get(rx, "rx", "center_offset_m", 0.0);

        json link = sect("link");
        detail::only_keys(link, "link", {"distance_m"});
        sb.link_distance = detail::positive(get(link, "link", "distance_m", 3.0), "link.distance_m");

        if (root.contains("blockage") && !root.at("blockage").is_null())
        {
            json b = root.at("blockage");
            detail::only_keys(b, "blockage", {"distance_m", "width_m", "extent_above_m", "extent_below_m"});
            BlockageGeometry g;
            g.distance_from_tx = detail::positive(get(b, "blockage", "distance_m", 1.5), "blockage.distance_m");
            g.width_along_axis = get(b, "blockage", "width_m", 0.01);
            if (g.width_along_axis < 0.0)
                throw ConfigError("blockage.width_m: must be >= 0");
            g.extent_above = get(b, "blockage", "extent_above_m", 0.0);
            g.extent_below = get(b, "blockage", "extent_below_m", 1.0);
            if (g.extent_above + g.extent_below < 0.0)
                throw ConfigError("blockage.extent_above_m: total extent must be >= 0");
            if (!(g.distance_from_tx + g.width_along_axis < sb.link_distance))
                throw ConfigError("blockage.distance_m: blockage must end before the receiver");
            sb.blockage = g;
        }

        json va = sect("virtual_arrays");
        detail::only_keys(va, "virtual_arrays", {"count", "aperture_factor", "elements"});
        sb.num_planes = get(va, "virtual_arrays", "count", 2);
        if (sb.num_planes < 1)
            throw ConfigError("virtual_arrays.count: must be >= 1");
        sb.aperture_factor = detail::positive(get(va, "virtual_arrays", "aperture_factor", 2.0), "virtual_arrays.aperture_factor");
        sb.virtual_elements = get(va, "virtual_arrays", "elements", 0);
        rc.aperture_factor = sb.aperture_factor;
        try
        {
            rc.experiment.scenario = sb.build();
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(std::string("scenario: ") + e.what());
        }

        auto &ex = rc.experiment;
        json ch = sect("channel");
        detail::only_keys(ch, "channel", {"model", "nlos"});
        try
        {
            ex.model = parse_channel_model(get<std::string>(ch, "channel", "model", "cgwcm"));
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(std::string("channel.model: ") + e.what());
        }
        if (ch.contains("nlos"))
        {
            if (!ch.at("nlos").is_array())
                throw ConfigError("channel.nlos: expected a list");
            int i = 0;
            for (const auto &r : ch.at("nlos"))
            {
                std::string p = "channel.nlos[" + std::to_string(i++) + "]";
                detail::only_keys(r, p, {"gain_db", "departure_deg", "arrival_deg", "excess_m"});
                NlosRay ray;
                ray.gain_db = get(r, p, "gain_db", -30.0);
                if (ray.gain_db > 0.0)
                    throw ConfigError(p + ".gain_db: must be <= 0");
                ray.departure = get(r, p, "departure_deg", 0.0) * pi / 180.0;
                ray.arrival = get(r, p, "arrival_deg", 0.0) * pi / 180.0;
                ray.excess_length = get(r, p, "excess_m", 0.5);
                ex.rays.push_back(ray);
            }
        }

        json cb = sect("codebook");
        detail::only_keys(cb, "codebook", {"xi_a", "xi_r", "u", "curving_max", "r_min_fraction", "empirical_intervals"});
        ex.targets.xi_a = get(cb, "codebook", "xi_a", 0.4);
        ex.targets.xi_r = get(cb, "codebook", "xi_r", 0.15);
        ex.targets.u = get(cb, "codebook", "u", 1);
        for (auto [v, f] : {std::pair{ex.targets.xi_a, "xi_a"}, std::pair{ex.targets.xi_r, "xi_r"}})
            if (!(v > 0.0 && v < 1.0))
                throw ConfigError(std::string("codebook.") + f + ": must lie in (0, 1)");
        if (ex.targets.u < 1)
            throw ConfigError("codebook.u: must be >= 1");
        ex.plan_options.curving_max = detail::positive(get(cb, "codebook", "curving_max", 4.0), "codebook.curving_max");
        ex.plan_options.r_min_fraction = get(cb, "codebook", "r_min_fraction", 1.0 / 6.0);
        if (!(ex.plan_options.r_min_fraction > 0.0 && ex.plan_options.r_min_fraction <= 1.0))
            throw ConfigError("codebook.r_min_fraction: must lie in (0, 1]");
        ex.plan_options.empirical_intervals = get(cb, "codebook", "empirical_intervals", false);

        json tr = sect("training");
        detail::only_keys(tr, "training", {"noise_power", "transmit_power", "target_los_se", "probe", "seed"});
        ex.training.noise_power = detail::positive(get(tr, "training", "noise_power", 1.0), "training.noise_power");
        ex.training.transmit_power = detail::positive(get(tr, "training", "transmit_power", 1.0), "training.transmit_power");
        ex.target_los_se = get(tr, "training", "target_los_se", 15.4);
        try
        {
            ex.training.rx_probe_combiner = parse_probe(get<std::string>(tr, "training", "probe", "full"));
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(std::string("training.probe: ") + e.what());
        }
        ex.training.rng_seed = get<std::uint64_t>(tr, "training", "seed", 1);

        json ev = sect("eval");
        detail::only_keys(ev, "eval", {"streams", "rx_rf_chains"});
        ex.streams = get(ev, "eval", "streams", 1);
        ex.rx_rf_chains = get(ev, "eval", "rx_rf_chains", 1);
        if (ex.streams < 1)
            throw ConfigError("eval.streams: must be >= 1");
        if (ex.rx_rf_chains < ex.streams)
            throw ConfigError("eval.rx_rf_chains: must be >= eval.streams");

        json sw = sect("sweep");
        detail::only_keys(sw, "sweep", {"variable", "grid", "schemes", "repetitions", "seed"});
        try
        {
            rc.sweep.swept_variable = parse_sweep_variable(get<std::string>(sw, "sweep", "variable", "height"));
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(std::string("sweep.variable: ") + e.what());
        }
        rc.sweep.grid = get<std::vector<double>>(sw, "sweep", "grid", {0.0, 0.01, 0.02, 0.03, 0.04, 0.05, 0.06});
        if (sw.contains("schemes"))
        {
            rc.sweep.schemes.clear();
            for (const auto &s : get<std::vector<std::string>>(sw, "sweep", "schemes", {}))
            {
                try
                {
                    rc.sweep.schemes.push_back(parse_eval_scheme(s));
                }
                catch (const std::invalid_argument &e)
                {
                    throw ConfigError(std::string("sweep.schemes: ") + e.what());
                }
            }
        }
        rc.sweep.repetitions = get(sw, "sweep", "repetitions", 1);
        rc.sweep.base_seed = get<std::uint64_t>(sw, "sweep", "seed", ex.training.rng_seed);
        try
        {
            rc.sweep.validate();
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(e.what());
        }
        return rc;
    }

    inline RunConfig load_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config file '" + path + "'");
        json j;
        try
        {
            j = json::parse(in, nullptr, true, true);
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError("config parse error: " + std::string(e.what()));
        }
        return parse_config(j);
    }

    // Fully resolved configuration, suitable for the run manifest
    inline json to_json(const RunConfig &rc)
    {
        const auto &e = rc.experiment;
        const auto &s = e.scenario;
        json j;
        j["carrier"] = {{"frequency_hz", s.carrier.frequency}};
        j["tx"] = {{"elements", s.tx.num_elements}, {"center_offset_m", s.tx.center_offset}};
        j["rx"] = {{"elements", s.rx.num_elements}, {"center_offset_m", s.rx.center_offset}};
        j["link"] = {{"distance_m", s.link_distance}};
        if (s.blockage)
            j["blockage"] = {{"distance_m", s.blockage->distance_from_tx},
                             {"width_m", s.blockage->width_along_axis},
                             {"extent_above_m", s.blockage->extent_above},
                             {"extent_below_m", s.blockage->extent_below}};
        else
            j["blockage"] = nullptr;
        j["virtual_arrays"] = {{"count", s.virtual_arrays.count},
                               {"aperture_factor", rc.aperture_factor},
                               {"elements", s.virtual_arrays.elements_per_array}};
        json rays = json::array();
        for (const auto &r : e.rays)
            rays.push_back({{"gain_db", r.gain_db},
                            {"departure_deg", r.departure * 180.0 / pi},
                            {"arrival_deg", r.arrival * 180.0 / pi},
                            {"excess_m", r.excess_length}});
        j["channel"] = {{"model", to_string(e.model)}, {"nlos", rays}};
        j["codebook"] = {{"xi_a", e.targets.xi_a},
                         {"xi_r", e.targets.xi_r},
                         {"u", e.targets.u},
                         {"curving_max", e.plan_options.curving_max},
                         {"r_min_fraction", e.plan_options.r_min_fraction},
                         {"empirical_intervals", e.plan_options.empirical_intervals}};
        j["training"] = {{"noise_power", e.training.noise_power},
                         {"transmit_power", e.training.transmit_power},
                         {"target_los_se", e.target_los_se},
                         {"probe", to_string(e.training.rx_probe_combiner)},
                         {"seed", e.training.rng_seed}};
        j["eval"] = {{"streams", e.streams}, {"rx_rf_chains", e.rx_rf_chains}};
        json schemes = json::array();
        for (auto sc : rc.sweep.schemes)
            schemes.push_back(to_string(sc));
        j["sweep"] = {{"variable", to_string(rc.sweep.swept_variable)},
                      {"grid", rc.sweep.grid},
                      {"schemes", schemes},
                      {"repetitions", rc.sweep.repetitions},
                      {"seed", rc.sweep.base_seed}};
        return j;
    }

} // namespace qlos

#endif
