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

#ifndef QLOS_IO_HPP
#define QLOS_IO_HPP

#include "config.hpp"

#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace qlos
{
    inline constexpr const char *tool_version = "0.1.0";

    // Shortest round-trip representation, locale independent
    inline std::string num(double v)
    {
        char buf[64];
        auto r = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, r.ptr);
    }

    inline std::ofstream open_out(const std::filesystem::path &p, bool binary = false)
    {
        if (p.has_parent_path())
            std::filesystem::create_directories(p.parent_path());
        std::ofstream f(p, binary ? std::ios::binary : std::ios::out);
        if (!f)
            throw std::runtime_error("cannot write '" + p.string() + "'");
        return f;
    }

    inline void write_sweep_csv(std::ostream &os, const std::vector<SweepRow> &rows)
    {
        os << "sweep_variable,value,scheme,seed,spectral_efficiency_bps_hz,overhead_slots,notes\n";
        for (const auto &r : rows)
            os << r.sweep_variable << ',' << num(r.value) << ',' << r.scheme << ',' << r.seed << ','
               << num(r.spectral_efficiency) << ',' << r.overhead << ',' << r.notes << '\n';
    }

    inline void write_trace_csv(std::ostream &os, const SearchResult &r)
    {
        os << "slot,codeword_id,a,r,theta,measured_power_db\n";
        for (const auto &t : r.trace)
            os << t.slot << ',' << t.codeword_id << ',' << num(t.params.a) << ',' << num(t.params.r) << ','
               << num(t.params.theta) << ',' << num(10.0 * std::log10(std::max(t.power, 1e-300))) << '\n';
    }

    inline void write_fieldmap_csv(std::ostream &os, const FieldMap &m)
    {
        os << "x,y,power_db\n";
        for (std::size_t ix = 0; ix < m.xs.size(); ++ix)
            for (std::size_t iy = 0; iy < m.ys.size(); ++iy)
                os << num(m.xs[ix]) << ',' << num(m.ys[iy]) << ',' << num(m.power_db(iy, ix)) << '\n';
    }

    namespace detail
    {
        template <typename T>
        void put(std::ostream &os, T v)
        {
            os.write(reinterpret_cast<const char *>(&v), sizeof v);
        }
        template <typename T>
        T take(std::istream &is)
        {
            T v{};
            is.read(reinterpret_cast<char *>(&v), sizeof v);
            if (!is)
                throw std::runtime_error("truncated binary file");
            return v;
        }
    } // namespace detail

    // "QLOSGRID", u32 ny, u32 nx, f64 floor_db, xs[nx], ys[ny], power_db row-major [ny][nx]
    inline void write_fieldmap_bin(std::ostream &os, const FieldMap &m)
    {
        os.write("QLOSGRID", 8);
        detail::put<std::uint32_t>(os, (std::uint32_t)m.ys.size());
        detail::put<std::uint32_t>(os, (std::uint32_t)m.xs.size());
        detail::put<double>(os, m.floor_db);
        for (double x : m.xs)
            detail::put(os, x);
        for (double y : m.ys)
            detail::put(os, y);
        for (std::size_t iy = 0; iy < m.ys.size(); ++iy)
            for (std::size_t ix = 0; ix < m.xs.size(); ++ix)
                detail::put<double>(os, m.power_db(iy, ix));
    }

    inline FieldMap read_fieldmap_bin(std::istream &is)
    {
        char magic[8];
        is.read(magic, 8);
        if (!is || std::memcmp(magic, "QLOSGRID", 8) != 0)
            throw std::runtime_error("not a field map grid");
        FieldMap m;
        auto ny = detail::take<std::uint32_t>(is), nx = detail::take<std::uint32_t>(is);
        m.floor_db = detail::take<double>(is);
        m.xs.resize(nx);
        m.ys.resize(ny);
        for (auto &x : m.xs)
            x = detail::take<double>(is);
        for (auto &y : m.ys)
            y = detail::take<double>(is);
        m.power_db.resize(ny, nx);
        for (std::uint32_t iy = 0; iy < ny; ++iy)
            for (std::uint32_t ix = 0; ix < nx; ++ix)
                m.power_db(iy, ix) = detail::take<double>(is);
        return m;
    }

    // "QLOSCHAN", u32 model length, model, u32 rows, u32 cols, u8 calibrated, f64 amplitude, f64 phase,
    // then row-major (re, im) pairs
    inline void write_channel_bin(std::ostream &os, const ChannelMatrix &h, const CalibrationParams &cal)
    {
        os.write("QLOSCHAN", 8);
        std::string model = to_string(h.model);
        detail::put<std::uint32_t>(os, (std::uint32_t)model.size());
        os.write(model.data(), (std::streamsize)model.size());
        detail::put<std::uint32_t>(os, (std::uint32_t)h.rows());
        detail::put<std::uint32_t>(os, (std::uint32_t)h.cols());
        detail::put<std::uint8_t>(os, h.calibrated ? 1 : 0);
        detail::put<double>(os, cal.amplitude);
        detail::put<double>(os, cal.phase);
        for (Eigen::Index j = 0; j < h.rows(); ++j)
            for (Eigen::Index i = 0; i < h.cols(); ++i)
            {
                detail::put<double>(os, h.entries(j, i).real());
                detail::put<double>(os, h.entries(j, i).imag());
            }
    }

    struct ChannelFile
    {
        std::string model;
        bool calibrated = false;
        CalibrationParams calibration;
        CMat entries;
    };

    inline ChannelFile read_channel_bin(std::istream &is)
    {
        char magic[8];
        is.read(magic, 8);
        if (!is || std::memcmp(magic, "QLOSCHAN", 8) != 0)
            throw std::runtime_error("not a channel export");
        ChannelFile f;
        auto len = detail::take<std::uint32_t>(is);
        f.model.resize(len);
        is.read(f.model.data(), len);
        auto rows = detail::take<std::uint32_t>(is), cols = detail::take<std::uint32_t>(is);
        f.calibrated = detail::take<std::uint8_t>(is) != 0;
        f.calibration.amplitude = detail::take<double>(is);
        f.calibration.phase = detail::take<double>(is);
        f.entries.resize(rows, cols);
        for (std::uint32_t j = 0; j < rows; ++j)
            for (std::uint32_t i = 0; i < cols; ++i)
            {
                double re = detail::take<double>(is);
                double im = detail::take<double>(is);
                f.entries(j, i) = cd(re, im);
            }
        return f;
    }

    inline void write_plan(std::ostream &os, const SamplingPlan &p)
    {
        os << "xi_a=" << num(p.targets.xi_a) << "\nxi_r=" << num(p.targets.xi_r) << "\nu=" << p.targets.u
           << "\nalpha_bar=" << num(p.alpha_bar) << "\nbeta_bar=" << num(p.beta_bar) << "\ngamma_bar=" << num(p.gamma_bar)
           << "\ns_a=" << num(p.s_a) << "\ns_r=" << num(p.s_r) << "\ns_theta=" << num(p.s_theta)
           << "\ns_a_empirical=" << num(p.s_a_empirical) << "\ns_r_empirical=" << num(p.s_r_empirical)
           << "\na_range=" << num(p.a_min) << ':' << num(p.a_max) << "\nr_range=" << num(p.r_min) << ':' << num(p.r_max)
           << "\nJ=" << p.J() << "\nK=" << p.K() << "\nV=" << p.V() << '\n';
    }

    // Text manifest: scheme, plan, one parameter tuple per line
    inline void write_codebook_manifest(std::ostream &os, const Codebook &cb)
    {
        os << "scheme=" << to_string(cb.scheme()) << "\nsize=" << cb.size() << '\n';
        write_plan(os, cb.plan());
        os << "id,a,r,theta\n";
        for (std::size_t i = 0; i < cb.size(); ++i)
        {
            const auto &p = cb.params()[i];
            os << i << ',' << num(p.a) << ',' << num(p.r) << ',' << num(p.theta) << '\n';
        }
    }

    struct RunManifest
    {
        std::string config_path;
        RunConfig config;
        std::string output_dir;
        std::string command;
        std::uint64_t seed = 0;
    };

    inline void write_manifest(std::ostream &os, const RunManifest &m)
    {
        os << "tool=qlos\nversion=" << tool_version << "\ncommand=" << m.command << "\nconfig_path=" << m.config_path
           << "\noutput_dir=" << m.output_dir << "\nseed=" << m.seed << "\n[plan]\n";
        write_plan(os, solve_sampling_plan(m.config.experiment.targets, m.config.experiment.scenario,
                                           m.config.experiment.plan_options));
        os << "[config]\n" << to_json(m.config).dump(2) << '\n';
    }

} // namespace qlos

#endif
