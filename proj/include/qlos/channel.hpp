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

#ifndef QLOS_CHANNEL_HPP
#define QLOS_CHANNEL_HPP

#include "scenario.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlos
{
    enum class ChannelModel
    {
        GCM,
        WCM,
        CGWCM,
        Synthetic,
        Composite
    };

    inline std::string to_string(ChannelModel m)
    {
        switch (m)
        {
        case ChannelModel::GCM:
            return "gcm";
        case ChannelModel::WCM:
            return "wcm";
        case ChannelModel::CGWCM:
            return "cgwcm";
        case ChannelModel::Synthetic:
            return "synthetic";
        case ChannelModel::Composite:
            return "composite";
        }
        return "unknown";
    }

    inline ChannelModel parse_channel_model(const std::string &s)
    {
        if (s == "gcm")
            return ChannelModel::GCM;
        if (s == "wcm")
            return ChannelModel::WCM;
        if (s == "cgwcm")
            return ChannelModel::CGWCM;
        throw std::invalid_argument("unknown channel model '" + s + "' (expected gcm|wcm|cgwcm)");
    }

    // [N_r x N_t]
    struct ChannelMatrix
    {
        CMat entries;
        ChannelModel model = ChannelModel::GCM;
        bool calibrated = false;

        Eigen::Index rows() const { return entries.rows(); }
        Eigen::Index cols() const { return entries.cols(); }
        double norm() const { return entries.norm(); }
    };

    struct FieldVector
    {
        double plane_x = 0.0;
        std::vector<double> positions;
        CVec values;
    };

    struct CalibrationParams
    {
        double amplitude = 1.0;
        double phase = 0.0;
    };

    // Free-space point-to-point gain c/(4 pi f r) exp(-j k r), rows = destinations
    inline CMat gcm_kernel(const std::vector<double> &y_src, const std::vector<double> &y_dst, double dx,
                           const CarrierConfig &carrier)
    {
        const double k = carrier.wavenumber();
        const double g = speed_of_light / (4.0 * pi * carrier.frequency);
        CMat H(y_dst.size(), y_src.size());
        for (Eigen::Index i = 0; i < H.cols(); ++i)
            for (Eigen::Index j = 0; j < H.rows(); ++j)
            {
                double dy = y_dst[j] - y_src[i];
                double r = std::sqrt(dx * dx + dy * dy);
                H(j, i) = std::polar(g / r, -k * r);
            }
        return H;
    }

    // Rayleigh-Sommerfeld kernel (x / 2 pi r^2)(1/r + j k) exp(-j k r) times the sample weight
    inline CMat rs_kernel(const std::vector<double> &y_src, const std::vector<double> &y_dst, double dx,
                          const CarrierConfig &carrier, double weight)
    {
        if (!(dx > 0.0))
            throw std::invalid_argument("rs_kernel: target plane must lie beyond the source plane");
        const double k = carrier.wavenumber();
        CMat H(y_dst.size(), y_src.size());
        for (Eigen::Index i = 0; i < H.cols(); ++i)
            for (Eigen::Index j = 0; j < H.rows(); ++j)
            {
                double dy = y_dst[j] - y_src[i];
                double r2 = dx * dx + dy * dy, r = std::sqrt(r2);
                cd amp = cd(1.0 / r, k) * (weight * dx / (2.0 * pi * r2));
                H(j, i) = amp * std::polar(1.0, -k * r);
            }
        return H;
    }

    inline double uniform_spacing(const std::vector<double> &y)
    {
        if (y.size() < 2)
            return 1.0;
        return (y.back() - y.front()) / double(y.size() - 1);
    }

    inline FieldVector rs_propagate(const FieldVector &in, double target_x, const std::vector<double> &target_positions,
                                    const CarrierConfig &carrier, std::optional<double> sample_weight = std::nullopt)
    {
        if (!(target_x > in.plane_x))
            throw std::invalid_argument("rs_propagate: target plane must lie beyond the input plane");
        if ((Eigen::Index)in.positions.size() != in.values.size())
            throw std::invalid_argument("rs_propagate: positions and values differ in length");
        double w = sample_weight.value_or(uniform_spacing(in.positions));
        FieldVector out;
        out.plane_x = target_x;
        out.positions = target_positions;
        out.values = rs_kernel(in.positions, target_positions, target_x - in.plane_x, carrier, w) * in.values;
        return out;
    }

    // 0 inside the blockage's transverse extent, 1 elsewhere
    inline RVec blockage_mask(const ScenarioConfig &s, const std::vector<double> &y)
    {
        RVec m = RVec::Ones(y.size());
        if (s.blockage)
            for (std::size_t i = 0; i < y.size(); ++i)
                if (s.blockage->covers_y(y[i]))
                    m[i] = 0.0;
        return m;
    }

    inline ChannelMatrix gcm_channel(const ScenarioConfig &s, bool apply_blockage = true)
    {
        s.validate();
        auto yt = element_positions(s.tx), yr = element_positions(s.rx);
        ChannelMatrix H{gcm_kernel(yt, yr, s.link_distance, s.carrier), ChannelModel::GCM, false};
        if (apply_blockage && s.blockage)
            for (std::size_t i = 0; i < yt.size(); ++i)
                for (std::size_t j = 0; j < yr.size(); ++j)
                    if (ray_blocked(yt[i], yr[j], *s.blockage, s.link_distance))
                        H.entries(j, i) = 0.0;
        return H;
    }

    // Fraction of Tx/Rx pairs whose straight ray is blocked
    inline double occlusion_fraction(const ScenarioConfig &s)
    {
        if (!s.blockage)
            return 0.0;
        auto yt = element_positions(s.tx), yr = element_positions(s.rx);
        std::size_t n = 0;
        for (double a : yt)
            for (double b : yr)
                n += ray_blocked(a, b, *s.blockage, s.link_distance);
        return double(n) / double(yt.size() * yr.size());
    }

    namespace detail
    {
        // Tx -> plane 1 -> ... -> plane M -> Rx with a mask applied on every plane. `hop(src, dst, dx, w)`
        // returns the propagation matrix; w is the Riemann weight of the source samples.
        template <typename Hop>
        CMat cascade(const ScenarioConfig &s, bool apply_mask, Hop &&hop)
        {
            auto yt = element_positions(s.tx), yr = element_positions(s.rx);
            auto yv = virtual_positions(s);
            auto xp = plane_positions(s);
            const double dv = 0.5 * s.carrier.wavelength();
            RVec m = apply_mask ? blockage_mask(s, yv) : RVec::Ones(yv.size());

            CMat H = m.asDiagonal() * hop(yt, yv, xp[0], 1.0);
            if (xp.size() > 1)
            {
                CMat P = m.asDiagonal() * hop(yv, yv, xp[1] - xp[0], dv); // equal spacing, reused
                for (std::size_t p = 1; p < xp.size(); ++p)
                {
                    if (std::abs((xp[p] - xp[p - 1]) - (xp[1] - xp[0])) > 1e-15)
                        P = m.asDiagonal() * hop(yv, yv, xp[p] - xp[p - 1], dv);
                    H = P * H;
                }
            }
            return hop(yv, yr, s.link_distance - xp.back(), dv) * H;
        }
    } // namespace detail

    // Iterated RS through masked planes. Without a blockage the link is a single Tx -> Rx hop.
    inline ChannelMatrix wcm_chain(const ScenarioConfig &s, bool apply_mask = true)
    {
        s.validate();
        auto hop = [&](const std::vector<double> &a, const std::vector<double> &b, double dx, double w)
        { return rs_kernel(a, b, dx, s.carrier, w); };
        return {detail::cascade(s, apply_mask, hop), ChannelModel::WCM, false};
    }

    inline ChannelMatrix wcm_channel(const ScenarioConfig &s)
    {
        s.validate();
        if (!s.blockage)
        {
            auto yt = element_positions(s.tx), yr = element_positions(s.rx);
            return {rs_kernel(yt, yr, s.link_distance, s.carrier, 1.0), ChannelModel::WCM, false};
        }
        return wcm_chain(s, true);
    }

    // H_PR prod(B_m . H_(m-1)m) (B_1 . H_TP), Q_c = 1
    inline ChannelMatrix cgwcm_channel(const ScenarioConfig &s, bool apply_mask = true)
    {
        s.validate();
        auto hop = [&](const std::vector<double> &a, const std::vector<double> &b, double dx, double)
        { return gcm_kernel(a, b, dx, s.carrier); };
        return {detail::cascade(s, apply_mask, hop), ChannelModel::CGWCM, false};
    }

    // amplitude = |H_G| / |H_C|; phase = circular mean of arg(H_G / H_C) over nonzero pairs,
    // arguments taken on the branch centred at that mean
    inline CalibrationParams calibrate(const ChannelMatrix &model_los, const ChannelMatrix &gcm_los)
    {
        const CMat &C = model_los.entries, &G = gcm_los.entries;
        if (C.rows() != G.rows() || C.cols() != G.cols())
            throw std::invalid_argument("calibrate: dimension mismatch");
        double nc = C.norm();
        if (!(nc > 0.0))
            throw std::domain_error("calibrate: model channel is all zero");
        cd unit_sum = 0.0;
        std::vector<cd> q;
        q.reserve(C.size());
        for (Eigen::Index i = 0; i < C.size(); ++i)
        {
            cd c = C.data()[i], g = G.data()[i];
            if (std::abs(c) > 0.0 && std::abs(g) > 0.0)
            {
                cd r = g / c;
                q.push_back(r);
                unit_sum += r / std::abs(r);
            }
        }
        if (q.empty())
            throw std::domain_error("calibrate: no common nonzero entries");
        double ref = std::arg(unit_sum), acc = 0.0;
        cd rot = std::polar(1.0, -ref);
        for (cd r : q)
            acc += std::arg(r * rot);
        return {G.norm() / nc, ref + acc / double(q.size())};
    }

    inline ChannelMatrix apply_calibration(const ChannelMatrix &h, const CalibrationParams &p)
    {
        if (h.calibrated)
            throw std::logic_error("apply_calibration: channel is already calibrated");
        ChannelMatrix out = h;
        out.entries *= std::polar(p.amplitude, p.phase);
        out.calibrated = true;
        return out;
    }

    // Calibration of a model against the unblocked GCM on the same geometry
    inline CalibrationParams calibration_for(const ScenarioConfig &s, ChannelModel model)
    {
        auto G = gcm_channel(s, false);
        switch (model)
        {
        case ChannelModel::GCM:
            return {};
        case ChannelModel::WCM:
            return calibrate(wcm_chain(s, false), G);
        case ChannelModel::CGWCM:
            return calibrate(cgwcm_channel(s, false), G);
        default:
            throw std::invalid_argument("calibration_for: unsupported model");
        }
    }

    // Blocked (or unblocked) channel of the chosen model on the GCM scale
    inline ChannelMatrix calibrated_channel(const ScenarioConfig &s, ChannelModel model, bool blocked = true)
    {
        switch (model)
        {
        case ChannelModel::GCM:
            return gcm_channel(s, blocked);
        case ChannelModel::WCM:
            return apply_calibration(wcm_chain(s, blocked), calibration_for(s, model));
        case ChannelModel::CGWCM:
            return apply_calibration(cgwcm_channel(s, blocked), calibration_for(s, model));
        default:
            throw std::invalid_argument("calibrated_channel: unsupported model");
        }
    }

    inline double relative_error(const CMat &x, const CMat &ref) { return (x - ref).norm() / ref.norm(); }

    // ---------- Synthetic multipath ----------

    struct NlosRay
    {
        double gain_db = -30.0;   // power relative to the unblocked LoS power
        double departure = 0.0;   // [rad]
        double arrival = 0.0;     // [rad]
        double excess_length = 0; // path length beyond D [m]
    };

    // Unit-norm spherical-wave response of an array to a point at (px, py)
    inline CVec nearfield_response(const std::vector<double> &y, double px, double py, double k)
    {
        CVec v(y.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            v[i] = std::polar(1.0, -k * std::hypot(px, y[i] - py));
        return v / std::sqrt(double(y.size()));
    }

    // Sum of rank-one rays; each ray scatters off a virtual point at (D + excess)/2 along its angle
    inline CMat nlos_component(const ScenarioConfig &s, const std::vector<NlosRay> &rays, double los_power)
    {
        auto yt = element_positions(s.tx), yr = element_positions(s.rx);
        const double k = s.carrier.wavenumber();
        CMat H = CMat::Zero(yr.size(), yt.size());
        for (const auto &ray : rays)
        {
            if (ray.gain_db > 0.0)
                throw std::invalid_argument("nlos ray gain must not exceed the LoS power (gain_db <= 0)");
            double path = s.link_distance + ray.excess_length;
            double ell = 0.5 * path;
            CVec at = nearfield_response(yt, ell * std::cos(ray.departure), ell * std::sin(ray.departure), k);
            CVec ar = nearfield_response(yr, ell * std::cos(ray.arrival), ell * std::sin(ray.arrival), k);
            cd g = std::polar(std::sqrt(los_power * std::pow(10.0, ray.gain_db / 10.0)), -k * path);
            H.noalias() += g * ar * at.adjoint();
        }
        return H;
    }

    // LoS (or quasi-LoS) term plus NLoS rays; blockage acts on the LoS term only
    inline ChannelMatrix synth_multipath_channel(const ScenarioConfig &s, const ChannelMatrix &los,
                                                 const std::vector<NlosRay> &rays, double reference_los_power)
    {
        ChannelMatrix out = los;
        if (rays.empty())
            return out;
        out.entries += nlos_component(s, rays, reference_los_power);
        out.model = ChannelModel::Composite;
        return out;
    }

    // LoS power over summed ray power, dB
    inline double k_factor_db(const std::vector<NlosRay> &rays)
    {
        double p = 0.0;
        for (const auto &r : rays)
            p += std::pow(10.0, r.gain_db / 10.0);
        return -10.0 * std::log10(p);
    }

} // namespace qlos

#endif
