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

#ifndef QLOS_BEAM_HPP
#define QLOS_BEAM_HPP

#include "channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace qlos
{
    // Curving a [1/m^2], focus distance r [m], focus angle theta [rad]. r = inf gives a steering beam.
    struct BeamParams
    {
        double a = 0.0;
        double r = 1.0;
        double theta = 0.0;
    };

    struct BeamVector
    {
        BeamParams params;
        CVec weights;
    };

    inline void check_params(const BeamParams &p)
    {
        if (!(p.r > 0.0))
            throw std::invalid_argument("beam focus distance must be > 0");
        if (!(std::abs(p.theta) < 0.5 * pi))
            throw std::invalid_argument("beam focus angle must lie in (-pi/2, pi/2)");
        if (!std::isfinite(p.a))
            throw std::invalid_argument("beam curving coefficient must be finite");
    }

    // k (cos^2(theta)/(2r) y^2 - sin(theta) y)
    inline double focusing_phase(double y, double r, double theta, const CarrierConfig &carrier)
    {
        double c = std::cos(theta);
        double quad = std::isinf(r) ? 0.0 : c * c / (2.0 * r) * y * y;
        return carrier.wavenumber() * (quad - std::sin(theta) * y);
    }

    // Cubic phase added to the focusing profile, unit norm, |w_i| = 1/sqrt(N)
    inline BeamVector airy_beam_vector(const BeamParams &p, const std::vector<double> &y, const CarrierConfig &carrier)
    {
        check_params(p);
        const double k = carrier.wavenumber(), s = 1.0 / std::sqrt(double(y.size()));
        BeamVector b{p, CVec(y.size())};
        for (std::size_t i = 0; i < y.size(); ++i)
            b.weights[i] = std::polar(s, k * p.a * y[i] * y[i] * y[i] + focusing_phase(y[i], p.r, p.theta, carrier));
        return b;
    }

    inline BeamVector airy_beam_vector(const BeamParams &p, const ArrayConfig &array, const CarrierConfig &carrier)
    {
        return airy_beam_vector(p, element_positions(array), carrier);
    }

    inline BeamVector steering_vector(double theta, const std::vector<double> &y, const CarrierConfig &carrier)
    {
        return airy_beam_vector({0.0, std::numeric_limits<double>::infinity(), theta}, y, carrier);
    }

    // ---------- Field maps ----------

    struct GridSpec
    {
        double x_min = 0.05, x_max = 3.0;
        int nx = 200;
        double y_min = -0.3, y_max = 0.3;
        int ny = 200;
        bool apply_blockage = true;

        std::vector<double> xs() const { return axis(x_min, x_max, nx); }
        std::vector<double> ys() const { return axis(y_min, y_max, ny); }

        static std::vector<double> axis(double lo, double hi, int n)
        {
            std::vector<double> v(n);
            for (int i = 0; i < n; ++i)
                v[i] = n == 1 ? lo : lo + (hi - lo) * i / double(n - 1);
            return v;
        }
    };

    // power(iy, ix) in dB relative to the map maximum, floored at floor_db
    struct FieldMap
    {
        std::vector<double> xs, ys;
        Eigen::MatrixXd power_db;
        bool mask_applied = false;
        double floor_db = -60.0;
        double peak_linear = 0.0; // un-normalized peak |E|^2
    };

    // Field radiated by a weighted Tx aperture, carried through the masked virtual planes
    class FieldPropagator
    {
      public:
        FieldPropagator(const ScenarioConfig &s, const CVec &tx_weights, bool apply_blockage)
            : s_(s), yt_(element_positions(s.tx)), w_(tx_weights)
        {
            s.validate();
            if (w_.size() != (Eigen::Index)yt_.size())
                throw std::invalid_argument("FieldPropagator: weight length differs from the Tx array");
            blocked_ = apply_blockage && s.blockage.has_value();
            if (blocked_)
            {
                yv_ = virtual_positions(s);
                xp_ = plane_positions(s);
                RVec m = blockage_mask(s, yv_);
                const double dv = 0.5 * s.carrier.wavelength();
                CVec first = rs_kernel(yt_, yv_, xp_[0], s.carrier, 1.0) * w_;
                masked_.push_back(m.asDiagonal() * first);
                open_.push_back(first);
                for (std::size_t p = 1; p < xp_.size(); ++p)
                {
                    CMat hop = rs_kernel(yv_, yv_, xp_[p] - xp_[p - 1], s.carrier, dv);
                    masked_.push_back(m.asDiagonal() * (hop * masked_.back()));
                    open_.push_back(hop * open_.back());
                }
            }
        }

        // Downstream of the first plane the chained field is rescaled by the complex factor that maps the
        // unmasked chain onto direct propagation at the same column (line sampling of the RS integral
        // carries a distance-dependent gain).
        CVec field(double x, const std::vector<double> &y) const
        {
            if (!(x > 0.0))
                throw std::invalid_argument("field: evaluation plane must lie beyond the Tx plane");
            CVec direct = rs_kernel(yt_, y, x, s_.carrier, 1.0) * w_;
            if (!blocked_ || x <= xp_.front())
                return direct;
            std::size_t p = 0;
            while (p + 1 < xp_.size() && xp_[p + 1] < x)
                ++p;
            CMat K = rs_kernel(yv_, y, x - xp_[p], s_.carrier, 0.5 * s_.carrier.wavelength());
            CVec open = K * open_[p];
            double n2 = open.squaredNorm();
            cd scale = n2 > 0.0 ? open.dot(direct) / n2 : cd(0.0);
            CVec e = scale * (K * masked_[p]);
            for (std::size_t i = 0; i < y.size(); ++i)
                if (s_.blockage->contains(x, y[i]))
                    e[i] = 0.0;
            return e;
        }

      private:
        ScenarioConfig s_;
        std::vector<double> yt_, yv_, xp_;
        CVec w_;
        bool blocked_ = false;
        std::vector<CVec> masked_, open_;
    };

    inline FieldMap render_field_map(const BeamVector &beam, const ScenarioConfig &s, const GridSpec &g)
    {
        if (!(g.x_min > 0.0))
            throw std::invalid_argument("render_field_map: grid must not touch the x = 0 plane");
        if (g.nx < 1 || g.ny < 1 || !(g.x_max >= g.x_min) || !(g.y_max >= g.y_min))
            throw std::invalid_argument("render_field_map: invalid grid");
        FieldPropagator prop(s, beam.weights, g.apply_blockage);
        FieldMap map;
        map.xs = g.xs();
        map.ys = g.ys();
        map.mask_applied = g.apply_blockage && s.blockage.has_value();
        Eigen::MatrixXd p(g.ny, g.nx);
        parallel_for(g.nx, [&](std::size_t ix)
                     { p.col(ix) = prop.field(map.xs[ix], map.ys).cwiseAbs2(); });
        map.peak_linear = p.maxCoeff();
        double ref = map.peak_linear > 0.0 ? map.peak_linear : 1.0;
        map.power_db = p.unaryExpr([&](double v)
                                   { return v > 0.0 ? std::max(10.0 * std::log10(v / ref), map.floor_db) : map.floor_db; });
        return map;
    }

} // namespace qlos

#endif
