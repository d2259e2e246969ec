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

#ifndef QLOS_SCENARIO_HPP
#define QLOS_SCENARIO_HPP

#include "types.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlos
{
    // Uniform linear array along y
    struct ArrayConfig
    {
        int num_elements = 1;
        double spacing = 0.0;       // element spacing d [m]
        double center_offset = 0.0; // y of array center [m]

        void validate(const std::string &name = "array") const
        {
            if (num_elements < 1)
                throw std::invalid_argument(name + ".num_elements must be >= 1");
            if (!(spacing > 0.0) || !std::isfinite(spacing))
                throw std::invalid_argument(name + ".spacing must be > 0");
            if (!std::isfinite(center_offset))
                throw std::invalid_argument(name + ".center_offset must be finite");
        }

        double aperture() const { return (num_elements - 1) * spacing; }
    };

    struct CarrierConfig
    {
        double frequency = 140e9; // [Hz]

        double wavelength() const { return speed_of_light / frequency; }
        double wavenumber() const { return 2.0 * pi * frequency / speed_of_light; }

        void validate() const
        {
            if (!(frequency > 0.0) || !std::isfinite(frequency))
                throw std::invalid_argument("carrier.frequency must be > 0");
        }
    };

    // Rectangle x in [L, L+W], y in [-T2, T1]
    struct BlockageGeometry
    {
        double distance_from_tx = 1.5; // L
        double width_along_axis = 0.0; // W
        double extent_above = 0.0;     // T1
        double extent_below = 0.0;     // T2

        bool contains(double x, double y) const
        {
            return x >= distance_from_tx && x <= distance_from_tx + width_along_axis &&
                   y >= -extent_below && y <= extent_above;
        }
        bool covers_y(double y) const { return y >= -extent_below && y <= extent_above; }
    };

    struct VirtualArrayConfig
    {
        int count = 2;                  // M
        int elements_per_array = 0;     // N
        double plane_spacing = 0.0;     // dx
    };

    struct ScenarioConfig
    {
        ArrayConfig tx;
        ArrayConfig rx;
        CarrierConfig carrier;
        double link_distance = 3.0; // D
        std::optional<BlockageGeometry> blockage;
        VirtualArrayConfig virtual_arrays;

        void validate() const
        {
            tx.validate("tx");
            rx.validate("rx");
            carrier.validate();
            if (!(link_distance > 0.0) || !std::isfinite(link_distance))
                throw std::invalid_argument("link_distance must be > 0");
            const auto &va = virtual_arrays;
            if (va.count < 1)
                throw std::invalid_argument("virtual_arrays.count must be >= 1");
            if (va.elements_per_array < 1)
                throw std::invalid_argument("virtual_arrays.elements_per_array must be >= 1");
            if (!(va.plane_spacing > 0.0))
                throw std::invalid_argument("virtual_arrays.plane_spacing must be > 0");
            if (blockage)
            {
                const auto &b = *blockage;
                if (!(b.distance_from_tx > 0.0))
                    throw std::invalid_argument("blockage.distance_from_tx must be > 0");
                if (b.width_along_axis < 0.0)
                    throw std::invalid_argument("blockage.width_along_axis must be >= 0");
                if (b.extent_above + b.extent_below < 0.0)
                    throw std::invalid_argument("blockage extent (extent_above + extent_below) must be >= 0");
                if (!(b.distance_from_tx + b.width_along_axis < link_distance))
                    throw std::invalid_argument("blockage must end before the receiver (L + W < D)");
                if ((va.count - 1) * va.plane_spacing > b.width_along_axis * (1.0 + 1e-12) + 1e-15)
                    throw std::invalid_argument("virtual planes must lie inside the blockage ((M-1)*dx <= W)");
            }
        }
    };

    // y_i = (i - (N+1)/2) d + center, i = 1..N
    inline std::vector<double> element_positions(const ArrayConfig &a)
    {
        a.validate();
        std::vector<double> y(a.num_elements);
        for (int i = 1; i <= a.num_elements; ++i)
            y[i - 1] = (i - 0.5 * (a.num_elements + 1)) * a.spacing + a.center_offset;
        return y;
    }

    // Ray intersections with the Rx plane for the blockage corners
    inline std::array<double, 4> shadow_bounds(double tx_y, const BlockageGeometry &b, double D)
    {
        const double L = b.distance_from_tx, W = b.width_along_axis;
        if (!(L > 0.0) || !(L + W > 0.0))
            throw std::invalid_argument("shadow_bounds: degenerate blockage distance");
        const double T1 = b.extent_above, T2 = b.extent_below;
        return {(T1 - tx_y) / L * D + tx_y,
                (T1 - tx_y) / (L + W) * D + tx_y,
                (-T2 - tx_y) / L * D + tx_y,
                (-T2 - tx_y) / (L + W) * D + tx_y};
    }

    inline bool ray_blocked(double tx_y, double rx_y, const BlockageGeometry &b, double D)
    {
        auto s = shadow_bounds(tx_y, b, D);
        double lo = std::min(s[2], s[3]), hi = std::max(s[0], s[1]);
        return rx_y >= lo && rx_y <= hi;
    }

    // x coordinates of the virtual planes: uniform in [L, L+W], both faces included for M >= 2
    inline std::vector<double> plane_positions(const ScenarioConfig &s)
    {
        const int M = s.virtual_arrays.count;
        double L = s.blockage ? s.blockage->distance_from_tx : 0.5 * s.link_distance;
        std::vector<double> x(M);
        for (int m = 0; m < M; ++m)
            x[m] = L + m * s.virtual_arrays.plane_spacing;
        return x;
    }

    inline std::vector<double> virtual_positions(const ScenarioConfig &s)
    {
        ArrayConfig va{s.virtual_arrays.elements_per_array, 0.5 * s.carrier.wavelength(), 0.0};
        return element_positions(va);
    }

    // Builder with the default discretization: d = lambda/2 on all arrays, virtual aperture
    // `aperture_factor` times the larger physical aperture, planes spread over the blockage width.
    struct ScenarioBuilder
    {
        int num_tx = 64;
        int num_rx = 64;
        double frequency = 140e9;
        double link_distance = 3.0;
        double tx_offset = 0.0;
        double rx_offset = 0.0;
        std::optional<BlockageGeometry> blockage;
        int num_planes = 2;
        double aperture_factor = 2.0;
        int virtual_elements = 0; // 0 = derive from aperture_factor

        ScenarioConfig build() const
        {
            ScenarioConfig s;
            s.carrier.frequency = frequency;
            double d = 0.5 * s.carrier.wavelength();
            s.tx = {num_tx, d, tx_offset};
            s.rx = {num_rx, d, rx_offset};
            s.link_distance = link_distance;
            s.blockage = blockage;
            s.virtual_arrays.count = num_planes;
            int nv = virtual_elements;
            if (nv <= 0)
                nv = (int)std::ceil(aperture_factor * std::max(num_tx, num_rx) - 1e-9);
            s.virtual_arrays.elements_per_array = nv;
            double W = blockage ? blockage->width_along_axis : 0.0;
            s.virtual_arrays.plane_spacing = (num_planes > 1 && W > 0.0) ? W / (num_planes - 1) : std::max(W, d);
            s.validate();
            return s;
        }
    };

} // namespace qlos

#endif
