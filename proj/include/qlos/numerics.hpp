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

#ifndef QLOS_NUMERICS_HPP
#define QLOS_NUMERICS_HPP

#include "types.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/airy.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qlos
{
    namespace detail
    {
        // Integral of f over [0, x], split at the nodes t_m = node(m) so that every panel holds
        // at most one half period of the oscillation; a fixed 30-point Gauss rule is exact to
        // rounding on such a panel.
        template <typename F, typename Node>
        double panel_integral(F &&f, double x, Node &&node)
        {
            using gl = boost::math::quadrature::gauss<double, 30>;
            double sum = 0.0, a = 0.0;
            for (int m = 0;; ++m)
            {
                double b = std::min(node(m), x);
                if (b > a)
                    sum += gl::integrate(f, a, b);
                a = b;
                if (a >= x)
                    break;
            }
            return sum;
        }

        inline void check_arg(double x, const char *who)
        {
            if (!std::isfinite(x) || x < 0.0)
                throw std::domain_error(std::string(who) + ": argument must be finite and >= 0");
        }
    } // namespace detail

    // A(x) = int_0^x cos(pi/2 t^3) dt
    inline double airy_cos_integral(double x)
    {
        detail::check_arg(x, "airy_cos_integral");
        auto f = [](double t) { return std::cos(0.5 * pi * t * t * t); };
        return detail::panel_integral(f, x, [](int m) { return std::cbrt(1.0 + 2.0 * m); });
    }

    // B(x) = int_0^x cos(pi/2 t^2) dt, D(x) = int_0^x sin(pi/2 t^2) dt
    inline std::pair<double, double> fresnel_integrals(double x)
    {
        detail::check_arg(x, "fresnel_integrals");
        auto node = [](int m) { return std::sqrt(double(m + 1)); };
        double B = detail::panel_integral([](double t) { return std::cos(0.5 * pi * t * t); }, x, node);
        double D = detail::panel_integral([](double t) { return std::sin(0.5 * pi * t * t); }, x, node);
        return {B, D};
    }

    // Ai(y/y0) exp(b y/y0)
    inline double airy_aperture_amplitude(double y, double y0, double b)
    {
        if (!(y0 > 0.0) || !(b > 0.0))
            throw std::invalid_argument("airy_aperture_amplitude: scale and truncation must be > 0");
        double s = y / y0;
        return boost::math::airy_ai(s) * std::exp(b * s);
    }

    // Root of f(x) = target inside a straddling bracket (bisection to machine precision)
    inline double solve_monotone_root(const std::function<double(double)> &f, double target, double lo, double hi)
    {
        double flo = f(lo) - target, fhi = f(hi) - target;
        if (flo == 0.0)
            return lo;
        if (fhi == 0.0)
            return hi;
        if ((flo > 0.0) == (fhi > 0.0))
            throw std::domain_error("solve_monotone_root: bracket does not straddle the target");
        auto g = [&](double x) { return f(x) - target; };
        boost::math::tools::eps_tolerance<double> tol(52);
        std::uintmax_t it = 200;
        auto r = boost::math::tools::bisect(g, lo, hi, tol, it);
        return 0.5 * (r.first + r.second);
    }

    // First crossing of a curve that starts at f(0+) > target, located by a forward scan
    inline double first_descent_root(const std::function<double(double)> &f, double target,
                                     double step = 0.01, double x_max = 50.0)
    {
        double a = step, fa = f(a);
        if (fa <= target)
            return solve_monotone_root(f, target, 1e-12, a);
        for (double b = a + step; b <= x_max; b += step)
        {
            double fb = f(b);
            if (fb <= target)
                return solve_monotone_root(f, target, a, b);
            a = b;
            fa = fb;
        }
        throw std::domain_error("first_descent_root: target not reached");
    }

    enum class IntegralId
    {
        AiryCos,
        FresnelCos,
        FresnelSin
    };

    // Tabulated integral on a uniform grid with cubic B-spline interpolation
    class IntegralTable
    {
      public:
        IntegralTable(IntegralId id, double x_max, std::size_t samples)
            : id_(id), x_max_(x_max)
        {
            if (!(x_max > 0.0) || samples < 4)
                throw std::invalid_argument("IntegralTable: need x_max > 0 and at least 4 samples");
            h_ = x_max / double(samples - 1);
            // accumulate panel by panel so that construction stays linear in the sample count
            using gl = boost::math::quadrature::gauss<double, 30>;
            auto f = [id](double t) { return integrand(id, t); };
            values_.resize(samples);
            values_[0] = 0.0;
            for (std::size_t i = 1; i < samples; ++i)
                values_[i] = values_[i - 1] + gl::integrate(f, (i - 1) * h_, i * h_);
            spline_ = std::make_shared<spline_t>(values_.begin(), values_.end(), 0.0, h_, integrand(id, 0.0),
                                                 integrand(id, x_max));
        }

        static double exact(IntegralId id, double x)
        {
            switch (id)
            {
            case IntegralId::AiryCos:
                return airy_cos_integral(x);
            case IntegralId::FresnelCos:
                return fresnel_integrals(x).first;
            case IntegralId::FresnelSin:
                return fresnel_integrals(x).second;
            }
            return 0.0;
        }

        // derivative of the tabulated integral
        static double integrand(IntegralId id, double t)
        {
            switch (id)
            {
            case IntegralId::AiryCos:
                return std::cos(0.5 * pi * t * t * t);
            case IntegralId::FresnelCos:
                return std::cos(0.5 * pi * t * t);
            case IntegralId::FresnelSin:
                return std::sin(0.5 * pi * t * t);
            }
            return 0.0;
        }

        double operator()(double x) const
        {
            if (x < 0.0 || x > x_max_)
                throw std::domain_error("IntegralTable: argument outside tabulated domain");
            return (*spline_)(x);
        }

        IntegralId id() const { return id_; }
        double x_max() const { return x_max_; }
        double step() const { return h_; }
        const std::vector<double> &samples() const { return values_; }

      private:
        using spline_t = boost::math::interpolators::cardinal_cubic_b_spline<double>;
        IntegralId id_;
        double x_max_, h_ = 0.0;
        std::vector<double> values_;
        std::shared_ptr<spline_t> spline_;
    };

} // namespace qlos

#endif
