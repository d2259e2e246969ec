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

#ifndef QLOS_CODEBOOK_HPP
#define QLOS_CODEBOOK_HPP

#include "beam.hpp"
#include "numerics.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlos
{
    // ---------- Correlations ----------

    inline double beam_correlation_numeric(const CVec &v1, const CVec &v2)
    {
        if (v1.size() != v2.size())
            throw std::invalid_argument("beam_correlation_numeric: length mismatch");
        return std::abs(v1.dot(v2)); // dot() conjugates the first argument
    }

    inline double beam_correlation_numeric(const BeamVector &v1, const BeamVector &v2)
    {
        return beam_correlation_numeric(v1.weights, v2.weights);
    }

    // |A(x)/x|
    inline double curving_correlation_closed(double alpha_bar)
    {
        if (alpha_bar < 0.0)
            throw std::domain_error("curving_correlation_closed: argument must be >= 0");
        if (alpha_bar < 1e-8)
            return 1.0;
        return std::abs(airy_cos_integral(alpha_bar) / alpha_bar);
    }

    // |B(x) + j D(x)| / x
    inline double distance_correlation_closed(double beta_bar)
    {
        if (beta_bar < 0.0)
            throw std::domain_error("distance_correlation_closed: argument must be >= 0");
        if (beta_bar < 1e-8)
            return 1.0;
        auto [B, D] = fresnel_integrals(beta_bar);
        return std::hypot(B, D) / beta_bar;
    }

    // Dirichlet kernel magnitude
    inline double angle_correlation_closed(double gamma_bar, int n)
    {
        if (!std::isfinite(gamma_bar) || n < 1)
            throw std::domain_error("angle_correlation_closed: invalid argument");
        double den = n * std::sin(0.5 * gamma_bar);
        if (std::abs(den) < 1e-300)
            return 1.0;
        return std::abs(std::sin(0.5 * n * gamma_bar) / den);
    }

    // Normalized separations of two beams on an N element array with spacing d.
    // Cubic:     alpha = (N d / 2) (2 k da / pi)^(1/3)
    // Quadratic: beta  = (N d / 2) (k dq / pi)^(1/2),  q = cos^2(theta) / r
    // Linear:    gamma = k d d(sin theta)
    inline double alpha_bar_of(double da, double d, int n, double k)
    {
        return 0.5 * n * d * std::cbrt(2.0 * k * std::abs(da) / pi);
    }
    inline double beta_bar_of(double dq, double d, int n, double k)
    {
        return 0.5 * n * d * std::sqrt(k * std::abs(dq) / pi);
    }
    inline double gamma_bar_of(double dsin, double d, double k) { return k * d * dsin; }

    // ---------- Sampling plan ----------

    struct SamplingTargets
    {
        double xi_a = 0.4;
        double xi_r = 0.15;
        int u = 1; // angular index for orthogonal sampling
    };

    struct SamplingPlan
    {
        SamplingTargets targets;
        double alpha_bar = 0.0, beta_bar = 0.0, gamma_bar = 0.0;
        double s_a = 0.0, s_r = 0.0, s_theta = 0.0;     // interval formulas
        double s_a_empirical = 0.0, s_r_empirical = 0.0; // inverted numeric correlation
        double a_min = 0.0, a_max = 0.0;
        double r_min = 0.0, r_max = 0.0;
        std::vector<double> a_values, r_values, theta_values;
        int J() const { return (int)a_values.size(); }
        int K() const { return (int)r_values.size(); }
        int V() const { return (int)theta_values.size(); }
    };

    struct PlanOptions
    {
        double curving_max = 4.0;     // |a| range [1/m^2]
        double r_min_fraction = 1.0 / 6.0; // r_min = fraction * D
        bool empirical_intervals = false;  // use the inverted numeric intervals for the grids
    };

    namespace detail
    {
        // Separation at which two same-array beams first reach the target correlation
        inline double invert_numeric(const std::function<BeamVector(double)> &beam_at, double target, double step)
        {
            BeamVector ref = beam_at(0.0);
            auto f = [&](double x) { return beam_correlation_numeric(ref, beam_at(x)); };
            return first_descent_root(f, target, step, 4000.0 * step);
        }
    } // namespace detail

    inline SamplingPlan solve_sampling_plan(const SamplingTargets &t, const ScenarioConfig &s, const PlanOptions &opt = {})
    {
        if (!(t.xi_a > 0.0 && t.xi_a < 1.0) || !(t.xi_r > 0.0 && t.xi_r < 1.0))
            throw std::invalid_argument("solve_sampling_plan: targets must lie in (0, 1)");
        if (t.u < 1)
            throw std::invalid_argument("solve_sampling_plan: angular index u must be >= 1");
        if (!(opt.curving_max > 0.0) || !(opt.r_min_fraction > 0.0) || opt.r_min_fraction > 1.0)
            throw std::invalid_argument("solve_sampling_plan: invalid curving range or r_min fraction");
        s.validate();
        const int N = s.tx.num_elements;
        const double d = s.tx.spacing, D = s.link_distance;

        SamplingPlan p;
        p.targets = t;
        p.alpha_bar = first_descent_root(curving_correlation_closed, t.xi_a);
        p.beta_bar = first_descent_root(distance_correlation_closed, t.xi_r);
        p.gamma_bar = 2.0 * pi * t.u / N;
        double n3 = double(N) * N * N;
        p.s_a = std::pow(p.alpha_bar, 3) / (d * d * n3);
        p.s_r = p.beta_bar * p.beta_bar / (d * double(N) * N);
        p.s_theta = 2.0 * t.u / N;

        ArrayConfig local = s.tx;
        local.center_offset = 0.0;
        auto y = element_positions(local);
        p.s_a_empirical = detail::invert_numeric(
            [&](double a) { return airy_beam_vector({a, D, 0.0}, y, s.carrier); }, t.xi_a, 0.02 * p.s_a);
        p.s_r_empirical = detail::invert_numeric(
            [&](double q) { return airy_beam_vector({0.0, 1.0 / (1.0 / D + q), 0.0}, y, s.carrier); }, t.xi_r,
            0.02 * p.s_r);

        double sa = opt.empirical_intervals ? p.s_a_empirical : p.s_a;
        double sr = opt.empirical_intervals ? p.s_r_empirical : p.s_r;

        int half = (int)std::floor(opt.curving_max / sa + 1e-9);
        for (int j = -half; j <= half; ++j)
            p.a_values.push_back(j * sa);
        p.a_min = p.a_values.front();
        p.a_max = p.a_values.back();

        p.r_max = D;
        p.r_min = opt.r_min_fraction * D;
        for (int kk = 0;; ++kk)
        {
            double r = 1.0 / (1.0 / D + kk * sr);
            if (r < p.r_min * (1.0 - 1e-12))
                break;
            p.r_values.push_back(r);
        }

        // sin(theta) = -1 + v s_theta, v = 1..V, endpoints +-1 excluded
        for (int v = 1;; ++v)
        {
            double sn = -1.0 + v * p.s_theta;
            if (sn >= 1.0 - 1e-12)
                break;
            p.theta_values.push_back(std::asin(sn));
        }
        return p;
    }

    // ---------- Codebooks ----------

    enum class CodebookScheme
    {
        Exhaustive,
        HierarchicalStage1,
        HierarchicalStage2,
        LowComplexityStage1,
        LowComplexityStage2,
        FarFieldSteering,
        NearFieldFocusing
    };

    inline std::string to_string(CodebookScheme s)
    {
        switch (s)
        {
        case CodebookScheme::Exhaustive:
            return "exhaustive";
        case CodebookScheme::HierarchicalStage1:
            return "hierarchical_stage1";
        case CodebookScheme::HierarchicalStage2:
            return "hierarchical_stage2";
        case CodebookScheme::LowComplexityStage1:
            return "low_complexity_stage1";
        case CodebookScheme::LowComplexityStage2:
            return "low_complexity_stage2";
        case CodebookScheme::FarFieldSteering:
            return "farfield_steering";
        case CodebookScheme::NearFieldFocusing:
            return "nearfield_focusing";
        }
        return "unknown";
    }

    // Parameter tuples; weights are synthesized on demand because large codebooks do not fit in memory
    class Codebook
    {
      public:
        Codebook() = default;
        Codebook(CodebookScheme scheme, std::vector<BeamParams> params, const ScenarioConfig &s, const SamplingPlan &plan)
            : scheme_(scheme), params_(std::move(params)), carrier_(s.carrier), plan_(plan)
        {
            ArrayConfig local = s.tx;
            local.center_offset = 0.0;
            y_ = element_positions(local);
            for (const auto &p : params_)
                check_params(p);
        }

        CodebookScheme scheme() const { return scheme_; }
        std::size_t size() const { return params_.size(); }
        const std::vector<BeamParams> &params() const { return params_; }
        const SamplingPlan &plan() const { return plan_; }

        BeamVector codeword(std::size_t i) const { return airy_beam_vector(params_.at(i), y_, carrier_); }

        // Columns lo..hi-1 as an [N_t x (hi-lo)] matrix
        CMat batch(std::size_t lo, std::size_t hi) const
        {
            CMat F(y_.size(), hi - lo);
            for (std::size_t i = lo; i < hi; ++i)
                F.col(i - lo) = codeword(i).weights;
            return F;
        }

      private:
        CodebookScheme scheme_ = CodebookScheme::Exhaustive;
        std::vector<BeamParams> params_;
        std::vector<double> y_;
        CarrierConfig carrier_;
        SamplingPlan plan_;
    };

    // (a, r, theta) lexicographic
    inline Codebook build_exhaustive_codebook(const SamplingPlan &plan, const ScenarioConfig &s)
    {
        std::vector<BeamParams> p;
        p.reserve(plan.a_values.size() * plan.r_values.size() * plan.theta_values.size());
        for (double a : plan.a_values)
            for (double r : plan.r_values)
                for (double th : plan.theta_values)
                    p.push_back({a, r, th});
        return Codebook(CodebookScheme::Exhaustive, std::move(p), s, plan);
    }

    struct FocusPoint
    {
        double r = 0.0, theta = 0.0;
    };

    // Grid points inside the strip 0 <= r cos(theta) <= D, |r sin(theta)| <= L_a / 2
    inline std::vector<FocusPoint> build_los_region_points(const ScenarioConfig &s, const SamplingPlan &plan)
    {
        const double D = s.link_distance, half = 0.5 * s.tx.aperture();
        std::vector<FocusPoint> pts;
        for (double r : plan.r_values)
            for (double th : plan.theta_values)
            {
                double x = r * std::cos(th), y = r * std::sin(th);
                if (x >= 0.0 && x <= D * (1.0 + 1e-12) && std::abs(y) <= half)
                    pts.push_back({r, th});
            }
        return pts;
    }

    inline Codebook curving_sweep(CodebookScheme scheme, const FocusPoint &f, const SamplingPlan &plan,
                                  const ScenarioConfig &s)
    {
        std::vector<BeamParams> p;
        for (double a : plan.a_values)
            p.push_back({a, f.r, f.theta});
        return Codebook(scheme, std::move(p), s, plan);
    }

    struct TwoStageCodebooks
    {
        Codebook stage1;
        std::function<Codebook(const FocusPoint &)> stage2;
    };

    inline TwoStageCodebooks build_hierarchical_codebooks(const SamplingPlan &plan, const ScenarioConfig &s)
    {
        std::vector<BeamParams> p;
        for (const auto &f : build_los_region_points(s, plan))
            p.push_back({0.0, f.r, f.theta});
        return {Codebook(CodebookScheme::HierarchicalStage1, std::move(p), s, plan),
                [plan, s](const FocusPoint &f) { return curving_sweep(CodebookScheme::HierarchicalStage2, f, plan, s); }};
    }

    // Focus points on cos(theta)/r = 1/D with sin(theta) = m s_theta, |theta| <= atan(L_a / 2D)
    inline std::vector<FocusPoint> low_complexity_points(const ScenarioConfig &s, const SamplingPlan &plan)
    {
        const double D = s.link_distance;
        double th_max = std::atan(0.5 * s.tx.aperture() / D);
        int m = (int)std::floor(std::sin(th_max) / plan.s_theta + 1e-9);
        std::vector<FocusPoint> pts;
        for (int i = -m; i <= m; ++i)
        {
            double th = std::asin(i * plan.s_theta);
            pts.push_back({D * std::cos(th), th});
        }
        return pts;
    }

    inline TwoStageCodebooks build_low_complexity_codebooks(const ScenarioConfig &s, const SamplingPlan &plan)
    {
        std::vector<BeamParams> p;
        for (const auto &f : low_complexity_points(s, plan))
            p.push_back({0.0, f.r, f.theta});
        return {Codebook(CodebookScheme::LowComplexityStage1, std::move(p), s, plan),
                [plan, s](const FocusPoint &f) { return curving_sweep(CodebookScheme::LowComplexityStage2, f, plan, s); }};
    }

    inline Codebook build_farfield_codebook(const SamplingPlan &plan, const ScenarioConfig &s)
    {
        std::vector<BeamParams> p;
        for (double th : plan.theta_values)
            p.push_back({0.0, std::numeric_limits<double>::infinity(), th});
        return Codebook(CodebookScheme::FarFieldSteering, std::move(p), s, plan);
    }

    // One focusing beam per Rx element
    inline Codebook build_nearfield_codebook(const SamplingPlan &plan, const ScenarioConfig &s)
    {
        std::vector<BeamParams> p;
        const double D = s.link_distance;
        for (double yr : element_positions(s.rx))
        {
            double dy = yr - s.tx.center_offset;
            p.push_back({0.0, std::hypot(D, dy), std::atan2(dy, D)});
        }
        return Codebook(CodebookScheme::NearFieldFocusing, std::move(p), s, plan);
    }

} // namespace qlos

#endif
