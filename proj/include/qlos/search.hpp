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

#ifndef QLOS_SEARCH_HPP
#define QLOS_SEARCH_HPP

#include "codebook.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlos
{
    enum class ProbeCombiner
    {
        Omnidirectional, // single all-ones column / sqrt(N_r)
        FullArrayNorm    // W = I
    };

    inline std::string to_string(ProbeCombiner p) { return p == ProbeCombiner::Omnidirectional ? "omni" : "full"; }

    inline ProbeCombiner parse_probe(const std::string &s)
    {
        if (s == "omni" || s == "omnidirectional")
            return ProbeCombiner::Omnidirectional;
        if (s == "full" || s == "full_array_norm")
            return ProbeCombiner::FullArrayNorm;
        throw std::invalid_argument("unknown probe combiner '" + s + "' (expected omni|full)");
    }

    struct TrainingConfig
    {
        double transmit_power = 1.0; // rho
        double noise_power = 1.0;    // sigma^2
        ProbeCombiner rx_probe_combiner = ProbeCombiner::FullArrayNorm;
        std::uint64_t rng_seed = 1;

        void validate() const
        {
            if (!(transmit_power > 0.0) || !(noise_power > 0.0))
                throw std::invalid_argument("training: transmit_power and noise_power must be > 0");
        }
    };

    enum class SearchScheme
    {
        Exhaustive,
        Hierarchical,
        LowComplexity,
        FarField,
        NearField
    };

    inline std::string to_string(SearchScheme s)
    {
        switch (s)
        {
        case SearchScheme::Exhaustive:
            return "exhaustive";
        case SearchScheme::Hierarchical:
            return "hier";
        case SearchScheme::LowComplexity:
            return "lowc";
        case SearchScheme::FarField:
            return "ff";
        case SearchScheme::NearField:
            return "nf";
        }
        return "unknown";
    }

    inline SearchScheme parse_search_scheme(const std::string &s)
    {
        for (auto v : {SearchScheme::Exhaustive, SearchScheme::Hierarchical, SearchScheme::LowComplexity,
                       SearchScheme::FarField, SearchScheme::NearField})
            if (to_string(v) == s)
                return v;
        throw std::invalid_argument("unknown search scheme '" + s + "' (expected exhaustive|hier|lowc|ff|nf)");
    }

    struct SlotRecord
    {
        int slot = 0;
        int stage = 1;
        std::size_t codeword_id = 0; // index inside the stage codebook
        BeamParams params;
        double power = 0.0; // linear
    };

    struct SearchResult
    {
        SearchScheme scheme = SearchScheme::Exhaustive;
        BeamVector selected;
        std::vector<SlotRecord> trace;
        int overhead = 0;
        double spectral_efficiency = 0.0; // filled by evaluation
    };

    // Pilot measurements with a seeded noise stream; one draw of N_r complex samples per slot
    class TrainingSession
    {
      public:
        TrainingSession(const ChannelMatrix &h, const TrainingConfig &cfg)
            : h_(h.entries), cfg_(cfg), rng_(cfg.rng_seed), normal_(0.0, std::sqrt(0.5 * cfg.noise_power))
        {
            cfg.validate();
        }

        double measure(const CVec &f)
        {
            if (f.size() != h_.cols())
                throw std::invalid_argument("measure: codeword length differs from N_t");
            CVec v = std::sqrt(cfg_.transmit_power) * (h_ * f);
            return finish(v);
        }

        // Measurements for the columns of F, in slot order
        std::vector<double> measure_batch(const CMat &F)
        {
            if (F.rows() != h_.cols())
                throw std::invalid_argument("measure_batch: codeword length differs from N_t");
            CMat V = std::sqrt(cfg_.transmit_power) * (h_ * F);
            std::vector<double> out(F.cols());
            for (Eigen::Index i = 0; i < F.cols(); ++i)
            {
                CVec v = V.col(i);
                out[i] = finish(v);
            }
            return out;
        }

        int slots() const { return slots_; }

      private:
        double finish(CVec &v)
        {
            for (Eigen::Index j = 0; j < v.size(); ++j)
            {
                double re = normal_(rng_);
                double im = normal_(rng_);
                v[j] += cd(re, im);
            }
            ++slots_;
            if (cfg_.rx_probe_combiner == ProbeCombiner::Omnidirectional)
                return std::norm(v.sum()) / double(v.size());
            return v.squaredNorm();
        }

        CMat h_;
        TrainingConfig cfg_;
        std::mt19937_64 rng_;
        std::normal_distribution<double> normal_;
        int slots_ = 0;
    };

    inline double measure_slot(const BeamVector &codeword, const ChannelMatrix &h, const TrainingConfig &cfg)
    {
        TrainingSession t(h, cfg);
        return t.measure(codeword.weights);
    }

    namespace detail
    {
        // Sweeps a codebook in order and returns the index of the first maximum
        inline std::size_t sweep(TrainingSession &t, const Codebook &cb, int stage, std::vector<SlotRecord> &trace)
        {
            constexpr std::size_t chunk = 2048;
            std::size_t best = 0;
            double best_p = -1.0;
            for (std::size_t lo = 0; lo < cb.size(); lo += chunk)
            {
                std::size_t hi = std::min(cb.size(), lo + chunk);
                auto p = t.measure_batch(cb.batch(lo, hi));
                for (std::size_t i = lo; i < hi; ++i)
                {
                    trace.push_back({(int)trace.size() + 1, stage, i, cb.params()[i], p[i - lo]});
                    if (p[i - lo] > best_p)
                    {
                        best_p = p[i - lo];
                        best = i;
                    }
                }
            }
            return best;
        }

        inline SearchResult one_stage(SearchScheme scheme, const Codebook &cb, const ChannelMatrix &h,
                                      const TrainingConfig &cfg)
        {
            if (cb.size() == 0)
                throw std::invalid_argument("search: empty codebook");
            TrainingSession t(h, cfg);
            SearchResult r;
            r.scheme = scheme;
            std::size_t i = sweep(t, cb, 1, r.trace);
            r.selected = cb.codeword(i);
            r.overhead = (int)r.trace.size();
            return r;
        }

        inline SearchResult two_stage(SearchScheme scheme, const TwoStageCodebooks &cbs, const ChannelMatrix &h,
                                      const TrainingConfig &cfg)
        {
            if (cbs.stage1.size() == 0)
                throw std::invalid_argument("search: empty stage-1 codebook");
            TrainingSession t(h, cfg);
            SearchResult r;
            r.scheme = scheme;
            const auto &p1 = cbs.stage1.params()[sweep(t, cbs.stage1, 1, r.trace)];
            Codebook cb2 = cbs.stage2({p1.r, p1.theta});
            r.selected = cb2.codeword(sweep(t, cb2, 2, r.trace));
            r.overhead = (int)r.trace.size();
            return r;
        }
    } // namespace detail

    inline SearchResult exhaustive_search(const Codebook &cb, const ChannelMatrix &h, const TrainingConfig &cfg)
    {
        return detail::one_stage(SearchScheme::Exhaustive, cb, h, cfg);
    }

    inline SearchResult hierarchical_search(const TwoStageCodebooks &cbs, const ChannelMatrix &h, const TrainingConfig &cfg)
    {
        return detail::two_stage(SearchScheme::Hierarchical, cbs, h, cfg);
    }

    inline SearchResult low_complexity_search(const TwoStageCodebooks &cbs, const ChannelMatrix &h,
                                              const TrainingConfig &cfg)
    {
        return detail::two_stage(SearchScheme::LowComplexity, cbs, h, cfg);
    }

    inline SearchResult farfield_steering_search(const ChannelMatrix &h, const TrainingConfig &cfg,
                                                 const ScenarioConfig &s, const SamplingPlan &plan)
    {
        return detail::one_stage(SearchScheme::FarField, build_farfield_codebook(plan, s), h, cfg);
    }

    inline SearchResult nearfield_focusing_search(const ChannelMatrix &h, const TrainingConfig &cfg,
                                                  const ScenarioConfig &s, const SamplingPlan &plan)
    {
        return detail::one_stage(SearchScheme::NearField, build_nearfield_codebook(plan, s), h, cfg);
    }

    // Dispatch by scheme
    inline SearchResult run_search(SearchScheme scheme, const ChannelMatrix &h, const TrainingConfig &cfg,
                                   const ScenarioConfig &s, const SamplingPlan &plan)
    {
        switch (scheme)
        {
        case SearchScheme::Exhaustive:
            return exhaustive_search(build_exhaustive_codebook(plan, s), h, cfg);
        case SearchScheme::Hierarchical:
            return hierarchical_search(build_hierarchical_codebooks(plan, s), h, cfg);
        case SearchScheme::LowComplexity:
            return low_complexity_search(build_low_complexity_codebooks(s, plan), h, cfg);
        case SearchScheme::FarField:
            return farfield_steering_search(h, cfg, s, plan);
        case SearchScheme::NearField:
            return nearfield_focusing_search(h, cfg, s, plan);
        }
        throw std::invalid_argument("run_search: unknown scheme");
    }

} // namespace qlos

#endif
