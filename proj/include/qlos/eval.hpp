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

#ifndef QLOS_EVAL_HPP
#define QLOS_EVAL_HPP

#include "search.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlos
{
    // Hybrid precoder F_RF F_BB and combiner W_RF W_BB
    struct Beamformers
    {
        CMat analog_precoder;   // [N_t x L_t]
        CMat digital_precoder;  // [L_t x N_s]
        CMat analog_combiner;   // [N_r x L_r]
        CMat digital_combiner;  // [L_r x N_s]
        bool full_digital = false;
        double combiner_residual = 0.0;

        CMat precoder() const { return analog_precoder * digital_precoder; }
        CMat combiner() const { return analog_combiner * digital_combiner; }
    };

    inline CMat effective_channel(const ChannelMatrix &h, const CMat &analog_precoder)
    {
        if (h.cols() != analog_precoder.rows())
            throw std::invalid_argument("effective_channel: dimension mismatch");
        return h.entries * analog_precoder;
    }

    struct SvdDesign
    {
        CMat digital_precoder; // top N_s right singular vectors
        CMat optimal_combiner; // top N_s left singular vectors
        bool rank_deficient = false;
    };

    // Right/left singular vectors of the effective channel. With an analog stage given, F_BB is
    // rescaled so that |F_RF F_BB|_F^2 = N_s.
    inline SvdDesign svd_precoder_combiner(const CMat &effective, int ns, const CMat *analog = nullptr)
    {
        if (ns < 1 || ns > std::min(effective.rows(), effective.cols()))
            throw std::invalid_argument("svd_precoder_combiner: N_s must be in [1, min(dims)]");
        Eigen::BDCSVD<CMat> svd(effective, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto &sv = svd.singularValues();
        SvdDesign d;
        d.digital_precoder = svd.matrixV().leftCols(ns);
        d.optimal_combiner = svd.matrixU().leftCols(ns);
        double tol = sv.size() ? sv[0] * 1e-12 * std::max(effective.rows(), effective.cols()) : 0.0;
        for (int i = 0; i < ns; ++i)
            if (!(sv[i] > tol))
            {
                d.rank_deficient = true;
                d.digital_precoder.col(i).setZero();
                d.optimal_combiner.col(i).setZero();
            }
        if (analog)
        {
            double n = (*analog * d.digital_precoder).norm();
            if (n > 0.0)
                d.digital_precoder *= std::sqrt(double(ns)) / n;
        }
        return d;
    }

    struct CombinerSplit
    {
        CMat analog_combiner;
        CMat digital_combiner;
        double residual = 0.0;
    };

    // Phase extraction for the analog stage, least squares for the digital stage, then |W|_F^2 = N_s
    inline CombinerSplit decompose_combiner(const CMat &w_opt, int nr, int lr)
    {
        const int ns = (int)w_opt.cols();
        if (w_opt.rows() != nr)
            throw std::invalid_argument("decompose_combiner: combiner rows differ from N_r");
        if (lr < ns)
            throw std::invalid_argument("decompose_combiner: L_r must be >= N_s");
        const double s = 1.0 / std::sqrt(double(nr));
        CombinerSplit out;
        out.analog_combiner.resize(nr, lr);
        for (int c = 0; c < lr; ++c)
            for (int i = 0; i < nr; ++i)
            {
                double ph = c < ns ? std::arg(w_opt(i, c)) : 2.0 * pi * double(i) * double(c - ns + 1) / double(nr);
                out.analog_combiner(i, c) = std::polar(s, ph);
            }
        out.digital_combiner = out.analog_combiner.completeOrthogonalDecomposition().solve(w_opt);
        double n = (out.analog_combiner * out.digital_combiner).norm();
        if (n > 0.0)
            out.digital_combiner *= std::sqrt(double(ns)) / n;
        out.residual = (w_opt - out.analog_combiner * out.digital_combiner).norm();
        return out;
    }

    struct SpectralEfficiency
    {
        double value = 0.0;
        bool pseudo_inverse = false;
    };

    // log2 det(I + rho/N_s Rn^-1 W^H H F F^H H^H W), Rn = sigma^2 W^H W
    inline SpectralEfficiency spectral_efficiency_ex(const CMat &F, const CMat &W, const CMat &H, double rho, double sigma2)
    {
        if (H.cols() != F.rows() || H.rows() != W.rows() || F.cols() != W.cols())
            throw std::invalid_argument("spectral_efficiency: dimension mismatch");
        const Eigen::Index ns = F.cols();
        CMat Rn = sigma2 * (W.adjoint() * W);
        CMat G = W.adjoint() * H * F;
        SpectralEfficiency out;
        Eigen::SelfAdjointEigenSolver<CMat> es(Rn);
        const auto &ev = es.eigenvalues();
        CMat Rinv;
        if (ev.size() == 0 || !(ev.minCoeff() > 1e-12 * std::max(ev.maxCoeff(), 1e-300)))
        {
            out.pseudo_inverse = true;
            Rinv = Rn.completeOrthogonalDecomposition().pseudoInverse();
        }
        else
            Rinv = es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
        CMat M = CMat::Identity(ns, ns) + (rho / double(ns)) * Rinv * G * G.adjoint();
        Eigen::PartialPivLU<CMat> lu(M);
        const CMat &U = lu.matrixLU();
        double logdet = 0.0;
        for (Eigen::Index i = 0; i < ns; ++i)
            logdet += std::log(std::abs(U(i, i)));
        out.value = std::max(0.0, logdet / std::log(2.0));
        return out;
    }

    inline double spectral_efficiency(const CMat &F, const CMat &W, const CMat &H, double rho, double sigma2)
    {
        return spectral_efficiency_ex(F, W, H, rho, sigma2).value;
    }

    inline double spectral_efficiency(const Beamformers &b, const ChannelMatrix &h, double rho, double sigma2)
    {
        return spectral_efficiency(b.precoder(), b.combiner(), h.entries, rho, sigma2);
    }

    // Searched analog beam, digital stage and combiner designed on `design`
    inline Beamformers airy_beamformers(const BeamVector &f, const ChannelMatrix &design, int lr = 1, int ns = 1)
    {
        Beamformers b;
        b.analog_precoder = f.weights;
        CMat heff = effective_channel(design, b.analog_precoder);
        auto d = svd_precoder_combiner(heff, ns, &b.analog_precoder);
        b.digital_precoder = d.digital_precoder;
        auto w = decompose_combiner(d.optimal_combiner, (int)design.rows(), lr);
        b.analog_combiner = w.analog_combiner;
        b.digital_combiner = w.digital_combiner;
        b.combiner_residual = w.residual;
        return b;
    }

    // Full-digital SVD design on `design`
    inline Beamformers full_digital_beamformers(const ChannelMatrix &design, int ns = 1)
    {
        auto d = svd_precoder_combiner(design.entries, ns);
        Beamformers b;
        b.full_digital = true;
        b.analog_precoder = d.digital_precoder;
        b.digital_precoder = CMat::Identity(ns, ns);
        b.analog_combiner = d.optimal_combiner;
        b.digital_combiner = CMat::Identity(ns, ns);
        return b;
    }

    // ---------- Experiments ----------

    enum class EvalScheme
    {
        PerfectCSI,
        Exhaustive,
        Hierarchical,
        LowComplexity,
        NearField,
        FarField,
        NonBlockedLoS,
        NLoSOnly,
        ExhaustiveBlockedDesign
    };

    inline std::string to_string(EvalScheme s)
    {
        switch (s)
        {
        case EvalScheme::PerfectCSI:
            return "perfect_csi";
        case EvalScheme::Exhaustive:
            return "exhaustive";
        case EvalScheme::Hierarchical:
            return "hier";
        case EvalScheme::LowComplexity:
            return "lowc";
        case EvalScheme::NearField:
            return "nf";
        case EvalScheme::FarField:
            return "ff";
        case EvalScheme::NonBlockedLoS:
            return "nonblocked_los";
        case EvalScheme::NLoSOnly:
            return "nlos_only";
        case EvalScheme::ExhaustiveBlockedDesign:
            return "exhaustive_blocked_design";
        }
        return "unknown";
    }

    inline EvalScheme parse_eval_scheme(const std::string &s)
    {
        for (auto v : {EvalScheme::PerfectCSI, EvalScheme::Exhaustive, EvalScheme::Hierarchical,
                       EvalScheme::LowComplexity, EvalScheme::NearField, EvalScheme::FarField,
                       EvalScheme::NonBlockedLoS, EvalScheme::NLoSOnly, EvalScheme::ExhaustiveBlockedDesign})
            if (to_string(v) == s)
                return v;
        throw std::invalid_argument("unknown scheme '" + s + "'");
    }

    inline bool is_search_scheme(EvalScheme s)
    {
        return s == EvalScheme::Exhaustive || s == EvalScheme::Hierarchical || s == EvalScheme::LowComplexity ||
               s == EvalScheme::NearField || s == EvalScheme::FarField || s == EvalScheme::ExhaustiveBlockedDesign;
    }

    inline SearchScheme search_scheme_of(EvalScheme s)
    {
        switch (s)
        {
        case EvalScheme::Exhaustive:
        case EvalScheme::ExhaustiveBlockedDesign:
            return SearchScheme::Exhaustive;
        case EvalScheme::Hierarchical:
            return SearchScheme::Hierarchical;
        case EvalScheme::LowComplexity:
            return SearchScheme::LowComplexity;
        case EvalScheme::NearField:
            return SearchScheme::NearField;
        case EvalScheme::FarField:
            return SearchScheme::FarField;
        default:
            throw std::invalid_argument("search_scheme_of: not a search scheme");
        }
    }

    inline std::vector<EvalScheme> default_schemes()
    {
        return {EvalScheme::PerfectCSI, EvalScheme::Exhaustive, EvalScheme::Hierarchical, EvalScheme::LowComplexity,
                EvalScheme::NearField, EvalScheme::FarField, EvalScheme::NonBlockedLoS, EvalScheme::NLoSOnly};
    }

    struct ExperimentConfig
    {
        ScenarioConfig scenario;
        ChannelModel model = ChannelModel::CGWCM;
        std::vector<NlosRay> rays;
        SamplingTargets targets;
        PlanOptions plan_options;
        TrainingConfig training;
        double target_los_se = 15.4; // sets rho when > 0; otherwise training.transmit_power is used
        int streams = 1;
        int rx_rf_chains = 1;
    };

    // Channels of one link realization, all on the unblocked-GCM scale
    struct LinkChannels
    {
        ChannelMatrix blocked;     // quasi-LoS + NLoS
        ChannelMatrix nonblocked;  // LoS + NLoS
        ChannelMatrix nlos;        // NLoS only
        double occlusion = 0.0;
        double rho = 1.0;
    };

    inline LinkChannels build_link(const ExperimentConfig &e, const ScenarioConfig &s)
    {
        LinkChannels l;
        ChannelMatrix los = calibrated_channel(s, e.model, false);
        ChannelMatrix q = s.blockage ? calibrated_channel(s, e.model, true) : los;
        double p_ref = los.entries.squaredNorm();
        l.nlos = {nlos_component(s, e.rays, p_ref), ChannelModel::Synthetic, true};
        l.nonblocked = synth_multipath_channel(s, los, e.rays, p_ref);
        l.blocked = synth_multipath_channel(s, q, e.rays, p_ref);
        l.occlusion = occlusion_fraction(s);
        if (e.target_los_se > 0.0)
        {
            Eigen::BDCSVD<CMat> svd(l.nonblocked.entries);
            double s0 = svd.singularValues()[0];
            l.rho = (std::pow(2.0, e.target_los_se) - 1.0) * e.training.noise_power / (s0 * s0);
        }
        else
            l.rho = e.training.transmit_power;
        return l;
    }

    struct SchemeOutcome
    {
        EvalScheme scheme = EvalScheme::PerfectCSI;
        double spectral_efficiency = 0.0;
        int overhead = 0;
        bool pseudo_inverse = false;
        BeamParams selected;
    };

    inline std::uint64_t scheme_seed(std::uint64_t seed, EvalScheme s)
    {
        return seed * 16u + static_cast<std::uint64_t>(s) + 1u;
    }

    inline SchemeOutcome evaluate_scheme(EvalScheme scheme, const ExperimentConfig &e, const ScenarioConfig &s,
                                         const SamplingPlan &plan, const LinkChannels &l, std::uint64_t seed,
                                         SearchResult *trace_out = nullptr)
    {
        const double s2 = e.training.noise_power;
        SchemeOutcome o;
        o.scheme = scheme;
        Beamformers b;
        const ChannelMatrix *eval_on = &l.blocked;
        switch (scheme)
        {
        case EvalScheme::PerfectCSI:
            b = full_digital_beamformers(l.blocked, e.streams);
            break;
        case EvalScheme::NonBlockedLoS:
            b = full_digital_beamformers(l.nonblocked, e.streams);
            break;
        case EvalScheme::NLoSOnly:
            b = full_digital_beamformers(l.nlos, e.streams);
            eval_on = &l.nlos;
            break;
        default:
        {
            TrainingConfig tc = e.training;
            tc.transmit_power = l.rho;
            tc.rng_seed = scheme_seed(seed, scheme == EvalScheme::ExhaustiveBlockedDesign ? EvalScheme::Exhaustive : scheme);
            SearchResult r = run_search(search_scheme_of(scheme), l.blocked, tc, s, plan);
            const ChannelMatrix &design = scheme == EvalScheme::ExhaustiveBlockedDesign ? l.blocked : l.nonblocked;
            b = airy_beamformers(r.selected, design, e.rx_rf_chains, e.streams);
            o.overhead = r.overhead;
            o.selected = r.selected.params;
            if (trace_out)
                *trace_out = std::move(r);
        }
        }
        auto se = spectral_efficiency_ex(b.precoder(), b.combiner(), eval_on->entries, l.rho, s2);
        o.spectral_efficiency = se.value;
        o.pseudo_inverse = se.pseudo_inverse;
        if (trace_out)
            trace_out->spectral_efficiency = se.value;
        return o;
    }

    // ---------- Sweeps ----------

    enum class SweepVariable
    {
        BlockageHeight,
        BlockageDistance,
        Overhead,
        TransmitPower
    };

    inline std::string to_string(SweepVariable v)
    {
        switch (v)
        {
        case SweepVariable::BlockageHeight:
            return "height";
        case SweepVariable::BlockageDistance:
            return "distance";
        case SweepVariable::Overhead:
            return "overhead";
        case SweepVariable::TransmitPower:
            return "power";
        }
        return "unknown";
    }

    inline SweepVariable parse_sweep_variable(const std::string &s)
    {
        for (auto v : {SweepVariable::BlockageHeight, SweepVariable::BlockageDistance, SweepVariable::Overhead,
                       SweepVariable::TransmitPower})
            if (to_string(v) == s)
                return v;
        throw std::invalid_argument("unknown sweep variable '" + s + "' (expected height|distance|overhead|power)");
    }

    struct SweepSpec
    {
        SweepVariable swept_variable = SweepVariable::BlockageHeight;
        std::vector<double> grid;
        std::vector<EvalScheme> schemes = default_schemes();
        int repetitions = 1;
        std::uint64_t base_seed = 1;

        void validate() const
        {
            if (grid.empty())
                throw std::invalid_argument("sweep: grid must not be empty");
            if (repetitions < 1)
                throw std::invalid_argument("sweep: repetitions must be >= 1");
            if (schemes.empty())
                throw std::invalid_argument("sweep: no schemes selected");
        }
    };

    struct SweepRow
    {
        std::string sweep_variable;
        double value = 0.0;
        std::string scheme;
        std::uint64_t seed = 0;
        double spectral_efficiency = 0.0;
        int overhead = 0;
        std::string notes;
    };

    // Scenario with the swept geometry variable applied; plane spacing follows the blockage width
    inline ScenarioConfig with_blockage(const ScenarioConfig &base, double height, std::optional<double> distance = {})
    {
        if (!base.blockage)
            throw std::invalid_argument("sweep: scenario has no blockage to vary");
        ScenarioConfig s = base;
        s.blockage->extent_above = height;
        if (distance)
            s.blockage->distance_from_tx = *distance;
        s.validate();
        return s;
    }

    inline std::string fmt_notes(double occlusion, bool pinv)
    {
        std::ostringstream os;
        os.precision(6);
        os << "occlusion=" << occlusion;
        if (pinv)
            os << ";pinv";
        return os.str();
    }

    // SE of the best-measured codeword after `budget` slots
    inline double se_at_budget(const SearchResult &r, int budget, const LinkChannels &l, const ExperimentConfig &e,
                               const ScenarioConfig &s)
    {
        ArrayConfig local = s.tx;
        local.center_offset = 0.0;
        auto y = element_positions(local);
        int n = std::min<int>(budget, (int)r.trace.size());
        if (n < 1)
            return 0.0;
        std::size_t best = 0;
        for (int i = 1; i < n; ++i)
            if (r.trace[i].power > r.trace[best].power)
                best = i;
        BeamVector f = airy_beam_vector(r.trace[best].params, y, s.carrier);
        auto b = airy_beamformers(f, l.nonblocked, e.rx_rf_chains, e.streams);
        return spectral_efficiency(b, l.blocked, l.rho, e.training.noise_power);
    }

    inline std::vector<SweepRow> run_sweep(const SweepSpec &spec, const ExperimentConfig &e)
    {
        spec.validate();
        e.scenario.validate();
        const bool overhead = spec.swept_variable == SweepVariable::Overhead;
        const std::size_t points = overhead ? 1 : spec.grid.size();
        const std::size_t jobs = points * spec.repetitions;
        std::vector<std::vector<SweepRow>> out(jobs);
        SamplingPlan base_plan = solve_sampling_plan(e.targets, e.scenario, e.plan_options);

        parallel_for(jobs, [&](std::size_t job)
                     {
            std::size_t ip = job % points, rep = job / points;
            std::uint64_t seed = spec.base_seed + 100003u * rep + ip;
            double value = spec.grid[ip];
            ScenarioConfig s = e.scenario;
            ExperimentConfig ex = e;
            switch (spec.swept_variable)
            {
            case SweepVariable::BlockageHeight:
                s = with_blockage(e.scenario, value);
                break;
            case SweepVariable::BlockageDistance:
                s = with_blockage(e.scenario, e.scenario.blockage->extent_above, value);
                break;
            default:
                break;
            }
            SamplingPlan plan = s.link_distance == e.scenario.link_distance ? base_plan
                                                                            : solve_sampling_plan(e.targets, s, e.plan_options);
            LinkChannels l = build_link(ex, s);
            if (spec.swept_variable == SweepVariable::TransmitPower)
                l.rho *= std::pow(10.0, value / 10.0);
            auto &rows = out[job];
            for (EvalScheme sc : spec.schemes)
            {
                if (overhead)
                {
                    if (!is_search_scheme(sc))
                        continue;
                    SearchResult r;
                    auto o = evaluate_scheme(sc, ex, s, plan, l, seed, &r);
                    for (double g : spec.grid)
                        rows.push_back({to_string(spec.swept_variable), g, to_string(sc), seed,
                                        se_at_budget(r, (int)std::lround(g), l, ex, s), std::min<int>((int)std::lround(g), o.overhead),
                                        fmt_notes(l.occlusion, false)});
                    continue;
                }
                auto o = evaluate_scheme(sc, ex, s, plan, l, seed);
                rows.push_back({to_string(spec.swept_variable), value, to_string(sc), seed, o.spectral_efficiency,
                                o.overhead, fmt_notes(l.occlusion, o.pseudo_inverse)});
            } });

        std::vector<SweepRow> rows;
        for (auto &v : out)
            rows.insert(rows.end(), v.begin(), v.end());
        return rows;
    }

} // namespace qlos

#endif
