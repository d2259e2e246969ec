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

#ifndef QLOS_TYPES_HPP
#define QLOS_TYPES_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace qlos
{
    using cd = std::complex<double>;
    using CMat = Eigen::MatrixXcd;
    using CVec = Eigen::VectorXcd;
    using RVec = Eigen::VectorXd;

    inline constexpr double speed_of_light = 299792458.0;
    inline constexpr double pi = 3.14159265358979323846;

    // Worker count; QLOS_THREADS overrides the hardware default
    inline unsigned thread_count()
    {
        if (const char *env = std::getenv("QLOS_THREADS"))
        {
            int n = std::atoi(env);
            if (n > 0)
                return (unsigned)n;
        }
        unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1u : hw;
    }

    // Static block partition of [0, n). Each index is handled by exactly one worker, so results
    // written to index-addressed slots do not depend on the thread count.
    template <typename Fn>
    void parallel_for(std::size_t n, Fn &&fn)
    {
        unsigned nt = std::min<std::size_t>(thread_count(), n);
        if (nt <= 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                fn(i);
            return;
        }
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> err(nt);
        pool.reserve(nt);
        for (unsigned t = 0; t < nt; ++t)
        {
            std::size_t lo = n * t / nt, hi = n * (t + 1) / nt;
            pool.emplace_back([lo, hi, t, &fn, &err]
                              {
                try { for (std::size_t i = lo; i < hi; ++i) fn(i); }
                catch (...) { err[t] = std::current_exception(); } });
        }
        for (auto &th : pool)
            th.join();
        for (auto &e : err)
            if (e)
                std::rethrow_exception(e);
    }

} // namespace qlos

#endif
