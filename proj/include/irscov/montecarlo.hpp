// SPDX-License-Identifier: Apache-2.0
//
// irscov - coverage analysis for IRS-aided links under Nakagami-m fading
// Copyright (C) 2026 The irscov authors
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

#ifndef IRSCOV_MONTECARLO_HPP
#define IRSCOV_MONTECARLO_HPP

#include "coverage.hpp"
#include "model.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <thread>
#include <vector>

namespace irscov
{
    struct SimConfig
    {
        std::int64_t samples = 100000;
        std::uint64_t seed = 1;
        std::int64_t streams = 64; // work units; results do not depend on this or on the worker count
        bool antithetic = false;

        void validate() const
        {
            detail::require(samples >= 1, "samples must be >= 1");
            detail::require(streams >= 1, "streams must be >= 1");
            detail::require(!antithetic || samples % 2 == 0, "antithetic sampling needs an even sample count");
        }
    };

    struct SimEstimate
    {
        double coverage = 0.0;
        double std_error = 0.0;
        std::int64_t samples_used = 0;
    };

    /// Counter-based generator: the stream of sample i depends only on (seed, i).
    class SampleRng
    {
      public:
        SampleRng(std::uint64_t seed, std::uint64_t index, bool mirrored = false)
            : key_(mix(seed ^ mix(index + 0x632be59bd9b4e019ULL))), mirrored_(mirrored)
        {
        }

        static std::uint64_t mix(std::uint64_t z)
        {
            z += 0x9e3779b97f4a7c15ULL;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return z ^ (z >> 31);
        }

        std::uint64_t next() { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

        /// Uniform on the open interval (0, 1); mirrored streams return 1 - u.
        double uniform()
        {
            const double u = (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
            return mirrored_ ? 1.0 - u : u;
        }

        /// Box-Muller; the second variate of each pair is kept for the next call.
        double normal()
        {
            if (has_spare_)
            {
                has_spare_ = false;
                return spare_;
            }
            const double radius = std::sqrt(-2.0 * std::log(uniform()));
            const double angle = 2.0 * std::numbers::pi * uniform();
            spare_ = radius * std::sin(angle);
            has_spare_ = true;
            return radius * std::cos(angle);
        }

        /// Gamma(shape, 1) by Marsaglia-Tsang; shapes below one are boosted with U^(1/shape).
        double gamma(double shape)
        {
            if (shape == 1.0)
                return -std::log(uniform());
            if (shape == 0.5)
            {
                const double z = normal();
                return 0.5 * z * z;
            }
            if (shape < 1.0)
            {
                const double g = gamma(shape + 1.0);
                return g * std::pow(uniform(), 1.0 / shape);
            }
            const double d = shape - 1.0 / 3.0;
            const double c = 1.0 / std::sqrt(9.0 * d);
            for (;;)
            {
                double x, v;
                do
                {
                    x = normal();
                    v = 1.0 + c * x;
                } while (v <= 0.0);
                v = v * v * v;
                const double u = uniform();
                if (u < 1.0 - 0.0331 * x * x * x * x || std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
                    return d * v;
            }
        }

      private:
        std::uint64_t key_;
        std::uint64_t counter_ = 0;
        bool mirrored_;
        bool has_spare_ = false;
        double spare_ = 0.0;
    };

    /// Nakagami amplitude as the square root of a Gamma(m, omega/m) variate.
    inline double sample_nakagami(const NakagamiParams &p, SampleRng &rng)
    {
        return std::sqrt(rng.gamma(p.m) * p.omega / p.m);
    }

    /// Unscaled fading draws: direct[i] = |q| and cascade[i] = sum_n |g_n||h_n|.
    /// Geometry and threshold enter only through scale factors, so one set of draws serves a whole sweep.
    struct FadingDraws
    {
        std::vector<double> direct;
        std::vector<double> cascade;
        std::int64_t n_elements = 0;
        bool antithetic = false;
    };

    namespace detail
    {
        template <class Body>
        void parallel_chunks(std::int64_t total, std::int64_t chunks, unsigned jobs, Body body)
        {
            chunks = std::clamp<std::int64_t>(chunks, 1, total);
            const std::int64_t width = (total + chunks - 1) / chunks;
            std::atomic<std::int64_t> next{0};
            auto worker = [&] {
                for (std::int64_t c = next++; c < chunks; c = next++)
                    body(c * width, std::min(total, (c + 1) * width));
            };
            jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(chunks)));
            std::vector<std::thread> pool;
            for (unsigned j = 1; j < jobs; ++j)
                pool.emplace_back(worker);
            worker();
            for (std::thread &t : pool)
                t.join();
        }

        inline SampleRng sample_stream(const SimConfig &cfg, std::int64_t i)
        {
            // antithetic pairs share a stream and mirror every uniform
            if (cfg.antithetic)
                return SampleRng(cfg.seed, static_cast<std::uint64_t>(i / 2), (i % 2) == 1);
            return SampleRng(cfg.seed, static_cast<std::uint64_t>(i));
        }

        /// Mean and standard error of per-sample values; antithetic pairs are averaged first.
        template <class Value>
        SimEstimate mean_estimate(std::int64_t count, bool antithetic, Value value)
        {
            const std::int64_t step = antithetic ? 2 : 1;
            const std::int64_t units = count / step;
            double sum = 0.0, sum2 = 0.0;
            for (std::int64_t u = 0; u < units; ++u)
            {
                double v = 0.0;
                for (std::int64_t k = 0; k < step; ++k)
                    v += value(u * step + k);
                v /= static_cast<double>(step);
                sum += v;
                sum2 += v * v;
            }
            SimEstimate e;
            e.samples_used = count;
            e.coverage = sum / static_cast<double>(units);
            const double var = std::max(0.0, sum2 / static_cast<double>(units) - e.coverage * e.coverage);
            e.std_error = std::sqrt(var / static_cast<double>(units));
            return e;
        }
    }

    /// Draw the direct and cascade amplitudes for `cfg.samples` independent channel realizations.
    inline FadingDraws draw_fading(const FadingConfig &fading, std::int64_t n_elements, const SimConfig &cfg,
                                   unsigned jobs = 1)
    {
        fading.validate();
        cfg.validate();
        detail::require(n_elements >= 0, "element count must be >= 0");
        FadingDraws out;
        out.n_elements = n_elements;
        out.antithetic = cfg.antithetic;
        out.direct.resize(static_cast<std::size_t>(cfg.samples));
        out.cascade.resize(static_cast<std::size_t>(cfg.samples));
        detail::parallel_chunks(cfg.samples, cfg.streams, jobs, [&](std::int64_t begin, std::int64_t end) {
            for (std::int64_t i = begin; i < end; ++i)
            {
                SampleRng rng = detail::sample_stream(cfg, i);
                const double q = sample_nakagami(fading.bs_ue, rng);
                double sum = 0.0;
                for (std::int64_t n = 0; n < n_elements; ++n)
                    sum += sample_nakagami(fading.bs_irs, rng) * sample_nakagami(fading.irs_ue, rng);
                out.direct[static_cast<std::size_t>(i)] = q;
                out.cascade[static_cast<std::size_t>(i)] = sum;
            }
        });
        return out;
    }

    /// Empirical coverage P[SNR > theta] of the scenario's mode, evaluated on existing draws.
    inline SimEstimate coverage_from_draws(const FadingDraws &draws, const Scenario &sc)
    {
        sc.validate();
        detail::require(draws.n_elements == sc.sys.n_elements || sc.mode == Mode::direct_only,
                        "draws were made for a different element count");
        const double c1 = (sc.mode == Mode::irs_only) ? 0.0 : path_gain_direct(sc.geom);
        const double rho = (sc.mode == Mode::direct_only) ? 0.0 : path_gain_cascade(sc.geom);
        const double t = sc.sys.amplitude_threshold();
        const auto count = static_cast<std::int64_t>(draws.direct.size());
        return detail::mean_estimate(count, draws.antithetic, [&](std::int64_t i) {
            const auto k = static_cast<std::size_t>(i);
            // SNR > theta  <=>  (c1 |q| + rho sum) > t for nonnegative amplitudes
            return (c1 * draws.direct[k] + rho * draws.cascade[k] > t) ? 1.0 : 0.0;
        });
    }

    /// Brute-force coverage of one scenario.
    inline SimEstimate simulate_coverage(const Scenario &sc, const SimConfig &cfg, unsigned jobs = 1)
    {
        sc.validate();
        const std::int64_t n = (sc.mode == Mode::direct_only) ? 0 : sc.sys.n_elements;
        FadingDraws draws = draw_fading(sc.fading, n, cfg, jobs);
        draws.n_elements = sc.sys.n_elements;
        return coverage_from_draws(draws, sc);
    }

    struct HardeningEstimate
    {
        double kappa = 0.0;     // sample mean / sample standard deviation of |h_c|
        double std_error = 0.0; // delta-method standard error
        std::int64_t samples_used = 0;
    };

    /// Empirical mean-to-deviation ratio of the cascade amplitude.
    ///
    /// The standard error uses Var(r) ~ (1 - r g1 + r^2 (g2 - 1) / 4) / n with skewness g1 and kurtosis g2.
    inline HardeningEstimate empirical_hardening(const FadingDraws &draws)
    {
        const auto n = static_cast<double>(draws.cascade.size());
        detail::require(n >= 4, "need at least four draws");
        double mean = 0.0;
        for (double v : draws.cascade)
            mean += v;
        mean /= n;
        double m2 = 0.0, m3 = 0.0, m4 = 0.0;
        for (double v : draws.cascade)
        {
            const double d = v - mean, d2 = d * d;
            m2 += d2;
            m3 += d2 * d;
            m4 += d2 * d2;
        }
        m2 /= n;
        m3 /= n;
        m4 /= n;
        HardeningEstimate h;
        h.samples_used = static_cast<std::int64_t>(n);
        const double sd = std::sqrt(m2 * n / (n - 1.0));
        h.kappa = mean / sd;
        const double g1 = m3 / std::pow(m2, 1.5), g2 = m4 / (m2 * m2);
        const double r = h.kappa;
        h.std_error = std::sqrt(std::max(0.0, 1.0 - r * g1 + 0.25 * r * r * (g2 - 1.0)) / n);
        return h;
    }

} // namespace irscov

#endif
