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

#include <catch2/catch_amalgamated.hpp>

#include "irscov/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace irscov;

namespace
{
    double deg(double d) { return d * std::numbers::pi / 180.0; }

    Scenario compact_scenario(double m, std::int64_t n, double theta_db)
    {
        Scenario sc;
        sc.geom = LinkGeometry::from_carrier(3.0, 3.0, deg(85.0), 4.0, 3e9);
        sc.fading = FadingConfig::uniform(m);
        sc.sys.power_w = 2.5;
        sc.sys.noise_var = noise_power_watts(-174.0, 1e8, 10.0);
        sc.sys.n_elements = n;
        sc.sys.theta = db_to_linear(theta_db);
        return sc;
    }

    struct Moments
    {
        double mean, se;
    };

    template <class F>
    Moments sample_mean(std::int64_t n, F draw)
    {
        double s = 0.0, s2 = 0.0;
        for (std::int64_t i = 0; i < n; ++i)
        {
            const double v = draw(i);
            s += v;
            s2 += v * v;
        }
        const double mean = s / n;
        return {mean, std::sqrt((s2 / n - mean * mean) / n)};
    }
}

TEST_CASE("Nakagami samples have the right power and mean", "[montecarlo]")
{
    for (NakagamiParams p : {NakagamiParams{0.5, 1.0}, NakagamiParams{1.0, 2.0}, NakagamiParams{2.7, 0.3}})
    {
        const std::int64_t n = 1'000'000;
        const Moments power = sample_mean(n, [&](std::int64_t i) {
            SampleRng rng(42, static_cast<std::uint64_t>(i));
            const double z = sample_nakagami(p, rng);
            return z * z;
        });
        const Moments amplitude = sample_mean(n, [&](std::int64_t i) {
            SampleRng rng(43, static_cast<std::uint64_t>(i));
            return sample_nakagami(p, rng);
        });
        const double expected_mean = std::exp(std::lgamma(p.m + 0.5) - std::lgamma(p.m)) * std::sqrt(p.omega / p.m);
        INFO("m = " << p.m);
        CHECK(std::abs(power.mean - p.omega) <= 3.0 * power.se);
        CHECK(std::abs(amplitude.mean - expected_mean) <= 3.0 * amplitude.se);
    }
}

TEST_CASE("Rayleigh power passes an exponential KS test", "[montecarlo]")
{
    const int n = 100'000;
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i)
    {
        SampleRng rng(7, static_cast<std::uint64_t>(i));
        const double z = sample_nakagami({1.0, 1.0}, rng);
        x[static_cast<std::size_t>(i)] = z * z;
    }
    std::sort(x.begin(), x.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const double f = 1.0 - std::exp(-x[static_cast<std::size_t>(i)]);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    // asymptotic critical value at the 1% level
    CHECK(d < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("simulation is deterministic across workers and chunking", "[montecarlo]")
{
    const Scenario sc = compact_scenario(1.0, 100, 52.0);
    SimConfig cfg;
    cfg.samples = 20000;
    cfg.seed = 99;
    const SimEstimate a = simulate_coverage(sc, cfg, 1);
    const SimEstimate b = simulate_coverage(sc, cfg, 4);
    cfg.streams = 7;
    const SimEstimate c = simulate_coverage(sc, cfg, 3);
    CHECK(a.coverage == b.coverage);
    CHECK(a.coverage == c.coverage);
    CHECK(a.std_error == c.std_error);
    CHECK(a.std_error == Catch::Approx(std::sqrt(a.coverage * (1.0 - a.coverage) / cfg.samples)).epsilon(1e-9));

    cfg.seed = 100;
    CHECK(simulate_coverage(sc, cfg, 2).coverage != a.coverage);
}

TEST_CASE("simulation reductions", "[montecarlo]")
{
    SimConfig cfg;
    cfg.samples = 20000;
    Scenario sc = compact_scenario(0.5, 200, -300.0);
    CHECK(simulate_coverage(sc, cfg).coverage == 1.0);

    // N = 0 combined reproduces the direct-only estimate on the same draws
    sc = compact_scenario(0.5, 0, 50.0);
    const SimEstimate combined = simulate_coverage(sc, cfg);
    sc.mode = Mode::direct_only;
    const SimEstimate direct = simulate_coverage(sc, cfg);
    CHECK(combined.coverage == direct.coverage);
    CHECK(std::abs(direct.coverage - coverage_direct(sc).probability) <= std::max(0.01, 3.0 * direct.std_error));
}

TEST_CASE("simulation agrees with the analytic coverage", "[montecarlo]")
{
    SimConfig cfg;
    cfg.samples = 100000;
    cfg.seed = 3;
    for (double m : {0.5, 1.0, 2.0})
    {
        const FadingDraws draws = draw_fading(FadingConfig::uniform(m), 500, cfg, 4);
        for (double theta_db : {46.0, 50.0, 53.0, 56.0})
        {
            for (Mode mode : {Mode::combined, Mode::direct_only, Mode::irs_only})
            {
                Scenario sc = compact_scenario(m, 500, theta_db);
                sc.mode = mode;
                const SimEstimate mc = coverage_from_draws(draws, sc);
                const double analytic = coverage(sc).probability;
                INFO("m = " << m << " theta = " << theta_db << " mode " << to_string(mode));
                CHECK(std::abs(mc.coverage - analytic) <= std::max(0.01, 3.0 * mc.std_error));
            }
        }
    }
}

TEST_CASE("antithetic pairs", "[montecarlo]")
{
    const Scenario sc = compact_scenario(1.0, 100, 50.0);
    SimConfig cfg;
    cfg.samples = 40000;
    cfg.antithetic = true;
    const SimEstimate e = simulate_coverage(sc, cfg, 2);
    CHECK(e.samples_used == cfg.samples);
    CHECK(e.std_error > 0.0);
    CHECK(std::abs(e.coverage - coverage(sc).probability) <= std::max(0.01, 3.0 * e.std_error));
    cfg.samples = 40001;
    CHECK_THROWS_AS(simulate_coverage(sc, cfg), std::invalid_argument);
}

TEST_CASE("empirical channel hardening", "[montecarlo]")
{
    SimConfig cfg;
    cfg.samples = 20000;
    cfg.seed = 17;
    for (double m : {0.5, 1.0, 2.0})
    {
        for (std::int64_t n : {10, 100, 500})
        {
            const HardeningEstimate h = empirical_hardening(draw_fading(FadingConfig::uniform(m), n, cfg, 4));
            INFO("m = " << m << " N = " << n << " kappa " << h.kappa << " +- " << h.std_error);
            CHECK(std::abs(h.kappa - channel_hardening_kappa(n, m)) <= 3.0 * h.std_error);
        }
    }
}
