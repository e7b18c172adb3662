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

#include "irscov/inversion.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace irscov;

namespace
{
    double deg(double d) { return d * std::numbers::pi / 180.0; }

    double normal_cdf(double x, double mean, double sd) { return 0.5 * std::erfc(-(x - mean) / (sd * std::numbers::sqrt2)); }

    // CDF of scale * Z, Z ~ Nakagami(m, omega): P(m, m (t/scale)^2 / omega)
    double nakagami_cdf(const NakagamiParams &p, double scale, double t)
    {
        const double x = t / scale;
        return boost::math::gamma_p(p.m, p.m * x * x / p.omega);
    }
}

TEST_CASE("point mass", "[inversion]")
{
    const ChannelTransform atom(GaussianAmplitude{1.0, 0.0});
    const InversionResult below = gil_pelaez_cdf(atom, 0.5);
    const InversionResult above = gil_pelaez_cdf(atom, 1.7);
    INFO(below.raw << " " << above.raw);
    CHECK(below.converged);
    CHECK(above.converged);
    CHECK(below.probability == Catch::Approx(0.0).margin(1e-6));
    CHECK(above.probability == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("Gaussian CDF over 50 points", "[inversion]")
{
    const double mean = 10.0, sd = 2.0;
    const ChannelTransform g(GaussianAmplitude{mean, sd * sd});
    InversionConfig cfg;
    cfg.abs_tol = 1e-9;
    double worst = 0.0;
    for (int i = 0; i < 50; ++i)
    {
        const double t = 20.0 * i / 49.0;
        const InversionResult r = gil_pelaez_cdf(g, t, cfg);
        CHECK(r.converged);
        worst = std::max(worst, std::abs(r.probability - normal_cdf(t, mean, sd)));
    }
    CHECK(worst < 1e-8);
    CHECK(gil_pelaez_cdf(g, mean).probability == Catch::Approx(0.5).margin(1e-9));
}

TEST_CASE("Nakagami and gamma CDFs against the incomplete gamma function", "[inversion]")
{
    for (NakagamiParams p : {NakagamiParams{0.5, 1.0}, NakagamiParams{1.0, 2.0}, NakagamiParams{2.0, 1.0},
                             NakagamiParams{3.3, 0.5}})
    {
        const double scale = 3e-8; // physical amplitude scale
        const ChannelTransform z(NakagamiAmplitude{p, scale});
        for (double q : {0.05, 0.3, 0.9, 1.6, 2.5})
        {
            const double t = q * scale * std::sqrt(p.omega);
            const InversionResult r = gil_pelaez_cdf(z, t);
            INFO("m = " << p.m << " t/scale = " << q << " method " << r.method << " blocks " << r.panels);
            CHECK(r.converged);
            CHECK(std::abs(r.probability - nakagami_cdf(p, scale, t)) < 2e-6);
        }
    }
    const ChannelTransform gam(GammaSum{12.0, 0.25});
    for (double t : {0.5, 2.0, 3.0, 4.5, 8.0})
        CHECK(std::abs(gil_pelaez_cdf(gam, t).probability - boost::math::gamma_p(12.0, t / 0.25)) < 2e-6);
}

TEST_CASE("sum of Nakagami and gamma against simulation", "[inversion][montecarlo]")
{
    const NakagamiParams p{1.0, 1.0};
    const ChannelTransform sum = combine(ChannelTransform(NakagamiAmplitude{p, 1.0}), ChannelTransform(GammaSum{3.0, 0.4}));
    std::mt19937_64 rng(5);
    std::gamma_distribution<double> hop(1.0, 1.0), cascade(3.0, 0.4);
    const int n = 400'000;
    std::vector<double> samples(n);
    for (double &s : samples)
        s = std::sqrt(hop(rng)) + cascade(rng);
    for (double t : {0.5, 1.5, 2.2, 3.5})
    {
        const double empirical =
            static_cast<double>(std::count_if(samples.begin(), samples.end(), [&](double v) { return v <= t; })) / n;
        const double se = std::sqrt(empirical * (1.0 - empirical) / n);
        const InversionResult r = gil_pelaez_cdf(sum, t);
        INFO("t = " << t);
        CHECK(std::abs(r.probability - empirical) <= std::max(4.0 * se, 1e-4));
    }
}

TEST_CASE("default composite channel against simulation", "[inversion][montecarlo]")
{
    // defaults, N = 500, m = 1, threshold at 5 dB
    const LinkGeometry g = LinkGeometry::from_carrier(500.0, 100.0, deg(85.0), 4.0, 3e9);
    const FadingConfig f = FadingConfig::uniform(1.0);
    const double noise = noise_power_watts(-174.0, 1e8, 10.0);
    const double t = std::sqrt(db_to_linear(5.0) * noise / 2.5);
    const ChannelTransform total = combine(direct_transform(g, f.bs_ue), cascade_transform(g, f, 500, Regime::asymptotic_clt));

    std::mt19937_64 rng(11);
    std::exponential_distribution<double> e(1.0);
    const double c1 = path_gain_direct(g), rho = path_gain_cascade(g);
    const int n = 100'000;
    int below = 0;
    for (int i = 0; i < n; ++i)
    {
        double cascade = 0.0;
        for (int k = 0; k < 500; ++k)
            cascade += std::sqrt(e(rng) * e(rng));
        below += (rho * cascade + c1 * std::sqrt(e(rng)) <= t);
    }
    const InversionResult r = gil_pelaez_cdf(total, t);
    CHECK(std::abs(r.probability - static_cast<double>(below) / n) < 0.01);
}

TEST_CASE("CDF is monotone over the bulk", "[inversion][property]")
{
    const InversionConfig cfg;
    const std::vector<ChannelTransform> cases = {
        ChannelTransform(NakagamiAmplitude{{0.5, 1.0}, 1.0}),
        ChannelTransform(GammaSum{2.0, 1.0}),
        combine(ChannelTransform(NakagamiAmplitude{{2.0, 1.0}, 1.0}), ChannelTransform(GaussianAmplitude{4.0, 0.25})),
        combine(ChannelTransform(NakagamiAmplitude{{1.0, 1.0}, 1.0}), ChannelTransform(GammaSum{500.0, 0.01})),
    };
    for (const ChannelTransform &cf : cases)
    {
        const double lo = std::max(0.0, cf.mean() - 4.0 * std::sqrt(cf.variance()));
        const double hi = cf.mean() + 4.0 * std::sqrt(cf.variance());
        double previous = -1.0;
        for (int i = 0; i < 50; ++i)
        {
            const double t = lo + (hi - lo) * i / 49.0;
            const InversionResult r = gil_pelaez_cdf(cf, t, cfg);
            INFO(cf.describe() << " t = " << t);
            CHECK(r.in_bounds);
            CHECK(r.probability >= previous - 2.0 * cfg.abs_tol);
            previous = r.probability;
        }
    }
}

TEST_CASE("small-frequency series matches direct evaluation", "[inversion]")
{
    const std::vector<ChannelTransform> cases = {
        ChannelTransform(NakagamiAmplitude{{1.0, 1.0}, 1.0}),
        ChannelTransform(NakagamiAmplitude{{2.5, 1.0}, 1.0}),
        combine(ChannelTransform(NakagamiAmplitude{{0.5, 1.0}, 1.0}), ChannelTransform(GammaSum{5.0, 0.3})),
        ChannelTransform(GaussianAmplitude{2.0, 1.0}),
    };
    for (const ChannelTransform &cf : cases)
    {
        for (double t : {0.2, 1.0, 3.0})
        {
            const detail::GilPelaezIntegrand k(cf, t);
            CHECK(std::abs(k.series(1e-6) - k.direct(1e-6)) < 1e-8);
            CHECK(std::abs(k.series(1e-3) - k.direct(1e-3)) < 1e-8);
        }
    }
}

TEST_CASE("ccdf identities", "[inversion]")
{
    const ChannelTransform z(NakagamiAmplitude{{1.5, 1.0}, 1.0});
    CHECK(ccdf(z, 0.0).probability == 1.0);
    CHECK(ccdf(z, 50.0).probability == Catch::Approx(0.0).margin(1e-9));
    for (double t : {0.4, 0.9, 1.3})
    {
        const InversionResult c = ccdf(z, t);
        const InversionResult f = gil_pelaez_cdf(z, t);
        CHECK(c.probability + f.probability == 1.0);
    }
}

TEST_CASE("far tails use the Chernoff bound", "[inversion]")
{
    const ChannelTransform z(NakagamiAmplitude{{1.0, 1.0}, 1e-8});
    const InversionResult r = gil_pelaez_cdf(z, 1e-6);
    CHECK(r.method == "chernoff");
    CHECK(r.probability == 1.0);
    CHECK(r.abs_error < 1e-7);

    InversionConfig off;
    off.chernoff = false;
    const InversionResult direct = gil_pelaez_cdf(z, 6e-8, off);
    CHECK(direct.method == "gil-pelaez");
    CHECK(direct.probability == Catch::Approx(1.0 - std::exp(-36.0)).margin(1e-6));
}

TEST_CASE("inversion reports an exhausted budget", "[inversion]")
{
    InversionConfig cfg;
    cfg.max_panels = 3;
    const InversionResult r = gil_pelaez_cdf(ChannelTransform(NakagamiAmplitude{{0.5, 1.0}, 1.0}), 0.7, cfg);
    CHECK_FALSE(r.converged);
    CHECK_FALSE(r.diagnostics.empty());
    CHECK_THROWS_AS(gil_pelaez_cdf(ChannelTransform(GammaSum{1.0, 1.0}), 1.0, InversionConfig{0.0}), std::invalid_argument);
}

TEST_CASE("Levin u-transform", "[inversion]")
{
    // alternating harmonic series -> ln 2
    std::vector<double> sums;
    double s = 0.0;
    for (int k = 1; k <= 14; ++k)
    {
        s += ((k % 2) ? 1.0 : -1.0) / k;
        sums.push_back(s);
    }
    CHECK(std::abs(detail::levin_u(sums, 12) - std::log(2.0)) < 1e-10);

    // sum 1/k^2 -> pi^2/6, a logarithmically convergent sequence
    sums.clear();
    s = 0.0;
    for (int k = 1; k <= 14; ++k)
    {
        s += 1.0 / (static_cast<double>(k) * k);
        sums.push_back(s);
    }
    CHECK(std::abs(detail::levin_u(sums, 12) - std::numbers::pi * std::numbers::pi / 6.0) < 1e-7);
}
