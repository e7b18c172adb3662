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

#ifndef IRSCOV_COVERAGE_HPP
#define IRSCOV_COVERAGE_HPP

#include "inversion.hpp"
#include "mgf.hpp"
#include "model.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace irscov
{
    enum class Mode
    {
        direct_only,
        irs_only,
        combined
    };

    inline const char *to_string(Mode m)
    {
        switch (m)
        {
        case Mode::direct_only: return "direct_only";
        case Mode::irs_only: return "irs_only";
        case Mode::combined: return "combined";
        }
        return "unknown";
    }

    /// One operating point: geometry, fading, link budget, operation mode and cascade model.
    struct Scenario
    {
        LinkGeometry geom;
        FadingConfig fading;
        SystemParams sys;
        Mode mode = Mode::combined;
        Regime regime = Regime::asymptotic_clt; // ignored for direct_only
        InversionConfig inversion;
        std::int64_t clt_floor = 50; // below this N the Gaussian model triggers a warning

        void validate() const
        {
            geom.validate();
            fading.validate();
            sys.validate();
            inversion.validate();
            detail::require(clt_floor >= 1, "clt_floor must be >= 1");
        }
    };

    struct CoverageResult
    {
        double probability = 0.0;
        double abs_error = 0.0;
        bool converged = true;
        std::string method;
        std::vector<std::string> diagnostics;
    };

    namespace detail
    {
        inline void require_mode(const Scenario &sc, Mode expected, const char *what)
        {
            require(sc.mode == expected, std::string(what) + ": scenario mode must be " + to_string(expected));
        }

        inline void warn_small_clt(const Scenario &sc, CoverageResult &r)
        {
            if (sc.regime == Regime::asymptotic_clt && sc.sys.n_elements < sc.clt_floor)
            {
                std::ostringstream msg;
                msg << "warning: Gaussian cascade model with N = " << sc.sys.n_elements << " below the floor of "
                    << sc.clt_floor;
                r.diagnostics.push_back(msg.str());
            }
        }

        inline CoverageResult from_inversion(const InversionResult &inv)
        {
            CoverageResult r;
            r.probability = inv.probability;
            r.abs_error = inv.abs_error;
            r.converged = inv.converged && inv.in_bounds;
            r.method = inv.method;
            std::ostringstream msg;
            msg << "truncation_omega=" << inv.truncation_omega << " panels=" << inv.panels
                << " cf_evaluations=" << inv.cf_evaluations;
            r.diagnostics.push_back(msg.str());
            r.diagnostics.insert(r.diagnostics.end(), inv.diagnostics.begin(), inv.diagnostics.end());
            return r;
        }

        /// Standard Gaussian CDF difference P(-t < X < t) for X ~ N(mean, sd^2).
        inline double gaussian_band(double t, double mean, double sd)
        {
            const double a = (t - mean) / (sd * std::numbers::sqrt2);
            const double b = (-t - mean) / (sd * std::numbers::sqrt2);
            return 0.5 * (std::erfc(-a) - std::erfc(-b));
        }
    }

    /// Transform of T = |h_c| + |h_q| for the scenario's regime.
    inline ChannelTransform combined_transform(const Scenario &sc)
    {
        return combine(direct_transform(sc.geom, sc.fading.bs_ue),
                       cascade_transform(sc.geom, sc.fading, sc.sys.n_elements, sc.regime));
    }

    /// P[SNR_S > theta] = 1 - F_T(t), t = sqrt(theta sigma^2 / P), by Gil-Pelaez inversion.
    inline CoverageResult coverage_combined(const Scenario &sc)
    {
        sc.validate();
        detail::require_mode(sc, Mode::combined, "coverage_combined");
        const ChannelTransform total = combined_transform(sc);
        CoverageResult r = detail::from_inversion(ccdf(total, sc.sys.amplitude_threshold(), sc.inversion));
        detail::warn_small_clt(sc, r);
        return r;
    }

    /// P[SNR_B > theta] in closed form: the squared direct amplitude is gamma distributed.
    inline CoverageResult coverage_direct(const Scenario &sc)
    {
        sc.validate();
        detail::require_mode(sc, Mode::direct_only, "coverage_direct");
        const NakagamiParams &q = sc.fading.bs_ue;
        const double l = bs_ue_distance(sc.geom);
        // theta sigma^2 l^alpha / (P zeta), the threshold on |h_q|^2 / c1^2 = Z^2
        const double z2 = sc.sys.theta * sc.sys.noise_var * std::pow(l, sc.geom.alpha) / (sc.sys.power_w * sc.geom.zeta);
        CoverageResult r;
        r.probability = boost::math::gamma_q(q.m, q.m * z2 / q.omega);
        r.method = "closed form";
        return r;
    }

    /// IRS-only outage under the Gaussian cascade model, P(-t < |h_c| < t).
    inline CoverageResult outage_irs_only(const Scenario &sc)
    {
        sc.validate();
        detail::require_mode(sc, Mode::irs_only, "outage_irs_only");
        detail::require(sc.regime == Regime::asymptotic_clt, "outage_irs_only: requires the asymptotic_clt regime");
        detail::require(sc.sys.n_elements >= 1, "outage_irs_only: requires N >= 1");
        const GaussianAmplitude hc = cascade_gaussian(sc.geom, sc.fading, sc.sys.n_elements);
        CoverageResult r;
        r.probability = std::clamp(detail::gaussian_band(sc.sys.amplitude_threshold(), hc.mean, std::sqrt(hc.variance)), 0.0, 1.0);
        r.method = "closed form";
        detail::warn_small_clt(sc, r);
        return r;
    }

    /// IRS-only coverage: 1 - outage under the Gaussian model, inversion of the cascade otherwise.
    inline CoverageResult coverage_irs_only(const Scenario &sc)
    {
        if (sc.regime == Regime::asymptotic_clt)
        {
            CoverageResult r = outage_irs_only(sc);
            r.probability = 1.0 - r.probability;
            return r;
        }
        sc.validate();
        detail::require_mode(sc, Mode::irs_only, "coverage_irs_only");
        detail::require(sc.sys.n_elements >= 1, "coverage_irs_only: requires N >= 1");
        const ChannelTransform hc = cascade_transform(sc.geom, sc.fading, sc.sys.n_elements, sc.regime);
        return detail::from_inversion(ccdf(hc, sc.sys.amplitude_threshold(), sc.inversion));
    }

    /// Coverage in whichever mode the scenario selects.
    inline CoverageResult coverage(const Scenario &sc)
    {
        switch (sc.mode)
        {
        case Mode::direct_only: return coverage_direct(sc);
        case Mode::irs_only: return coverage_irs_only(sc);
        case Mode::combined: return coverage_combined(sc);
        }
        throw std::invalid_argument("unknown mode");
    }

    // ---- Channel hardening -----------------------------------------------------------------------

    /// Mean-to-deviation ratio of |h_c| for N elements with both hops Nakagami(m, .):
    /// sqrt(N) Gamma(m+1/2)^2 / sqrt(Gamma(m+1)^2 Gamma(m)^2 - Gamma(m+1/2)^4).
    ///
    /// With `under_iid == false` the same ratio is formed from the general moment formula.
    inline double channel_hardening_kappa(std::int64_t n, double m, bool under_iid = true)
    {
        detail::require(n >= 1, "channel_hardening_kappa: requires N >= 1");
        NakagamiParams p{m, 1.0};
        p.validate();
        const double root_n = std::sqrt(static_cast<double>(n));
        if (!under_iid)
        {
            const MeanVariance y = cascade_mean_var(p, p);
            return root_n * y.mean / std::sqrt(y.variance);
        }
        // ratio Gamma(m+1/2)^4 / (Gamma(m+1) Gamma(m))^2 in logs
        const double log_ratio = 4.0 * std::lgamma(m + 0.5) - 2.0 * (std::lgamma(m + 1.0) + std::lgamma(m));
        const double ratio = std::exp(log_ratio);
        return root_n * std::sqrt(ratio) / std::sqrt(-std::expm1(log_ratio));
    }

    /// General hops: sqrt(N) E[Y] / sd(Y).
    inline double channel_hardening_kappa(std::int64_t n, const FadingConfig &fading)
    {
        detail::require(n >= 1, "channel_hardening_kappa: requires N >= 1");
        const MeanVariance y = cascade_mean_var(fading.bs_irs, fading.irs_ue);
        return std::sqrt(static_cast<double>(n)) * y.mean / std::sqrt(y.variance);
    }

    // ---- Coverage range --------------------------------------------------------------------------

    enum class RangeConstant
    {
        proof,    // sqrt(theta sigma^2 / P) = 4 mu
        statement // sqrt(theta sigma^2 / (2 P)) = mu
    };

    struct RangeResult
    {
        double distance = 0.0;           // authoritative value for the selected constant
        double distance_proof = 0.0;     // from t = 4 mu
        double distance_statement = 0.0; // from t / sqrt(2) = mu
        double validity_ratio = 0.0;     // sqrt(N) E[Y] / sd(Y)
        bool valid = true;               // validity_ratio >= 0.5
    };

    /// Validity of the Gaussian range argument: sqrt(N) E[Y] / sd(Y) >= 0.5.
    inline bool range_validity(double mean_y, double var_y, std::int64_t n)
    {
        detail::require(var_y > 0.0 && n >= 1, "range_validity: needs positive variance and N >= 1");
        return std::sqrt(static_cast<double>(n)) * mean_y / std::sqrt(var_y) >= 0.5;
    }

    /// IRS-to-UE distance beyond which the IRS-only link is in outage, from mu(d) = t / 4 with
    /// mu(d) = zeta r^(-alpha/2) d^(-alpha/2) N E[Y]. Both constants are reported.
    inline RangeResult irs_coverage_range(const Scenario &sc, RangeConstant constant = RangeConstant::proof)
    {
        sc.validate();
        detail::require(sc.regime == Regime::asymptotic_clt, "irs_coverage_range: requires the asymptotic_clt regime");
        detail::require(sc.sys.n_elements >= 1, "irs_coverage_range: requires N >= 1");
        const MeanVariance y = cascade_mean_var(sc.fading.bs_irs, sc.fading.irs_ue);
        const double n = static_cast<double>(sc.sys.n_elements);
        const double t = sc.sys.amplitude_threshold();
        const double a = sc.geom.alpha;
        // zeta r^(-alpha/2) N E[Y] d^(-alpha/2) = target  =>  d = (zeta N E[Y] / (target r^(alpha/2)))^(2/alpha)
        auto solve = [&](double target) {
            return std::pow(sc.geom.zeta * n * y.mean / (target * std::pow(sc.geom.r, 0.5 * a)), 2.0 / a);
        };
        RangeResult out;
        out.distance_proof = solve(0.25 * t);
        out.distance_statement = solve(t / std::numbers::sqrt2);
        out.distance = (constant == RangeConstant::proof) ? out.distance_proof : out.distance_statement;
        out.validity_ratio = std::sqrt(n) * y.mean / std::sqrt(y.variance);
        out.valid = range_validity(y.mean, y.variance, sc.sys.n_elements);
        return out;
    }

} // namespace irscov

#endif
