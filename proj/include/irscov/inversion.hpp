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

// CDF from a characteristic function by Gil-Pelaez inversion,
//
//   F(t) = 1/2 - (1/pi) int_0^inf Im(exp(-j w t) phi(w)) / w dw.
//
// Layout of the integral:
//  - [0, W_b] with W_b = bulk_width / sd(T): panels of width pi / (4 L), L = t + |E T| + 8 sd(T),
//    i.e. at most a quarter period of any oscillation the integrand can have
//  - [W_b, inf): half-period blocks of exp(-j w t); partial sums are accelerated with Levin's
//    u-transform, and the loop stops as soon as a closed-form envelope of |phi| certifies the rest
// Far in either tail a Chernoff bound settles the answer without touching the integral.

#ifndef IRSCOV_INVERSION_HPP
#define IRSCOV_INVERSION_HPP

#include "mgf.hpp"
#include "quadrature.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace irscov
{
    struct InversionConfig
    {
        double abs_tol = 1e-6;
        double omega_min = 1e-6;  // series evaluation below this, in units of 1/L
        double bulk_width = 10.0; // bulk region ends at bulk_width / sd(T)
        int max_panels = 200000;  // budget for bulk panels plus tail blocks
        int levin_terms = 12;
        bool chernoff = true;

        void validate() const
        {
            detail::require(std::isfinite(abs_tol) && abs_tol > 0.0, "inversion abs_tol must be > 0");
            detail::require(std::isfinite(omega_min) && omega_min > 0.0, "inversion omega_min must be > 0");
            detail::require(std::isfinite(bulk_width) && bulk_width > 0.0, "inversion bulk_width must be > 0");
            detail::require(max_panels >= 1, "inversion max_panels must be >= 1");
            detail::require(levin_terms >= 2 && levin_terms <= 30, "levin_terms must lie in [2, 30]");
        }
    };

    struct InversionResult
    {
        double probability = 0.0; // clamped to [0, 1]
        double raw = 0.0;         // before clamping
        double abs_error = 0.0;
        bool converged = true;
        bool in_bounds = true; // raw within [-10 abs_tol, 1 + 10 abs_tol]
        long cf_evaluations = 0;
        long panels = 0;
        double truncation_omega = 0.0;
        std::string method;
        std::vector<std::string> diagnostics;
    };

    namespace detail
    {
        /// Im(exp(-j w t) phi(w)) / w, with its two-term Taylor expansion near w = 0.
        struct GilPelaezIntegrand
        {
            const ChannelTransform &cf;
            double t;
            double mean;
            double third_moment; // E[(T - t)^3]

            GilPelaezIntegrand(const ChannelTransform &transform, double threshold)
                : cf(transform), t(threshold), mean(transform.mean())
            {
                const double d = mean - t;
                third_moment = transform.third_cumulant() + 3.0 * transform.variance() * d + d * d * d;
            }

            double direct(double w) const
            {
                const ComplexValue v = std::exp(ComplexValue(0.0, -w * t)) * cf.cf(w);
                return v.imag() / w;
            }

            double series(double w) const { return (mean - t) - w * w * third_moment / 6.0; }
        };

        /// Levin u-transform of the last k + 1 partial sums (beta = 1). Returns the last partial
        /// sum unchanged when a term vanishes.
        inline double levin_u(const std::vector<double> &sums, int k)
        {
            const int total = static_cast<int>(sums.size());
            k = std::min(k, total - 1);
            if (k < 1)
                return sums.back();
            const int n = total - 1 - k;
            long double num = 0.0L, den = 0.0L;
            long double binom = 1.0L;
            const long double beta = 1.0L;
            for (int j = 0; j <= k; ++j)
            {
                const int idx = n + j;
                const long double term = (idx == 0) ? sums[0] : static_cast<long double>(sums[idx]) - sums[idx - 1];
                if (term == 0.0L)
                    return sums.back();
                const long double omega = (beta + idx) * term;
                const long double ratio = std::pow((beta + idx) / (beta + n + k), static_cast<long double>(k - 1));
                const long double c = ((j % 2) ? -binom : binom) * ratio / omega;
                num += c * sums[idx];
                den += c;
                binom = binom * (k - j) / (j + 1);
            }
            const long double value = num / den;
            return std::isfinite(static_cast<double>(value)) ? static_cast<double>(value) : sums.back();
        }

        /// min over lambda > 0 of log E[exp(sign * lambda T)] - sign * lambda t; the Chernoff bound on
        /// P(T >= t) for sign = +1 and on P(T <= t) for sign = -1 is exp of this value.
        inline double chernoff_log_bound(const ChannelTransform &cf, double t, double sign, double lambda_guess)
        {
            auto objective = [&](double x) {
                const double lambda = std::exp(x);
                double v;
                try
                {
                    v = cf.log_mgf_real(-sign * lambda) - sign * lambda * t;
                }
                catch (const ConvergenceError &)
                {
                    v = std::numeric_limits<double>::infinity();
                }
                return std::isfinite(v) ? v : 1e300;
            };
            const double centre = std::log(lambda_guess);
            const auto best = boost::math::tools::brent_find_minima(objective, centre - 8.0, centre + 8.0, 40);
            return best.second;
        }
    }

    /// F_T(t) by Gil-Pelaez inversion of the characteristic function of `cf`.
    inline InversionResult gil_pelaez_cdf(const ChannelTransform &cf, double t, const InversionConfig &cfg = {})
    {
        cfg.validate();
        detail::require(std::isfinite(t), "gil_pelaez_cdf: t must be finite");
        InversionResult out;

        const double mean = cf.mean();
        const double var = cf.variance();
        const double sd = std::sqrt(var);

        if (cf.nonnegative_support() && t <= 0.0)
        {
            out.method = "support";
            return out;
        }

        // -- Chernoff short-cut in the far tails
        if (cfg.chernoff && sd > 0.0 && std::abs(t - mean) > 3.0 * sd)
        {
            const double sign = (t > mean) ? 1.0 : -1.0;
            const double guess = std::abs(t - mean) / var;
            const double bound = std::exp(detail::chernoff_log_bound(cf, t, sign, guess));
            if (bound < 0.1 * cfg.abs_tol)
            {
                out.method = "chernoff";
                out.abs_error = bound;
                out.raw = out.probability = (sign > 0.0) ? 1.0 : 0.0;
                std::ostringstream msg;
                msg << "Chernoff bound " << bound << " on the " << (sign > 0.0 ? "upper" : "lower") << " tail";
                out.diagnostics.push_back(msg.str());
                return out;
            }
        }

        out.method = "gil-pelaez";
        const double L = t + std::abs(mean) + 8.0 * sd;
        const double w_series = cfg.omega_min / L;
        const double tol_integral = std::numbers::pi * cfg.abs_tol;
        const detail::GilPelaezIntegrand kernel(cf, t);

        auto integrand = [&](double w) -> double {
            ++out.cf_evaluations;
            return (w < w_series) ? kernel.series(w) : kernel.direct(w);
        };

        double integral = 0.0;
        double error = 0.0;

        // -- bulk
        const double bulk_end = (sd > 0.0) ? cfg.bulk_width / sd : 0.0;
        if (bulk_end > 0.0)
        {
            const double width = std::numbers::pi / (4.0 * L);
            const double count = std::ceil(bulk_end / width);
            if (count > cfg.max_panels)
            {
                out.converged = false;
                out.diagnostics.push_back("bulk region needs more panels than max_panels allows");
            }
            const long panels = static_cast<long>(std::min(count, static_cast<double>(cfg.max_panels)));
            std::vector<double> edges(static_cast<std::size_t>(panels) + 1);
            for (long i = 0; i <= panels; ++i)
                edges[static_cast<std::size_t>(i)] = bulk_end * static_cast<double>(i) / static_cast<double>(panels);
            QuadratureResult bulk =
                integrate_partitioned(integrand, edges, {0.25 * tol_integral, 1e-12, cfg.max_panels + 1000});
            integral += bulk.value.real();
            error += bulk.abs_error_estimate;
            out.panels += panels;
            if (!bulk.converged)
            {
                out.converged = false;
                out.diagnostics.push_back("bulk quadrature: " + bulk.message);
            }
        }

        // -- tail
        double w0 = bulk_end;
        const double envelope_level = 0.1 * tol_integral;
        if (cf.cf_tail_bound(w0) < envelope_level)
        {
            error += cf.cf_tail_bound(w0);
            out.truncation_omega = w0;
        }
        else
        {
            // Away from the bulk, phi has no oscillation of its own except for an atom at E[T]
            const double frequency = (sd > 0.0) ? t : std::abs(mean - t);
            if (frequency == 0.0 && sd == 0.0)
            {
                // point mass evaluated at its location: integrand vanishes
                out.truncation_omega = w0;
            }
            else
            {
                const double block = std::numbers::pi / (frequency > 0.0 ? frequency : L);
                if (frequency > 0.0 && w0 > 0.0)
                {
                    // align the first block end with a half period
                    const double aligned = std::ceil(w0 / block) * block;
                    if (aligned > w0)
                    {
                        const QuadratureResult r =
                            integrate_adaptive(integrand, w0, aligned, {0.01 * tol_integral, 1e-12, 2000});
                        integral += r.value.real();
                        error += r.abs_error_estimate;
                        ++out.panels;
                        w0 = aligned;
                    }
                }
                std::vector<double> sums;
                double partial = 0.0;
                double previous_estimate = std::numeric_limits<double>::quiet_NaN();
                int stable = 0;
                bool done = false;
                while (!done)
                {
                    if (out.panels >= cfg.max_panels)
                    {
                        out.converged = false;
                        out.diagnostics.push_back("tail blocks exhausted max_panels before convergence");
                        integral += sums.empty() ? 0.0 : detail::levin_u(sums, cfg.levin_terms);
                        break;
                    }
                    const double w1 = w0 + block;
                    const QuadratureResult r =
                        integrate_adaptive(integrand, w0, w1, {0.01 * tol_integral, 1e-12, 2000});
                    ++out.panels;
                    error += r.abs_error_estimate;
                    if (!r.converged)
                    {
                        out.converged = false;
                        out.diagnostics.push_back("tail block quadrature: " + r.message);
                    }
                    partial += r.value.real();
                    sums.push_back(partial);
                    w0 = w1;

                    const double envelope = cf.cf_tail_bound(w0);
                    if (envelope < envelope_level)
                    {
                        integral += partial;
                        error += envelope;
                        done = true;
                        break;
                    }
                    if (sums.size() >= 4)
                    {
                        const double estimate = detail::levin_u(sums, cfg.levin_terms);
                        const double change = std::abs(estimate - previous_estimate);
                        stable = (change < 0.25 * tol_integral) ? stable + 1 : 0;
                        previous_estimate = estimate;
                        if (stable >= 2)
                        {
                            integral += estimate;
                            error += change;
                            done = true;
                        }
                    }
                }
                out.truncation_omega = w0;
            }
        }

        out.raw = 0.5 - integral / std::numbers::pi;
        out.abs_error = error / std::numbers::pi;
        out.probability = std::clamp(out.raw, 0.0, 1.0);
        const double eps = 10.0 * cfg.abs_tol;
        if (out.raw < -eps || out.raw > 1.0 + eps)
        {
            out.in_bounds = false;
            std::ostringstream msg;
            msg << "pre-clamp value " << out.raw << " outside [0, 1] by more than " << eps;
            out.diagnostics.push_back(msg.str());
        }
        if (out.abs_error > cfg.abs_tol)
        {
            std::ostringstream msg;
            msg << "estimated error " << out.abs_error << " exceeds abs_tol " << cfg.abs_tol;
            out.diagnostics.push_back(msg.str());
        }
        return out;
    }

    /// 1 - F_T(t); same contracts as gil_pelaez_cdf.
    inline InversionResult ccdf(const ChannelTransform &cf, double t, const InversionConfig &cfg = {})
    {
        InversionResult r = gil_pelaez_cdf(cf, t, cfg);
        r.probability = 1.0 - r.probability;
        r.raw = 1.0 - r.raw;
        return r;
    }

} // namespace irscov

#endif
