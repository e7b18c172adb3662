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

#ifndef IRSCOV_MODEL_HPP
#define IRSCOV_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace irscov
{
    inline constexpr double speed_of_light = 299792458.0; // m/s

    namespace detail
    {
        inline void require(bool condition, const std::string &message)
        {
            if (!condition)
                throw std::invalid_argument(message);
        }
    }

    // ---- Unit helpers ----------------------------------------------------------------------------

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
    inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

    /// Receiver noise power in watts from thermal density (dBm/Hz), bandwidth (Hz) and noise figure (dB):
    /// sigma^2 [dBm] = density + 10 log10(W) + NF.
    inline double noise_power_watts(double density_dbm_hz, double bandwidth_hz, double noise_figure_db)
    {
        detail::require(bandwidth_hz > 0.0, "bandwidth must be positive");
        return dbm_to_watts(density_dbm_hz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db);
    }

    /// Reference path loss at 1 m, (lambda / 4 pi)^2.
    inline double near_field_factor(double carrier_hz)
    {
        detail::require(carrier_hz > 0.0 && std::isfinite(carrier_hz), "carrier frequency must be positive");
        const double wavelength = speed_of_light / carrier_hz;
        const double x = wavelength / (4.0 * std::numbers::pi);
        return x * x;
    }

    // ---- Parameter types -------------------------------------------------------------------------

    /// Nakagami-m fading of one link: shape m >= 0.5 and mean power omega > 0.
    struct NakagamiParams
    {
        double m = 1.0;
        double omega = 1.0;

        void validate() const
        {
            detail::require(std::isfinite(m) && m >= 0.5, "Nakagami shape m must be >= 0.5");
            detail::require(std::isfinite(omega) && omega > 0.0, "Nakagami spread omega must be > 0");
        }

        friend bool operator==(const NakagamiParams &, const NakagamiParams &) = default;
    };

    /// BS / IRS / UE placement and propagation constants.
    ///
    /// `zeta` is stored explicitly but is always derived from `carrier_hz` when the geometry is
    /// built through `from_carrier`.
    struct LinkGeometry
    {
        double r = 500.0;          // BS-to-IRS distance [m]
        double d = 100.0;          // IRS-to-UE distance [m]
        double psi = 0.0;          // BS-IRS-UE angle [rad]
        double alpha = 4.0;        // path-loss exponent
        double zeta = 0.0;         // near-field factor (lambda/4pi)^2
        double carrier_hz = 3.0e9; // carrier frequency [Hz]

        static LinkGeometry from_carrier(double r, double d, double psi_rad, double alpha, double carrier_hz)
        {
            LinkGeometry g{r, d, psi_rad, alpha, near_field_factor(carrier_hz), carrier_hz};
            g.validate();
            return g;
        }

        void validate() const
        {
            detail::require(std::isfinite(r) && r > 0.0, "distance r must be > 0");
            detail::require(std::isfinite(d) && d > 0.0, "distance d must be > 0");
            detail::require(std::isfinite(psi), "angle psi must be finite");
            detail::require(std::isfinite(alpha) && alpha >= 2.0, "path-loss exponent alpha must be >= 2");
            detail::require(std::isfinite(zeta) && zeta > 0.0 && zeta < 1.0, "near-field factor zeta must lie in (0, 1)");
        }
    };

    /// Transmit power, receiver noise, IRS size and SNR threshold (all linear units).
    struct SystemParams
    {
        double power_w = 2.5;
        double noise_var = 1.0e-12;
        std::int64_t n_elements = 0;
        double theta = 1.0;

        void validate() const
        {
            detail::require(std::isfinite(power_w) && power_w > 0.0, "transmit power must be > 0");
            detail::require(std::isfinite(noise_var) && noise_var > 0.0, "noise variance must be > 0");
            detail::require(n_elements >= 0, "element count must be >= 0");
            detail::require(std::isfinite(theta) && theta > 0.0, "SNR threshold must be > 0");
        }

        /// Amplitude threshold t = sqrt(theta sigma^2 / P); coverage is P[T > t].
        double amplitude_threshold() const { return std::sqrt(theta * noise_var / power_w); }
    };

    /// Fading of the three links: g (BS-IRS), h (IRS-UE) and q (BS-UE).
    struct FadingConfig
    {
        NakagamiParams bs_irs;
        NakagamiParams irs_ue;
        NakagamiParams bs_ue;

        static FadingConfig uniform(double m, double omega = 1.0)
        {
            return {{m, omega}, {m, omega}, {m, omega}};
        }

        void validate() const
        {
            bs_irs.validate();
            irs_ue.validate();
            bs_ue.validate();
        }
    };

    // ---- Deterministic formulas ------------------------------------------------------------------

    /// BS-to-UE distance from the law of cosines.
    inline double bs_ue_distance(const LinkGeometry &geom)
    {
        const double l2 = geom.r * geom.r + geom.d * geom.d - 2.0 * geom.r * geom.d * std::cos(geom.psi);
        // Collinear geometries can round slightly negative.
        return std::sqrt(std::max(l2, 0.0));
    }

    namespace detail
    {
        inline double log_double_nakagami_moment(double b, const NakagamiParams &p1, const NakagamiParams &p2)
        {
            require(std::isfinite(b) && b >= 0.0, "moment order must be >= 0");
            p1.validate();
            p2.validate();
            double log_moment = 0.0;
            for (const NakagamiParams *p : {&p1, &p2})
                log_moment += std::lgamma(p->m + 0.5 * b) - std::lgamma(p->m) + 0.5 * b * std::log(p->omega / p->m);
            return log_moment;
        }
    }

    /// b-th moment of the product of two independent Nakagami amplitudes,
    /// prod_i Gamma(m_i + b/2) / Gamma(m_i) * (omega_i / m_i)^(b/2).
    ///
    /// Evaluated in the log domain; throws std::overflow_error if the result is not representable.
    inline double double_nakagami_moment(double b, const NakagamiParams &p1, const NakagamiParams &p2)
    {
        const double moment = std::exp(detail::log_double_nakagami_moment(b, p1, p2));
        if (!std::isfinite(moment) || moment == 0.0)
            throw std::overflow_error("double Nakagami moment outside the representable range");
        return moment;
    }

    struct MeanVariance
    {
        double mean = 0.0;
        double variance = 0.0;
    };

    /// Mean and variance of one cascade term Y = |g_n| |h_n| (unit path gain).
    inline MeanVariance cascade_mean_var(const NakagamiParams &p1, const NakagamiParams &p2)
    {
        const double log_first = detail::log_double_nakagami_moment(1.0, p1, p2);
        const double log_second = detail::log_double_nakagami_moment(2.0, p1, p2);
        const double mean = double_nakagami_moment(1.0, p1, p2);
        // var = E[Y]^2 (E[Y^2]/E[Y]^2 - 1); expm1 keeps precision when fading is mild.
        return {mean, mean * mean * std::expm1(log_second - 2.0 * log_first)};
    }

    /// Cascade path gain rho(r, d) = zeta r^(-alpha/2) d^(-alpha/2); this is also c2.
    inline double path_gain_cascade(const LinkGeometry &geom)
    {
        return geom.zeta * std::pow(geom.r, -0.5 * geom.alpha) * std::pow(geom.d, -0.5 * geom.alpha);
    }

    /// Direct-link amplitude scale c1 = zeta^(1/2) l^(-alpha/2), so that |h_q| = c1 Z.
    inline double path_gain_direct(const LinkGeometry &geom)
    {
        const double l = bs_ue_distance(geom);
        if (l <= 0.0)
            throw std::domain_error("degenerate geometry: BS and UE coincide");
        return std::sqrt(geom.zeta) * std::pow(l, -0.5 * geom.alpha);
    }

} // namespace irscov

#endif
