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

#ifndef IRSCOV_SPECFUN_HPP
#define IRSCOV_SPECFUN_HPP

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace irscov
{
    using ComplexValue = std::complex<double>;

    inline bool is_finite(const ComplexValue &z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

    inline void require_finite(const ComplexValue &z, const char *what)
    {
        if (!is_finite(z))
            throw std::invalid_argument(std::string(what) + ": argument must be finite");
    }

    /// Gamma function for x > 0.
    inline double gamma_fn(double x)
    {
        if (!(x > 0.0) || !std::isfinite(x))
            throw std::domain_error("gamma_fn: argument must be positive and finite");
        const double g = std::tgamma(x);
        if (!std::isfinite(g))
            throw std::overflow_error("gamma_fn: result overflows");
        return g;
    }

    inline double log_gamma_fn(double x)
    {
        if (!(x > 0.0) || !std::isfinite(x))
            throw std::domain_error("log_gamma_fn: argument must be positive and finite");
        return std::lgamma(x);
    }

    namespace detail
    {
        // Weideman's rational approximation of w(z) for Im z >= 0 with 40 terms.
        // Coefficients are the Fourier coefficients of exp(-t^2)(L^2 + t^2) under t = L tan(theta/2).
        inline constexpr int weideman_terms = 40;

        struct WeidemanTable
        {
            double L = 0.0;
            std::array<double, weideman_terms> a{}; // highest power first
        };

        inline const WeidemanTable &weideman_table()
        {
            static const WeidemanTable table = [] {
                constexpr int n = weideman_terms;
                constexpr int m = 2 * n;
                constexpr int m2 = 2 * m;
                WeidemanTable tab;
                tab.L = std::sqrt(n / std::numbers::sqrt2);

                // f = [0, f(k = -m+1 .. m-1)], length m2
                std::array<double, m2> f{};
                for (int k = -m + 1; k <= m - 1; ++k)
                {
                    const double t = tab.L * std::tan(0.5 * k * std::numbers::pi / m);
                    f[static_cast<std::size_t>(k + m)] = std::exp(-t * t) * (tab.L * tab.L + t * t);
                }
                // fftshift of an even-length vector rotates by half its length
                std::array<double, m2> shifted{};
                for (int i = 0; i < m2; ++i)
                    shifted[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>((i + m) % m2)];

                // Real part of the DFT, coefficients 1..n, stored reversed.
                for (int j = 1; j <= n; ++j)
                {
                    long double acc = 0.0L;
                    for (int i = 0; i < m2; ++i)
                        acc += static_cast<long double>(shifted[static_cast<std::size_t>(i)]) *
                               std::cos(2.0L * std::numbers::pi_v<long double> * j * i / m2);
                    tab.a[static_cast<std::size_t>(n - j)] = static_cast<double>(acc / m2);
                }
                return tab;
            }();
            return table;
        }

        inline ComplexValue faddeeva_upper(const ComplexValue &z)
        {
            const WeidemanTable &tab = weideman_table();
            const ComplexValue iz{-z.imag(), z.real()};
            const ComplexValue denom = tab.L - iz;
            const ComplexValue Z = (tab.L + iz) / denom;
            ComplexValue p = 0.0;
            for (double c : tab.a)
                p = p * Z + c;
            return 2.0 * p / (denom * denom) + (1.0 / std::sqrt(std::numbers::pi)) / denom;
        }
    }

    /// Faddeeva function w(z) = exp(-z^2) erfc(-i z).
    ///
    /// Accurate to about 1e-13 relative in the upper half plane. Lower half-plane values use
    /// w(z) = 2 exp(-z^2) - w(-z) and overflow when Im z is large and negative.
    inline ComplexValue faddeeva_w(const ComplexValue &z)
    {
        require_finite(z, "faddeeva_w");
        if (z.imag() >= 0.0)
            return detail::faddeeva_upper(z);
        const ComplexValue e = std::exp(-z * z);
        if (!is_finite(e))
            throw std::overflow_error("faddeeva_w: exp(-z^2) overflows in the lower half plane");
        return 2.0 * e - detail::faddeeva_upper(-z);
    }

    /// Complementary error function of complex argument, via erfc(z) = exp(-z^2) w(i z).
    inline ComplexValue erfc_complex(const ComplexValue &z)
    {
        require_finite(z, "erfc_complex");
        if (z.real() < 0.0)
            return 2.0 - erfc_complex(-z);
        const ComplexValue iz{-z.imag(), z.real()};
        const ComplexValue z2 = z * z;
        if (-z2.real() > 700.0)
            throw std::overflow_error("erfc_complex: result overflows");
        return std::exp(-z2) * detail::faddeeva_upper(iz);
    }

} // namespace irscov

#endif
