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

// Moment generating functions of the direct amplitude, the cascaded amplitude and their sum.
//
// Convention: M(s) = E[exp(-s X)] and the characteristic function is phi(w) = M(-j w) = E[exp(j w X)].

#ifndef IRSCOV_MGF_HPP
#define IRSCOV_MGF_HPP

#include "model.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace irscov
{
    namespace detail
    {
        // Options for the inner Nakagami integrals; absolute tolerance is on M itself.
        inline constexpr double mgf_abs_tol = 1e-14;
        inline constexpr double mgf_rel_tol = 1e-12;
        inline constexpr double log_drop = 45.0; // truncate where the integrand is e^-45 below its peak

        // Real part of the log-integrand along a ray is c0 + k log x - b x^2 - a x with b > 0 and
        // k >= 0; it is concave, so the peak and the e^-45 crossings can be found by bisection.
        struct RayProfile
        {
            double k = 0.0;
            double b = 1.0;
            double a = 0.0;

            double operator()(double x) const
            {
                const double lx = (k == 0.0) ? 0.0 : k * std::log(x);
                return lx - b * x * x - a * x;
            }

            double peak() const
            {
                if (k == 0.0)
                    return std::max(0.0, -a / (2.0 * b));
                const double root = std::sqrt(a * a + 8.0 * b * k);
                return a > 0.0 ? 2.0 * k / (a + root) : (root - a) / (4.0 * b);
            }

            /// Range [lo, hi] outside which the integrand is below exp(h(peak) - log_drop).
            std::pair<double, double> window() const
            {
                const double xp = peak();
                const double level = (*this)(xp) - log_drop;
                double lo = 0.0;
                if (xp > 0.0 && k > 0.0)
                {
                    // h -> -inf as x -> 0
                    double left = xp;
                    while (left > 1e-300 && (*this)(left) > level)
                        left *= 0.5;
                    lo = (left <= 1e-300) ? 0.0 : crossing_left(left, xp, level);
                }
                else if (xp > 0.0)
                {
                    lo = ((*this)(0.0) > level) ? 0.0 : crossing_left(0.0, xp, level);
                }
                double step = std::max({xp, 1.0 / std::sqrt(b), 1e-300});
                double right = xp + step;
                while ((*this)(right) > level)
                {
                    step *= 2.0;
                    right = xp + step;
                }
                const double hi = crossing_right(xp, right, level);
                return {lo, hi};
            }

          private:
            double crossing_left(double lo, double hi, double level) const
            {
                // h(lo) < level < h(hi)
                for (int i = 0; i < 200; ++i)
                {
                    const double mid = 0.5 * (lo + hi);
                    if (mid <= lo || mid >= hi)
                        break;
                    ((*this)(mid) < level ? lo : hi) = mid;
                }
                return lo;
            }

            double crossing_right(double lo, double hi, double level) const
            {
                // h(lo) > level > h(hi)
                for (int i = 0; i < 200; ++i)
                {
                    const double mid = 0.5 * (lo + hi);
                    if (mid <= lo || mid >= hi)
                        break;
                    ((*this)(mid) > level ? lo : hi) = mid;
                }
                return hi;
            }
        };

        inline double nakagami_log_norm(const NakagamiParams &p)
        {
            return std::log(2.0) + p.m * std::log(p.m / p.omega) - std::lgamma(p.m);
        }

        /// Rotation angle for the contour z = x exp(i theta). Turning against arg(s) removes
        /// oscillation; the limit 1/sqrt(m) bounds the growth of |exp(-m z^2 / omega)| off the real axis.
        inline double contour_angle(const NakagamiParams &p, const ComplexValue &s)
        {
            if (s == 0.0)
                return 0.0;
            const double limit = std::min(std::numbers::pi / 6.0, 1.0 / std::sqrt(p.m));
            return -std::clamp(std::arg(s), -limit, limit);
        }

        /// E[exp(-s Z)] for Re(s) >= 0, without argument checks. Integrates the Nakagami density
        /// along a rotated ray in the right half plane.
        inline ComplexValue nakagami_mgf_unchecked(const NakagamiParams &p, const ComplexValue &s)
        {
            if (s == 0.0)
                return 1.0;
            const double theta = contour_angle(p, s);
            const ComplexValue rot = std::polar(1.0, theta);
            const ComplexValue rot2 = rot * rot;
            const double k = 2.0 * p.m - 1.0;
            const RayProfile profile{k, p.m * rot2.real() / p.omega, (s * rot).real()};
            const auto [lo, hi] = profile.window();
            const double peak = profile(profile.peak());
            const double c0 = nakagami_log_norm(p);
            const double phase = (k + 1.0) * theta; // from z^(2m-1) and dz = exp(i theta) dx

            auto integrand = [&](double x) -> ComplexValue {
                if (x <= 0.0 && k != 0.0)
                    return 0.0;
                const double lx = (k == 0.0) ? 0.0 : k * std::log(x);
                return std::exp(lx - (p.m / p.omega) * x * x * rot2 - s * rot * x + ComplexValue(-peak, phase));
            };
            const double scale = std::exp(peak + c0);
            QuadratureOptions opt{mgf_abs_tol / std::max(scale, 1e-300), mgf_rel_tol, 4000};
            const QuadratureResult r = integrate_adaptive(integrand, lo, hi, opt);
            if (!r.converged)
            {
                std::ostringstream msg;
                msg << "Nakagami MGF quadrature did not converge at s = " << s << " (m = " << p.m << "): " << r.message;
                throw ConvergenceError(msg.str());
            }
            return r.value * scale;
        }

        /// log E[exp(-s Z)] for real s of either sign (finite for all s).
        inline double nakagami_log_mgf_real(const NakagamiParams &p, double s)
        {
            if (s == 0.0)
                return 0.0;
            const double k = 2.0 * p.m - 1.0;
            const RayProfile profile{k, p.m / p.omega, s};
            const auto [lo, hi] = profile.window();
            const double peak = profile(profile.peak());
            auto integrand = [&](double x) -> double {
                if (x <= 0.0)
                    return (k == 0.0) ? std::exp(-peak) : 0.0;
                return std::exp(profile(x) - peak);
            };
            const QuadratureResult r = integrate_adaptive(integrand, lo, hi, {1e-300, mgf_rel_tol, 4000});
            if (!r.converged || !(r.value.real() > 0.0))
                throw ConvergenceError("real Nakagami MGF quadrature did not converge: " + r.message);
            return nakagami_log_norm(p) + peak + std::log(r.value.real());
        }

        /// E[exp(-u G H)] for independent Nakagami G ~ g and H ~ h: the H integral is taken
        /// along a rotated ray with the G transform as kernel.
        inline ComplexValue double_nakagami_mgf(const NakagamiParams &g, const NakagamiParams &h, const ComplexValue &u)
        {
            if (u == 0.0)
                return 1.0;
            const double theta = contour_angle(h, u);
            const ComplexValue rot = std::polar(1.0, theta);
            const ComplexValue rot2 = rot * rot;
            const double k = 2.0 * h.m - 1.0;
            // Window from the density alone; the kernel has modulus <= 1.
            const RayProfile profile{k, h.m * rot2.real() / h.omega, 0.0};
            const auto [lo, hi] = profile.window();
            const double peak = profile(profile.peak());
            const double c0 = nakagami_log_norm(h);

            auto integrand = [&](double x) -> ComplexValue {
                ComplexValue log_density;
                if (x <= 0.0)
                {
                    if (k != 0.0)
                        return 0.0;
                    log_density = ComplexValue(0.0, theta);
                }
                else
                    log_density = (k == 0.0 ? 0.0 : k * std::log(x)) + ComplexValue(0.0, k * theta + theta) -
                                  (h.m / h.omega) * x * x * rot2;
                ComplexValue arg = u * rot * x;
                if (arg.real() < 0.0) // rounding only
                    arg.real(0.0);
                return std::exp(log_density - peak) * nakagami_mgf_unchecked(g, arg);
            };
            const double scale = std::exp(peak + c0);
            QuadratureOptions opt{mgf_abs_tol / std::max(scale, 1e-300), 1e-10, 4000};
            const QuadratureResult r = integrate_adaptive(integrand, lo, hi, opt);
            if (!r.converged)
            {
                std::ostringstream msg;
                msg << "double Nakagami MGF quadrature did not converge at u = " << u << ": " << r.message;
                throw ConvergenceError(msg.str());
            }
            return r.value * scale;
        }

        /// log E[exp(-u G H)] for real u >= 0.
        inline double double_nakagami_log_mgf_real(const NakagamiParams &g, const NakagamiParams &h, double u)
        {
            if (u == 0.0)
                return 0.0;
            const double k = 2.0 * h.m - 1.0;
            const RayProfile profile{k, h.m / h.omega, 0.0};
            const auto [lo, hi] = profile.window();
            const double peak = profile(profile.peak());
            auto integrand = [&](double x) -> double {
                const double density = (x <= 0.0) ? (k == 0.0 ? std::exp(-peak) : 0.0) : std::exp(profile(x) - peak);
                return density == 0.0 ? 0.0 : density * std::exp(nakagami_log_mgf_real(g, u * x));
            };
            const QuadratureResult r = integrate_adaptive(integrand, lo, hi, {1e-300, 1e-10, 4000});
            if (!r.converged || !(r.value.real() > 0.0))
                throw ConvergenceError("real double Nakagami MGF quadrature did not converge: " + r.message);
            return nakagami_log_norm(h) + peak + std::log(r.value.real());
        }

        inline double nakagami_raw_moment(const NakagamiParams &p, double b)
        {
            return std::exp(std::lgamma(p.m + 0.5 * b) - std::lgamma(p.m) + 0.5 * b * std::log(p.omega / p.m));
        }

        inline double third_cumulant(double e1, double e2, double e3)
        {
            return e3 - 3.0 * e1 * e2 + 2.0 * e1 * e1 * e1;
        }

        inline void require_laplace_domain(const ComplexValue &s, const char *what)
        {
            require_finite(s, what);
            if (s.real() < 0.0)
                throw std::invalid_argument(std::string(what) + ": requires Re(s) >= 0");
        }
    }

    // ---- Scalar transforms -----------------------------------------------------------------------

    /// E[exp(-s Z)] for Z ~ Nakagami(m, omega), Re(s) >= 0, by quadrature.
    ///
    /// Throws ConvergenceError if the quadrature misses its tolerance.
    inline ComplexValue mgf_nakagami(const NakagamiParams &p, const ComplexValue &s)
    {
        p.validate();
        detail::require_laplace_domain(s, "mgf_nakagami");
        return detail::nakagami_mgf_unchecked(p, s);
    }

    /// Rayleigh (m = 1) transform in closed form, 1 - sqrt(pi) u w(i u) with u = s sqrt(omega) / 2.
    /// The scaled error function keeps exp(s^2 omega / 4) from overflowing.
    inline ComplexValue mgf_rayleigh_closed(double omega, const ComplexValue &s)
    {
        detail::require(std::isfinite(omega) && omega > 0.0, "mgf_rayleigh_closed: omega must be > 0");
        require_finite(s, "mgf_rayleigh_closed");
        if (s == 0.0)
            return 1.0;
        const ComplexValue u = 0.5 * s * std::sqrt(omega);
        const ComplexValue w = faddeeva_w(ComplexValue(-u.imag(), u.real()));
        const ComplexValue result = 1.0 - std::sqrt(std::numbers::pi) * u * w;
        if (!is_finite(result))
            throw std::overflow_error("mgf_rayleigh_closed: result overflows");
        return result;
    }

    /// Half-normal (m = 1/2) transform, w(i s sqrt(omega / 2)).
    inline ComplexValue mgf_half_normal_closed(double omega, const ComplexValue &s)
    {
        detail::require(std::isfinite(omega) && omega > 0.0, "mgf_half_normal_closed: omega must be > 0");
        require_finite(s, "mgf_half_normal_closed");
        if (s == 0.0)
            return 1.0;
        const ComplexValue v = s * std::sqrt(0.5 * omega);
        return faddeeva_w(ComplexValue(-v.imag(), v.real()));
    }

    // ---- Transform objects -----------------------------------------------------------------------

    enum class TransformKind
    {
        nakagami_direct,
        gaussian_clt,
        gamma_iid,
        double_nakagami_numeric,
        product_composite
    };

    inline const char *to_string(TransformKind k)
    {
        switch (k)
        {
        case TransformKind::nakagami_direct: return "nakagami_direct";
        case TransformKind::gaussian_clt: return "gaussian_clt";
        case TransformKind::gamma_iid: return "gamma_iid";
        case TransformKind::double_nakagami_numeric: return "double_nakagami_numeric";
        case TransformKind::product_composite: return "product_composite";
        }
        return "unknown";
    }

    /// scale * Z with Z ~ Nakagami(m, omega).
    struct NakagamiAmplitude
    {
        NakagamiParams params;
        double scale = 1.0;
    };

    /// Normal distribution given by mean and variance.
    struct GaussianAmplitude
    {
        double mean = 0.0;
        double variance = 0.0;
    };

    /// Gamma distribution with the given shape and scale; transform (1 + scale s)^-shape.
    struct GammaSum
    {
        double shape = 0.0;
        double scale = 1.0;
    };

    /// `count` elements whose amplitude is the product of independent Nakagami variables g and h.
    struct ElementGroup
    {
        NakagamiParams g;
        NakagamiParams h;
        std::int64_t count = 1;
    };

    /// scale * sum over all groups of the element amplitudes.
    struct DoubleNakagamiSum
    {
        std::vector<ElementGroup> groups;
        double scale = 1.0;
    };

    class ChannelTransform;

    /// Sum of independent variables; an empty list is the point mass at zero.
    struct ProductComposite
    {
        std::vector<ChannelTransform> factors;
    };

    /// Transform of a nonnegative (or Gaussian) amplitude. Immutable after construction;
    /// evaluation is thread-safe.
    class ChannelTransform
    {
      public:
        using Model = std::variant<NakagamiAmplitude, GaussianAmplitude, GammaSum, DoubleNakagamiSum, ProductComposite>;

        ChannelTransform() : model_(ProductComposite{}) {}

        ChannelTransform(Model model) : model_(std::move(model)) { validate(); }

        static ChannelTransform identity() { return {}; }

        TransformKind kind() const
        {
            return static_cast<TransformKind>(model_.index());
        }

        const Model &model() const { return model_; }

        /// M(s) = E[exp(-s X)], Re(s) >= 0 (any s for the Gaussian).
        ComplexValue mgf(const ComplexValue &s) const
        {
            require_finite(s, "ChannelTransform::mgf");
            if (s == 0.0)
                return 1.0;
            return std::visit([&](const auto &m) { return eval(m, s); }, model_);
        }

        /// phi(w) = E[exp(j w X)].
        ComplexValue cf(double omega) const { return mgf(ComplexValue(0.0, -omega)); }

        double mean() const
        {
            return std::visit([](const auto &m) { return moments(m)[0]; }, model_);
        }

        double variance() const
        {
            return std::visit([](const auto &m) { return moments(m)[1]; }, model_);
        }

        double third_cumulant() const
        {
            return std::visit([](const auto &m) { return moments(m)[2]; }, model_);
        }

        /// Upper bound on int_W^inf |phi(w)| / w dw, or +inf when no closed-form envelope exists.
        double cf_tail_bound(double W) const
        {
            return std::visit([&](const auto &m) { return tail_bound(m, W); }, model_);
        }

        /// log E[exp(-s X)] for real s, or +inf where the transform diverges or is not available.
        double log_mgf_real(double s) const
        {
            if (s == 0.0)
                return 0.0;
            return std::visit([&](const auto &m) { return log_real(m, s); }, model_);
        }

        bool nonnegative_support() const
        {
            if (const auto *c = std::get_if<ProductComposite>(&model_))
                return std::all_of(c->factors.begin(), c->factors.end(),
                                   [](const ChannelTransform &f) { return f.nonnegative_support(); });
            return !std::holds_alternative<GaussianAmplitude>(model_);
        }

        std::string describe() const
        {
            std::ostringstream os;
            os.precision(6);
            std::visit([&](const auto &m) { describe_into(os, m); }, model_);
            return os.str();
        }

      private:
        Model model_;

        using Moments = std::array<double, 3>; // mean, variance, third cumulant

        void validate() const
        {
            std::visit([](const auto &m) { check(m); }, model_);
        }

        static void check(const NakagamiAmplitude &m)
        {
            m.params.validate();
            detail::require(std::isfinite(m.scale) && m.scale > 0.0, "Nakagami amplitude scale must be > 0");
        }
        static void check(const GaussianAmplitude &m)
        {
            detail::require(std::isfinite(m.mean), "Gaussian mean must be finite");
            detail::require(std::isfinite(m.variance) && m.variance >= 0.0, "Gaussian variance must be >= 0");
        }
        static void check(const GammaSum &m)
        {
            detail::require(std::isfinite(m.shape) && m.shape >= 0.0, "gamma shape must be >= 0");
            detail::require(std::isfinite(m.scale) && m.scale > 0.0, "gamma scale must be > 0");
        }
        static void check(const DoubleNakagamiSum &m)
        {
            detail::require(std::isfinite(m.scale) && m.scale > 0.0, "cascade scale must be > 0");
            for (const ElementGroup &g : m.groups)
            {
                g.g.validate();
                g.h.validate();
                detail::require(g.count >= 0, "element count must be >= 0");
            }
        }
        static void check(const ProductComposite &) {}

        // -- evaluation

        static ComplexValue eval(const NakagamiAmplitude &m, const ComplexValue &s)
        {
            const ComplexValue arg = m.scale * s;
            detail::require_laplace_domain(arg, "Nakagami transform");
            if (m.params.m == 1.0)
                return mgf_rayleigh_closed(m.params.omega, arg);
            if (m.params.m == 0.5)
                return mgf_half_normal_closed(m.params.omega, arg);
            return detail::nakagami_mgf_unchecked(m.params, arg);
        }

        static ComplexValue eval(const GaussianAmplitude &m, const ComplexValue &s)
        {
            return std::exp(-m.mean * s + 0.5 * m.variance * s * s);
        }

        static ComplexValue eval(const GammaSum &m, const ComplexValue &s)
        {
            if (m.shape == 0.0)
                return 1.0;
            const ComplexValue base = 1.0 + m.scale * s;
            if (std::abs(base) < 1e-12)
                throw std::domain_error("gamma transform evaluated at its branch point");
            return std::exp(-m.shape * std::log(base));
        }

        static ComplexValue eval(const DoubleNakagamiSum &m, const ComplexValue &s)
        {
            const ComplexValue u = m.scale * s;
            detail::require_laplace_domain(u, "double Nakagami transform");
            ComplexValue log_total = 0.0;
            for (const ElementGroup &g : m.groups)
            {
                if (g.count == 0)
                    continue;
                const ComplexValue factor = detail::double_nakagami_mgf(g.g, g.h, u);
                if (factor == 0.0)
                    return 0.0;
                // integer powers: any branch of log gives the same value
                log_total += static_cast<double>(g.count) * std::log(factor);
            }
            return std::exp(log_total);
        }

        static ComplexValue eval(const ProductComposite &m, const ComplexValue &s)
        {
            ComplexValue product = 1.0;
            for (const ChannelTransform &f : m.factors)
                product *= f.mgf(s);
            return product;
        }

        // -- moments

        static Moments moments(const NakagamiAmplitude &m)
        {
            const double e1 = detail::nakagami_raw_moment(m.params, 1.0);
            const double e2 = m.params.omega;
            const double e3 = detail::nakagami_raw_moment(m.params, 3.0);
            const double c = m.scale;
            return {c * e1, c * c * (e2 - e1 * e1), c * c * c * detail::third_cumulant(e1, e2, e3)};
        }

        static Moments moments(const GaussianAmplitude &m) { return {m.mean, m.variance, 0.0}; }

        static Moments moments(const GammaSum &m)
        {
            return {m.shape * m.scale, m.shape * m.scale * m.scale, 2.0 * m.shape * std::pow(m.scale, 3)};
        }

        static Moments moments(const DoubleNakagamiSum &m)
        {
            Moments out{0.0, 0.0, 0.0};
            const double c = m.scale;
            for (const ElementGroup &g : m.groups)
            {
                const double e1 = double_nakagami_moment(1.0, g.g, g.h);
                const double e2 = double_nakagami_moment(2.0, g.g, g.h);
                const double e3 = double_nakagami_moment(3.0, g.g, g.h);
                const double n = static_cast<double>(g.count);
                out[0] += n * c * e1;
                out[1] += n * c * c * cascade_mean_var(g.g, g.h).variance;
                out[2] += n * c * c * c * detail::third_cumulant(e1, e2, e3);
            }
            return out;
        }

        static Moments moments(const ProductComposite &m)
        {
            Moments out{0.0, 0.0, 0.0};
            for (const ChannelTransform &f : m.factors)
            {
                out[0] += f.mean();
                out[1] += f.variance();
                out[2] += f.third_cumulant();
            }
            return out;
        }

        // -- envelopes

        static double tail_bound(const NakagamiAmplitude &, double) { return inf(); }
        static double tail_bound(const DoubleNakagamiSum &, double) { return inf(); }

        static double tail_bound(const GaussianAmplitude &m, double W)
        {
            // int_W^inf exp(-v w^2 / 2) / w dw = E1(x) / 2 with x = v W^2 / 2, and E1(x) <= exp(-x) ln(1 + 1/x)
            const double x = 0.5 * m.variance * W * W;
            if (!(x > 0.0))
                return inf();
            return 0.5 * std::exp(-x) * std::log1p(1.0 / x);
        }

        static double tail_bound(const GammaSum &m, double W)
        {
            // |phi(w)| = (1 + c^2 w^2)^(-k/2) <= (c w)^-k
            if (!(m.shape > 0.0) || !(W > 0.0))
                return inf();
            return std::pow(m.scale * W, -m.shape) / m.shape;
        }

        static double tail_bound(const ProductComposite &m, double W)
        {
            // every factor has modulus <= 1, so the product is bounded by each factor alone
            double best = inf();
            for (const ChannelTransform &f : m.factors)
                best = std::min(best, f.cf_tail_bound(W));
            return best;
        }

        // -- real log-transforms (Chernoff bounds)

        static double log_real(const NakagamiAmplitude &m, double s)
        {
            return detail::nakagami_log_mgf_real(m.params, m.scale * s);
        }

        static double log_real(const GaussianAmplitude &m, double s) { return -m.mean * s + 0.5 * m.variance * s * s; }

        static double log_real(const GammaSum &m, double s)
        {
            const double base = m.scale * s;
            if (!(base > -1.0))
                return inf();
            return -m.shape * std::log1p(base);
        }

        static double log_real(const DoubleNakagamiSum &m, double s)
        {
            // exp(+lambda G H) has no simple envelope; only the lower-tail side is provided
            if (s < 0.0)
                return inf();
            double total = 0.0;
            for (const ElementGroup &g : m.groups)
                if (g.count > 0)
                    total += static_cast<double>(g.count) * detail::double_nakagami_log_mgf_real(g.g, g.h, m.scale * s);
            return total;
        }

        static double log_real(const ProductComposite &m, double s)
        {
            double total = 0.0;
            for (const ChannelTransform &f : m.factors)
            {
                total += f.log_mgf_real(s);
                if (!std::isfinite(total))
                    return inf();
            }
            return total;
        }

        static void describe_into(std::ostream &os, const NakagamiAmplitude &m)
        {
            os << "nakagami(m=" << m.params.m << ", omega=" << m.params.omega << ", scale=" << m.scale << ")";
        }
        static void describe_into(std::ostream &os, const GaussianAmplitude &m)
        {
            os << "gaussian(mean=" << m.mean << ", var=" << m.variance << ")";
        }
        static void describe_into(std::ostream &os, const GammaSum &m)
        {
            os << "gamma(shape=" << m.shape << ", scale=" << m.scale << ")";
        }
        static void describe_into(std::ostream &os, const DoubleNakagamiSum &m)
        {
            os << "double_nakagami(";
            for (std::size_t i = 0; i < m.groups.size(); ++i)
                os << (i ? ", " : "") << m.groups[i].count << " x [" << m.groups[i].g.m << "," << m.groups[i].h.m << "]";
            os << "; scale=" << m.scale << ")";
        }
        static void describe_into(std::ostream &os, const ProductComposite &m)
        {
            os << "composite[";
            for (std::size_t i = 0; i < m.factors.size(); ++i)
                os << (i ? " * " : "") << m.factors[i].describe();
            os << "]";
        }

        static constexpr double inf() { return std::numeric_limits<double>::infinity(); }
    };

    // ---- Channel builders ------------------------------------------------------------------------

    enum class Regime
    {
        asymptotic_clt,
        finite_iid,
        finite_inid
    };

    inline const char *to_string(Regime r)
    {
        switch (r)
        {
        case Regime::asymptotic_clt: return "asymptotic_clt";
        case Regime::finite_iid: return "finite_iid";
        case Regime::finite_inid: return "finite_inid";
        }
        return "unknown";
    }

    /// |h_q| = c1 Z with c1 = zeta^(1/2) l^(-alpha/2).
    inline ChannelTransform direct_transform(const LinkGeometry &geom, const NakagamiParams &bs_ue)
    {
        return ChannelTransform(NakagamiAmplitude{bs_ue, path_gain_direct(geom)});
    }

    /// Gaussian model of |h_c|: mean rho N E[Y], variance rho^2 N var(Y).
    inline GaussianAmplitude cascade_gaussian(const LinkGeometry &geom, const FadingConfig &fading, std::int64_t n)
    {
        detail::require(n >= 0, "element count must be >= 0");
        const MeanVariance y = cascade_mean_var(fading.bs_irs, fading.irs_ue);
        const double rho = path_gain_cascade(geom);
        const double nn = static_cast<double>(n);
        return {rho * nn * y.mean, rho * rho * nn * y.variance};
    }

    /// Gamma model of |h_c|: (1 + c2 s omega / m)^(-N m). Both hops must share (m, omega).
    inline GammaSum cascade_gamma(const LinkGeometry &geom, const NakagamiParams &p, std::int64_t n)
    {
        p.validate();
        detail::require(n >= 0, "element count must be >= 0");
        return {static_cast<double>(n) * p.m, path_gain_cascade(geom) * p.omega / p.m};
    }

    /// Transform of |h_c| in the requested regime; N = 0 gives the identity.
    inline ChannelTransform cascade_transform(const LinkGeometry &geom, const FadingConfig &fading, std::int64_t n,
                                              Regime regime)
    {
        detail::require(n >= 0, "element count must be >= 0");
        fading.validate();
        if (n == 0)
            return ChannelTransform::identity();
        switch (regime)
        {
        case Regime::asymptotic_clt:
            return ChannelTransform(cascade_gaussian(geom, fading, n));
        case Regime::finite_iid:
            detail::require(fading.bs_irs == fading.irs_ue,
                            "the finite_iid regime needs identical BS-IRS and IRS-UE fading parameters");
            return ChannelTransform(cascade_gamma(geom, fading.bs_irs, n));
        case Regime::finite_inid:
            return ChannelTransform(DoubleNakagamiSum{{ElementGroup{fading.bs_irs, fading.irs_ue, n}},
                                                      path_gain_cascade(geom)});
        }
        throw std::invalid_argument("unknown regime");
    }

    // ---- Free-function forms ---------------------------------------------------------------------

    inline ComplexValue mgf_hc_clt(const LinkGeometry &geom, const FadingConfig &fading, std::int64_t n,
                                   const ComplexValue &s)
    {
        detail::require(n >= 1, "mgf_hc_clt: requires N >= 1");
        return ChannelTransform(cascade_gaussian(geom, fading, n)).mgf(s);
    }

    inline ComplexValue mgf_hc_finite_iid(const LinkGeometry &geom, const NakagamiParams &p, std::int64_t n,
                                          const ComplexValue &s)
    {
        detail::require(n >= 1, "mgf_hc_finite_iid: requires N >= 1");
        return ChannelTransform(cascade_gamma(geom, p, n)).mgf(s);
    }

    inline ComplexValue mgf_hc_finite_inid(const LinkGeometry &geom, const FadingConfig &fading, std::int64_t n,
                                           const ComplexValue &s)
    {
        detail::require(n >= 1, "mgf_hc_finite_inid: requires N >= 1");
        return cascade_transform(geom, fading, n, Regime::finite_inid).mgf(s);
    }

    /// Transform of T = |h_c| + |h_q| for independent factors; both carry their own scaling.
    inline ComplexValue mgf_T(const ChannelTransform &direct, const ChannelTransform &cascade, const ComplexValue &s)
    {
        return direct.mgf(s) * cascade.mgf(s);
    }

    inline ChannelTransform combine(const ChannelTransform &a, const ChannelTransform &b)
    {
        return ChannelTransform(ProductComposite{{a, b}});
    }

    /// sup over a log grid on [omega_lo, omega_hi] of |phi_a(w) - phi_b(w)| where each variable is
    /// first standardized by its own mean and standard deviation.
    inline double standardized_cf_gap(const ChannelTransform &a, const ChannelTransform &b, double omega_lo,
                                      double omega_hi, int points)
    {
        detail::require(omega_lo > 0.0 && omega_hi > omega_lo && points >= 2, "standardized_cf_gap: bad grid");
        auto standardized = [](const ChannelTransform &t, double w) {
            const double sd = std::sqrt(t.variance());
            detail::require(sd > 0.0, "standardized_cf_gap: degenerate distribution");
            return std::exp(ComplexValue(0.0, -w * t.mean() / sd)) * t.cf(w / sd);
        };
        double gap = 0.0;
        for (int i = 0; i < points; ++i)
        {
            const double w = omega_lo * std::pow(omega_hi / omega_lo, static_cast<double>(i) / (points - 1));
            gap = std::max(gap, std::abs(standardized(a, w) - standardized(b, w)));
        }
        return gap;
    }

} // namespace irscov

#endif
