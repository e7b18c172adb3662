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

// Adaptive quadrature for smooth real-to-complex integrands:
//  - Gauss-Kronrod (10/21) panels with global bisection on finite ranges
//  - [a, inf) through x = a + u / (1 - u), or through truncation at a caller-certified tail bound
//  - tanh-sinh for integrands with endpoint singularities

#ifndef IRSCOV_QUADRATURE_HPP
#define IRSCOV_QUADRATURE_HPP

#include "specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace irscov
{
    /// Raised when a numerical routine cannot reach its requested accuracy.
    class ConvergenceError : public std::runtime_error
    {
      public:
        using std::runtime_error::runtime_error;
    };

    struct QuadratureResult
    {
        ComplexValue value{0.0, 0.0};
        double abs_error_estimate = 0.0;
        long evaluations = 0;
        bool converged = true;
        std::string message; // set when not converged
    };

    struct QuadratureOptions
    {
        double abs_tol = 1e-10;
        double rel_tol = 1e-8;
        int max_intervals = 2000;
    };

    namespace detail
    {
        // QUADPACK qk21 abscissae and weights (non-negative half, centre last).
        inline constexpr std::array<double, 11> gk21_nodes = {
            0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
            0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
            0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
            0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
            0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
            0.000000000000000000000000000000000};
        inline constexpr std::array<double, 11> gk21_kronrod_weights = {
            0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
            0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
            0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
            0.123491976262065851077734531930160, 0.134709217311473325928054001771707,
            0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
            0.149445554002916905664936468389821};
        // Gauss weights belong to the odd-indexed Kronrod nodes.
        inline constexpr std::array<double, 5> gk21_gauss_weights = {
            0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
            0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
            0.295524224714752870173892994651338};

        struct Panel
        {
            double a = 0.0;
            double b = 0.0;
            ComplexValue value{0.0, 0.0};
            double error = 0.0;
            bool operator<(const Panel &other) const { return error < other.error; }
        };

        template <class F>
        ComplexValue call_as_complex(F &f, double x)
        {
            if constexpr (std::is_convertible_v<std::invoke_result_t<F &, double>, double>)
                return ComplexValue(static_cast<double>(f(x)), 0.0);
            else
                return ComplexValue(f(x));
        }

        /// One 21-point Kronrod panel with the QUADPACK error heuristic.
        template <class F>
        Panel gauss_kronrod_21(F &f, double a, double b)
        {
            const double centre = 0.5 * (a + b);
            const double half = 0.5 * (b - a);
            const ComplexValue fc = call_as_complex(f, centre);
            ComplexValue kronrod = fc * gk21_kronrod_weights[10];
            ComplexValue gauss = 0.0;
            std::array<ComplexValue, 10> f1{}, f2{};
            double resabs = std::abs(fc) * gk21_kronrod_weights[10];
            for (std::size_t j = 0; j < 10; ++j)
            {
                const double dx = half * gk21_nodes[j];
                f1[j] = call_as_complex(f, centre - dx);
                f2[j] = call_as_complex(f, centre + dx);
                const ComplexValue sum = f1[j] + f2[j];
                kronrod += gk21_kronrod_weights[j] * sum;
                resabs += gk21_kronrod_weights[j] * (std::abs(f1[j]) + std::abs(f2[j]));
                if (j % 2 == 1)
                    gauss += gk21_gauss_weights[j / 2] * sum;
            }
            const ComplexValue mean = kronrod * 0.5;
            double resasc = gk21_kronrod_weights[10] * std::abs(fc - mean);
            for (std::size_t j = 0; j < 10; ++j)
                resasc += gk21_kronrod_weights[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

            const double scale = std::abs(half);
            double err = std::abs((kronrod - gauss) * half);
            resasc *= scale;
            resabs *= scale;
            if (resasc != 0.0 && err != 0.0)
                err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
            const double eps = std::numeric_limits<double>::epsilon();
            if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
                err = std::max(err, 50.0 * eps * resabs);
            return {a, b, kronrod * half, err};
        }

        /// Global adaptive bisection starting from the panels between consecutive `edges`.
        template <class F>
        QuadratureResult adaptive_panels(F &f, const std::vector<double> &edges, const QuadratureOptions &opt)
        {
            if (!(opt.abs_tol > 0.0) || !(opt.rel_tol > 0.0))
                throw std::invalid_argument("integrate_adaptive: tolerances must be positive");
            QuadratureResult result;
            if (edges.size() < 2)
                return result;

            std::priority_queue<Panel> queue;
            ComplexValue total = 0.0;
            double total_error = 0.0;
            for (std::size_t i = 0; i + 1 < edges.size(); ++i)
            {
                if (edges[i] == edges[i + 1])
                    continue;
                Panel panel = gauss_kronrod_21(f, edges[i], edges[i + 1]);
                result.evaluations += 21;
                total += panel.value;
                total_error += panel.error;
                queue.push(panel);
            }
            if (queue.empty())
                return result;

            int intervals = static_cast<int>(queue.size());
            while (total_error > std::max(opt.abs_tol, opt.rel_tol * std::abs(total)))
            {
                if (intervals >= opt.max_intervals)
                {
                    result.converged = false;
                    result.message = "maximum number of subdivisions reached";
                    break;
                }
                Panel worst = queue.top();
                const double mid = 0.5 * (worst.a + worst.b);
                if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b)))
                {
                    result.converged = false;
                    result.message = "interval too small to bisect";
                    break;
                }
                queue.pop();
                Panel left = gauss_kronrod_21(f, worst.a, mid);
                Panel right = gauss_kronrod_21(f, mid, worst.b);
                result.evaluations += 42;
                total += left.value + right.value - worst.value;
                total_error += left.error + right.error - worst.error;
                queue.push(left);
                queue.push(right);
                ++intervals;
            }

            // Re-sum to shed the drift of the running updates.
            total = 0.0;
            total_error = 0.0;
            while (!queue.empty())
            {
                total += queue.top().value;
                total_error += queue.top().error;
                queue.pop();
            }
            result.value = total;
            result.abs_error_estimate = total_error;
            if (!is_finite(total))
            {
                result.converged = false;
                result.message = "non-finite integrand value";
            }
            return result;
        }

        template <class F>
        QuadratureResult adaptive_finite(F &f, double a, double b, const QuadratureOptions &opt)
        {
            return adaptive_panels(f, std::vector<double>{a, b}, opt);
        }
    }

    /// Integrates f over [a, b]; b may be +infinity, in which case x = a + u / (1 - u) maps the
    /// range onto [0, 1). The result carries `converged == false` with the partial value and
    /// achieved error when the tolerance cannot be met.
    template <class F>
    QuadratureResult integrate_adaptive(F &&f, double a, double b, const QuadratureOptions &opt = {})
    {
        if (std::isnan(a) || std::isnan(b) || std::isinf(a))
            throw std::invalid_argument("integrate_adaptive: invalid range");
        if (std::isinf(b))
        {
            if (b < 0.0)
                throw std::invalid_argument("integrate_adaptive: range must be [a, +inf)");
            auto mapped = [&](double u) -> ComplexValue {
                if (u >= 1.0)
                    return 0.0;
                const double one_minus = 1.0 - u;
                const double x = a + u / one_minus;
                return detail::call_as_complex(f, x) / (one_minus * one_minus);
            };
            return detail::adaptive_finite(mapped, 0.0, 1.0, opt);
        }
        return detail::adaptive_finite(f, a, b, opt);
    }

    /// Integrates f over the panels delimited by `edges` (increasing), refining globally.
    template <class F>
    QuadratureResult integrate_partitioned(F &&f, const std::vector<double> &edges, const QuadratureOptions &opt = {})
    {
        for (std::size_t i = 0; i < edges.size(); ++i)
            if (!std::isfinite(edges[i]) || (i > 0 && edges[i] < edges[i - 1]))
                throw std::invalid_argument("integrate_partitioned: edges must be finite and nondecreasing");
        return detail::adaptive_panels(f, edges, opt);
    }

    /// Integrates f over [a, inf) using a caller-supplied tail bound: `tail(X)` must bound
    /// |int_X^inf f|. The range is truncated where the bound drops below abs_tol / 10 and the
    /// bound is added to the error estimate.
    template <class F, class Tail>
    QuadratureResult integrate_adaptive_with_tail(F &&f, double a, Tail &&tail, const QuadratureOptions &opt = {})
    {
        double width = 1.0;
        double upper = a + width;
        int doublings = 0;
        while (!(tail(upper) < 0.1 * opt.abs_tol))
        {
            width *= 2.0;
            upper = a + width;
            if (++doublings > 200)
            {
                QuadratureResult r;
                r.converged = false;
                r.message = "tail bound never dropped below tolerance";
                return r;
            }
        }
        QuadratureResult r = detail::adaptive_finite(f, a, upper, opt);
        r.abs_error_estimate += tail(upper);
        return r;
    }

    /// Double-exponential (tanh-sinh) rule on [a, b] for integrands singular at an endpoint.
    template <class F>
    QuadratureResult integrate_tanh_sinh(F &&f, double a, double b, const QuadratureOptions &opt = {})
    {
        if (!(b > a))
            throw std::invalid_argument("integrate_tanh_sinh: require a < b");
        const double half = 0.5 * (b - a);
        const double pi_2 = 0.5 * std::numbers::pi;
        constexpr double t_max = 4.5; // nodes sit within 1e-60 of the endpoints here
        QuadratureResult result;

        auto term = [&](double t) -> ComplexValue {
            const double s = pi_2 * std::sinh(t);
            const double c = std::cosh(s);
            const double weight = pi_2 * std::cosh(t) / (c * c);
            if (weight == 0.0)
                return 0.0;
            // distance of the nodes to their endpoints, half (1 - tanh s), free of cancellation
            const double gap = half / (std::exp(s) * c);
            ComplexValue sum = 0.0;
            const double x_right = b - gap;
            const double x_left = a + gap;
            if (x_right > a && x_right < b)
                sum += detail::call_as_complex(f, x_right);
            if (t != 0.0 && x_left > a && x_left < b)
                sum += detail::call_as_complex(f, x_left);
            result.evaluations += (t != 0.0) ? 2 : 1;
            return weight * sum;
        };

        double h = 0.5;
        ComplexValue estimate = term(0.0);
        for (double t = h; t <= t_max; t += h)
            estimate += term(t);
        ComplexValue previous = estimate * h * half;
        double diff = std::abs(previous);
        for (int level = 0; level < 12; ++level)
        {
            // add midpoints of the current grid
            for (double t = 0.5 * h; t <= t_max; t += h)
                estimate += term(t);
            h *= 0.5;
            const ComplexValue current = estimate * h * half;
            diff = std::abs(current - previous);
            previous = current;
            if (level >= 2 && diff <= std::max(opt.abs_tol, opt.rel_tol * std::abs(current)))
            {
                result.value = current;
                result.abs_error_estimate = diff;
                return result;
            }
        }
        result.value = previous;
        result.abs_error_estimate = diff;
        result.converged = false;
        result.message = "tanh-sinh refinement limit reached";
        return result;
    }

} // namespace irscov

#endif
