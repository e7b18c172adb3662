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

#ifndef IRSCOV_SWEEP_HPP
#define IRSCOV_SWEEP_HPP

#include "coverage.hpp"
#include "montecarlo.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef IRSCOV_VERSION
#define IRSCOV_VERSION "1.0.0"
#endif

namespace irscov
{
    /// Malformed or inconsistent configuration.
    class ConfigError : public std::runtime_error
    {
      public:
        using std::runtime_error::runtime_error;
    };

    enum class SweepVariable
    {
        theta_db,
        n_elements,
        distance_d,
        shape_m
    };

    inline const char *to_string(SweepVariable v)
    {
        switch (v)
        {
        case SweepVariable::theta_db: return "theta_db";
        case SweepVariable::n_elements: return "n_elements";
        case SweepVariable::distance_d: return "distance_d";
        case SweepVariable::shape_m: return "shape_m";
        }
        return "unknown";
    }

    struct SweepSpec
    {
        SweepVariable variable = SweepVariable::theta_db;
        std::vector<double> grid;
        std::optional<SweepVariable> series_variable; // optional outer loop, e.g. one curve per m
        std::vector<double> series;
        std::vector<Mode> modes{Mode::combined};
        std::vector<Regime> regimes{Regime::asymptotic_clt};
        bool validate = false;

        void check() const
        {
            auto increasing = [](const std::vector<double> &v) {
                for (std::size_t i = 1; i < v.size(); ++i)
                    if (!(v[i] > v[i - 1]))
                        return false;
                return true;
            };
            if (grid.empty() || !increasing(grid))
                throw ConfigError("sweep grid must be nonempty and strictly increasing");
            if (series_variable && (series.empty() || *series_variable == variable))
                throw ConfigError("series needs values and a variable different from the sweep variable");
            if (modes.empty() || regimes.empty())
                throw ConfigError("sweep needs at least one mode and one regime");
        }
    };

    struct RunConfig
    {
        Scenario base;
        SweepSpec sweep;
        SimConfig sim;
        std::uint64_t config_hash = 0;
    };

    struct OutputRow
    {
        double series = std::numeric_limits<double>::quiet_NaN(); // NaN when no series is configured
        double value = 0.0;
        Mode mode = Mode::combined;
        std::optional<Regime> regime; // empty for direct_only
        double probability = 0.0;
        double abs_error = 0.0;
        std::optional<double> mc_probability;
        std::optional<double> mc_std_error;
        std::optional<double> runtime_ms;
        bool converged = true;
    };

    // ---- Formatting ------------------------------------------------------------------------------

    /// 64-bit FNV-1a.
    inline std::uint64_t fnv1a(const std::string &bytes)
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : bytes)
        {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    inline std::string hex64(std::uint64_t v)
    {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
        return buf;
    }

    /// 12 significant digits, empty for NaN.
    inline std::string format_real(double x)
    {
        if (std::isnan(x))
            return "";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", x);
        return buf;
    }

    inline std::string format_optional(const std::optional<double> &x) { return x ? format_real(*x) : ""; }

    namespace detail
    {
        template <class Enum, std::size_t N>
        Enum parse_enum(const std::string &text, const Enum (&values)[N], const char *what)
        {
            for (Enum v : values)
                if (text == to_string(v))
                    return v;
            throw ConfigError(std::string("unknown ") + what + ": '" + text + "'");
        }

        inline constexpr SweepVariable all_variables[] = {SweepVariable::theta_db, SweepVariable::n_elements,
                                                          SweepVariable::distance_d, SweepVariable::shape_m};
        inline constexpr Mode all_modes[] = {Mode::direct_only, Mode::irs_only, Mode::combined};
        inline constexpr Regime all_regimes[] = {Regime::asymptotic_clt, Regime::finite_iid, Regime::finite_inid};

        inline double parse_real(const std::string &s)
        {
            if (s.empty())
                return std::numeric_limits<double>::quiet_NaN();
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size())
                throw std::invalid_argument("trailing characters in number '" + s + "'");
            return v;
        }

        inline std::vector<std::string> split_csv_line(const std::string &line)
        {
            std::vector<std::string> out;
            std::string cell;
            std::istringstream in(line);
            while (std::getline(in, cell, ','))
                out.push_back(cell);
            if (!line.empty() && line.back() == ',')
                out.emplace_back();
            return out;
        }

        // ---- JSON helpers ----

        using json = nlohmann::json;

        inline void allow_keys(const json &obj, const std::string &section, std::initializer_list<const char *> keys)
        {
            if (!obj.is_object())
                throw ConfigError("section '" + section + "' must be an object");
            for (auto it = obj.begin(); it != obj.end(); ++it)
            {
                bool known = false;
                for (const char *k : keys)
                    known = known || it.key() == k;
                if (!known)
                    throw ConfigError("unknown key '" + section + "." + it.key() + "'");
            }
        }

        inline double get_number(const json &obj, const std::string &section, const char *key, double fallback)
        {
            if (!obj.contains(key))
                return fallback;
            const json &v = obj.at(key);
            if (!v.is_number())
                throw ConfigError("key '" + section + "." + key + "' must be a number");
            return v.get<double>();
        }

        inline std::int64_t get_integer(const json &obj, const std::string &section, const char *key, std::int64_t fallback)
        {
            if (!obj.contains(key))
                return fallback;
            const json &v = obj.at(key);
            if (!v.is_number_integer())
                throw ConfigError("key '" + section + "." + key + "' must be an integer");
            return v.get<std::int64_t>();
        }

        inline NakagamiParams get_link(const json &obj, const std::string &section)
        {
            allow_keys(obj, section, {"m", "omega"});
            return {get_number(obj, section, "m", 1.0), get_number(obj, section, "omega", 1.0)};
        }

        inline std::vector<double> get_grid(const json &g, const std::string &section)
        {
            if (g.is_array())
            {
                std::vector<double> out;
                for (const json &v : g)
                {
                    if (!v.is_number())
                        throw ConfigError("'" + section + "' entries must be numbers");
                    out.push_back(v.get<double>());
                }
                return out;
            }
            allow_keys(g, section, {"start", "stop", "points", "spacing"});
            for (const char *k : {"start", "stop", "points"})
                if (!g.contains(k))
                    throw ConfigError("'" + section + "' needs start, stop and points");
            const double start = get_number(g, section, "start", 0.0), stop = get_number(g, section, "stop", 0.0);
            const std::int64_t points = get_integer(g, section, "points", 0);
            const std::string spacing = g.value("spacing", std::string("linear"));
            if (points < 1 || points > 100000)
                throw ConfigError("'" + section + ".points' must lie in [1, 100000]");
            if (spacing != "linear" && spacing != "log")
                throw ConfigError("'" + section + ".spacing' must be linear or log");
            if (spacing == "log" && !(start > 0.0 && stop > 0.0))
                throw ConfigError("log spacing needs positive start and stop");
            std::vector<double> out;
            for (std::int64_t i = 0; i < points; ++i)
            {
                const double f = (points == 1) ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
                out.push_back(spacing == "linear" ? start + (stop - start) * f
                                                  : std::exp(std::log(start) + (std::log(stop) - std::log(start)) * f));
            }
            return out;
        }
    }

    // ---- Configuration ---------------------------------------------------------------------------

    /// Build a run configuration from a parsed JSON document. Missing keys take the built-in defaults.
    inline RunConfig parse_config(const nlohmann::json &doc)
    {
        using detail::get_integer;
        using detail::get_number;
        using json = nlohmann::json;
        detail::allow_keys(doc, "<root>", {"geometry", "fading", "system", "sweep", "simulation", "inversion"});
        RunConfig cfg;
        const json empty = json::object();
        try
        {
            const json &g = doc.contains("geometry") ? doc.at("geometry") : empty;
            detail::allow_keys(g, "geometry", {"r_m", "d_m", "psi_deg", "alpha", "carrier_hz"});
            cfg.base.geom = LinkGeometry::from_carrier(get_number(g, "geometry", "r_m", 500.0), get_number(g, "geometry", "d_m", 100.0),
                                                       get_number(g, "geometry", "psi_deg", 85.0) * std::numbers::pi / 180.0,
                                                       get_number(g, "geometry", "alpha", 4.0),
                                                       get_number(g, "geometry", "carrier_hz", 3e9));

            const json &f = doc.contains("fading") ? doc.at("fading") : empty;
            detail::allow_keys(f, "fading", {"m", "omega", "bs_irs", "irs_ue", "bs_ue"});
            cfg.base.fading = FadingConfig::uniform(get_number(f, "fading", "m", 1.0), get_number(f, "fading", "omega", 1.0));
            if (f.contains("bs_irs"))
                cfg.base.fading.bs_irs = detail::get_link(f.at("bs_irs"), "fading.bs_irs");
            if (f.contains("irs_ue"))
                cfg.base.fading.irs_ue = detail::get_link(f.at("irs_ue"), "fading.irs_ue");
            if (f.contains("bs_ue"))
                cfg.base.fading.bs_ue = detail::get_link(f.at("bs_ue"), "fading.bs_ue");
            cfg.base.fading.validate();

            const json &s = doc.contains("system") ? doc.at("system") : empty;
            detail::allow_keys(s, "system", {"power_w", "noise_density_dbm_hz", "bandwidth_hz", "noise_figure_db", "n_elements",
                                             "theta_db", "clt_floor"});
            cfg.base.sys.power_w = get_number(s, "system", "power_w", 2.5);
            cfg.base.sys.noise_var = noise_power_watts(get_number(s, "system", "noise_density_dbm_hz", -174.0),
                                                       get_number(s, "system", "bandwidth_hz", 1e8),
                                                       get_number(s, "system", "noise_figure_db", 10.0));
            cfg.base.sys.n_elements = get_integer(s, "system", "n_elements", 500);
            cfg.base.sys.theta = db_to_linear(get_number(s, "system", "theta_db", 5.0));
            cfg.base.clt_floor = get_integer(s, "system", "clt_floor", 50);

            const json &w = doc.contains("sweep") ? doc.at("sweep") : empty;
            detail::allow_keys(w, "sweep", {"variable", "grid", "series", "modes", "regimes", "validate"});
            SweepSpec &sw = cfg.sweep;
            sw.variable = detail::parse_enum(w.value("variable", std::string("theta_db")), detail::all_variables, "sweep variable");
            if (!w.contains("grid"))
                throw ConfigError("sweep.grid is required");
            sw.grid = detail::get_grid(w.at("grid"), "sweep.grid");
            if (w.contains("series"))
            {
                const json &sr = w.at("series");
                detail::allow_keys(sr, "sweep.series", {"variable", "values"});
                if (!sr.contains("variable") || !sr.contains("values"))
                    throw ConfigError("sweep.series needs variable and values");
                sw.series_variable = detail::parse_enum(sr.at("variable").get<std::string>(), detail::all_variables, "series variable");
                sw.series = detail::get_grid(sr.at("values"), "sweep.series.values");
            }
            if (w.contains("modes"))
            {
                sw.modes.clear();
                for (const json &m : w.at("modes"))
                    sw.modes.push_back(detail::parse_enum(m.get<std::string>(), detail::all_modes, "mode"));
            }
            if (w.contains("regimes"))
            {
                sw.regimes.clear();
                for (const json &r : w.at("regimes"))
                    sw.regimes.push_back(detail::parse_enum(r.get<std::string>(), detail::all_regimes, "regime"));
            }
            if (w.contains("validate"))
            {
                if (!w.at("validate").is_boolean())
                    throw ConfigError("sweep.validate must be true or false");
                sw.validate = w.at("validate").get<bool>();
            }
            sw.check();

            const json &m = doc.contains("simulation") ? doc.at("simulation") : empty;
            detail::allow_keys(m, "simulation", {"samples", "seed", "streams", "antithetic"});
            cfg.sim.samples = get_integer(m, "simulation", "samples", cfg.sim.samples);
            if (m.contains("seed"))
            {
                if (!m.at("seed").is_number_unsigned())
                    throw ConfigError("simulation.seed must be a nonnegative integer");
                cfg.sim.seed = m.at("seed").get<std::uint64_t>();
            }
            cfg.sim.streams = get_integer(m, "simulation", "streams", cfg.sim.streams);
            cfg.sim.antithetic = m.value("antithetic", false);

            const json &inv = doc.contains("inversion") ? doc.at("inversion") : empty;
            detail::allow_keys(inv, "inversion", {"abs_tol", "bulk_width", "max_panels", "chernoff"});
            cfg.base.inversion.abs_tol = get_number(inv, "inversion", "abs_tol", cfg.base.inversion.abs_tol);
            cfg.base.inversion.bulk_width = get_number(inv, "inversion", "bulk_width", cfg.base.inversion.bulk_width);
            cfg.base.inversion.max_panels = get_integer(inv, "inversion", "max_panels", cfg.base.inversion.max_panels);
            cfg.base.inversion.chernoff = inv.value("chernoff", cfg.base.inversion.chernoff);

            cfg.base.validate();
            cfg.sim.validate();
        }
        catch (const ConfigError &)
        {
            throw;
        }
        catch (const std::exception &e)
        {
            throw ConfigError(e.what());
        }
        return cfg;
    }

    /// Read and parse a configuration file; the hash covers the raw file bytes.
    inline RunConfig load_config(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ConfigError("cannot open config file '" + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        const std::string text = buf.str();
        nlohmann::json doc;
        try
        {
            doc = nlohmann::json::parse(text);
        }
        catch (const nlohmann::json::parse_error &e)
        {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        RunConfig cfg = parse_config(doc);
        cfg.config_hash = fnv1a(text);
        return cfg;
    }

    /// Copy of `base` with one variable replaced; theta in dB, shape applied to all three links.
    inline Scenario apply_variable(Scenario sc, SweepVariable v, double x)
    {
        switch (v)
        {
        case SweepVariable::theta_db: sc.sys.theta = db_to_linear(x); break;
        case SweepVariable::distance_d: sc.geom.d = x; break;
        case SweepVariable::shape_m:
            sc.fading.bs_irs.m = sc.fading.irs_ue.m = sc.fading.bs_ue.m = x;
            break;
        case SweepVariable::n_elements:
            detail::require(x >= 0.0 && x == std::floor(x), "element count must be a nonnegative integer");
            sc.sys.n_elements = static_cast<std::int64_t>(x);
            break;
        }
        return sc;
    }

    // ---- Sweep driver ----------------------------------------------------------------------------

    struct SweepOptions
    {
        unsigned jobs = 1;
        bool timing = false;         // fill runtime_ms; off by default so output is byte-stable
        bool force_validate = false; // run the simulation even if the config does not ask for it
    };

    struct SweepPoint
    {
        double series = std::numeric_limits<double>::quiet_NaN();
        double value = 0.0;
        Scenario scenario;
    };

    /// Grid points in output order: series outermost, then the sweep grid.
    inline std::vector<SweepPoint> expand_grid(const RunConfig &cfg)
    {
        std::vector<SweepPoint> points;
        const std::vector<double> series = cfg.sweep.series_variable ? cfg.sweep.series
                                                                      : std::vector<double>{std::numeric_limits<double>::quiet_NaN()};
        for (double s : series)
        {
            const Scenario outer = cfg.sweep.series_variable ? apply_variable(cfg.base, *cfg.sweep.series_variable, s) : cfg.base;
            for (double x : cfg.sweep.grid)
            {
                SweepPoint p{s, x, apply_variable(outer, cfg.sweep.variable, x)};
                p.scenario.validate();
                points.push_back(p);
            }
        }
        return points;
    }

    /// One row per grid point, mode and regime (direct_only rows carry no regime), in grid order.
    inline std::vector<OutputRow> run_sweep(const RunConfig &cfg, const SweepOptions &opt = {})
    {
        cfg.sweep.check();
        const std::vector<SweepPoint> points = expand_grid(cfg);

        struct Task
        {
            std::size_t point;
            Mode mode;
            std::optional<Regime> regime;
        };
        std::vector<Task> tasks;
        for (std::size_t i = 0; i < points.size(); ++i)
            for (Mode mode : cfg.sweep.modes)
            {
                if (mode == Mode::direct_only)
                    tasks.push_back({i, mode, std::nullopt});
                else
                    for (Regime r : cfg.sweep.regimes)
                        tasks.push_back({i, mode, r});
            }

        std::vector<OutputRow> rows(tasks.size());
        std::vector<std::exception_ptr> errors(tasks.size());
        detail::parallel_chunks(static_cast<std::int64_t>(tasks.size()), static_cast<std::int64_t>(tasks.size()), opt.jobs,
                                [&](std::int64_t begin, std::int64_t end) {
                                    for (std::int64_t k = begin; k < end; ++k)
                                    {
                                        const Task &task = tasks[static_cast<std::size_t>(k)];
                                        OutputRow &row = rows[static_cast<std::size_t>(k)];
                                        try
                                        {
                                            Scenario sc = points[task.point].scenario;
                                            sc.mode = task.mode;
                                            if (task.regime)
                                                sc.regime = *task.regime;
                                            const auto start = std::chrono::steady_clock::now();
                                            const CoverageResult r = coverage(sc);
                                            const auto stop = std::chrono::steady_clock::now();
                                            row.series = points[task.point].series;
                                            row.value = points[task.point].value;
                                            row.mode = task.mode;
                                            row.regime = task.regime;
                                            row.probability = r.probability;
                                            row.abs_error = r.abs_error;
                                            row.converged = r.converged;
                                            if (opt.timing)
                                                row.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
                                        }
                                        catch (...)
                                        {
                                            errors[static_cast<std::size_t>(k)] = std::current_exception();
                                        }
                                    }
                                });
        for (const std::exception_ptr &e : errors)
            if (e)
                std::rethrow_exception(e);

        if (cfg.sweep.validate || opt.force_validate)
        {
            // draws depend on fading and element count only; reuse them while those stay fixed
            const bool any_reflected = std::any_of(cfg.sweep.modes.begin(), cfg.sweep.modes.end(),
                                                   [](Mode m) { return m != Mode::direct_only; });
            std::optional<FadingDraws> draws;
            FadingConfig drawn_fading;
            std::int64_t drawn_n = -1;
            for (std::size_t k = 0; k < tasks.size(); ++k)
            {
                const Scenario &sc0 = points[tasks[k].point].scenario;
                const std::int64_t n = any_reflected ? sc0.sys.n_elements : 0;
                const FadingConfig &f = sc0.fading;
                const bool same = draws && n == drawn_n && f.bs_irs.m == drawn_fading.bs_irs.m &&
                                  f.bs_irs.omega == drawn_fading.bs_irs.omega && f.irs_ue.m == drawn_fading.irs_ue.m &&
                                  f.irs_ue.omega == drawn_fading.irs_ue.omega && f.bs_ue.m == drawn_fading.bs_ue.m &&
                                  f.bs_ue.omega == drawn_fading.bs_ue.omega;
                if (!same)
                {
                    draws = draw_fading(f, n, cfg.sim, opt.jobs);
                    drawn_fading = f;
                    drawn_n = n;
                }
                Scenario sc = sc0;
                sc.mode = tasks[k].mode;
                if (tasks[k].regime)
                    sc.regime = *tasks[k].regime;
                FadingDraws &d = *draws;
                d.n_elements = sc.sys.n_elements;
                const SimEstimate e = coverage_from_draws(d, sc);
                rows[k].mc_probability = e.coverage;
                rows[k].mc_std_error = e.std_error;
            }
        }
        return rows;
    }

    // ---- Output ----------------------------------------------------------------------------------

    inline const char *csv_columns() { return "series,value,mode,regime,probability,abs_error,mc_probability,mc_std_error,runtime_ms"; }

    inline std::string header_comment(const RunConfig &cfg)
    {
        std::string s = std::string("# irscov ") + IRSCOV_VERSION + " config_hash=" + hex64(cfg.config_hash) +
                        " sweep=" + to_string(cfg.sweep.variable);
        if (cfg.sweep.series_variable)
            s += std::string(" series=") + to_string(*cfg.sweep.series_variable);
        return s;
    }

    inline void write_csv(std::ostream &out, const std::vector<OutputRow> &rows, const std::string &comment = "")
    {
        if (!comment.empty())
            out << comment << '\n';
        out << csv_columns() << '\n';
        for (const OutputRow &r : rows)
        {
            out << format_real(r.series) << ',' << format_real(r.value) << ',' << to_string(r.mode) << ','
                << (r.regime ? to_string(*r.regime) : "") << ',' << format_real(r.probability) << ',' << format_real(r.abs_error)
                << ',' << format_optional(r.mc_probability) << ',' << format_optional(r.mc_std_error) << ','
                << format_optional(r.runtime_ms) << '\n';
        }
    }

    /// Parse CSV written by `write_csv`; comment lines start with '#'.
    inline std::vector<OutputRow> read_csv(std::istream &in)
    {
        std::vector<OutputRow> rows;
        std::string line;
        bool header = false;
        while (std::getline(in, line))
        {
            if (line.empty() || line[0] == '#')
                continue;
            if (!header)
            {
                if (line != csv_columns())
                    throw ConfigError("unexpected CSV header: " + line);
                header = true;
                continue;
            }
            const std::vector<std::string> c = detail::split_csv_line(line);
            if (c.size() != 9)
                throw ConfigError("CSV row has " + std::to_string(c.size()) + " fields: " + line);
            OutputRow r;
            r.series = detail::parse_real(c[0]);
            r.value = detail::parse_real(c[1]);
            r.mode = detail::parse_enum(c[2], detail::all_modes, "mode");
            if (!c[3].empty())
                r.regime = detail::parse_enum(c[3], detail::all_regimes, "regime");
            r.probability = detail::parse_real(c[4]);
            r.abs_error = detail::parse_real(c[5]);
            if (!c[6].empty())
                r.mc_probability = detail::parse_real(c[6]);
            if (!c[7].empty())
                r.mc_std_error = detail::parse_real(c[7]);
            if (!c[8].empty())
                r.runtime_ms = detail::parse_real(c[8]);
            rows.push_back(r);
        }
        return rows;
    }

    namespace detail
    {
        // number rounded to 12 significant digits, null for NaN or missing
        inline json rounded(double x)
        {
            if (std::isnan(x))
                return nullptr;
            return std::stod(format_real(x));
        }
        inline json rounded(const std::optional<double> &x) { return x ? rounded(*x) : json(nullptr); }
    }

    inline nlohmann::json rows_to_json(const std::vector<OutputRow> &rows)
    {
        nlohmann::json arr = nlohmann::json::array();
        for (const OutputRow &r : rows)
        {
            arr.push_back({{"series", detail::rounded(r.series)},
                           {"value", detail::rounded(r.value)},
                           {"mode", to_string(r.mode)},
                           {"regime", r.regime ? nlohmann::json(to_string(*r.regime)) : nlohmann::json(nullptr)},
                           {"probability", detail::rounded(r.probability)},
                           {"abs_error", detail::rounded(r.abs_error)},
                           {"mc_probability", detail::rounded(r.mc_probability)},
                           {"mc_std_error", detail::rounded(r.mc_std_error)},
                           {"runtime_ms", detail::rounded(r.runtime_ms)}});
        }
        return arr;
    }

    /// Plain string table for the derived reports (range, hardening, crossover).
    struct Table
    {
        std::vector<std::string> columns;
        std::vector<std::vector<std::string>> rows;

        void write_csv(std::ostream &out, const std::string &comment = "") const
        {
            if (!comment.empty())
                out << comment << '\n';
            for (std::size_t i = 0; i < columns.size(); ++i)
                out << (i ? "," : "") << columns[i];
            out << '\n';
            for (const auto &row : rows)
            {
                for (std::size_t i = 0; i < row.size(); ++i)
                    out << (i ? "," : "") << row[i];
                out << '\n';
            }
        }

        /// Array of objects; numeric-looking cells become numbers, empty cells null.
        nlohmann::json to_json() const
        {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto &row : rows)
            {
                nlohmann::json obj = nlohmann::json::object();
                for (std::size_t i = 0; i < row.size(); ++i)
                {
                    const std::string &cell = row[i];
                    if (cell.empty())
                        obj[columns[i]] = nullptr;
                    else
                    {
                        try
                        {
                            const double v = detail::parse_real(cell);
                            if (v == std::floor(v) && std::abs(v) < 0x1p53)
                                obj[columns[i]] = static_cast<std::int64_t>(v);
                            else
                                obj[columns[i]] = v;
                        }
                        catch (const std::exception &)
                        {
                            obj[columns[i]] = cell;
                        }
                    }
                }
                arr.push_back(obj);
            }
            return arr;
        }
    };

    // ---- Crossovers ------------------------------------------------------------------------------

    struct Crossover
    {
        double series = std::numeric_limits<double>::quiet_NaN();
        std::optional<Regime> regime;
        Mode first = Mode::irs_only;
        Mode second = Mode::direct_only;
        double margin = 0.0;
        double distance = 0.0;
    };

    /// Interpolated sweep values where coverage(first) - coverage(second) crosses `margin`, for every pair of
    /// modes present in the rows. Rows of one curve are matched on (series, regime); direct_only rows join
    /// every regime. A zero margin gives plain curve intersections.
    inline std::vector<Crossover> report_crossovers(const std::vector<OutputRow> &rows, double margin = 0.0)
    {
        using Key = std::pair<double, int>; // (series, regime index or -1)
        std::map<Key, std::map<Mode, std::map<double, double>>> curves;
        std::set<int> regimes;
        auto series_key = [](double s) { return std::isnan(s) ? -std::numeric_limits<double>::infinity() : s; };
        for (const OutputRow &r : rows)
            if (r.regime)
                regimes.insert(static_cast<int>(*r.regime));
        if (regimes.empty())
            regimes.insert(-1);
        for (const OutputRow &r : rows)
        {
            if (r.regime)
                curves[{series_key(r.series), static_cast<int>(*r.regime)}][r.mode][r.value] = r.probability;
            else
                for (int g : regimes)
                    curves[{series_key(r.series), g}][r.mode][r.value] = r.probability;
        }

        std::vector<Crossover> out;
        for (const auto &[key, by_mode] : curves)
        {
            for (auto a = by_mode.begin(); a != by_mode.end(); ++a)
            {
                for (auto b = std::next(a); b != by_mode.end(); ++b)
                {
                    // pair ordering: reflected modes first so a positive difference means the IRS helps
                    Mode first = a->first, second = b->first;
                    const std::map<double, double> *fa = &a->second, *fb = &b->second;
                    if (first == Mode::direct_only)
                    {
                        std::swap(first, second);
                        std::swap(fa, fb);
                    }
                    std::vector<std::pair<double, double>> diff;
                    for (const auto &[x, pa] : *fa)
                    {
                        const auto it = fb->find(x);
                        if (it != fb->end())
                            diff.emplace_back(x, pa - it->second - margin);
                    }
                    for (std::size_t i = 1; i < diff.size(); ++i)
                    {
                        const auto [x0, y0] = diff[i - 1];
                        const auto [x1, y1] = diff[i];
                        const bool crosses = (y0 > 0.0 && y1 <= 0.0) || (y0 < 0.0 && y1 >= 0.0);
                        if (!crosses)
                            continue;
                        Crossover c;
                        c.series = std::isinf(key.first) ? std::numeric_limits<double>::quiet_NaN() : key.first;
                        if (key.second >= 0)
                            c.regime = static_cast<Regime>(key.second);
                        c.first = first;
                        c.second = second;
                        c.margin = margin;
                        c.distance = x0 + (x1 - x0) * y0 / (y0 - y1);
                        out.push_back(c);
                    }
                }
            }
        }
        return out;
    }

    inline Table crossover_table(const std::vector<Crossover> &list)
    {
        Table t;
        t.columns = {"series", "regime", "first", "second", "margin", "distance"};
        for (const Crossover &c : list)
            t.rows.push_back({format_real(c.series), c.regime ? to_string(*c.regime) : "", to_string(c.first), to_string(c.second),
                              format_real(c.margin), format_real(c.distance)});
        return t;
    }

} // namespace irscov

#endif
