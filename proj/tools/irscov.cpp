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
//
// Command-line front end. Every subcommand reads one JSON config and writes one table.
// Failures produce a single JSON error record on stderr and a nonzero exit code:
//   2 configuration, 3 numerical non-convergence, 4 invariant violation, 5 I/O.

#include "irscov/sweep.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace
{
    using namespace irscov;

    struct Failure
    {
        int code;
        std::string kind;
        std::string message;
    };

    struct Common
    {
        std::string config;
        std::string out = "-";
        std::string format = "csv";
        std::optional<std::uint64_t> seed;
        std::optional<std::int64_t> samples;
        unsigned jobs = 1;
        bool timing = false;
        double margin = 0.01;
    };

    int report(const Failure &f)
    {
        const nlohmann::json record = {{"error", {{"kind", f.kind}, {"message", f.message}, {"exit_code", f.code}}}};
        std::cerr << record.dump() << '\n';
        return f.code;
    }

    RunConfig load(const Common &c)
    {
        RunConfig cfg = load_config(c.config);
        if (c.seed)
            cfg.sim.seed = *c.seed;
        if (c.samples)
        {
            cfg.sim.samples = *c.samples;
            cfg.sim.validate();
        }
        return cfg;
    }

    void emit(const Common &c, const std::string &text)
    {
        if (c.out == "-")
        {
            std::cout << text;
            return;
        }
        std::ofstream f(c.out, std::ios::binary);
        if (!f || !(f << text))
            throw Failure{5, "io", "cannot write output file '" + c.out + "'"};
    }

    void emit_rows(const Common &c, const RunConfig &cfg, const std::vector<OutputRow> &rows)
    {
        std::ostringstream s;
        if (c.format == "json")
            s << rows_to_json(rows).dump(2) << '\n';
        else
            write_csv(s, rows, header_comment(cfg));
        emit(c, s.str());
    }

    void emit_table(const Common &c, const RunConfig &cfg, const Table &t, const char *what)
    {
        std::ostringstream s;
        if (c.format == "json")
            s << t.to_json().dump(2) << '\n';
        else
            t.write_csv(s, std::string("# irscov ") + IRSCOV_VERSION + " config_hash=" + hex64(cfg.config_hash) + " report=" + what);
        emit(c, s.str());
    }

    /// Rows must be probabilities and the analytic path must have converged.
    void check_rows(const std::vector<OutputRow> &rows)
    {
        for (const OutputRow &r : rows)
        {
            if (!(r.probability >= 0.0 && r.probability <= 1.0))
                throw Failure{4, "invariant", std::string("probability outside [0, 1] at ") + to_string(r.mode) + " value " + format_real(r.value)};
            if (!r.converged)
                throw Failure{3, "numerical", "inversion did not converge at " + std::string(to_string(r.mode)) + " value " +
                                                  format_real(r.value)};
        }
    }

    int run_sweep_cmd(const Common &c, bool validate)
    {
        const RunConfig cfg = load(c);
        const std::vector<OutputRow> rows = run_sweep(cfg, {c.jobs, c.timing, validate});
        emit_rows(c, cfg, rows);
        check_rows(rows);
        return 0;
    }

    int run_range_cmd(const Common &c)
    {
        const RunConfig cfg = load(c);
        Table t;
        t.columns = {"series", "value", "distance", "distance_proof", "distance_statement", "validity_ratio", "valid",
                     "outage_at_distance"};
        for (const SweepPoint &p : expand_grid(cfg))
        {
            Scenario sc = p.scenario;
            sc.mode = Mode::irs_only;
            sc.regime = Regime::asymptotic_clt;
            const RangeResult r = irs_coverage_range(sc);
            sc.geom.d = r.distance;
            const double outage = outage_irs_only(sc).probability;
            t.rows.push_back({format_real(p.series), format_real(p.value), format_real(r.distance), format_real(r.distance_proof),
                              format_real(r.distance_statement), format_real(r.validity_ratio), r.valid ? "1" : "0",
                              format_real(outage)});
        }
        emit_table(c, cfg, t, "range");
        return 0;
    }

    int run_hardening_cmd(const Common &c)
    {
        const RunConfig cfg = load(c);
        Table t;
        t.columns = {"series", "value", "n_elements", "m_bs_irs", "m_irs_ue", "kappa", "mc_kappa", "mc_std_error"};
        for (const SweepPoint &p : expand_grid(cfg))
        {
            const Scenario &sc = p.scenario;
            if (sc.sys.n_elements < 1)
                throw Failure{2, "config", "hardening needs at least one element at every grid point"};
            std::string mc = "", se = "";
            if (cfg.sweep.validate)
            {
                const HardeningEstimate h = empirical_hardening(draw_fading(sc.fading, sc.sys.n_elements, cfg.sim, c.jobs));
                mc = format_real(h.kappa);
                se = format_real(h.std_error);
            }
            t.rows.push_back({format_real(p.series), format_real(p.value), std::to_string(sc.sys.n_elements),
                              format_real(sc.fading.bs_irs.m), format_real(sc.fading.irs_ue.m),
                              format_real(channel_hardening_kappa(sc.sys.n_elements, sc.fading)), mc, se});
        }
        emit_table(c, cfg, t, "hardening");
        return 0;
    }

    int run_crossover_cmd(const Common &c)
    {
        RunConfig cfg = load(c);
        if (cfg.sweep.variable != SweepVariable::distance_d)
            throw Failure{2, "config", "crossover needs sweep.variable = distance_d"};
        if (cfg.sweep.modes.size() < 2)
            throw Failure{2, "config", "crossover needs at least two modes"};
        cfg.sweep.validate = false;
        const std::vector<OutputRow> rows = run_sweep(cfg, {c.jobs, false, false});
        check_rows(rows);
        std::vector<Crossover> list = report_crossovers(rows, 0.0);
        // where the combined link stops beating the direct link by the margin
        for (const Crossover &x : report_crossovers(rows, c.margin))
            if (x.first == Mode::combined && x.second == Mode::direct_only)
                list.push_back(x);
        emit_table(c, cfg, crossover_table(list), "crossover");
        return 0;
    }

    void add_common(CLI::App *sub, Common &c)
    {
        sub->add_option("--config", c.config, "JSON configuration file")->required();
        sub->add_option("--out", c.out, "output file, '-' for stdout");
        sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", c.seed, "override simulation.seed");
        sub->add_option("--samples", c.samples, "override simulation.samples")->check(CLI::PositiveNumber);
        sub->add_option("--jobs", c.jobs, "worker threads")->check(CLI::Range(1u, 1024u));
        sub->add_flag("--timing", c.timing, "fill the runtime_ms column");
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Coverage analysis for IRS-aided links under Nakagami-m fading", "irscov-cli"};
    app.set_version_flag("--version", IRSCOV_VERSION);
    app.require_subcommand(1);

    Common c;
    CLI::App *sweep = app.add_subcommand("sweep", "analytic coverage over the configured grid");
    CLI::App *validate = app.add_subcommand("validate", "analytic coverage with Monte-Carlo columns");
    CLI::App *range = app.add_subcommand("range", "IRS coverage range at each grid point");
    CLI::App *hardening = app.add_subcommand("hardening", "channel hardening ratio at each grid point");
    CLI::App *crossover = app.add_subcommand("crossover", "distances where mode curves intersect");
    for (CLI::App *sub : {sweep, validate, range, hardening, crossover})
        add_common(sub, c);
    crossover->add_option("--margin", c.margin, "coverage margin for the combined-over-direct benefit")->check(CLI::NonNegativeNumber);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e);
    }

    try
    {
        if (*sweep)
            return run_sweep_cmd(c, false);
        if (*validate)
            return run_sweep_cmd(c, true);
        if (*range)
            return run_range_cmd(c);
        if (*hardening)
            return run_hardening_cmd(c);
        if (*crossover)
            return run_crossover_cmd(c);
    }
    catch (const Failure &f)
    {
        return report(f);
    }
    catch (const ConfigError &e)
    {
        return report({2, "config", e.what()});
    }
    catch (const std::invalid_argument &e)
    {
        return report({2, "config", e.what()});
    }
    catch (const ConvergenceError &e)
    {
        return report({3, "numerical", e.what()});
    }
    catch (const std::domain_error &e)
    {
        return report({3, "numerical", e.what()});
    }
    catch (const std::exception &e)
    {
        return report({1, "internal", e.what()});
    }
    return 1;
}
