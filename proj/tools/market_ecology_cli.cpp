/// \file   market_ecology_cli.cpp
/// \copyright  Copyright 2026 The market-ecology authors
///
///             Licensed under the Apache License, Version 2.0 (the "License");
///             you may not use this file except in compliance with the License.
///             You may obtain a copy of the License at
///
///                 http://www.apache.org/licenses/LICENSE-2.0
///
///             Unless required by applicable law or agreed to in writing, software
///             distributed under the License is distributed on an "AS IS" BASIS,
///             WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
///             See the License for the specific language governing permissions and
///             limitations under the License.
///
#include "market_ecology/config.hpp"
#include "market_ecology/experiments.hpp"
#include "market_ecology/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#ifndef ME_GIT_DESCRIBE
#define ME_GIT_DESCRIBE "unknown"
#endif

namespace fs = std::filesystem;
using namespace market_ecology;

namespace {

enum exit_code : int
{
    exit_ok = 0,
    exit_runtime = 1,
    exit_usage = 2,
    exit_config = 3,
    exit_io = 4,
};

int report(int code, std::string_view kind, std::string_view message)
{
    nlohmann::ordered_json j;
    j["error"] = {{"kind", kind}, {"message", message}};
    std::cerr << j.dump() << '\n';
    return code;
}

using tables = std::vector<std::pair<std::string, csv_table>>;

std::vector<std::size_t> indices(std::size_t n)
{
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

const char *fund_name(std::size_t i)
{
    static const char *names[] = {"nt", "vi", "tf", "kelly"};
    return names[i];
}

tables simulate(const run_config &c, std::vector<std::size_t> &runs)
{
    runs = {c.run_index};
    const auto out = run(c);
    return {{"run", run_table(out)}, {"insolvencies", insolvency_table(out)}};
}

tables sweep(const run_config &c, const experiment_settings &s, std::vector<std::size_t> &runs)
{
    runs = indices(s.seeds);
    csv_table t({"index",          "w_nt",           "w_vi",           "w_tf",         "return_nt",
                 "return_vi",      "return_tf",      "volatility_nt",  "volatility_vi", "volatility_tf",
                 "sharpe_nt",      "sharpe_vi",      "sharpe_tf",      "acf1",          "price_volatility",
                 "mispricing",     "dominant",       "trophic",        "failures"});
    for(const auto &r : sweep_simplex(c, s, s.sweep_trophic)) {
        std::vector<std::string> row = {cell(r.index), cell(r.w[0]), cell(r.w[1]), cell(r.w[2])};
        for(const auto *field : {&r.mean.returns, &r.mean.return_volatility, &r.mean.sharpe_ratio}) {
            for(double x : *field) {
                row.push_back(cell(x));
            }
        }
        row.push_back(cell(r.mean.acf1));
        row.push_back(cell(r.mean.price_volatility));
        row.push_back(cell(r.mean.mispricing));
        row.push_back(cell(r.dominant ? fund_name(*r.dominant) : "none"));
        row.push_back(cell(s.sweep_trophic ? r.trophic : std::string("skipped")));
        row.push_back(cell(r.failures));
        t.add(std::move(row));
    }
    return {{"sweep", std::move(t)}};
}

tables trajectories(const run_config &c, const experiment_settings &s, std::vector<std::size_t> &runs)
{
    runs = indices(s.runs);
    csv_table paths({"run", "year", "w_nt", "w_vi", "w_tf", "alive_nt", "alive_vi", "alive_tf"});
    csv_table terminal({"run", "initial_nt", "initial_vi", "initial_tf", "final_nt", "final_vi", "final_tf",
                        "insolvent", "insolvency_year", "error"});
    for(const auto &tr : monte_carlo_trajectories(c, s)) {
        for(std::size_t k = 0; k < tr.years.size(); ++k) {
            paths.add({cell(tr.run), cell(tr.years[k]), cell(tr.path[k][0]), cell(tr.path[k][1]),
                       cell(tr.path[k][2]), cell(tr.alive[k][0]), cell(tr.alive[k][1]), cell(tr.alive[k][2])});
        }
        const auto &last = tr.path.back();
        terminal.add({cell(tr.run), cell(tr.initial[0]), cell(tr.initial[1]), cell(tr.initial[2]), cell(last[0]),
                      cell(last[1]), cell(last[2]), cell(tr.insolvent),
                      cell(tr.insolvent ? tr.insolvency_year : std::nan("")), cell(tr.error)});
    }
    return {{"trajectories", std::move(paths)}, {"terminal", std::move(terminal)}};
}

tables community(const run_config &c, const experiment_settings &s, std::vector<std::size_t> &runs)
{
    runs = indices(s.seeds);
    const auto g = community_experiment(c, s);
    csv_table t({"row", "column", "g", "standard_error", "t_stat", "base_nt", "base_vi", "base_tf", "h", "seeds"});
    for(std::size_t i = 0; i < 3; ++i) {
        for(std::size_t j = 0; j < 3; ++j) {
            t.add({cell(fund_name(i)), cell(fund_name(j)), cell(g.g[i][j]), cell(g.standard_error[i][j]),
                   cell(g.t_stat(i, j)), cell(g.base[0]), cell(g.base[1]), cell(g.base[2]), cell(g.h),
                   cell(g.seeds)});
        }
    }
    return {{"community", std::move(t)}};
}

tables trophic(const run_config &c, const experiment_settings &s, std::vector<std::size_t> &runs)
{
    runs = indices(s.seeds);
    const auto study = trophic_experiment(c, s);
    csv_table web({"row", "column", "raw", "normalized", "difference", "standard_error", "base_nt", "base_vi",
                   "base_tf", "seeds"});
    for(std::size_t i = 0; i < 3; ++i) {
        for(std::size_t j = 0; j < 3; ++j) {
            web.add({cell(fund_name(i)), cell(fund_name(j)), cell(study.web.raw[i][j]),
                     cell(study.web.normalized[i][j]), cell(study.web.difference[i][j]),
                     cell(study.web.standard_error[i][j]), cell(c.wealth[0]), cell(c.wealth[1]),
                     cell(c.wealth[2]), cell(study.web.seeds)});
        }
    }
    csv_table levels({"strategy", "level", "ordering", "iterations"});
    const auto ordering = trophic_ordering(study.levels);
    for(std::size_t i = 0; i < 3; ++i) {
        const double level = study.levels.defined() ? (*study.levels.levels)[i] : std::nan("");
        levels.add({cell(fund_name(i)), cell(level), cell(ordering), cell(study.levels.iterations)});
    }
    csv_table per_seed({"seed", "ordering"});
    for(std::size_t k = 0; k < study.per_seed_ordering.size(); ++k) {
        per_seed.add({cell(k), cell(study.per_seed_ordering[k])});
    }
    return {{"food_web", std::move(web)}, {"trophic_levels", std::move(levels)}, {"trophic_per_seed", std::move(per_seed)}};
}

tables regress(const run_config &c, std::vector<std::size_t> &runs)
{
    runs = {c.run_index};
    const auto m = malfunction_experiment(c);
    csv_table coeffs({"metric", "term", "coefficient", "t_stat", "r_squared", "r_squared_uncentered", "observations"});
    for(const auto &[name, fit] : {std::pair{"volatility", &m.volatility}, std::pair{"mispricing", &m.mispricing}}) {
        for(std::size_t i = 0; i < 3; ++i) {
            coeffs.add({cell(name), cell(std::string("w_") + fund_name(i)), cell(fit->coefficients[i]),
                        cell(fit->t_stats[i]), cell(fit->r_squared), cell(fit->r_squared_uncentered),
                        cell(fit->observations)});
        }
    }
    csv_table series({"t", "w_nt", "w_vi", "w_tf", "volatility", "mispricing"});
    for(std::size_t k = 0; k < m.t.size(); ++k) {
        series.add({cell(m.t[k]), cell(m.wealth[k][0]), cell(m.wealth[k][1]), cell(m.wealth[k][2]),
                    cell(m.rolling_volatility[k]), cell(m.mispricing_series[k])});
    }
    return {{"regression", std::move(coeffs)}, {"malfunction_series", std::move(series)}};
}

tables converge(const run_config &c, const experiment_settings &s, std::vector<std::size_t> &runs)
{
    runs = indices(s.runs);
    csv_table t({"parameter", "variant", "year", "kl", "insolvent_fraction", "runs"});
    for(const auto &curve : convergence_experiment(c, s)) {
        for(std::size_t k = 0; k < curve.years.size(); ++k) {
            t.add({cell(curve.parameter), cell(curve.variant), cell(curve.years[k]), cell(curve.kl[k]),
                   cell(curve.insolvent_fraction), cell(curve.runs)});
        }
    }
    return {{"convergence", std::move(t)}};
}

tables kelly(const run_config &c, const experiment_settings &s, std::vector<std::size_t> &runs)
{
    runs = indices(s.runs);
    const auto k = kelly_optimality_experiment(c, s);
    csv_table growth({"multiplier", "mean_log_growth", "standard_error", "runs"});
    for(std::size_t m = 0; m < k.multipliers.size(); ++m) {
        growth.add({cell(k.multipliers[m]), cell(k.mean_log_growth[m]), cell(k.standard_error[m]), cell(k.runs)});
    }
    const auto sc = survival_experiment(c, s);
    csv_table survival({"year", "nt", "vi", "tf", "kelly", "runs"});
    for(std::size_t t = 0; t < sc.years.size(); ++t) {
        survival.add({cell(sc.years[t]), cell(sc.fraction[0][t]), cell(sc.fraction[1][t]), cell(sc.fraction[2][t]),
                      cell(sc.fraction[3][t]), cell(sc.runs)});
    }
    return {{"kelly_growth", std::move(growth)}, {"survival", std::move(survival)}};
}

tables facts(const run_config &c, const experiment_settings &s, std::vector<std::size_t> &runs)
{
    runs = {c.run_index};
    const auto f = stylized_facts_experiment(c, s);
    csv_table summary({"statistic", "value"});
    for(const auto &[name, value] : std::vector<std::pair<std::string, double>>{
            {"mean", f.mean},
            {"volatility", f.volatility},
            {"skewness", f.skewness},
            {"excess_kurtosis", f.excess_kurtosis},
            {"mean_mispricing", f.mean_mispricing},
            {"max_mispricing", f.max_mispricing},
            {"observations", double(f.returns.size())}}) {
        summary.add({name, cell(value)});
    }
    csv_table acf({"lag", "returns", "absolute_returns"});
    for(std::size_t k = 0; k < f.acf_returns.size(); ++k) {
        acf.add({cell(k + 1), cell(f.acf_returns[k]), cell(f.acf_absolute_returns[k])});
    }
    csv_table returns({"index", "log_return"});
    for(std::size_t k = 0; k < f.returns.size(); ++k) {
        returns.add({cell(k), cell(f.returns[k])});
    }
    return {{"stylized_summary", std::move(summary)}, {"acf", std::move(acf)}, {"returns", std::move(returns)}};
}

tables execute(const std::string &experiment, const key_values &config, std::vector<std::size_t> &runs)
{
    const auto c = to_run_config(config);
    const auto s = to_experiment_settings(config);
    if(experiment == "simulate") {
        return simulate(c, runs);
    }
    if(experiment == "sweep") {
        return sweep(c, s, runs);
    }
    if(experiment == "trajectories") {
        return trajectories(c, s, runs);
    }
    if(experiment == "community") {
        return community(c, s, runs);
    }
    if(experiment == "trophic") {
        return trophic(c, s, runs);
    }
    if(experiment == "regress") {
        return regress(c, runs);
    }
    if(experiment == "converge") {
        return converge(c, s, runs);
    }
    if(experiment == "kelly") {
        return kelly(c, s, runs);
    }
    if(experiment == "stylized-facts") {
        return facts(c, s, runs);
    }
    throw config_error("unknown experiment '" + experiment + "'");
}

void run_experiment(const std::string &experiment, const key_values &raw, const fs::path &out_dir)
{
    const auto canonical = canonicalize(raw);
    const auto start = std::chrono::steady_clock::now();
    experiment_manifest m;
    m.experiment = experiment;
    m.config = canonical;
    m.config_hash = config_hash(canonical, experiment);
    m.seed = parse_unsigned("seed", canonical.at("seed"));
    m.git_describe = ME_GIT_DESCRIBE;
    const auto results = execute(experiment, canonical, m.run_indices);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if(ec) {
        throw io_error("cannot create '" + out_dir.string() + "': " + ec.message());
    }
    for(const auto &[kind, table] : results) {
        const auto name = kind + ".csv";
        write_csv_file(out_dir / name, m.config_hash, table);
        m.outputs.push_back({kind, name});
    }
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest_file(out_dir / "manifest.json", m);
    nlohmann::ordered_json j;
    j["experiment"] = experiment;
    j["config_hash"] = m.config_hash;
    j["manifest"] = (out_dir / "manifest.json").string();
    std::cout << j.dump() << '\n';
}

struct experiment_options
{
    std::string config_path;
    std::vector<std::string> assignments;
    std::string out = ".";
    std::map<std::string, std::string> shortcuts;
};

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Market ecology simulator and experiment harness"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> experiments = {
        {"simulate", "single run, one row per step"},
        {"sweep", "constant-wealth sweep over the wealth simplex"},
        {"trajectories", "Monte Carlo wealth trajectories under reinvestment"},
        {"community", "finite-difference community matrix"},
        {"trophic", "food web and trophic levels"},
        {"regress", "volatility and mispricing regressions on one long run"},
        {"converge", "KL convergence curves over parameter variants"},
        {"kelly", "Kelly optimality and survival"},
        {"stylized-facts", "return distribution and autocorrelation statistics"},
    };
    std::map<std::string, experiment_options> options;
    std::map<std::string, CLI::App *> commands;
    for(const auto &[name, description] : experiments) {
        auto &o = options[name];
        auto *sub = app.add_subcommand(name, description);
        sub->add_option("--config", o.config_path, "key = value configuration file")->required();
        sub->add_option("--set", o.assignments, "override, key=value (repeatable)");
        sub->add_option("--out", o.out, "output directory")->capture_default_str();
        for(const auto &[key, value] : default_config()) {
            // one-letter keys would collide with short flags; they go through --set
            if(key.size() < 2) {
                continue;
            }
            sub->add_option("--" + key, o.shortcuts[key], "shortcut for --set " + key + "=...")->group("Keys");
        }
        commands[name] = sub;
    }
    std::string manifest_path;
    std::string replay_out;
    auto *replay = app.add_subcommand("replay", "rerun the experiment recorded in a manifest");
    replay->add_option("--manifest", manifest_path, "manifest.json of an earlier run")->required();
    replay->add_option("--out", replay_out, "output directory (default: the manifest's directory)");

    try {
        app.parse(argc, argv);
    } catch(const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch(const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch(const CLI::ParseError &e) {
        return report(exit_usage, "usage", e.what());
    }

    try {
        if(replay->parsed()) {
            const auto m = read_manifest_file(manifest_path);
            const auto canonical = canonicalize(m.config);
            if(config_hash(canonical, m.experiment) != m.config_hash) {
                throw config_error("manifest config hash does not match its config");
            }
            const fs::path out = replay_out.empty() ? fs::path(manifest_path).parent_path() : fs::path(replay_out);
            run_experiment(m.experiment, canonical, out.empty() ? fs::path(".") : out);
            return exit_ok;
        }
        for(const auto &[name, sub] : commands) {
            if(!sub->parsed()) {
                continue;
            }
            const auto &o = options.at(name);
            auto values = load_config_file(o.config_path);
            for(const auto &a : o.assignments) {
                apply_override(values, a);
            }
            for(const auto &[key, value] : o.shortcuts) {
                if(sub->count("--" + key) > 0) {
                    apply_override(values, key + "=" + value);
                }
            }
            run_experiment(name, values, o.out);
        }
        return exit_ok;
    } catch(const config_error &e) {
        return report(exit_config, "config", e.what());
    } catch(const io_error &e) {
        return report(exit_io, "io", e.what());
    } catch(const std::exception &e) {
        return report(exit_runtime, "runtime", e.what());
    }
}
