/// \file   experiments.cpp
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
#include "market_ecology/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

namespace market_ecology {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::size_t sample_spacing(double years)
{
    return std::max<std::size_t>(1, std::size_t(std::llround(years * double(day_count))));
}

double mean_of(const std::vector<double> &x)
{
    return x.empty() ? nan : std::accumulate(x.begin(), x.end(), 0.) / double(x.size());
}

double standard_error_of(const std::vector<double> &x)
{
    if(x.size() < 2) {
        return 0.;
    }
    const double m = mean_of(x);
    double ss = 0.;
    for(double v : x) {
        ss += (v - m) * (v - m);
    }
    return std::sqrt(ss / double(x.size() - 1) / double(x.size()));
}

// price series with the initial price prepended
std::vector<double> price_path(const run_output &out)
{
    std::vector<double> p;
    p.reserve(out.steps.size() + 1);
    p.push_back(out.config.initial_price);
    for(const auto &r : out.steps) {
        p.push_back(r.price);
    }
    return p;
}

wealth_vector uniform_simplex_point(std::uint64_t seed, std::size_t run_index)
{
    auto engine = make_stream(seed, "init", run_index);
    std::exponential_distribution<double> draw(1.);
    const double a = draw(engine);
    const double b = draw(engine);
    const double c = draw(engine);
    return wealth_vector::normalized(a, b, c);
}

run_config with_variant(run_config c, const std::string &parameter, double value)
{
    if(parameter == "f") {
        c.reinvestment = value;
    } else if(parameter == "gamma") {
        c.params.noise_volatility = value;
    } else if(parameter == "sigma") {
        c.params.dividend_volatility = value;
    } else {
        throw config_error("unknown variant parameter '" + parameter + "'");
    }
    return c;
}

} // namespace

std::size_t worker_count()
{
    if(const char *env = std::getenv("MARKET_ECOLOGY_WORKERS")) {
        char *end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if(end != env && *end == '\0' && n > 0) {
            return std::size_t(n);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body, std::size_t workers)
{
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if(workers == 1) {
        for(std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex guard;
    std::size_t failed_index = n;
    std::exception_ptr failure;
    auto work = [&] {
        for(std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch(...) {
                std::lock_guard lock(guard);
                if(i < failed_index) {
                    failed_index = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for(std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back(work);
    }
    for(auto &t : pool) {
        t.join();
    }
    if(failure) {
        std::rethrow_exception(failure);
    }
}

run_summary summarize_run(const run_output &out)
{
    run_summary s;
    s.halted = out.halted;
    const std::size_t begin = out.analysis_begin();
    s.steps = out.steps.size() - begin;
    if(s.steps == 0) {
        s.returns.fill(nan);
        s.return_volatility.fill(nan);
        s.sharpe_ratio.fill(nan);
        s.acf1 = s.price_volatility = s.mispricing = nan;
        return s;
    }
    for(std::size_t i = 0; i < 3; ++i) {
        std::vector<double> r;
        for(std::size_t t = begin; t < out.steps.size(); ++t) {
            if(out.steps[t].funds[i].alive) {
                r.push_back(out.steps[t].funds[i].ret);
            }
        }
        if(r.size() < 2) {
            s.returns[i] = s.return_volatility[i] = s.sharpe_ratio[i] = nan;
            continue;
        }
        s.returns[i] = avg_return(r);
        const double m = mean_of(r);
        double ss = 0.;
        for(double v : r) {
            ss += (v - m) * (v - m);
        }
        s.return_volatility[i] = std::sqrt(ss / double(r.size() - 1) * double(day_count));
        try {
            s.sharpe_ratio[i] = sharpe(r);
        } catch(const std::domain_error &) {
            s.sharpe_ratio[i] = 0.;
        }
    }
    const auto prices = price_path(out);
    const auto window = std::span(prices).subspan(begin);
    std::vector<double> lr;
    for(std::size_t k = 1; k < window.size(); ++k) {
        lr.push_back(std::log(window[k] / window[k - 1]));
    }
    try {
        s.acf1 = return_autocorrelation(lr, 1);
    } catch(const std::domain_error &) {
        s.acf1 = nan;
    }
    s.price_volatility = window.size() >= 3 ? volatility(window) : nan;
    double mis = 0.;
    for(std::size_t t = begin; t < out.steps.size(); ++t) {
        mis += mispricing(out.steps[t].price, out.steps[t].value);
    }
    s.mispricing = mis / double(s.steps);
    return s;
}

wealth_vector relative_wealth(const step_record &record)
{
    std::array<double, 3> w{};
    double total = 0.;
    for(std::size_t i = 0; i < 3; ++i) {
        const auto &f = record.funds[i];
        w[i] = f.alive ? std::max(0., f.wealth) : 0.;
        total += w[i];
    }
    if(!(total > 0.)) {
        return {0., 0., 0.};
    }
    return {w[0] / total, w[1] / total, w[2] / total};
}

double base_supply(const run_config &base)
{
    return init_market(base).supply;
}

run_config constant_wealth_config(const run_config &base,
                                  const std::array<double, 3> &weights,
                                  std::size_t seed_index)
{
    run_config c = base;
    c.mode = run_mode::constant_wealth;
    const double scale = weights[0] + weights[1] + weights[2];
    c.wealth = wealth_vector::normalized(weights[0], weights[1], weights[2]);
    c.total_wealth = base.total_wealth * scale;
    c.supply_override = base_supply(base);
    c.run_index = seed_index;
    return c;
}

return_estimator make_return_estimator(const run_config &base)
{
    const double supply = base.supply_override;
    return [base, supply](const std::array<double, 3> &weights, std::size_t seed_index) {
        run_config c = base;
        c.mode = run_mode::constant_wealth;
        const double scale = weights[0] + weights[1] + weights[2];
        c.wealth = wealth_vector::normalized(weights[0], weights[1], weights[2]);
        c.total_wealth = base.total_wealth * scale;
        c.supply_override = supply;
        c.run_index = seed_index;
        const auto s = summarize_run(run(c));
        std::array<double, 3> out{};
        for(std::size_t i = 0; i < 3; ++i) {
            out[i] = weights[i] > 0. ? s.returns[i] : 0.;
        }
        return out;
    };
}

return_estimator precomputed_estimator(const run_config &base,
                                       const std::vector<std::array<double, 3>> &points,
                                       std::size_t seeds)
{
    const auto direct = make_return_estimator(base);
    using key = std::pair<std::array<double, 3>, std::size_t>;
    std::vector<key> jobs;
    for(const auto &p : points) {
        for(std::size_t s = 0; s < seeds; ++s) {
            jobs.emplace_back(p, s);
        }
    }
    std::vector<std::array<double, 3>> results(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t n) { results[n] = direct(jobs[n].first, jobs[n].second); });
    auto table = std::make_shared<std::map<key, std::array<double, 3>>>();
    for(std::size_t n = 0; n < jobs.size(); ++n) {
        table->emplace(jobs[n], results[n]);
    }
    return [table, direct](const std::array<double, 3> &w, std::size_t s) {
        const auto it = table->find({w, s});
        return it != table->end() ? it->second : direct(w, s);
    };
}

community_matrix community_experiment(const run_config &base, const experiment_settings &s)
{
    std::vector<std::array<double, 3>> points;
    for(std::size_t j = 0; j < 3; ++j) {
        points.push_back(perturb(base.wealth, j, s.h).w);
        points.push_back(perturb(base.wealth, j, -s.h).w);
    }
    const auto estimator = precomputed_estimator(base, points, s.seeds);
    return estimate_community_matrix(base.wealth, s.h, s.seeds, estimator);
}

trophic_study trophic_experiment(const run_config &base, const experiment_settings &s)
{
    std::vector<std::array<double, 3>> points = {base.wealth.w};
    for(std::size_t j = 0; j < 3; ++j) {
        auto removed = base.wealth.w;
        removed[j] = 0.;
        points.push_back(removed);
    }
    const auto estimator = precomputed_estimator(base, points, s.seeds);
    trophic_study study;
    study.web = estimate_food_web(base.wealth, s.seeds, estimator);
    study.levels = trophic_levels(study.web.normalized);
    for(std::size_t seed = 0; seed < s.seeds; ++seed) {
        const auto single = estimate_food_web(
            base.wealth, 1, [&](const std::array<double, 3> &w, std::size_t) { return estimator(w, seed); });
        study.per_seed_ordering.push_back(trophic_ordering(trophic_levels(single.normalized)));
    }
    return study;
}

std::vector<wealth_vector> simplex_grid(std::size_t resolution, double margin)
{
    if(resolution < 1) {
        throw std::invalid_argument("grid resolution must be positive");
    }
    if(!(margin >= 0. && 3. * margin < 1.)) {
        throw std::invalid_argument("grid margin must lie in [0, 1/3)");
    }
    std::vector<wealth_vector> grid;
    const double span = 1. - 3. * margin;
    const double n = double(resolution);
    for(std::size_t i = 0; i <= resolution; ++i) {
        for(std::size_t j = 0; i + j <= resolution; ++j) {
            const std::size_t k = resolution - i - j;
            const double a = margin + span * double(i) / n;
            const double b = margin + span * double(j) / n;
            const double c = margin + span * double(k) / n;
            grid.push_back(wealth_vector::normalized(a, b, c));
        }
    }
    return grid;
}

sweep_row sweep_point(const run_config &base, const wealth_vector &w, std::size_t seeds, bool with_trophic)
{
    run_config point = base;
    point.wealth = w;
    point.supply_override = 0.;
    sweep_row row;
    row.w = w;
    std::vector<run_summary> summaries;
    const auto estimator = make_return_estimator(point);
    std::vector<std::array<double, 3>> removed_returns;
    for(std::size_t s = 0; s < seeds; ++s) {
        const auto out = run(constant_wealth_config(point, w.w, s));
        summaries.push_back(summarize_run(out));
        row.failures += out.halted ? 1 : 0;
    }
    auto average = [&](auto field) {
        std::vector<double> v;
        for(const auto &x : summaries) {
            const double value = field(x);
            if(std::isfinite(value)) {
                v.push_back(value);
            }
        }
        return mean_of(v);
    };
    for(std::size_t i = 0; i < 3; ++i) {
        row.mean.returns[i] = average([i](const run_summary &x) { return x.returns[i]; });
        row.mean.return_volatility[i] = average([i](const run_summary &x) { return x.return_volatility[i]; });
        row.mean.sharpe_ratio[i] = average([i](const run_summary &x) { return x.sharpe_ratio[i]; });
    }
    row.mean.acf1 = average([](const run_summary &x) { return x.acf1; });
    row.mean.price_volatility = average([](const run_summary &x) { return x.price_volatility; });
    row.mean.mispricing = average([](const run_summary &x) { return x.mispricing; });
    row.mean.steps = summaries.empty() ? 0 : summaries.front().steps;
    row.mean.halted = row.failures > 0;
    for(std::size_t i = 0; i < 3; ++i) {
        if(std::isfinite(row.mean.returns[i])
           && (!row.dominant || row.mean.returns[i] > row.mean.returns[*row.dominant])) {
            row.dominant = i;
        }
    }
    if(with_trophic && row.failures == seeds) {
        row.trophic = "failed";
    } else if(with_trophic) {
        // the full-wealth returns are reused; only removal runs are new
        auto cached = [&](const std::array<double, 3> &weights, std::size_t s) {
            if(weights == w.w) {
                return summaries[s].returns;
            }
            return estimator(weights, s);
        };
        const auto web = estimate_food_web(w, seeds, cached);
        row.trophic = trophic_ordering(trophic_levels(web.normalized));
    }
    return row;
}

std::vector<sweep_row> sweep_simplex(const run_config &base, const experiment_settings &s, bool with_trophic)
{
    const auto grid = simplex_grid(s.resolution, s.margin);
    std::vector<sweep_row> rows(grid.size());
    parallel_for(grid.size(), [&](std::size_t n) {
        rows[n] = sweep_point(base, grid[n], s.seeds, with_trophic);
        rows[n].index = n;
    });
    return rows;
}

std::vector<trajectory> monte_carlo_trajectories(const run_config &base, const experiment_settings &s)
{
    std::vector<trajectory> out(s.runs);
    const std::size_t spacing = sample_spacing(s.sample_years);
    parallel_for(s.runs, [&](std::size_t r) {
        run_config c = base;
        c.mode = run_mode::reinvest;
        c.on_insolvency = insolvency_policy::freeze;
        c.run_index = r;
        c.supply_override = 0.;
        if(s.uniform_init) {
            c.wealth = uniform_simplex_point(base.seed, r);
        }
        const auto result = run(c);
        auto &tr = out[r];
        tr.run = r;
        tr.initial = c.wealth;
        tr.error = result.insolvencies.empty() ? result.error : std::string();
        if(!result.insolvencies.empty()) {
            tr.insolvent = true;
            tr.insolvency_year = double(result.insolvencies.front().step) / double(day_count);
        }
        wealth_vector last = c.wealth;
        std::array<bool, 3> alive = {c.wealth[0] > 0., c.wealth[1] > 0., c.wealth[2] > 0.};
        for(std::size_t t = 0; t <= c.horizon; t += spacing) {
            if(t >= 1 && t <= result.steps.size()) {
                const auto &rec = result.steps[t - 1];
                last = relative_wealth(rec);
                for(std::size_t i = 0; i < 3; ++i) {
                    alive[i] = rec.funds[i].alive;
                }
            }
            tr.years.push_back(double(t) / double(day_count));
            tr.path.push_back(last);
            tr.alive.push_back(alive);
        }
    });
    return out;
}

convergence_curve convergence_curve_of(const std::vector<trajectory> &runs, const experiment_settings &s,
                                       std::string parameter, double variant)
{
    convergence_curve curve;
    curve.parameter = std::move(parameter);
    curve.variant = variant;
    curve.runs = runs.size();
    if(runs.empty()) {
        return curve;
    }
    std::size_t insolvent = 0;
    for(const auto &tr : runs) {
        insolvent += tr.insolvent ? 1 : 0;
    }
    curve.insolvent_fraction = double(insolvent) / double(runs.size());
    curve.years = runs.front().years;

    auto coordinates = [](const wealth_vector &w) { return std::vector<double>{w[0], w[1]}; };
    std::vector<std::vector<double>> reference;
    for(const auto &tr : runs) {
        for(std::size_t k = 0; k < tr.years.size(); ++k) {
            if(tr.years[k] >= s.reference_start_years - 1e-9 && tr.years[k] <= s.reference_end_years + 1e-9) {
                reference.push_back(coordinates(tr.path[k]));
            }
        }
    }
    std::optional<gaussian> ref;
    try {
        ref = fit_gaussian(reference);
    } catch(const std::exception &) {
    }
    for(std::size_t k = 0; k < curve.years.size(); ++k) {
        std::vector<std::vector<double>> state;
        for(const auto &tr : runs) {
            state.push_back(coordinates(tr.path[k]));
        }
        double kl = nan;
        if(ref) {
            try {
                kl = kl_divergence_gaussian(*ref, fit_gaussian(state));
            } catch(const std::exception &) {
            }
        }
        curve.kl.push_back(kl);
    }
    return curve;
}

std::vector<convergence_curve> convergence_experiment(const run_config &base, const experiment_settings &s)
{
    if(double(base.horizon) < s.reference_end_years * double(day_count) - 0.5) {
        throw config_error("convergence horizon is shorter than the reference window");
    }
    std::vector<convergence_curve> curves;
    for(double v : s.variants) {
        const auto c = with_variant(base, s.variant_parameter, v);
        curves.push_back(convergence_curve_of(monte_carlo_trajectories(c, s), s, s.variant_parameter, v));
    }
    return curves;
}

std::vector<double> shadow_kelly_growth(const run_output &out, const std::vector<double> &multipliers,
                                        double lambda_max)
{
    const auto rates = to_step_rates(out.config.params);
    const double r = rates.risk_free;
    auto est = make_kelly_estimates(out.config.params.kelly_half_life);
    std::vector<double> growth(multipliers.size(), 0.);
    const std::size_t begin = std::max<std::size_t>(out.config.warmup, day_count);
    std::size_t counted = 0;
    double u_lag1 = 0.;
    double u_lag2 = 0.;
    // records k and k + 1 are times t and t + 1; D(t) is paid over the step
    for(std::size_t k = 1; k + 1 < out.steps.size(); ++k) {
        const auto &prev = out.steps[k - 1];
        const auto &now = out.steps[k];
        const auto &next = out.steps[k + 1];
        u_lag2 = u_lag1;
        u_lag1 = infer_u(est, std::log(now.dividend / prev.dividend));
        est = update_kelly_estimates(est, now.dividend / prev.dividend, (now.price + prev.dividend) / prev.price);
        if(k < begin) {
            continue;
        }
        double x_star = 0.;
        try {
            x_star = kelly_fraction(est, u_lag2, r, lambda_max);
        } catch(const std::domain_error &) {
        }
        const double excess = (next.price - now.price + now.dividend) / now.price - r;
        for(std::size_t m = 0; m < multipliers.size(); ++m) {
            const double gross = 1. + r + multipliers[m] * x_star * excess;
            growth[m] += gross > 0. ? std::log(gross) : -std::numeric_limits<double>::infinity();
        }
        ++counted;
    }
    for(auto &g : growth) {
        g = counted > 0 ? g / double(counted) : nan;
    }
    return growth;
}

kelly_optimality kelly_optimality_experiment(const run_config &base, const experiment_settings &s)
{
    std::vector<std::vector<double>> per_run(s.runs);
    parallel_for(s.runs, [&](std::size_t r) {
        run_config c = base;
        c.run_index = r;
        per_run[r] = shadow_kelly_growth(run(c), s.multipliers, s.shadow_lambda);
    });
    kelly_optimality k;
    k.multipliers = s.multipliers;
    k.runs = s.runs;
    for(std::size_t m = 0; m < s.multipliers.size(); ++m) {
        std::vector<double> v;
        for(const auto &g : per_run) {
            v.push_back(g[m] * double(day_count));
        }
        k.mean_log_growth.push_back(mean_of(v));
        k.standard_error.push_back(std::isfinite(k.mean_log_growth.back()) ? standard_error_of(v) : nan);
    }
    return k;
}

survival_curves survival_experiment(const run_config &base, const experiment_settings &s)
{
    run_config c = base;
    c.mode = run_mode::reinvest;
    c.on_insolvency = insolvency_policy::freeze;
    if(!(c.kelly_share > 0.)) {
        c.kelly_share = 1. / 3.;
    }
    const std::size_t spacing = sample_spacing(s.sample_years);
    std::vector<std::vector<std::array<bool, 4>>> alive(s.runs);
    parallel_for(s.runs, [&](std::size_t r) {
        run_config cr = c;
        cr.run_index = r;
        const auto out = run(cr);
        std::array<bool, 4> state = {true, true, true, true};
        for(std::size_t i = 0; i < 3; ++i) {
            state[i] = cr.wealth[i] > 0.;
        }
        for(std::size_t t = 0; t <= cr.horizon; t += spacing) {
            if(t >= 1 && t <= out.steps.size()) {
                for(std::size_t i = 0; i < 4; ++i) {
                    state[i] = out.steps[t - 1].funds[i].alive;
                }
            }
            alive[r].push_back(state);
        }
    });
    survival_curves sc;
    sc.names = {"nt", "vi", "tf", "kelly"};
    sc.runs = s.runs;
    sc.fraction.assign(4, {});
    for(std::size_t t = 0, k = 0; t <= c.horizon; t += spacing, ++k) {
        sc.years.push_back(double(t) / double(day_count));
        for(std::size_t i = 0; i < 4; ++i) {
            std::size_t n = 0;
            for(const auto &run_alive : alive) {
                n += run_alive[k][i] ? 1 : 0;
            }
            sc.fraction[i].push_back(double(n) / double(s.runs));
        }
    }
    return sc;
}

malfunction_study malfunction_experiment(const run_config &base)
{
    run_config c = base;
    c.mode = run_mode::reinvest;
    c.on_insolvency = insolvency_policy::freeze;
    const auto out = run(c);
    malfunction_study study;
    study.halted = out.halted;
    const auto prices = price_path(out);
    constexpr std::size_t window = day_count;
    if(prices.size() < window + 2) {
        throw insufficient_data("malfunction regression needs more than one year of prices");
    }
    const auto vol = rolling_volatility(prices, window);
    const std::size_t first = std::max<std::size_t>(window, std::max<std::size_t>(c.warmup, 1));
    for(std::size_t m = first; m < prices.size(); ++m) {
        const auto &rec = out.steps[m - 1];
        study.t.push_back(rec.t);
        study.wealth.push_back(relative_wealth(rec));
        study.rolling_volatility.push_back(vol[m - window]);
        study.mispricing_series.push_back(mispricing(rec.price, rec.value));
    }
    study.volatility = regress_malfunction(study.wealth, study.rolling_volatility);
    study.mispricing = regress_malfunction(study.wealth, study.mispricing_series);
    return study;
}

stylized_facts stylized_facts_experiment(const run_config &base, const experiment_settings &s)
{
    run_config c = base;
    c.mode = run_mode::reinvest;
    c.on_insolvency = insolvency_policy::freeze;
    const auto out = run(c);
    const auto prices = price_path(out);
    stylized_facts f;
    for(std::size_t m = out.analysis_begin() + 1; m < prices.size(); ++m) {
        f.returns.push_back(std::log(prices[m] / prices[m - 1]));
    }
    const std::size_t n = f.returns.size();
    if(n < s.max_lag + 3) {
        throw insufficient_data("stylized facts need more returns than the largest lag");
    }
    f.mean = mean_of(f.returns);
    double m2 = 0., m3 = 0., m4 = 0.;
    for(double x : f.returns) {
        const double d = x - f.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= double(n);
    m3 /= double(n);
    m4 /= double(n);
    f.volatility = std::sqrt(m2 * double(day_count));
    f.skewness = m3 / std::pow(m2, 1.5);
    f.excess_kurtosis = m4 / (m2 * m2) - 3.;
    std::vector<double> absolute(n);
    std::transform(f.returns.begin(), f.returns.end(), absolute.begin(), [](double x) { return std::abs(x); });
    for(std::size_t lag = 1; lag <= s.max_lag; ++lag) {
        f.acf_returns.push_back(return_autocorrelation(f.returns, lag));
        f.acf_absolute_returns.push_back(return_autocorrelation(absolute, lag));
    }
    for(std::size_t t = out.analysis_begin(); t < out.steps.size(); ++t) {
        const double m = mispricing(out.steps[t].price, out.steps[t].value);
        f.mean_mispricing += m;
        f.max_mispricing = std::max(f.max_mispricing, m);
    }
    f.mean_mispricing /= double(std::max<std::size_t>(1, out.steps.size() - out.analysis_begin()));
    return f;
}

} // namespace market_ecology
