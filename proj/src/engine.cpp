/// \file   engine.cpp
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
#include "market_ecology/engine.hpp"

#include "market_ecology/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace market_ecology {

namespace {

/// length of the dividend record that exists before trading starts
constexpr std::size_t prehistory_steps = day_count;

/// observations the Kelly bettor collects before it takes a position
constexpr std::size_t kelly_burn_in = day_count;

const char *const core_names[] = {"nt", "vi", "tf"};

double true_value(const market_state &s, const step_rates &rates)
{
    return gordon_value(s.dividend.d_curr * (1. + rates.growth_simple),
                        rates.growth_simple, rates.cost_of_equity);
}

double estimated_value(const market_state &s, const run_config &config, const step_rates &rates)
{
    if(config.vi_growth == growth_source::known) {
        return true_value(s, rates);
    }
    const double g_hat = estimate_growth(s.dividend_first, s.dividend.d_curr, s.dividend_steps);
    return gordon_value(s.dividend.d_curr * (1. + g_hat), g_hat, rates.cost_of_equity);
}

bool is_core(std::size_t i)
{
    return i < 3;
}

double kelly_position(const market_state &s, const run_config &config, const step_rates &rates)
{
    if(s.kelly.observations < kelly_burn_in) {
        return 0.;
    }
    const double lambda = config.params.kelly_leverage_limit;
    double x;
    try {
        x = kelly_fraction(s.kelly, s.kelly_u_lag2, rates.risk_free, lambda);
    } catch(const std::domain_error &) {
        return 0.;
    }
    return config.kelly_multiplier * x;
}

// scales the larger side of the order book so that net trading is zero
void ration(std::vector<double> &trades)
{
    double buys = 0.;
    double sells = 0.;
    for(double ds : trades) {
        (ds > 0. ? buys : sells) += std::abs(ds);
    }
    if(buys == sells || buys == 0. || sells == 0.) {
        if(buys == 0. || sells == 0.) {
            std::fill(trades.begin(), trades.end(), 0.);
        }
        return;
    }
    const bool excess_buying = buys > sells;
    const double scale = excess_buying ? sells / buys : buys / sells;
    for(double &ds : trades) {
        if((ds > 0.) == excess_buying) {
            ds *= scale;
        }
    }
}

} // namespace

std::string to_string(run_mode m)
{
    return m == run_mode::reinvest ? "reinvest" : "constant_wealth";
}

std::string to_string(supply_rule r)
{
    return r == supply_rule::neutral ? "neutral" : "ratio";
}

std::string to_string(growth_source g)
{
    return g == growth_source::known ? "known" : "history";
}

std::string to_string(insolvency_policy p)
{
    return p == insolvency_policy::halt ? "halt" : "freeze";
}

void run_config::validate() const
{
    wealth.validate();
    if(!(total_wealth > 0.)) {
        throw std::invalid_argument("total wealth must be positive");
    }
    if(!(reinvestment >= 0.)) {
        throw std::invalid_argument("reinvestment rate must be non-negative");
    }
    if(horizon < warmup) {
        throw std::invalid_argument("horizon must not be shorter than the warm-up");
    }
    if(!(initial_price > 0.)) {
        throw std::invalid_argument("initial price must be positive");
    }
    if(supply == supply_rule::ratio && !(supply_ratio > 0.)) {
        throw std::invalid_argument("supply ratio must be positive");
    }
    if(supply_override < 0.) {
        throw std::invalid_argument("supply override must be non-negative");
    }
    if(kelly_share < 0.) {
        throw std::invalid_argument("Kelly wealth share must be non-negative");
    }
    if(!(relative_tolerance > 0.)) {
        throw std::invalid_argument("clearing tolerance must be positive");
    }
    for(std::size_t i = 0; i < 3; ++i) {
        strategy_params{strategy_kind::noise_trader, params.leverage_limit[i], params.signal_scale[i]}
            .validate();
    }
    const auto rates = to_step_rates(params);
    if(!(rates.cost_of_equity > rates.growth_simple)) {
        throw std::invalid_argument("cost of equity must exceed dividend growth");
    }
    if(!(params.noise_reversion_rate > 0. && params.noise_reversion_rate < 1.)) {
        throw std::invalid_argument("noise reversion rate must lie in (0, 1)");
    }
    if(!(std::abs(params.dividend_autocorrelation) < 1.)) {
        throw std::invalid_argument("dividend autocorrelation must satisfy |omega| < 1");
    }
    if(kelly_share > 0. && !(params.kelly_leverage_limit > 0.)) {
        throw std::invalid_argument("Kelly leverage limit must be positive");
    }
}

insolvency_halt::insolvency_halt(std::size_t step_, std::vector<std::size_t> funds_, double price_)
: std::runtime_error("fund insolvent at step " + std::to_string(step_))
, step(step_)
, funds(std::move(funds_))
, price(price_)
{}

std::size_t run_output::analysis_begin() const
{
    return std::min(config.warmup, steps.size());
}

market_state init_market(const run_config &config)
{
    config.validate();
    const auto rates = to_step_rates(config.params);

    market_state s;
    s.dividend_shocks = normal_stream(stream_seed(config.seed, "dividend", config.run_index));
    s.noise_shocks    = normal_stream(stream_seed(config.seed, "noise", config.run_index));

    // the dividend record before trading, rescaled so that V(0) = p(0)
    s.dividend = make_dividend_state(config.params, 1.);
    s.dividend.u_lag1 = s.dividend_shocks();
    s.dividend.u_lag2 = s.dividend_shocks();
    for(std::size_t i = 0; i < prehistory_steps; ++i) {
        step_dividend(s.dividend, s.dividend_shocks());
    }
    const double d0 = config.initial_price * (rates.cost_of_equity - rates.growth_simple)
                    / (1. + rates.growth_simple);
    s.dividend_first = d0 / s.dividend.d_curr;
    s.dividend_steps = prehistory_steps;
    s.dividend.d_curr = d0;
    s.dividend_prev = d0;

    s.noise = make_noise_factor_state(config.params);
    s.price = config.initial_price;
    s.price_lag1 = config.initial_price;
    s.value = true_value(s, rates);
    s.initial_value = s.value;
    s.vi_value = estimated_value(s, config, rates);

    const strategy_kind kinds[] = { strategy_kind::noise_trader
                                  , strategy_kind::value_investor
                                  , strategy_kind::trend_follower };
    double allocation = 0.;
    for(std::size_t i = 0; i < 3; ++i) {
        fund f;
        f.params = {kinds[i], config.params.leverage_limit[i], config.params.signal_scale[i]};
        f.cash = config.wealth[i] * config.total_wealth;
        f.alive = f.cash > 0.;
        f.wealth_prev = f.cash;
        allocation += f.alive ? f.cash * f.params.lambda_max / 2. : 0.;
        s.funds.push_back(f);
        s.target_wealth.push_back(f.cash);
    }
    if(config.kelly_share > 0.) {
        fund f;
        f.params = {strategy_kind::kelly, config.params.kelly_leverage_limit, 1.};
        f.cash = config.kelly_share * config.total_wealth;
        f.wealth_prev = f.cash;
        s.funds.push_back(f);
        s.target_wealth.push_back(f.cash);
    }
    s.initial_total_wealth = std::accumulate(s.target_wealth.begin(), s.target_wealth.end(), 0.);
    s.kelly = make_kelly_estimates(config.params.kelly_half_life);

    if(config.supply_override > 0.) {
        s.supply = config.supply_override;
    } else if(config.supply == supply_rule::neutral) {
        s.supply = allocation / config.initial_price;
    } else {
        s.supply = config.supply_ratio * config.total_wealth / config.initial_price;
    }
    if(!(allocation > 0.)) {
        throw std::invalid_argument("at least one core strategy needs positive wealth");
    }
    // the supply is shared in proportion to the half-allocation holdings
    for(std::size_t i = 0; i < 3; ++i) {
        auto &f = s.funds[i];
        if(f.alive) {
            const double held = s.supply * f.cash * f.params.lambda_max / 2. / allocation;
            f = apply_trade(f, held, config.initial_price);
        }
    }
    return s;
}

step_record step_market(market_state &s, const run_config &config)
{
    const auto rates = to_step_rates(config.params);
    const bool reinvest = config.mode == run_mode::reinvest;
    const double f_rate = reinvest ? config.reinvestment : 1.;

    // (1) shocks
    const double d_paid = s.dividend.d_curr;   // D(t), paid on S(t) over the step
    step_dividend(s.dividend, s.dividend_shocks());
    ++s.dividend_steps;
    step_noise_factor(s.noise, s.noise_shocks());

    // (2) valuation
    s.value = true_value(s, rates);
    s.vi_value = estimated_value(s, config, rates);
    const double peg = config.wealth_peg ? s.value / s.initial_value : 1.;

    const double dividend_log_return = std::log(s.dividend.d_curr / d_paid);
    s.kelly_u_lag2 = s.kelly_u_lag1;
    s.kelly_u_lag1 = infer_u(s.kelly, dividend_log_return);

    // (3) clearing, wealth marked to the candidate price
    const double p_old = s.price;
    std::vector<std::size_t> trading;
    std::vector<demand_term> terms;
    for(std::size_t i = 0; i < s.funds.size(); ++i) {
        const auto &f = s.funds[i];
        if(!f.alive) {
            continue;
        }
        demand_term term;
        term.params = f.params;
        term.shares_prev = f.shares;
        if(reinvest) {
            const double carry = rates.risk_free * (f.cash - f.loans) + (d_paid - p_old) * f.shares;
            term.wealth_base  = wealth(f, p_old) + f_rate * carry;
            term.wealth_slope = f_rate * f.shares;
        } else {
            term.wealth_base = s.target_wealth[i] * peg;
        }
        switch(f.params.kind) {
        case strategy_kind::noise_trader:
            term.signal_base  = std::log2(s.noise.x_curr * s.vi_value);
            term.signal_slope = 1.;
            break;
        case strategy_kind::value_investor:
            term.signal_base  = std::log2(s.vi_value);
            term.signal_slope = 1.;
            break;
        case strategy_kind::trend_follower:
            term.signal_base = signal_trend_follower(s.price, s.price_lag1);
            break;
        case strategy_kind::kelly:
            term.fraction = kelly_position(s, config, rates);
            break;
        }
        trading.push_back(i);
        terms.push_back(term);
    }
    if(terms.empty()) {
        throw clearing_failed("no solvent fund left to trade");
    }
    // clear against the supply rather than the current book so that
    // accepted residuals do not accumulate across steps
    double held = 0.;
    for(const auto &f : s.funds) {
        held += f.shares;
    }
    terms.front().shares_prev += s.supply - held;
    auto options = config.clearing;
    options.abs_tol = config.relative_tolerance * s.supply;
    const auto cleared = find_clearing_price(terms, p_old, options);
    const double p = cleared.price;

    step_record rec;
    rec.t = s.t + 1;
    rec.price = p;
    rec.value = s.value;
    rec.vi_value = s.vi_value;
    rec.dividend = s.dividend.d_curr;
    rec.noise_factor = s.noise.x_curr;
    rec.u = s.dividend.u_lag1;
    rec.mode = cleared.mode;
    rec.iterations = cleared.iterations;
    rec.residual = cleared.residual;
    rec.bound_hit = cleared.bound_hit;
    rec.funds.resize(s.funds.size());

    // (4) settlement of the position held over the step
    std::vector<std::size_t> failed;
    for(std::size_t i : trading) {
        auto settled = accrue_and_settle(s.funds[i], p, p_old, d_paid, rates.risk_free, f_rate);
        s.funds[i] = settled.account;
        rec.funds[i].ret = settled.period_return;
        if(!check_solvency(s.funds[i], p)) {
            failed.push_back(i);
        } else if(!reinvest) {
            s.funds[i] = replenish_to(s.funds[i], s.target_wealth[i] * peg, p);
        }
    }
    if(!failed.empty()) {
        if(config.on_insolvency == insolvency_policy::halt) {
            throw insolvency_halt(rec.t, failed, p);
        }
        for(std::size_t i : failed) {
            s.funds[i].alive = false;
        }
    }

    // (5) trades at the clearing price
    std::vector<double> trades;
    for(std::size_t k = 0; k < trading.size(); ++k) {
        const auto &f = s.funds[trading[k]];
        trades.push_back(f.alive ? terms[k].target(p) - f.shares : 0.);
    }
    const double net = std::accumulate(trades.begin(), trades.end(), 0.);
    if(cleared.mode == clearing_mode::minimized || !failed.empty()
       || std::abs(net) > options.abs_tol) {
        ration(trades);
    }
    for(std::size_t k = 0; k < trading.size(); ++k) {
        const std::size_t i = trading[k];
        auto &f = s.funds[i];
        if(!f.alive) {
            continue;
        }
        const double before = wealth(f, p);
        f = apply_trade(f, trades[k], p);
        const double after = wealth(f, p);
        rec.trade_wealth_error = std::max(rec.trade_wealth_error,
                                          std::abs(after - before) / std::abs(before));
        rec.funds[i].leverage = realized_leverage(f, p);
        rec.funds[i].target_leverage = f.params.kind == strategy_kind::kelly
                                     ? std::abs(terms[k].fraction)
                                     : leverage_of(f.params, terms[k].signal_at(p));
        if(rec.funds[i].leverage > 1.5 * f.params.lambda_max * (1. + 1e-9)) {
            ++s.leverage_violations;
        }
    }

    // (6) investor flows that keep total wealth on the fundamental path
    if(reinvest && config.wealth_peg) {
        double total = 0.;
        for(const auto &f : s.funds) {
            total += f.alive ? wealth(f, p) : 0.;
        }
        double target = 0.;
        for(std::size_t i = 0; i < s.funds.size(); ++i) {
            target += s.funds[i].alive ? s.target_wealth[i] : 0.;
        }
        const double scale = target * peg / total;
        for(auto &f : s.funds) {
            if(f.alive) {
                f = replenish_to(f, wealth(f, p) * scale, p);
            }
        }
    }

    // (7) public statistics and records
    s.kelly = update_kelly_estimates(s.kelly, s.dividend.d_curr / d_paid, (p + d_paid) / p_old);
    s.price_lag1 = p_old;
    s.price = p;
    ++s.t;

    for(std::size_t i = 0; i < s.funds.size(); ++i) {
        const auto &f = s.funds[i];
        rec.funds[i].wealth = wealth(f, p);
        rec.funds[i].shares = f.shares;
        rec.funds[i].alive = f.alive;
        rec.share_sum += f.shares;
    }
    return rec;
}

run_output run(const run_config &config)
{
    run_output out;
    out.config = config;
    auto state = init_market(config);
    out.supply = state.supply;
    for(std::size_t i = 0; i < state.funds.size(); ++i) {
        out.fund_names.emplace_back(is_core(i) ? core_names[i] : "kelly");
    }
    out.steps.reserve(config.horizon);
    std::vector<bool> was_alive(state.funds.size());
    for(std::size_t i = 0; i < state.funds.size(); ++i) {
        was_alive[i] = state.funds[i].alive;
    }
    try {
        for(std::size_t t = 0; t < config.horizon; ++t) {
            out.steps.push_back(step_market(state, config));
            for(std::size_t i = 0; i < state.funds.size(); ++i) {
                if(was_alive[i] && !state.funds[i].alive) {
                    out.insolvencies.push_back({state.t, i, out.steps.back().funds[i].wealth});
                    was_alive[i] = false;
                }
            }
        }
    } catch(const insolvency_halt &e) {
        out.halted = true;
        for(std::size_t i : e.funds) {
            out.insolvencies.push_back({e.step, i, wealth(state.funds[i], e.price)});
        }
        out.error = e.what();
    } catch(const std::exception &e) {
        out.halted = true;
        out.error = e.what();
    }
    out.leverage_violations = state.leverage_violations;
    return out;
}

} // namespace market_ecology
