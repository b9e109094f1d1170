/// \file   engine.hpp
///
/// \brief  One simulated market: step sequencing, run modes and time-series capture.
///
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
#ifndef ME_ENGINE_HPP
#define ME_ENGINE_HPP

#include "market_ecology/accounting.hpp"
#include "market_ecology/clearing.hpp"
#include "market_ecology/parameters.hpp"
#include "market_ecology/processes.hpp"
#include "market_ecology/rng.hpp"
#include "market_ecology/strategies.hpp"
#include "market_ecology/wealth_vector.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace market_ecology {

enum class run_mode
{
    reinvest,          ///< W' = W + f pnl
    constant_wealth,   ///< wealth replenished to the target vector each step
};

///
/// \brief  How the fixed stock supply Q is chosen at initialization.
///
enum class supply_rule
{
    neutral,   ///< Q = sum_i W_i lambda*_i / (2 p0): clears at p0 with zero signals
    ratio,     ///< Q = supply_ratio W_T / p0
};

///
/// \brief  Source of the growth rate in the value investors' Gordon value.
///
enum class growth_source
{
    known,     ///< true per-step growth of the dividend process
    history,   ///< estimate_growth over the dividend history
};

enum class insolvency_policy
{
    halt,      ///< stop the run at the first insolvency
    freeze,    ///< the insolvent fund stops trading and keeps its shares
};

std::string to_string(run_mode m);
std::string to_string(supply_rule r);
std::string to_string(growth_source g);
std::string to_string(insolvency_policy p);

struct run_config
{
    model_parameters params;

    run_mode mode         = run_mode::constant_wealth;
    double reinvestment   = 1.;          ///< f, used in reinvest mode
    wealth_vector wealth  = {0.43, 0.34, 0.23};
    double total_wealth   = 3e8;         ///< W_T at t = 0

    std::size_t horizon   = 20 * day_count;   ///< steps, warm-up included
    std::size_t warmup    = day_count;        ///< steps excluded from analysis
    std::uint64_t seed    = 1;
    std::uint64_t run_index = 0;

    double initial_price  = 100.;        ///< p(0) = V(0)
    supply_rule supply    = supply_rule::ratio;
    /// Q p0 / W_T for the ratio rule; 0.56 is the mean stock exposure implied
    /// by the strategy and buy-and-hold volatilities at the equilibrium point
    double supply_ratio   = 0.56;
    /// when positive, overrides the supply rule (used by removal runs)
    double supply_override = 0.;

    growth_source vi_growth = growth_source::known;
    /// total wealth tracks the fundamental value, W_T(t) = W_T V(t) / V(0)
    bool wealth_peg       = true;
    insolvency_policy on_insolvency = insolvency_policy::halt;

    /// relative wealth of the optional Kelly bettor (0 = absent)
    double kelly_share      = 0.;
    /// the bettor holds kelly_multiplier x* of its wealth in the stock
    double kelly_multiplier = 1.;

    clearing_options clearing;
    /// residual tolerance relative to Q
    double relative_tolerance = 1e-8;

    void validate() const;
};

///
/// \brief  Reported when a fund's wealth is no longer strictly positive.
///
struct insolvency_event
{
    std::size_t step;
    std::size_t fund;
    double wealth;
};

class insolvency_halt
: public std::runtime_error
{
public:
    insolvency_halt(std::size_t step, std::vector<std::size_t> funds, double price);

    std::size_t step;
    std::vector<std::size_t> funds;
    double price;   ///< clearing price at which the funds were marked
};

///
/// \brief  Per-fund values recorded at the end of a step.
///
struct fund_record
{
    double wealth   = 0.;
    double shares   = 0.;
    double leverage = 0.;    ///< realized |S| p / W right after the trade
    double target_leverage = 0.;   ///< demand-curve leverage at the clearing price
    double ret      = 0.;    ///< pnl / W before external flows
    bool alive      = true;
};

struct step_record
{
    std::size_t t   = 0;
    double price    = 0.;
    double value    = 0.;    ///< Gordon value under the true growth
    double vi_value = 0.;
    double dividend = 0.;
    double noise_factor = 1.;
    double u        = 0.;
    std::vector<fund_record> funds;
    clearing_mode mode = clearing_mode::root;
    std::size_t iterations = 0;
    double residual = 0.;
    bool bound_hit  = false;
    double share_sum = 0.;
    double trade_wealth_error = 0.;   ///< max relative wealth change caused by trading
};

struct run_output
{
    run_config config;
    double supply = 0.;
    std::vector<std::string> fund_names;
    std::vector<step_record> steps;
    std::vector<insolvency_event> insolvencies;
    std::size_t leverage_violations = 0;
    bool halted = false;
    std::string error;    ///< non-empty when the run ended on an error

    /// index of the first step in the analysis window
    [[nodiscard]] std::size_t analysis_begin() const;
};

///
/// \brief  Full state of one market.
///
struct market_state
{
    std::size_t t = 0;
    double price      = 0.;
    double price_lag1 = 0.;   ///< p(t-1)
    double value      = 0.;
    double vi_value   = 0.;
    double initial_value = 0.;
    dividend_state dividend;
    double dividend_prev = 0.;   ///< D(t-1)
    noise_factor_state noise;
    double dividend_first = 0.;      ///< oldest dividend of the history
    std::size_t dividend_steps = 0;  ///< steps between oldest and current dividend
    double supply = 0.;
    std::vector<fund> funds;
    std::vector<double> target_wealth;   ///< constant-wealth targets at V(0)
    double initial_total_wealth = 0.;
    std::size_t leverage_violations = 0;

    kelly_estimates kelly;
    double kelly_u_lag1 = 0.;   ///< inferred U(t)
    double kelly_u_lag2 = 0.;   ///< inferred U(t-1)

    normal_stream dividend_shocks{0};
    normal_stream noise_shocks{0};
};

///
/// \brief  Builds the market at t = 0: D(0) such that V(0) equals the
///         initial price, funds endowed per the wealth vector at half
///         allocation, and Q per the supply rule.
///
market_state init_market(const run_config &config);

///
/// \brief  Advances the market one step and returns the record of the step.
///
///         Order: dividend and noise shocks, valuation, clearing with
///         signals at the candidate price, settlement of the previous
///         position (interest, dividend D(t-1), price change, flows),
///         trades at the clearing price, solvency, replenishment or
///         wealth peg.
///
step_record step_market(market_state &state, const run_config &config);

///
/// \brief  Runs the configured horizon. Errors end the run and are
///         reported in the output with the partial record retained.
///
run_output run(const run_config &config);

} // namespace market_ecology

#endif // ME_ENGINE_HPP
