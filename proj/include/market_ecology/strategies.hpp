/// \file   strategies.hpp
///
/// \brief  Trading signals and demand functions of the noise trader, value
///         investor and trend follower, plus the Kelly bettor.
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
#ifndef ME_STRATEGIES_HPP
#define ME_STRATEGIES_HPP

#include <cstddef>
#include <string_view>

namespace market_ecology {

enum class strategy_kind
{
    noise_trader,
    value_investor,
    trend_follower,
    kelly,
};

std::string_view short_name(strategy_kind kind);

struct strategy_params
{
    strategy_kind kind = strategy_kind::value_investor;
    double lambda_max  = 1.;   ///< leverage limit, > 0
    double c           = 1.;   ///< signal aggressiveness, > 0

    void validate() const;
};

///
/// \brief  log2(V^VI) - log2(p)
///
double signal_value_investor(double v_vi, double p);

///
/// \brief  log2(p(t-1)) - log2(p(t-2)); positive on an up-trend.
///
double signal_trend_follower(double p_lag1, double p_lag2);

///
/// \brief  log2(X V^VI) - log2(p)
///
double signal_noise_trader(double x, double v_vi, double p);

///
/// \brief  Desired share holding (w lambda* / p) (tanh(c phi) + 1/2).
///
///         The excess demand of the fund is this minus its current holding.
///
double target_position(double w, const strategy_params &params, double phi, double p);

///
/// \brief  lambda* |tanh(c phi) + 1/2|, the leverage implied by the demand
///         function once the market clears.
///
double leverage_of(const strategy_params &params, double phi);

///
/// \brief  Running estimates of the Kelly bettor.
///
///         Moments are exponentially weighted with a fixed per-observation
///         weight; all rates are per step. The dividend process parameters
///         are in the log-drift convention of the dividend process, i.e.
///         g_hat = E[log D(t)/D(t-1)] + sigma_hat^2 / 2.
///
struct kelly_estimates
{
    double g_hat       = 0.;
    double sigma_hat   = 0.;
    double omega_hat   = 0.;
    double mu_y_hat    = 0.;
    double sigma_y_hat = 0.;
    double rho_hat     = 0.;

    /// weight of the newest observation, 1 - 0.5^(1/half_life)
    double weight = 0.;
    std::size_t observations = 0;

    double mean_d   = 0.;   ///< EW mean of dividend log returns
    double var_d    = 0.;
    double mean_p   = 0.;   ///< EW mean of total stock log returns
    double var_p    = 0.;
    double cov_pd   = 0.;
    double mean_y   = 0.;   ///< EW mean of residual log returns
    double var_y    = 0.;
    double lag2_cov = 0.;   ///< EW lag-2 autocovariance of dividend log returns
    double d_lag1   = 0.;   ///< previous dividend log return
    double d_lag2   = 0.;
};

kelly_estimates make_kelly_estimates(double half_life_steps);

///
/// \brief  Folds one observation into the estimates.
///
/// \param dividend_return      gross dividend return D(t)/D(t-1)
/// \param total_price_return   gross stock return including the dividend
///
kelly_estimates update_kelly_estimates( kelly_estimates est
                                      , double dividend_return
                                      , double total_price_return);

///
/// \brief  Standardized innovation U implied by a dividend log return under
///         the current estimates; 0 before the volatility is identified.
///
double infer_u(const kelly_estimates &est, double dividend_log_return);

///
/// \brief  Growth-optimal stock fraction
///
///             x* = (g + mu_Y + sigma omega U(t-1) - r - 2 rho sigma sigma_Y)
///                  / (sigma^2 + sigma_Y^2)
///
///         clamped to [-lambda*, lambda*]. Throws std::domain_error when the
///         denominator vanishes.
///
double kelly_fraction( const kelly_estimates &est
                     , double u_lag1
                     , double r_step
                     , double lambda_max);

} // namespace market_ecology

#endif // ME_STRATEGIES_HPP
