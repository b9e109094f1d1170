/// \file   strategies.cpp
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
#include "market_ecology/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace market_ecology {

std::string_view short_name(strategy_kind kind)
{
    switch(kind) {
    case strategy_kind::noise_trader:   return "nt";
    case strategy_kind::value_investor: return "vi";
    case strategy_kind::trend_follower: return "tf";
    case strategy_kind::kelly:          return "kelly";
    }
    return "?";
}

void strategy_params::validate() const
{
    if(!(lambda_max > 0.)) {
        throw std::invalid_argument("leverage limit must be positive");
    }
    if(!(c > 0.)) {
        throw std::invalid_argument("signal scale must be positive");
    }
}

double signal_value_investor(double v_vi, double p)
{
    if(!(v_vi > 0.) || !(p > 0.)) {
        throw std::domain_error("value investor signal needs positive value and price");
    }
    return std::log2(v_vi) - std::log2(p);
}

double signal_trend_follower(double p_lag1, double p_lag2)
{
    if(!(p_lag1 > 0.) || !(p_lag2 > 0.)) {
        throw std::domain_error("trend follower signal needs positive prices");
    }
    return std::log2(p_lag1) - std::log2(p_lag2);
}

double signal_noise_trader(double x, double v_vi, double p)
{
    if(!(x > 0.) || !(v_vi > 0.) || !(p > 0.)) {
        throw std::domain_error("noise trader signal needs positive factor, value and price");
    }
    return std::log2(x * v_vi) - std::log2(p);
}

double target_position(double w, const strategy_params &params, double phi, double p)
{
    return w * params.lambda_max / p * (std::tanh(params.c * phi) + 0.5);
}

double leverage_of(const strategy_params &params, double phi)
{
    return params.lambda_max * std::abs(std::tanh(params.c * phi) + 0.5);
}

kelly_estimates make_kelly_estimates(double half_life_steps)
{
    if(!(half_life_steps > 0.)) {
        throw std::invalid_argument("Kelly estimate half-life must be positive");
    }
    kelly_estimates e;
    e.weight = 1. - std::pow(0.5, 1. / half_life_steps);
    return e;
}

kelly_estimates update_kelly_estimates( kelly_estimates est
                                      , double dividend_return
                                      , double total_price_return)
{
    if(!(dividend_return > 0.) || !(total_price_return > 0.)) {
        return est;
    }
    const double ld = std::log(dividend_return);
    const double lp = std::log(total_price_return);
    const double ly = lp - ld;

    if(est.observations == 0) {
        est.mean_d = ld;
        est.mean_p = lp;
        est.mean_y = ly;
    } else {
        const double a  = est.weight;
        const double dd = ld - est.mean_d;
        const double dp = lp - est.mean_p;
        const double dy = ly - est.mean_y;
        est.mean_d += a * dd;
        est.mean_p += a * dp;
        est.mean_y += a * dy;
        est.var_d  = (1. - a) * (est.var_d + a * dd * dd);
        est.var_p  = (1. - a) * (est.var_p + a * dp * dp);
        est.var_y  = (1. - a) * (est.var_y + a * dy * dy);
        est.cov_pd = (1. - a) * (est.cov_pd + a * dp * dd);
        if(est.observations >= 2) {
            est.lag2_cov = (1. - a) * est.lag2_cov
                         + a * (ld - est.mean_d) * (est.d_lag2 - est.mean_d);
        }
    }
    est.d_lag2 = est.d_lag1;
    est.d_lag1 = ld;
    ++est.observations;

    est.sigma_hat   = std::sqrt(est.var_d);
    est.g_hat       = est.mean_d + 0.5 * est.var_d;
    est.sigma_y_hat = std::sqrt(est.var_y);
    est.mu_y_hat    = est.mean_y + 0.5 * est.var_y;
    est.omega_hat   = est.var_d > 0. ? std::clamp(est.lag2_cov / est.var_d, -0.99, 0.99) : 0.;
    const double scale = std::sqrt(est.var_p * est.var_d);
    est.rho_hat = scale > 0. ? std::clamp(est.cov_pd / scale, -1., 1.) : 0.;
    return est;
}

double infer_u(const kelly_estimates &est, double dividend_log_return)
{
    if(!(est.sigma_hat > 0.)) {
        return 0.;
    }
    const double drift = est.g_hat - 0.5 * est.sigma_hat * est.sigma_hat;
    return (dividend_log_return - drift) / est.sigma_hat;
}

double kelly_fraction( const kelly_estimates &est
                     , double u_lag1
                     , double r_step
                     , double lambda_max)
{
    const double s  = est.sigma_hat;
    const double sy = est.sigma_y_hat;
    const double denominator = s * s + sy * sy;
    if(!(denominator > 0.)) {
        throw std::domain_error("Kelly fraction undefined for zero estimated variance");
    }
    const double numerator = est.g_hat + est.mu_y_hat + s * est.omega_hat * u_lag1
                           - r_step - 2. * est.rho_hat * s * sy;
    return std::clamp(numerator / denominator, -lambda_max, lambda_max);
}

} // namespace market_ecology
