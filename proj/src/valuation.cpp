/// \file   valuation.cpp
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
#include "market_ecology/valuation.hpp"

#include <cmath>

namespace market_ecology {

double gordon_value(double d_next, double g_hat, double k_step)
{
    if(!(k_step > g_hat)) {
        throw valuation_error("Gordon value diverges: required return does not exceed growth");
    }
    return d_next / (k_step - g_hat);
}

double estimate_growth(std::span<const double> dividends)
{
    if(dividends.size() < 2) {
        throw valuation_error("growth estimate needs at least two dividends");
    }
    for(double d : dividends) {
        if(!(d > 0.)) {
            throw valuation_error("growth estimate needs strictly positive dividends");
        }
    }
    // the mean of log ratios telescopes to the first and last entries
    return estimate_growth(dividends.front(), dividends.back(), dividends.size() - 1);
}

double estimate_growth(double first, double last, std::size_t steps)
{
    if(steps == 0) {
        throw valuation_error("growth estimate needs at least two dividends");
    }
    if(!(first > 0.) || !(last > 0.)) {
        throw valuation_error("growth estimate needs strictly positive dividends");
    }
    return std::expm1(std::log(last / first) / double(steps));
}

double vi_value(std::span<const double> dividend_history, const valuation_config &config)
{
    auto window = dividend_history;
    if(config.estimation_window != 0 && window.size() > config.estimation_window) {
        window = window.last(config.estimation_window);
    }
    const double g_hat = estimate_growth(window);
    return gordon_value(dividend_history.back() * (1. + g_hat), g_hat, config.k_step);
}

} // namespace market_ecology
