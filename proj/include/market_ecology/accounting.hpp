/// \file   accounting.hpp
///
/// \brief  Fund balance sheets: cash, shares, loans and margin.
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
#ifndef ME_ACCOUNTING_HPP
#define ME_ACCOUNTING_HPP

#include "market_ecology/strategies.hpp"

namespace market_ecology {

///
/// \brief  Stylized balance sheet of one strategy.
///
///         Assets are cash C (which includes the margin M set aside against
///         short positions) and long shares; liabilities are loans L and
///         borrowed shares. Wealth is W = C + S p - L.
///
struct fund
{
    double cash   = 0.;   ///< C, includes margin
    double shares = 0.;   ///< S, negative when short
    double loans  = 0.;   ///< L >= 0
    double margin = 0.;   ///< M = max(0, -S) p at the last trade or settlement
    strategy_params params;
    double wealth_prev = 0.;   ///< wealth at the end of the previous step
    bool alive = true;
};

double wealth(const fund &f, double p);

///
/// \brief  Buys (ds > 0) or sells (ds < 0) shares at price p.
///
///         Cash pays for the trade; whenever cash would fall below the
///         margin required by a short position the shortfall is borrowed,
///         and surplus cash above the margin repays outstanding loans.
///         Wealth at price p is unchanged.
///
fund apply_trade(fund f, double ds, double p);

struct settlement
{
    fund   account;
    double pnl;             ///< r (C - L) + (p_new - p_old + d) S
    double external_flow;   ///< (f - 1) pnl, deposited (> 0) or withdrawn
    double period_return;   ///< pnl / W(p_old)
};

///
/// \brief  Pays interest and dividends over one step and applies the
///         investor flow of the reinvestment rule W' = W + f pnl.
///
settlement accrue_and_settle( fund f
                            , double p_new
                            , double p_old
                            , double dividend_per_share
                            , double r_step
                            , double reinvestment);

///
/// \brief  Solvency condition W > 0 (strict).
///
bool check_solvency(const fund &f, double p);

///
/// \brief  Deposits or withdraws cash so that the wealth at p is w_target.
///
fund replenish_to(fund f, double w_target, double p);

///
/// \brief  Realized leverage |S| p / W.
///
double realized_leverage(const fund &f, double p);

} // namespace market_ecology

#endif // ME_ACCOUNTING_HPP
