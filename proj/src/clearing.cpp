/// \file   clearing.cpp
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
#include "market_ecology/clearing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace market_ecology {

namespace {

constexpr double inv_ln2 = 1. / std::numbers::ln2;

bool is_kelly(const demand_term &t)
{
    return t.params.kind == strategy_kind::kelly;
}

// the fraction of marked wealth the fund wants in the stock, and its
// derivative with respect to p
struct allocation
{
    double level;
    double slope;
};

allocation allocation_at(const demand_term &t, double p, double log2p)
{
    if(is_kelly(t)) {
        return {t.fraction, 0.};
    }
    const double phi  = t.signal_base - t.signal_slope * log2p;
    const double th   = std::tanh(t.params.c * phi);
    const double dphi = -t.signal_slope * inv_ln2 / p;
    return { t.params.lambda_max * (th + 0.5)
           , t.params.lambda_max * t.params.c * (1. - th * th) * dphi };
}

struct evaluation
{
    double value;
    double slope;   // d value / d p
};

evaluation evaluate(const std::vector<demand_term> &terms, double p)
{
    const double log2p = std::log2(p);
    double value = 0.;
    double slope = 0.;
    for(const auto &t : terms) {
        const auto a   = allocation_at(t, p, log2p);
        const double w = t.wealth_at(p);
        value += w * a.level / p - t.shares_prev;
        slope += (t.wealth_slope * a.level + w * a.slope) / p - w * a.level / (p * p);
    }
    return {value, slope};
}

struct search_point
{
    double x;   // log price
    double f;   // excess demand
};

} // namespace

double demand_term::signal_at(double p) const
{
    return signal_base - signal_slope * std::log2(p);
}

double demand_term::target(double p) const
{
    const auto a = allocation_at(*this, p, std::log2(p));
    return wealth_at(p) * a.level / p;
}

double demand_term::target_derivative(double p) const
{
    const auto a   = allocation_at(*this, p, std::log2(p));
    const double w = wealth_at(p);
    return (wealth_slope * a.level + w * a.slope) / p - w * a.level / (p * p);
}

double aggregate_excess_demand(const std::vector<demand_term> &terms, double p)
{
    if(!(p > 0.)) {
        throw std::domain_error("excess demand is defined for positive prices only");
    }
    return evaluate(terms, p).value;
}

double demand_derivative(const std::vector<demand_term> &terms, double p)
{
    if(!(p > 0.)) {
        throw std::domain_error("excess demand is defined for positive prices only");
    }
    return evaluate(terms, p).slope;
}

std::string_view to_string(clearing_mode mode)
{
    return mode == clearing_mode::root ? "root" : "minimized";
}

namespace {

// safeguarded Newton on F(x) = excess(exp(x)) inside a sign-changing bracket
clearing_result solve_in_bracket( const std::vector<demand_term> &terms
                                , search_point lo
                                , search_point hi
                                , const clearing_options &options
                                , std::size_t iterations)
{
    search_point best = std::abs(lo.f) < std::abs(hi.f) ? lo : hi;
    double x = best.x;
    double f_prev = std::numeric_limits<double>::infinity();

    while(iterations < options.max_iterations) {
        ++iterations;
        const double p = std::exp(x);
        const auto e = evaluate(terms, p);
        const double f = e.value;
        if(std::abs(f) < std::abs(best.f)) {
            best = {x, f};
        }
        if(std::abs(f) <= options.abs_tol) {
            return {p, f, clearing_mode::root, iterations, false};
        }
        if((f > 0.) == (lo.f > 0.)) {
            lo = {x, f};
        } else {
            hi = {x, f};
        }
        const double width = std::abs(hi.x - lo.x);
        if(width < 4. * std::numeric_limits<double>::epsilon() * std::max(1., std::abs(x))) {
            break;
        }
        const double dfdx = e.slope * p;
        double next = dfdx != 0. ? x - f / dfdx : std::numeric_limits<double>::quiet_NaN();
        const double a = std::min(lo.x, hi.x);
        const double b = std::max(lo.x, hi.x);
        const bool stalled = std::abs(f) > 0.5 * std::abs(f_prev);
        if(!(next > a && next < b) || stalled) {
            next = 0.5 * (a + b);
        }
        f_prev = f;
        x = next;
    }
    const double p = std::exp(best.x);
    return { p
           , best.f
           , std::abs(best.f) <= options.abs_tol ? clearing_mode::root : clearing_mode::minimized
           , iterations
           , false };
}

// minimizes F(exp(x))^2 over [x_min, x_max]
clearing_result minimize_mismatch( const std::vector<demand_term> &terms
                                 , double x_min
                                 , double x_max
                                 , const std::vector<search_point> &seen
                                 , const clearing_options &options
                                 , std::size_t iterations)
{
    search_point best{0., std::numeric_limits<double>::infinity()};
    auto consider = [&](double x, double f) {
        if(std::isfinite(f) && std::abs(f) < std::abs(best.f)) {
            best = {x, f};
        }
    };
    for(const auto &s : seen) {
        consider(s.x, s.f);
    }
    constexpr int scan = 64;
    for(int i = 0; i <= scan; ++i) {
        const double x = x_min + (x_max - x_min) * double(i) / scan;
        consider(x, evaluate(terms, std::exp(x)).value);
    }
    if(!std::isfinite(best.f)) {
        throw clearing_failed("no finite excess demand found in the price search range");
    }

    struct probe
    {
        double f;   // excess demand
        double h;   // squared excess demand
        double g;   // dh/dx
    };
    auto objective = [&](double x) {
        const double p = std::exp(x);
        const auto e = evaluate(terms, p);
        return probe{e.value, e.value * e.value, 2. * e.value * e.slope * p};
    };

    double x = best.x;
    auto current = objective(x);
    double inverse_hessian = (x_max - x_min) / scan / std::max(std::abs(current.g), 1e-300);
    while(iterations < options.max_iterations) {
        ++iterations;
        if(current.g == 0. || !std::isfinite(current.g)) {
            break;
        }
        double step = -inverse_hessian * current.g;
        double x_new = std::clamp(x + step, x_min, x_max);
        auto next = objective(x_new);
        // backtrack until the mismatch decreases
        for(int halvings = 0; !(next.h < current.h) && halvings < 40; ++halvings) {
            step *= 0.5;
            x_new = std::clamp(x + step, x_min, x_max);
            next = objective(x_new);
        }
        if(!(next.h < current.h)) {
            break;
        }
        const double s = x_new - x;
        const double y = next.g - current.g;
        if(s * y > 0.) {
            inverse_hessian = s / y;
        }
        x = x_new;
        current = next;
        consider(x, current.f);
        if(std::abs(s) < 1e-14) {
            break;
        }
    }
    const double p = std::exp(best.x);
    const double residual = evaluate(terms, p).value;
    if(!(p > 0.) || !std::isfinite(p) || !std::isfinite(residual)) {
        throw clearing_failed("minimization produced no finite positive price");
    }
    return { p
           , residual
           , std::abs(residual) <= options.abs_tol ? clearing_mode::root : clearing_mode::minimized
           , iterations
           , false };
}

} // namespace

clearing_result find_clearing_price( const std::vector<demand_term> &terms
                                   , double p_prev
                                   , const clearing_options &options)
{
    if(!(p_prev > 0.) || !std::isfinite(p_prev)) {
        throw std::invalid_argument("previous price must be positive and finite");
    }
    if(terms.empty()) {
        throw std::invalid_argument("clearing needs at least one participant");
    }
    if(!(options.initial_step > 0.) || !(options.expansion_factor > 1.) || !(options.move_limit > 1.)) {
        throw std::invalid_argument("bracket search needs a positive first step, growth above 1 and a move limit above 1");
    }

    const double x0    = std::log(p_prev);
    const double reach = std::log(options.move_limit);
    const double f0    = evaluate(terms, p_prev).value;
    std::size_t iterations = 0;
    if(std::abs(f0) <= options.abs_tol) {
        return {p_prev, f0, clearing_mode::root, 0, false};
    }

    std::vector<search_point> seen{{x0, f0}};
    bool bound_hit = false;
    // excess demand pushes the price up when positive; look that way first
    const double first_direction = f0 > 0. ? 1. : -1.;
    const std::array<double, 2> directions = {first_direction, -first_direction};
    std::array<search_point, 2> previous = {search_point{x0, f0}, search_point{x0, f0}};
    std::array<bool, 2> open = {true, true};
    double offset = options.initial_step;
    for(std::size_t k = 1; k <= options.max_expansions && (open[0] || open[1]); ++k) {
        const bool at_limit = offset >= reach;
        const double step = std::min(offset, reach);
        for(std::size_t d = 0; d < 2; ++d) {
            if(!open[d]) {
                continue;
            }
            const double x = x0 + directions[d] * step;
            const double f = evaluate(terms, std::exp(x)).value;
            ++iterations;
            const search_point current{x, f};
            seen.push_back(current);
            if(std::isfinite(f) && (f > 0.) != (previous[d].f > 0.)) {
                auto result = solve_in_bracket(terms, previous[d], current, options, iterations);
                result.bound_hit = bound_hit || at_limit;
                if(result.mode == clearing_mode::root) {
                    return result;
                }
                iterations = result.iterations;
                open[d] = false;
                continue;
            }
            previous[d] = current;
            if(at_limit) {
                bound_hit = true;
                open[d] = false;
            }
        }
        offset *= options.expansion_factor;
    }

    auto result = minimize_mismatch(terms, x0 - reach, x0 + reach, seen, options, iterations);
    result.bound_hit = bound_hit;
    return result;
}

} // namespace market_ecology
