/// \file   ecology.cpp
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
#include "market_ecology/ecology.hpp"

#include "market_ecology/parameters.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace market_ecology {

namespace {

struct running_moments
{
    std::size_t n = 0;
    double mean = 0.;
    double m2 = 0.;

    void add(double x)
    {
        ++n;
        const double d = x - mean;
        mean += d / double(n);
        m2 += d * (x - mean);
    }

    [[nodiscard]] double standard_error() const
    {
        return n > 1 ? std::sqrt(m2 / double(n - 1) / double(n)) : 0.;
    }
};

std::vector<double> log_returns(std::span<const double> prices)
{
    std::vector<double> r;
    r.reserve(prices.size());
    for(std::size_t k = 1; k < prices.size(); ++k) {
        if(!(prices[k] > 0.) || !(prices[k - 1] > 0.)) {
            throw std::domain_error("volatility needs positive prices");
        }
        r.push_back(std::log(prices[k] / prices[k - 1]));
    }
    return r;
}

double sample_std(std::span<const double> x)
{
    const double m = std::accumulate(x.begin(), x.end(), 0.) / double(x.size());
    double ss = 0.;
    for(double v : x) {
        ss += (v - m) * (v - m);
    }
    return std::sqrt(ss / double(x.size() - 1));
}

Eigen::MatrixXd as_matrix(const std::vector<double> &values, std::size_t k)
{
    if(values.size() != k * k) {
        throw std::invalid_argument("covariance size does not match the mean");
    }
    Eigen::MatrixXd m(k, k);
    for(std::size_t i = 0; i < k; ++i) {
        for(std::size_t j = 0; j < k; ++j) {
            m(i, j) = values[i * k + j];
        }
    }
    return m;
}

} // namespace

double avg_return(std::span<const double> returns)
{
    if(returns.empty()) {
        throw insufficient_data("average return needs at least one return");
    }
    double log_growth = 0.;
    for(double r : returns) {
        if(!(1. + r > 0.)) {
            throw std::domain_error("gross return must be positive");
        }
        log_growth += std::log1p(r);
    }
    return std::expm1(log_growth * double(day_count) / double(returns.size()));
}

wealth_vector perturb(const wealth_vector &base, std::size_t j, double delta)
{
    const double moved = base[j] + delta;
    const double rest = 1. - base[j];
    if(moved < 0. || moved > 1. || !(rest > 0.)) {
        throw std::domain_error("perturbation leaves the simplex");
    }
    const double scale = (1. - moved) / rest;
    wealth_vector w = base;
    for(std::size_t i = 0; i < 3; ++i) {
        w[i] = i == j ? moved : base[i] * scale;
    }
    return w;
}

double community_matrix::t_stat(std::size_t i, std::size_t j) const
{
    const double se = standard_error[i][j];
    return se > 0. ? g[i][j] / se : 0.;
}

community_matrix estimate_community_matrix( const wealth_vector &base
                                          , double h
                                          , std::size_t seeds
                                          , const return_estimator &estimator)
{
    if(!(h > 0.)) {
        throw std::invalid_argument("finite-difference step must be positive");
    }
    if(seeds == 0) {
        throw std::invalid_argument("community matrix needs at least one seed");
    }
    std::array<wealth_vector, 3> plus;
    std::array<wealth_vector, 3> minus;
    for(std::size_t j = 0; j < 3; ++j) {
        plus[j]  = perturb(base, j, h);
        minus[j] = perturb(base, j, -h);
    }
    std::array<std::array<running_moments, 3>, 3> moments;
    for(std::size_t s = 0; s < seeds; ++s) {
        for(std::size_t j = 0; j < 3; ++j) {
            const auto up   = estimator(plus[j].w, s);
            const auto down = estimator(minus[j].w, s);
            for(std::size_t i = 0; i < 3; ++i) {
                moments[i][j].add((up[i] - down[i]) / (2. * h));
            }
        }
    }
    community_matrix result;
    result.h = h;
    result.seeds = seeds;
    result.base = base;
    for(std::size_t i = 0; i < 3; ++i) {
        for(std::size_t j = 0; j < 3; ++j) {
            result.g[i][j] = moments[i][j].mean;
            result.standard_error[i][j] = moments[i][j].standard_error();
        }
    }
    return result;
}

matrix3 normalize_rows(const matrix3 &a)
{
    matrix3 out{};
    for(std::size_t i = 0; i < 3; ++i) {
        const double s = a[i][0] + a[i][1] + a[i][2];
        for(std::size_t j = 0; j < 3; ++j) {
            out[i][j] = s > 0. ? a[i][j] / s : 0.;
        }
    }
    return out;
}

food_web estimate_food_web( const wealth_vector &base
                          , std::size_t seeds
                          , const return_estimator &estimator)
{
    if(seeds == 0) {
        throw std::invalid_argument("food web needs at least one seed");
    }
    std::array<std::array<running_moments, 3>, 3> moments;
    for(std::size_t s = 0; s < seeds; ++s) {
        const auto full = estimator(base.w, s);
        for(std::size_t j = 0; j < 3; ++j) {
            auto removed = base.w;
            removed[j] = 0.;
            const auto without = estimator(removed, s);
            for(std::size_t i = 0; i < 3; ++i) {
                if(i != j) {
                    moments[i][j].add(full[i] - without[i]);
                }
            }
        }
    }
    food_web web;
    web.seeds = seeds;
    for(std::size_t i = 0; i < 3; ++i) {
        for(std::size_t j = 0; j < 3; ++j) {
            web.difference[i][j] = moments[i][j].mean;
            web.standard_error[i][j] = moments[i][j].standard_error();
            web.raw[i][j] = std::max(0., moments[i][j].mean);
        }
    }
    web.normalized = normalize_rows(web.raw);
    return web;
}

trophic_result trophic_levels(const matrix3 &a)
{
    for(const auto &row : a) {
        for(double x : row) {
            if(!(x >= 0.) || !std::isfinite(x)) {
                throw std::invalid_argument("food-web matrix must be non-negative and finite");
            }
        }
    }
    constexpr std::size_t max_iterations = 10000;
    constexpr double tolerance = 1e-10;
    std::array<double, 3> t = {1., 1., 1.};
    trophic_result result;
    for(std::size_t k = 1; k <= max_iterations; ++k) {
        std::array<double, 3> next{};
        double delta = 0.;
        for(std::size_t i = 0; i < 3; ++i) {
            next[i] = 1. + a[i][0] * t[0] + a[i][1] * t[1] + a[i][2] * t[2];
            delta = std::max(delta, std::abs(next[i] - t[i]));
        }
        t = next;
        result.iterations = k;
        if(!std::isfinite(delta)) {
            break;
        }
        if(delta < tolerance) {
            result.levels = t;
            return result;
        }
    }
    return result;
}

std::string trophic_ordering(const trophic_result &result)
{
    if(!result.defined()) {
        return "undefined";
    }
    const auto &t = *result.levels;
    std::array<std::size_t, 3> order = {0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return t[x] < t[y]; });
    const char *names[] = {"nt", "vi", "tf"};
    std::string s = names[order[0]];
    for(std::size_t k = 1; k < 3; ++k) {
        s += t[order[k]] - t[order[k - 1]] > 1e-9 ? "<" : "=";
        s += names[order[k]];
    }
    return s;
}

std::vector<double> rolling_volatility(std::span<const double> prices, std::size_t window)
{
    if(window < 2 || prices.size() < window + 1) {
        throw insufficient_data("rolling volatility needs window + 1 prices and a window of at least 2");
    }
    const auto r = log_returns(prices);
    const double annual = std::sqrt(double(day_count));
    std::vector<double> out;
    out.reserve(r.size() - window + 1);
    for(std::size_t k = 0; k + window <= r.size(); ++k) {
        out.push_back(sample_std(std::span(r).subspan(k, window)) * annual);
    }
    return out;
}

double volatility(std::span<const double> prices)
{
    if(prices.size() < 3) {
        throw insufficient_data("volatility needs at least three prices");
    }
    const auto r = log_returns(prices);
    return sample_std(r) * std::sqrt(double(day_count));
}

double mispricing(double p, double v)
{
    if(!(p > 0.) || !(v > 0.)) {
        throw std::domain_error("mispricing needs positive price and value");
    }
    return std::abs(std::log2(p / v));
}

double return_autocorrelation(std::span<const double> returns, std::size_t lag)
{
    if(returns.size() <= lag + 1) {
        throw insufficient_data("autocorrelation needs more observations than lag + 1");
    }
    const std::size_t n = returns.size() - lag;
    const auto x = returns.first(n);
    const auto y = returns.subspan(lag, n);
    const double mx = std::accumulate(x.begin(), x.end(), 0.) / double(n);
    const double my = std::accumulate(y.begin(), y.end(), 0.) / double(n);
    double sxy = 0.;
    double sxx = 0.;
    double syy = 0.;
    for(std::size_t k = 0; k < n; ++k) {
        sxy += (x[k] - mx) * (y[k] - my);
        sxx += (x[k] - mx) * (x[k] - mx);
        syy += (y[k] - my) * (y[k] - my);
    }
    if(!(sxx > 0.) || !(syy > 0.)) {
        throw std::domain_error("autocorrelation of a constant series is undefined");
    }
    return sxy / std::sqrt(sxx * syy);
}

malfunction_coeffs regress_malfunction(std::span<const wealth_vector> wealths,
                                       std::span<const double> metric)
{
    if(wealths.size() != metric.size()) {
        throw std::invalid_argument("wealth and metric series must be aligned");
    }
    const std::size_t n = metric.size();
    if(n < 4) {
        throw insufficient_data("regression needs at least four observations");
    }
    Eigen::MatrixXd x(n, 3);
    Eigen::VectorXd y(n);
    for(std::size_t k = 0; k < n; ++k) {
        for(std::size_t i = 0; i < 3; ++i) {
            x(k, i) = wealths[k][i];
        }
        y(k) = metric[k];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-12);
    if(qr.rank() < 3) {
        throw std::domain_error("regression design is rank deficient");
    }
    const Eigen::VectorXd b = qr.solve(y);
    const Eigen::VectorXd residual = y - x * b;
    const double ssr = residual.squaredNorm();
    const double mean = y.mean();
    const double sst = (y.array() - mean).square().sum();
    const double sigma2 = ssr / double(n - 3);
    const Eigen::Matrix3d xtx_inv = (x.transpose() * x).inverse();

    malfunction_coeffs c;
    c.observations = n;
    for(std::size_t i = 0; i < 3; ++i) {
        c.coefficients[i] = b(i);
        const double se = std::sqrt(sigma2 * xtx_inv(i, i));
        c.t_stats[i] = se > 0. ? b(i) / se : 0.;
    }
    c.r_squared = sst > 0. ? 1. - ssr / sst : 1.;
    const double syy = y.squaredNorm();
    c.r_squared_uncentered = syy > 0. ? 1. - ssr / syy : 1.;
    return c;
}

double predict_metric(const wealth_vector &w, const std::array<double, 3> &coefficients)
{
    return coefficients[0] * w[0] + coefficients[1] * w[1] + coefficients[2] * w[2];
}

std::array<double, 2> predict_metrics(const wealth_vector &w)
{
    return { predict_metric(w, {2.4, -68., 107.})
           , predict_metric(w, {-0.15, -1.02, 1.5}) };
}

double kl_divergence_gaussian(const gaussian &first, const gaussian &second)
{
    const std::size_t k = first.mean.size();
    if(k == 0 || second.mean.size() != k) {
        throw std::invalid_argument("Gaussians must have the same positive dimension");
    }
    const Eigen::MatrixXd s1 = as_matrix(first.covariance, k);
    const Eigen::MatrixXd s2 = as_matrix(second.covariance, k);
    const Eigen::LLT<Eigen::MatrixXd> l1(s1);
    const Eigen::LLT<Eigen::MatrixXd> l2(s2);
    if(l1.info() != Eigen::Success || l2.info() != Eigen::Success
       || !(s1 - s1.transpose()).isZero(1e-12 * s1.norm())
       || !(s2 - s2.transpose()).isZero(1e-12 * s2.norm())) {
        throw std::domain_error("covariances must be symmetric positive definite");
    }
    Eigen::VectorXd diff(k);
    for(std::size_t i = 0; i < k; ++i) {
        diff(i) = second.mean[i] - first.mean[i];
    }
    double logdet1 = 0.;
    double logdet2 = 0.;
    for(std::size_t i = 0; i < k; ++i) {
        logdet1 += 2. * std::log(l1.matrixL()(i, i));
        logdet2 += 2. * std::log(l2.matrixL()(i, i));
    }
    const double trace = l2.solve(s1).trace();
    const double quad = diff.dot(l2.solve(diff));
    return 0.5 * (trace + quad - double(k) + logdet2 - logdet1);
}

gaussian fit_gaussian(std::span<const std::vector<double>> points)
{
    if(points.size() < 2) {
        throw insufficient_data("Gaussian fit needs at least two points");
    }
    const std::size_t k = points.front().size();
    gaussian g;
    g.mean.assign(k, 0.);
    g.covariance.assign(k * k, 0.);
    for(const auto &p : points) {
        if(p.size() != k) {
            throw std::invalid_argument("points must share one dimension");
        }
        for(std::size_t i = 0; i < k; ++i) {
            g.mean[i] += p[i] / double(points.size());
        }
    }
    for(const auto &p : points) {
        for(std::size_t i = 0; i < k; ++i) {
            for(std::size_t j = 0; j < k; ++j) {
                g.covariance[i * k + j] += (p[i] - g.mean[i]) * (p[j] - g.mean[j])
                                         / double(points.size() - 1);
            }
        }
    }
    return g;
}

double detection_time(double s, double sharpe_gap)
{
    if(sharpe_gap == 0.) {
        throw std::domain_error("detection time needs a non-zero Sharpe gap");
    }
    const double ratio = s / sharpe_gap;
    return ratio * ratio;
}

double sharpe(std::span<const double> returns)
{
    if(returns.size() < 2) {
        throw insufficient_data("Sharpe ratio needs at least two returns");
    }
    const double m = std::accumulate(returns.begin(), returns.end(), 0.) / double(returns.size());
    const double sd = sample_std(returns);
    if(!(sd > 1e-14 * std::abs(m))) {
        throw std::domain_error("Sharpe ratio undefined for zero volatility");
    }
    const double n = double(day_count);
    return m * n / (sd * std::sqrt(n));
}

} // namespace market_ecology
