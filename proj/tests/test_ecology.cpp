/// \file   test_ecology.cpp
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
#include "market_ecology/processes.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

using namespace market_ecology;

namespace {

// returns linear in the weights, pi = M w, plus seed noise
return_estimator linear_estimator(const matrix3 &m, double noise = 0.)
{
    return [m, noise](const std::array<double, 3> &w, std::size_t seed) {
        std::array<double, 3> out{};
        for(std::size_t i = 0; i < 3; ++i) {
            out[i] = m[i][0] * w[0] + m[i][1] * w[1] + m[i][2] * w[2] + noise * double(seed % 3);
        }
        return out;
    };
}

} // namespace

TEST_CASE("average return annualizes the geometric mean")
{
    const std::vector<double> flat(252, 0.001);
    CHECK(avg_return(flat) == doctest::Approx(std::pow(1.001, 252.) - 1.).epsilon(1e-12));

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-0.02, 0.02);
    std::vector<double> r(1000);
    double product = 1.;
    for(auto &x : r) {
        x = u(rng);
        product *= 1. + x;
    }
    CHECK(avg_return(r) == doctest::Approx(std::pow(product, 252. / 1000.) - 1.).epsilon(1e-10));

    CHECK_THROWS_AS(avg_return(std::vector<double>{}), insufficient_data);
    CHECK_THROWS_AS(avg_return(std::vector<double>{-1.}), std::domain_error);
}

TEST_CASE("perturbation stays on the simplex")
{
    const wealth_vector base(0.43, 0.34, 0.23);
    const auto w = perturb(base, 1, 0.02);
    CHECK(w[1] == doctest::Approx(0.36));
    CHECK(w.sum() == doctest::Approx(1.).epsilon(1e-14));
    CHECK(w[0] / w[2] == doctest::Approx(0.43 / 0.23));
    CHECK_THROWS_AS(perturb(wealth_vector(0.01, 0.5, 0.49), 0, -0.02), std::domain_error);
}

TEST_CASE("community matrix recovers a linear return model")
{
    // pi = M w with w perturbed along e_j and renormalized: the central
    // difference of M w is M (dw/dh), independent of h
    const matrix3 m = {{{0.01, -0.2, 0.05}, {0.3, -0.1, 0.02}, {-0.4, 0.1, 0.07}}};
    const wealth_vector base(0.43, 0.34, 0.23);
    const double h = 0.02;
    const auto cm = estimate_community_matrix(base, h, 4, linear_estimator(m));
    for(std::size_t j = 0; j < 3; ++j) {
        const double rest = 1. - base[j];
        std::array<double, 3> dw{};
        for(std::size_t k = 0; k < 3; ++k) {
            dw[k] = k == j ? 1. : -base[k] / rest;
        }
        for(std::size_t i = 0; i < 3; ++i) {
            const double expected = m[i][0] * dw[0] + m[i][1] * dw[1] + m[i][2] * dw[2];
            CHECK(cm.g[i][j] == doctest::Approx(expected).epsilon(1e-9));
            CHECK(cm.standard_error[i][j] == doctest::Approx(0.).scale(1.));
        }
    }
    CHECK(cm.seeds == 4);
    CHECK(cm.t_stat(0, 0) == 0.);
    CHECK_THROWS_AS(estimate_community_matrix(base, 0., 4, linear_estimator(m)), std::invalid_argument);
    CHECK_THROWS_AS(estimate_community_matrix(base, h, 0, linear_estimator(m)), std::invalid_argument);
}

TEST_CASE("community signs are stable across finite-difference steps")
{
    // a smooth non-linear return model stands in for the market
    const auto estimator = [](const std::array<double, 3> &w, std::size_t seed) {
        const double e = 1e-4 * std::sin(double(seed));
        return std::array<double, 3>{ 0.02 - 0.05 * w[0] + 0.03 * w[2] * w[2] + e
                                    , 0.01 + 0.04 * w[0] - 0.02 * w[1] + e
                                    , 0.03 * std::exp(-w[2]) + 0.01 * w[0] + e };
    };
    const wealth_vector base(0.43, 0.34, 0.23);
    const auto reference = estimate_community_matrix(base, 0.02, 5, estimator);
    for(double h : {0.01, 0.04}) {
        const auto cm = estimate_community_matrix(base, h, 5, estimator);
        for(std::size_t i = 0; i < 3; ++i) {
            for(std::size_t j = 0; j < 3; ++j) {
                if(std::abs(reference.g[i][j]) > 1e-6) {
                    CHECK(std::signbit(cm.g[i][j]) == std::signbit(reference.g[i][j]));
                }
            }
        }
    }
}

TEST_CASE("trophic levels of simple webs")
{
    const matrix3 none{};
    const auto flat = trophic_levels(none);
    REQUIRE(flat.defined());
    CHECK((*flat.levels)[0] == doctest::Approx(1.));
    CHECK((*flat.levels)[1] == doctest::Approx(1.));
    CHECK((*flat.levels)[2] == doctest::Approx(1.));
    CHECK(trophic_ordering(flat) == "nt=vi=tf");

    // tf eats vi, vi eats nt
    matrix3 chain{};
    chain[1][0] = 1.;
    chain[2][1] = 1.;
    const auto c = trophic_levels(chain);
    REQUIRE(c.defined());
    CHECK((*c.levels)[0] == doctest::Approx(1.).epsilon(1e-9));
    CHECK((*c.levels)[1] == doctest::Approx(2.).epsilon(1e-9));
    CHECK((*c.levels)[2] == doctest::Approx(3.).epsilon(1e-9));
    CHECK(trophic_ordering(c) == "nt<vi<tf");

    matrix3 cycle{};
    cycle[0][1] = 1.;
    cycle[1][2] = 1.;
    cycle[2][0] = 1.;
    const auto u = trophic_levels(cycle);
    CHECK_FALSE(u.defined());
    CHECK(trophic_ordering(u) == "undefined");

    matrix3 negative{};
    negative[0][1] = -0.1;
    CHECK_THROWS_AS(trophic_levels(negative), std::invalid_argument);
}

TEST_CASE("trophic levels solve T = 1 + A T for sub-stochastic webs")
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0., 0.3);
    for(int trial = 0; trial < 50; ++trial) {
        matrix3 a{};
        for(std::size_t i = 0; i < 3; ++i) {
            for(std::size_t j = 0; j < 3; ++j) {
                a[i][j] = i == j ? 0. : u(rng);
            }
        }
        const auto t = trophic_levels(a);
        REQUIRE(t.defined());
        for(std::size_t i = 0; i < 3; ++i) {
            const double rhs = 1. + a[i][0] * (*t.levels)[0] + a[i][1] * (*t.levels)[1]
                             + a[i][2] * (*t.levels)[2];
            CHECK((*t.levels)[i] == doctest::Approx(rhs).epsilon(1e-9));
            CHECK((*t.levels)[i] >= 1.);
        }
    }
}

TEST_CASE("food web from removal runs")
{
    // removing j changes i's return by m[i][j] w_j
    const matrix3 m = {{{0., 0.1, -0.2}, {-0.3, 0., 0.4}, {0.05, 0.02, 0.}}};
    const wealth_vector base(0.5, 0.3, 0.2);
    const auto web = estimate_food_web(base, 3, linear_estimator(m, 0.01));
    for(std::size_t i = 0; i < 3; ++i) {
        for(std::size_t j = 0; j < 3; ++j) {
            const double diff = i == j ? 0. : m[i][j] * base[j];
            CHECK(web.difference[i][j] == doctest::Approx(diff).epsilon(1e-12));
            CHECK(web.raw[i][j] == doctest::Approx(std::max(0., diff)).epsilon(1e-12));
        }
    }
    CHECK(web.normalized[0][1] == doctest::Approx(1.));
    CHECK(web.normalized[1][2] == doctest::Approx(1.));
    CHECK(web.normalized[2][0] == doctest::Approx(0.05 * 0.5 / (0.05 * 0.5 + 0.02 * 0.3)));
}

TEST_CASE("row normalization leaves zero rows alone")
{
    const matrix3 a = {{{0., 2., 2.}, {0., 0., 0.}, {1., 3., 0.}}};
    const auto n = normalize_rows(a);
    CHECK(n[0][1] == doctest::Approx(0.5));
    CHECK(n[1][0] == 0.);
    CHECK(n[2][1] == doctest::Approx(0.75));
}

TEST_CASE("volatility of a geometric path")
{
    std::vector<double> steady(300);
    for(std::size_t k = 0; k < steady.size(); ++k) {
        steady[k] = 100. * std::exp(0.001 * double(k));
    }
    CHECK(volatility(steady) == doctest::Approx(0.).scale(1.));

    std::vector<double> zigzag(301);
    zigzag[0] = 100.;
    for(std::size_t k = 1; k < zigzag.size(); ++k) {
        zigzag[k] = zigzag[k - 1] * std::exp(k % 2 ? 0.01 : -0.01);
    }
    // log returns alternate +-0.01 with sample std 0.01 sqrt(n / (n - 1))
    CHECK(volatility(zigzag) == doctest::Approx(0.01 * std::sqrt(300. / 299.) * std::sqrt(252.)));

    const auto rolling = rolling_volatility(zigzag, 10);
    CHECK(rolling.size() == 300 - 10 + 1);
    CHECK(rolling.front() == doctest::Approx(0.01 * std::sqrt(10. / 9.) * std::sqrt(252.)));
    CHECK_THROWS_AS(rolling_volatility(zigzag, 400), insufficient_data);
    CHECK_THROWS_AS(volatility(std::vector<double>{1., -1., 2.}), std::domain_error);
}

TEST_CASE("mispricing is symmetric in log2")
{
    CHECK(mispricing(200., 100.) == doctest::Approx(1.));
    CHECK(mispricing(50., 100.) == doctest::Approx(1.));
    CHECK(mispricing(100., 100.) == 0.);
    CHECK_THROWS_AS(mispricing(0., 1.), std::domain_error);
}

TEST_CASE("autocorrelation examples")
{
    std::vector<double> alt(100);
    for(std::size_t k = 0; k < alt.size(); ++k) {
        alt[k] = k % 2 ? 1. : -1.;
    }
    CHECK(return_autocorrelation(alt, 1) == doctest::Approx(-1.));
    CHECK(return_autocorrelation(alt, 2) == doctest::Approx(1.));

    std::mt19937_64 rng(2);
    std::normal_distribution<double> z;
    std::vector<double> ar(200000);
    double x = 0.;
    for(auto &v : ar) {
        x = 0.6 * x + z(rng);
        v = x;
    }
    CHECK(return_autocorrelation(ar, 1) == doctest::Approx(0.6).epsilon(0.01));
    CHECK(return_autocorrelation(ar, 2) == doctest::Approx(0.36).epsilon(0.02));
    CHECK_THROWS_AS(return_autocorrelation(std::vector<double>(10, 1.), 1), std::domain_error);
    CHECK_THROWS_AS(return_autocorrelation(std::vector<double>{1., 2.}, 1), insufficient_data);
}

TEST_CASE("malfunction regression")
{
    std::mt19937_64 rng(3);
    std::exponential_distribution<double> e;
    std::vector<wealth_vector> w;
    for(int k = 0; k < 500; ++k) {
        w.push_back(wealth_vector::normalized(e(rng), e(rng), e(rng)));
    }
    const std::array<double, 3> b = {2.4, -68., 107.};
    std::vector<double> exact;
    for(const auto &v : w) {
        exact.push_back(predict_metric(v, b));
    }
    const auto fit = regress_malfunction(w, exact);
    for(std::size_t i = 0; i < 3; ++i) {
        CHECK(fit.coefficients[i] == doctest::Approx(b[i]).epsilon(1e-9));
    }
    CHECK(fit.r_squared == doctest::Approx(1.).epsilon(1e-9));
    CHECK(fit.observations == 500);

    std::normal_distribution<double> z;
    std::vector<double> noise;
    for(std::size_t k = 0; k < w.size(); ++k) {
        noise.push_back(5. + z(rng));
    }
    const auto none = regress_malfunction(w, noise);
    CHECK(none.r_squared < 0.05);
    CHECK(none.r_squared_uncentered > 0.9);

    std::vector<wealth_vector> degenerate(10, wealth_vector(0.2, 0.3, 0.5));
    CHECK_THROWS_AS(regress_malfunction(degenerate, std::vector<double>(10, 1.)), std::domain_error);
    CHECK_THROWS_AS(regress_malfunction(w, std::vector<double>(3, 1.)), std::invalid_argument);
}

TEST_CASE("reference malfunction predictors")
{
    const auto at_nt = predict_metrics(wealth_vector(1., 0., 0.));
    CHECK(at_nt[0] == doctest::Approx(2.4));
    CHECK(at_nt[1] == doctest::Approx(-0.15));
    const auto at_tf = predict_metrics(wealth_vector(0., 0., 1.));
    CHECK(at_tf[0] == doctest::Approx(107.));
    CHECK(at_tf[1] == doctest::Approx(1.5));
    const auto mid = predict_metrics(wealth_vector(0.43, 0.34, 0.23));
    CHECK(mid[0] == doctest::Approx(2.4 * 0.43 - 68. * 0.34 + 107. * 0.23));

    // linear along segments of the simplex
    const wealth_vector a(0.2, 0.5, 0.3), c(0.6, 0.1, 0.3);
    const wealth_vector half(0.4, 0.3, 0.3);
    const auto pa = predict_metrics(a), pc = predict_metrics(c), ph = predict_metrics(half);
    CHECK(ph[0] == doctest::Approx((pa[0] + pc[0]) / 2.));
    CHECK(ph[1] == doctest::Approx((pa[1] + pc[1]) / 2.));
}

TEST_CASE("Gaussian divergence")
{
    const gaussian g{{0.3, 0.2}, {0.01, 0.002, 0.002, 0.02}};
    CHECK(kl_divergence_gaussian(g, g) == doctest::Approx(0.).scale(1.));

    const gaussian a{{0.}, {1.}}, b{{0.5}, {1.}};
    CHECK(kl_divergence_gaussian(a, b) == doctest::Approx(0.125));

    // one-dimensional closed form with different variances
    const gaussian c{{1.}, {4.}};
    CHECK(kl_divergence_gaussian(a, c) == doctest::Approx(0.5 * (0.25 + 0.25 - 1. + std::log(4.))));

    std::mt19937_64 rng(6);
    std::normal_distribution<double> z;
    for(int trial = 0; trial < 100; ++trial) {
        std::array<double, 4> l1{}, l2{};
        for(auto *l : {&l1, &l2}) {
            for(auto &v : *l) {
                v = z(rng);
            }
        }
        auto spd = [](const std::array<double, 4> &l) {
            // L L' + 0.1 I
            return std::vector<double>{ l[0] * l[0] + 0.1, l[0] * l[2]
                                      , l[0] * l[2], l[2] * l[2] + l[3] * l[3] + 0.1 };
        };
        const gaussian p{{z(rng), z(rng)}, spd(l1)};
        const gaussian q{{z(rng), z(rng)}, spd(l2)};
        CHECK(kl_divergence_gaussian(p, q) >= -1e-12);
    }

    const gaussian singular{{0., 0.}, {1., 1., 1., 1.}};
    CHECK_THROWS_AS(kl_divergence_gaussian(singular, g), std::domain_error);
    CHECK_THROWS_AS(kl_divergence_gaussian(a, g), std::invalid_argument);
}

TEST_CASE("Gaussian fit recovers sample moments")
{
    const std::vector<std::vector<double>> pts = {{0., 0.}, {2., 0.}, {0., 2.}, {2., 2.}};
    const auto g = fit_gaussian(pts);
    CHECK(g.mean[0] == doctest::Approx(1.));
    CHECK(g.mean[1] == doctest::Approx(1.));
    CHECK(g.covariance[0] == doctest::Approx(4. / 3.));
    CHECK(g.covariance[1] == doctest::Approx(0.).scale(1.));
    CHECK_THROWS_AS(fit_gaussian(std::vector<std::vector<double>>{{1.}}), insufficient_data);
}

TEST_CASE("detection time")
{
    CHECK(detection_time(2., 0.1) == doctest::Approx(400.));
    CHECK(detection_time(1., 1.) == doctest::Approx(1.));
    CHECK(detection_time(3., 0.5) == doctest::Approx(36.));
    CHECK_THROWS_AS(detection_time(2., 0.), std::domain_error);
}

TEST_CASE("Sharpe ratio")
{
    CHECK_THROWS_AS(sharpe(std::vector<double>(100, 0.001)), std::domain_error);
    CHECK_THROWS_AS(sharpe(std::vector<double>{0.1}), insufficient_data);

    const double mu = 0.0004, sigma = 0.01;
    std::mt19937_64 rng(12);
    std::normal_distribution<double> z(mu, sigma);
    std::vector<double> r(252 * 400);
    for(auto &x : r) {
        x = z(rng);
    }
    const double expected = mu / sigma * std::sqrt(252.);
    // the estimate has standard error about sqrt(1 / years)
    CHECK(std::abs(sharpe(r) - expected) < 3. * std::sqrt(1. / 400.));
}
