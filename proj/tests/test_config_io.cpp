/// \file   test_config_io.cpp
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
#include "market_ecology/config.hpp"
#include "market_ecology/io.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <filesystem>
#include <sstream>

using namespace market_ecology;

TEST_CASE("config text parsing")
{
    const auto v = parse_config_text("# comment\n\nsigma = 0.07   # trailing\nmode=reinvest\n");
    CHECK(v.size() == 2);
    CHECK(v.at("sigma") == "0.07");
    CHECK(v.at("mode") == "reinvest");
    CHECK_THROWS_AS(parse_config_text("sigma = 0.1\nsigma = 0.2\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("bogus = 1\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("sigma 0.1\n"), config_error);
    CHECK_THROWS_AS(load_config_file("/nonexistent/config.cfg"), config_error);
}

TEST_CASE("overrides replace values")
{
    key_values v = parse_config_text("seed = 1\n");
    apply_override(v, "seed=9");
    apply_override(v, "gamma = 0.2");
    CHECK(v.at("seed") == "9");
    CHECK(v.at("gamma") == "0.2");
    CHECK_THROWS_AS(apply_override(v, "nope=1"), config_error);
    CHECK_THROWS_AS(apply_override(v, "seed"), config_error);
}

TEST_CASE("canonical form and hash")
{
    const auto a = canonicalize(parse_config_text("sigma = 0.060\nyears = 1e1\n"));
    const auto b = canonicalize(parse_config_text("years = 10\n"));
    CHECK(a == b);
    CHECK(a.at("years") == "10");
    CHECK(a.at("total_wealth") == "3e+08");
    CHECK(a.size() == default_config().size());
    CHECK(config_hash(a, "simulate") == config_hash(b, "simulate"));
    CHECK(config_hash(a, "simulate").size() == 16);
    CHECK(config_hash(a, "simulate") != config_hash(a, "sweep"));
    const auto c = canonicalize(parse_config_text("seed = 2\n"));
    CHECK(config_hash(c, "simulate") != config_hash(b, "simulate"));

    CHECK_THROWS_AS(canonicalize(parse_config_text("mode = sideways\n")), config_error);
    CHECK_THROWS_AS(canonicalize(parse_config_text("seed = -1\n")), config_error);
    CHECK_THROWS_AS(canonicalize(parse_config_text("sigma = abc\n")), config_error);
    CHECK_THROWS_AS(canonicalize(parse_config_text("wealth_peg = maybe\n")), config_error);
}

TEST_CASE("run configuration from keys")
{
    const auto c = to_run_config(parse_config_text("years = 3\nmode = reinvest\nf = 0.5\nsupply_rule = neutral\n"));
    CHECK(c.horizon == 3 * day_count);
    CHECK(c.mode == run_mode::reinvest);
    CHECK(c.reinvestment == 0.5);
    CHECK(c.supply == supply_rule::neutral);
    CHECK(c.params.leverage_limit[1] == 8.);
    CHECK(c.params.noise_reversion_rate == reversion_rate_for_half_life(6.));

    CHECK_THROWS_AS(to_run_config(parse_config_text("w_nt = 0.9\n")), config_error);
    CHECK_THROWS_AS(to_run_config(parse_config_text("k = 0.005\n")), config_error);
    CHECK_THROWS_AS(to_run_config(parse_config_text("noise_half_life = 0\n")), config_error);
}

TEST_CASE("experiment settings from keys")
{
    const auto s = to_experiment_settings(parse_config_text("multipliers = 0, 1 ,2\nsweep_trophic = no\n"));
    CHECK(s.multipliers == std::vector<double>{0., 1., 2.});
    CHECK_FALSE(s.sweep_trophic);
    CHECK(s.shadow_lambda == 8.);
    CHECK_THROWS_AS(to_experiment_settings(parse_config_text("seeds = 0\n")), config_error);
    CHECK_THROWS_AS(to_experiment_settings(parse_config_text("resolution = 1\n")), config_error);
    CHECK_THROWS_AS(to_experiment_settings(parse_config_text("reference_start_years = 300\n")), config_error);
}

TEST_CASE("cells print numbers losslessly")
{
    CHECK(cell(0.1) == "0.10000000000000001");
    CHECK(std::stod(cell(1. / 3.)) == 1. / 3.);
    CHECK(cell(std::nan("")) == "nan");
    CHECK(cell(-INFINITY) == "-inf");
    CHECK(cell(true) == "1");
    CHECK(cell(std::size_t(42)) == "42");
}

TEST_CASE("csv round trip with quoting")
{
    csv_table t({"name", "value"});
    t.add({"plain", "1"});
    t.add({"with,comma", "2"});
    t.add({"with \"quote\"", "3"});
    CHECK_THROWS_AS(t.add({"short"}), std::invalid_argument);

    std::stringstream ss;
    write_csv(ss, "0123456789abcdef", t);
    CHECK(ss.str().starts_with("# config_hash: 0123456789abcdef\nname,value\n"));
    const auto doc = parse_csv(ss);
    CHECK(doc.config_hash == "0123456789abcdef");
    CHECK(doc.table.columns == t.columns);
    CHECK(doc.table.rows == t.rows);
    CHECK(doc.table.column("value") == 1);
    CHECK_THROWS_AS((void)doc.table.column("missing"), io_error);
}

TEST_CASE("run table columns")
{
    run_config c;
    c.horizon = c.warmup + 5;
    const auto out = run(c);
    const auto t = run_table(out);
    CHECK(t.rows.size() == out.steps.size());
    CHECK(t.columns.front() == "t");
    CHECK(t.column("vi_wealth") > 0);
    CHECK(t.column("tf_alive") > 0);
    CHECK(t.columns.back() == "trade_wealth_error");
    CHECK(insolvency_table(out).rows.empty());
}

TEST_CASE("manifest round trip")
{
    experiment_manifest m;
    m.experiment = "simulate";
    m.config = canonicalize({});
    m.config_hash = config_hash(m.config, m.experiment);
    m.seed = 3;
    m.run_indices = {0, 1, 2};
    m.outputs = {{"run", "run.csv"}};
    m.wall_seconds = 1.25;
    m.git_describe = "abc123";

    const auto dir = std::filesystem::temp_directory_path() / "market_ecology_manifest_test";
    std::filesystem::create_directories(dir);
    write_manifest_file(dir / "manifest.json", m);
    const auto back = read_manifest_file(dir / "manifest.json");
    CHECK(back.experiment == m.experiment);
    CHECK(back.config == m.config);
    CHECK(back.config_hash == m.config_hash);
    CHECK(back.seed == 3);
    CHECK(back.run_indices == m.run_indices);
    REQUIRE(back.outputs.size() == 1);
    CHECK(back.outputs[0].path == "run.csv");
    CHECK(back.wall_seconds == 1.25);
    CHECK(back.git_describe == "abc123");
    std::filesystem::remove_all(dir);

    CHECK_THROWS_AS(parse_manifest("{\"experiment\": 1}"), io_error);
    CHECK_THROWS_AS(parse_manifest("not json"), io_error);
}
