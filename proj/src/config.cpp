/// \file   config.cpp
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

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace market_ecology {

namespace {

enum class value_kind
{
    real,
    count,
    flag,
    list,
    word,
};

struct key_spec
{
    const char *name;
    const char *default_value;
    value_kind kind;
    std::set<std::string> words = {};
};

const std::vector<key_spec> &key_specs()
{
    static const std::vector<key_spec> specs = {
        // model parameters, annual units
        {"r", "0.01", value_kind::real},
        {"g", "0.01", value_kind::real},
        {"k", "0.02", value_kind::real},
        {"sigma", "0.06", value_kind::real},
        {"omega", "0.1", value_kind::real},
        {"noise_half_life", "6", value_kind::real},
        {"gamma", "0.12", value_kind::real},
        {"noise_floor", "0.0001", value_kind::real},
        {"lambda_nt", "1", value_kind::real},
        {"lambda_vi", "8", value_kind::real},
        {"lambda_tf", "1", value_kind::real},
        {"c_nt", "5", value_kind::real},
        {"c_vi", "10", value_kind::real},
        {"c_tf", "4", value_kind::real},
        {"kelly_lambda", "8", value_kind::real},
        {"kelly_half_life", "2520", value_kind::real},
        // run
        {"mode", "constant_wealth", value_kind::word, {"constant_wealth", "reinvest"}},
        {"f", "1", value_kind::real},
        {"w_nt", "0.43", value_kind::real},
        {"w_vi", "0.34", value_kind::real},
        {"w_tf", "0.23", value_kind::real},
        {"total_wealth", "300000000", value_kind::real},
        {"years", "20", value_kind::real},
        {"warmup", "252", value_kind::count},
        {"seed", "1", value_kind::count},
        {"p0", "100", value_kind::real},
        {"supply_rule", "ratio", value_kind::word, {"ratio", "neutral"}},
        {"supply_ratio", "0.56", value_kind::real},
        {"supply", "0", value_kind::real},
        {"vi_growth", "known", value_kind::word, {"known", "history"}},
        {"wealth_peg", "true", value_kind::flag},
        {"on_insolvency", "halt", value_kind::word, {"halt", "freeze"}},
        {"kelly_share", "0", value_kind::real},
        {"kelly_multiplier", "1", value_kind::real},
        {"clearing_tol", "1e-08", value_kind::real},
        {"move_limit", "1024", value_kind::real},
        // experiments
        {"seeds", "5", value_kind::count},
        {"resolution", "15", value_kind::count},
        {"margin", "0.02", value_kind::real},
        {"h", "0.02", value_kind::real},
        {"runs", "50", value_kind::count},
        {"init", "uniform", value_kind::word, {"uniform", "fixed"}},
        {"sample_years", "1", value_kind::real},
        {"reference_start_years", "100", value_kind::real},
        {"reference_end_years", "200", value_kind::real},
        {"variant_parameter", "f", value_kind::word, {"f", "gamma", "sigma"}},
        {"variants", "0.1,0.3,1,3,5", value_kind::list},
        {"multipliers", "0,0.25,0.5,0.75,1,1.25,1.5,2", value_kind::list},
        {"shadow_lambda", "8", value_kind::real},
        {"slice_nt", "0.42", value_kind::real},
        {"max_lag", "50", value_kind::count},
        {"sweep_trophic", "true", value_kind::flag},
    };
    return specs;
}

const key_spec &find_spec(std::string_view key)
{
    for(const auto &s : key_specs()) {
        if(key == s.name) {
            return s;
        }
    }
    throw config_error("unknown configuration key '" + std::string(key) + "'");
}

std::string trim(std::string_view s)
{
    const auto begin = s.find_first_not_of(" \t\r");
    if(begin == std::string_view::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r");
    return std::string(s.substr(begin, end - begin + 1));
}

std::string format_real(double x)
{
    char buffer[40];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, x);
    return std::string(buffer, result.ptr);
}

std::string normal_form(const key_spec &spec, const std::string &value)
{
    switch(spec.kind) {
    case value_kind::real:
        return format_real(parse_double(spec.name, value));
    case value_kind::count:
        return std::to_string(parse_unsigned(spec.name, value));
    case value_kind::flag:
        return parse_bool(spec.name, value) ? "true" : "false";
    case value_kind::list: {
        std::string out;
        for(double x : parse_list(spec.name, value)) {
            out += (out.empty() ? "" : ",") + format_real(x);
        }
        return out;
    }
    case value_kind::word:
        if(!spec.words.contains(value)) {
            throw config_error("invalid value '" + value + "' for key '" + spec.name + "'");
        }
        return value;
    }
    return value;
}

const std::string &lookup(const key_values &values, const std::string &key)
{
    const auto it = values.find(key);
    if(it != values.end()) {
        return it->second;
    }
    return default_config().at(key);
}

double real(const key_values &v, const std::string &key)
{
    return parse_double(key, lookup(v, key));
}

} // namespace

double parse_double(std::string_view key, std::string_view text)
{
    const std::string s = trim(text);
    char *end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if(s.empty() || end != s.c_str() + s.size() || !std::isfinite(x)) {
        throw config_error("key '" + std::string(key) + "' expects a finite number, got '" + s + "'");
    }
    return x;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view text)
{
    const std::string s = trim(text);
    std::uint64_t x = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if(s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw config_error("key '" + std::string(key) + "' expects a non-negative integer, got '" + s + "'");
    }
    return x;
}

bool parse_bool(std::string_view key, std::string_view text)
{
    const std::string s = trim(text);
    if(s == "true" || s == "1" || s == "yes") {
        return true;
    }
    if(s == "false" || s == "0" || s == "no") {
        return false;
    }
    throw config_error("key '" + std::string(key) + "' expects true or false, got '" + s + "'");
}

std::vector<double> parse_list(std::string_view key, std::string_view text)
{
    std::vector<double> out;
    std::string item;
    std::istringstream in{std::string(text)};
    while(std::getline(in, item, ',')) {
        out.push_back(parse_double(key, item));
    }
    if(out.empty()) {
        throw config_error("key '" + std::string(key) + "' expects a comma-separated list");
    }
    return out;
}

key_values parse_config_text(std::string_view text)
{
    key_values values;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t number = 0;
    while(std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if(hash != std::string::npos) {
            line.erase(hash);
        }
        if(trim(line).empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if(eq == std::string::npos) {
            throw config_error("line " + std::to_string(number) + ": expected 'key = value'");
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        find_spec(key);
        if(!values.emplace(key, value).second) {
            throw config_error("line " + std::to_string(number) + ": duplicate key '" + key + "'");
        }
    }
    return values;
}

key_values load_config_file(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if(!in) {
        throw config_error("cannot read config file '" + path.string() + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

void apply_override(key_values &values, std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if(eq == std::string_view::npos) {
        throw config_error("override '" + std::string(assignment) + "' is not key=value");
    }
    const std::string key = trim(assignment.substr(0, eq));
    find_spec(key);
    values[key] = trim(assignment.substr(eq + 1));
}

const key_values &default_config()
{
    static const key_values defaults = [] {
        key_values d;
        for(const auto &s : key_specs()) {
            d.emplace(s.name, s.default_value);
        }
        return d;
    }();
    return defaults;
}

key_values canonicalize(const key_values &values)
{
    key_values out;
    for(const auto &s : key_specs()) {
        out.emplace(s.name, normal_form(s, lookup(values, s.name)));
    }
    for(const auto &[key, value] : values) {
        find_spec(key);
    }
    return out;
}

std::string config_hash(const key_values &canonical, std::string_view experiment)
{
    std::string text = "experiment=" + std::string(experiment) + "\n";
    for(const auto &[key, value] : canonical) {
        text += key + "=" + value + "\n";
    }
    char buffer[17];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(fnv1a64(text)));
    return buffer;
}

run_config to_run_config(const key_values &v)
{
    run_config c;
    auto &p = c.params;
    p.risk_free_rate  = real(v, "r");
    p.dividend_growth = real(v, "g");
    p.cost_of_equity  = real(v, "k");
    p.dividend_volatility = real(v, "sigma");
    p.dividend_autocorrelation = real(v, "omega");
    const double half_life = real(v, "noise_half_life");
    if(!(half_life > 0.)) {
        throw config_error("noise_half_life must be positive");
    }
    p.noise_reversion_rate = reversion_rate_for_half_life(half_life);
    p.noise_volatility = real(v, "gamma");
    p.noise_floor = real(v, "noise_floor");
    p.leverage_limit = {real(v, "lambda_nt"), real(v, "lambda_vi"), real(v, "lambda_tf")};
    p.signal_scale = {real(v, "c_nt"), real(v, "c_vi"), real(v, "c_tf")};
    p.kelly_leverage_limit = real(v, "kelly_lambda");
    p.kelly_half_life = real(v, "kelly_half_life");

    c.mode = lookup(v, "mode") == "reinvest" ? run_mode::reinvest : run_mode::constant_wealth;
    c.reinvestment = real(v, "f");
    c.wealth = {real(v, "w_nt"), real(v, "w_vi"), real(v, "w_tf")};
    c.total_wealth = real(v, "total_wealth");
    const double years = real(v, "years");
    if(!(years >= 0.)) {
        throw config_error("years must be non-negative");
    }
    c.horizon = std::size_t(std::llround(years * double(day_count)));
    c.warmup = parse_unsigned("warmup", lookup(v, "warmup"));
    c.seed = parse_unsigned("seed", lookup(v, "seed"));
    c.initial_price = real(v, "p0");
    const auto &rule = lookup(v, "supply_rule");
    if(rule != "ratio" && rule != "neutral") {
        throw config_error("supply_rule must be ratio or neutral");
    }
    c.supply = rule == "ratio" ? supply_rule::ratio : supply_rule::neutral;
    c.supply_ratio = real(v, "supply_ratio");
    c.supply_override = real(v, "supply");
    const auto &growth = lookup(v, "vi_growth");
    if(growth != "known" && growth != "history") {
        throw config_error("vi_growth must be known or history");
    }
    c.vi_growth = growth == "known" ? growth_source::known : growth_source::history;
    c.wealth_peg = parse_bool("wealth_peg", lookup(v, "wealth_peg"));
    const auto &policy = lookup(v, "on_insolvency");
    if(policy != "halt" && policy != "freeze") {
        throw config_error("on_insolvency must be halt or freeze");
    }
    c.on_insolvency = policy == "halt" ? insolvency_policy::halt : insolvency_policy::freeze;
    c.kelly_share = real(v, "kelly_share");
    c.kelly_multiplier = real(v, "kelly_multiplier");
    c.relative_tolerance = real(v, "clearing_tol");
    c.clearing.move_limit = real(v, "move_limit");
    if(!(c.clearing.move_limit > 1.)) {
        throw config_error("move_limit must exceed 1");
    }
    try {
        c.validate();
    } catch(const std::invalid_argument &e) {
        throw config_error(e.what());
    }
    return c;
}

experiment_settings to_experiment_settings(const key_values &v)
{
    experiment_settings s;
    s.seeds = parse_unsigned("seeds", lookup(v, "seeds"));
    s.resolution = parse_unsigned("resolution", lookup(v, "resolution"));
    s.margin = real(v, "margin");
    s.h = real(v, "h");
    s.runs = parse_unsigned("runs", lookup(v, "runs"));
    s.uniform_init = lookup(v, "init") == "uniform";
    s.sample_years = real(v, "sample_years");
    s.reference_start_years = real(v, "reference_start_years");
    s.reference_end_years = real(v, "reference_end_years");
    s.variant_parameter = lookup(v, "variant_parameter");
    s.variants = parse_list("variants", lookup(v, "variants"));
    s.multipliers = parse_list("multipliers", lookup(v, "multipliers"));
    s.shadow_lambda = real(v, "shadow_lambda");
    s.slice_nt = real(v, "slice_nt");
    s.max_lag = parse_unsigned("max_lag", lookup(v, "max_lag"));
    s.sweep_trophic = parse_bool("sweep_trophic", lookup(v, "sweep_trophic"));
    if(s.seeds == 0 || s.runs == 0) {
        throw config_error("seeds and runs must be at least 1");
    }
    if(s.resolution < 2) {
        throw config_error("resolution must be at least 2");
    }
    if(!(s.margin >= 0. && 3. * s.margin < 1.)) {
        throw config_error("margin must lie in [0, 1/3)");
    }
    if(!(s.h > 0.)) {
        throw config_error("h must be positive");
    }
    if(!(s.sample_years > 0.)) {
        throw config_error("sample_years must be positive");
    }
    if(!(s.reference_end_years > s.reference_start_years && s.reference_start_years >= 0.)) {
        throw config_error("reference window must satisfy 0 <= start < end");
    }
    return s;
}

} // namespace market_ecology
