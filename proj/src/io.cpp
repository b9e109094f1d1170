/// \file   io.cpp
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
#include "market_ecology/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace market_ecology {

namespace {

bool needs_quotes(std::string_view s)
{
    return s.find_first_of(",\"\n\r") != std::string_view::npos;
}

void write_field(std::ostream &os, std::string_view s)
{
    if(!needs_quotes(s)) {
        os << s;
        return;
    }
    os << '"';
    for(char c : s) {
        if(c == '"') {
            os << '"';
        }
        os << c;
    }
    os << '"';
}

void write_line(std::ostream &os, const std::vector<std::string> &fields)
{
    for(std::size_t k = 0; k < fields.size(); ++k) {
        if(k > 0) {
            os << ',';
        }
        write_field(os, fields[k]);
    }
    os << '\n';
}

// one record; quoted fields may span lines
bool read_record(std::istream &is, std::vector<std::string> &fields)
{
    fields.clear();
    if(is.peek() == std::char_traits<char>::eof()) {
        return false;
    }
    std::string field;
    bool quoted = false;
    char c;
    while(is.get(c)) {
        if(quoted) {
            if(c == '"') {
                if(is.peek() == '"') {
                    is.get(c);
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if(c == '"') {
            quoted = true;
        } else if(c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if(c == '\n') {
            break;
        } else if(c != '\r') {
            field += c;
        }
    }
    if(quoted) {
        throw io_error("unterminated quoted CSV field");
    }
    fields.push_back(std::move(field));
    return true;
}

} // namespace

std::string cell(double x)
{
    if(std::isnan(x)) {
        return "nan";
    }
    if(std::isinf(x)) {
        return x > 0. ? "inf" : "-inf";
    }
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", x);
    return buffer;
}

std::string cell(std::string_view text)
{
    return std::string(text);
}

csv_table::csv_table(std::vector<std::string> names)
: columns(std::move(names))
{
}

void csv_table::add(std::vector<std::string> row)
{
    if(row.size() != columns.size()) {
        throw std::invalid_argument("CSV row has " + std::to_string(row.size()) + " fields, header has "
                                    + std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
}

std::size_t csv_table::column(std::string_view name) const
{
    for(std::size_t k = 0; k < columns.size(); ++k) {
        if(columns[k] == name) {
            return k;
        }
    }
    throw io_error("CSV has no column '" + std::string(name) + "'");
}

void write_csv(std::ostream &os, std::string_view config_hash, const csv_table &table)
{
    os << "# config_hash: " << config_hash << '\n';
    write_line(os, table.columns);
    for(const auto &row : table.rows) {
        write_line(os, row);
    }
}

void write_csv_file(const std::filesystem::path &path, std::string_view config_hash, const csv_table &table)
{
    std::ofstream os(path, std::ios::binary);
    if(!os) {
        throw io_error("cannot open '" + path.string() + "' for writing");
    }
    write_csv(os, config_hash, table);
    if(!os.flush()) {
        throw io_error("failed writing '" + path.string() + "'");
    }
}

csv_document parse_csv(std::istream &is)
{
    csv_document doc;
    std::string first;
    if(!std::getline(is, first)) {
        throw io_error("empty CSV");
    }
    if(!first.empty() && first.back() == '\r') {
        first.pop_back();
    }
    constexpr std::string_view prefix = "# config_hash: ";
    if(first.rfind(prefix, 0) != 0) {
        throw io_error("CSV does not start with a config hash line");
    }
    doc.config_hash = first.substr(prefix.size());
    std::vector<std::string> fields;
    if(!read_record(is, fields)) {
        throw io_error("CSV has no header");
    }
    doc.table = csv_table(fields);
    while(read_record(is, fields)) {
        try {
            doc.table.add(fields);
        } catch(const std::invalid_argument &e) {
            throw io_error(e.what());
        }
    }
    return doc;
}

csv_document read_csv_file(const std::filesystem::path &path)
{
    std::ifstream is(path, std::ios::binary);
    if(!is) {
        throw io_error("cannot open '" + path.string() + "'");
    }
    return parse_csv(is);
}

csv_table run_table(const run_output &out)
{
    std::vector<std::string> names = {"t", "price", "value", "vi_value", "dividend", "noise_factor", "u"};
    for(const auto &f : out.fund_names) {
        for(const char *suffix : {"_wealth", "_shares", "_leverage", "_target_leverage", "_return", "_alive"}) {
            names.push_back(f + suffix);
        }
    }
    for(const char *n : {"mode", "iterations", "residual", "bound_hit", "share_sum", "trade_wealth_error"}) {
        names.emplace_back(n);
    }
    csv_table table(std::move(names));
    for(const auto &r : out.steps) {
        std::vector<std::string> row = {cell(r.t),        cell(r.price),        cell(r.value), cell(r.vi_value),
                                        cell(r.dividend), cell(r.noise_factor), cell(r.u)};
        for(const auto &f : r.funds) {
            row.push_back(cell(f.wealth));
            row.push_back(cell(f.shares));
            row.push_back(cell(f.leverage));
            row.push_back(cell(f.target_leverage));
            row.push_back(cell(f.ret));
            row.push_back(cell(f.alive));
        }
        row.push_back(cell(to_string(r.mode)));
        row.push_back(cell(r.iterations));
        row.push_back(cell(r.residual));
        row.push_back(cell(r.bound_hit));
        row.push_back(cell(r.share_sum));
        row.push_back(cell(r.trade_wealth_error));
        table.add(std::move(row));
    }
    return table;
}

csv_table insolvency_table(const run_output &out)
{
    csv_table table({"step", "fund", "wealth"});
    for(const auto &e : out.insolvencies) {
        table.add({cell(e.step), cell(out.fund_names.at(e.fund)), cell(e.wealth)});
    }
    return table;
}

std::string manifest_json(const experiment_manifest &m)
{
    nlohmann::ordered_json j;
    j["experiment"] = m.experiment;
    j["config_hash"] = m.config_hash;
    j["config"] = m.config;
    j["seed"] = m.seed;
    j["run_indices"] = m.run_indices;
    auto outputs = nlohmann::ordered_json::array();
    for(const auto &o : m.outputs) {
        outputs.push_back({{"kind", o.kind}, {"path", o.path}});
    }
    j["outputs"] = outputs;
    j["timing"] = {{"wall_seconds", m.wall_seconds}};
    j["git_describe"] = m.git_describe;
    return j.dump(2) + "\n";
}

experiment_manifest parse_manifest(std::string_view json_text)
{
    try {
        const auto j = nlohmann::json::parse(json_text);
        experiment_manifest m;
        m.experiment = j.at("experiment").get<std::string>();
        m.config_hash = j.at("config_hash").get<std::string>();
        m.config = j.at("config").get<key_values>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.run_indices = j.at("run_indices").get<std::vector<std::size_t>>();
        for(const auto &o : j.at("outputs")) {
            m.outputs.push_back({o.at("kind").get<std::string>(), o.at("path").get<std::string>()});
        }
        m.wall_seconds = j.at("timing").at("wall_seconds").get<double>();
        m.git_describe = j.at("git_describe").get<std::string>();
        return m;
    } catch(const nlohmann::json::exception &e) {
        throw io_error(std::string("malformed manifest: ") + e.what());
    }
}

void write_manifest_file(const std::filesystem::path &path, const experiment_manifest &m)
{
    std::ofstream os(path, std::ios::binary);
    if(!os) {
        throw io_error("cannot open '" + path.string() + "' for writing");
    }
    os << manifest_json(m);
    if(!os.flush()) {
        throw io_error("failed writing '" + path.string() + "'");
    }
}

experiment_manifest read_manifest_file(const std::filesystem::path &path)
{
    std::ifstream is(path, std::ios::binary);
    if(!is) {
        throw io_error("cannot open '" + path.string() + "'");
    }
    std::ostringstream text;
    text << is.rdbuf();
    return parse_manifest(text.str());
}

} // namespace market_ecology
