#include "egab/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "egab/errors.hpp"

namespace egab {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

bool is_date_header(std::string name) {
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
    return name == "date";
}

double parse_number(const std::string& field, std::size_t line) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    if (!field.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (field.empty() || ec != std::errc() || ptr != end) {
        throw ParseError("'" + field + "' is not a decimal number", line);
    }
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw ParseError("value '" + field + "' must be positive and finite", line);
    }
    return value;
}

struct Table {
    std::vector<std::string> names;
    std::vector<std::string> dates;
    std::vector<Vec> rows;
    std::vector<std::size_t> lines;
};

Table parse_table(std::istream& in) {
    Table table;
    std::string line;
    std::size_t line_no = 0;
    bool has_date = false;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<std::string> fields = split_fields(line);
        if (!header_seen) {
            header_seen = true;
            has_date = is_date_header(fields.front());
            table.names.assign(fields.begin() + (has_date ? 1 : 0), fields.end());
            if (table.names.empty()) throw ParseError("header names no assets", line_no);
            for (const auto& n : table.names) {
                if (n.empty()) throw ParseError("empty asset identifier in header", line_no);
            }
            continue;
        }
        const std::size_t expected = table.names.size() + (has_date ? 1 : 0);
        if (fields.size() != expected) {
            throw ParseError("expected " + std::to_string(expected) + " columns, found " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        if (has_date) table.dates.push_back(fields.front());
        Vec row;
        row.reserve(table.names.size());
        for (std::size_t j = has_date ? 1 : 0; j < fields.size(); ++j) row.push_back(parse_number(fields[j], line_no));
        table.rows.push_back(std::move(row));
        table.lines.push_back(line_no);
    }
    if (!header_seen) throw ParseError("missing header row", line_no + 1);
    if (table.rows.empty()) throw ParseError("no data rows", line_no + 1);
    return table;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0);
    return in;
}

}  // namespace

MarketData parse_dataset(std::istream& in) {
    Table t = parse_table(in);
    return MarketData(std::move(t.rows), std::move(t.names), std::move(t.dates));
}

MarketData load_dataset(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    return parse_dataset(in);
}

MarketData parse_prices(std::istream& in) {
    Table t = parse_table(in);
    if (t.rows.size() < 2) throw ParseError("price file needs at least two rows", t.lines.front());
    std::vector<Vec> relatives;
    relatives.reserve(t.rows.size() - 1);
    for (std::size_t r = 1; r < t.rows.size(); ++r) {
        Vec x(t.rows[r].size());
        for (std::size_t j = 0; j < x.size(); ++j) x[j] = t.rows[r][j] / t.rows[r - 1][j];
        relatives.push_back(std::move(x));
    }
    std::vector<std::string> dates;
    if (!t.dates.empty()) dates.assign(t.dates.begin() + 1, t.dates.end());
    return MarketData(std::move(relatives), std::move(t.names), std::move(dates));
}

MarketData load_prices(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    return parse_prices(in);
}

void write_dataset(std::ostream& out, const MarketData& data) {
    const bool has_date = !data.dates().empty();
    if (has_date) out << "date,";
    for (std::size_t j = 0; j < data.assets(); ++j) out << (j ? "," : "") << data.asset_names()[j];
    out << '\n';
    out << std::setprecision(17);
    for (std::size_t t = 0; t < data.periods(); ++t) {
        if (has_date) out << data.dates()[t] << ',';
        const auto row = data.relative(t);
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << row[j];
        out << '\n';
    }
}

MarketData generate_synthetic(std::size_t assets, std::size_t periods, std::uint64_t seed) {
    if (assets == 0 || periods == 0) throw PreconditionError("generate_synthetic: empty market requested");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    Vec drift(assets), vol(assets), persistence(assets), deviation(assets, 0.0);
    for (std::size_t i = 0; i < assets; ++i) {
        drift[i] = 0.0002 + 0.0006 * (uniform(rng) - 0.5);
        vol[i] = 0.01 + 0.02 * uniform(rng);
        persistence[i] = 0.3 + 0.5 * uniform(rng);
    }

    std::vector<Vec> rows;
    rows.reserve(periods);
    for (std::size_t t = 0; t < periods; ++t) {
        Vec x(assets);
        for (std::size_t i = 0; i < assets; ++i) {
            const double next = persistence[i] * deviation[i] + vol[i] * normal(rng);
            x[i] = std::exp(drift[i] + next - deviation[i]);
            deviation[i] = next;
        }
        rows.push_back(std::move(x));
    }
    std::vector<std::string> names;
    for (std::size_t i = 0; i < assets; ++i) names.push_back("A" + std::to_string(i + 1));
    return MarketData(std::move(rows), std::move(names));
}

}  // namespace egab
