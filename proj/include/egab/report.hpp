#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "egab/backtest.hpp"

namespace egab {

/// Version string written into every report.
inline constexpr const char* kToolVersion = "1.0.0";

/// Rounds to 6 significant digits, the precision of every reported number.
double round_report(double value);

struct ConfigSummary {
    std::string family;
    double alpha = 0.0;
    double beta = 0.0;
    double eta = 0.0;
    int direction = 1;
    double epsilon = 0.0;
    std::string preprocess;
    std::size_t window = 0;

    static ConfigSummary from(const StrategyConfig& config);
    bool operator==(const ConfigSummary&) const = default;
};

struct SeriesData {
    Vec wealth;
    Vec turnovers;
    bool operator==(const SeriesData&) const = default;
};

/// One dataset x strategy x cost-rate cell. Metrics that are undefined are
/// empty optionals and serialize as the string "undefined".
struct StrategyBlock {
    std::string dataset;
    std::string strategy;
    double cost_rate = 0.0;
    ConfigSummary config;
    std::size_t total_periods = 0;
    std::size_t test_periods = 0;
    std::string test_start;  // first and last test-span dates; empty without a date column
    std::string test_end;
    double final_cw = 1.0;
    double extrapolated_cw = 1.0;
    std::optional<double> apy;
    std::optional<double> sharpe;
    std::optional<double> calmar;
    std::optional<double> mdd;
    double mean_turnover = 0.0;
    std::optional<SeriesData> series;

    bool operator==(const StrategyBlock&) const = default;
};

struct GeometricMeanRow {
    double cost_rate = 0.0;
    std::string strategy;
    double value = 1.0;
    bool operator==(const GeometricMeanRow&) const = default;
};

struct ReportDocument {
    std::string tool_version = kToolVersion;
    std::string command;
    std::vector<std::string> datasets;
    std::vector<double> cost_rates;
    double validation_fraction = 0.0;  // 0 when the whole span was traded
    std::optional<std::uint64_t> seed;
    std::vector<StrategyBlock> blocks;
    std::vector<GeometricMeanRow> geometric_means;

    bool operator==(const ReportDocument&) const = default;
};

/// Builds a block from a finished test-span backtest; every number is rounded
/// with round_report so that serialization round-trips exactly.
StrategyBlock make_block(const std::string& dataset, const StrategyConfig& config, const BacktestResult& result,
                         std::size_t total_periods, bool with_series);

/// Fills test_start/test_end from the dataset's date column, if any.
void set_test_dates(StrategyBlock& block, const MarketData& data);

/// Appends one geometric-mean row per (cost rate, strategy) over the datasets.
void add_geometric_means(ReportDocument& doc);

std::string to_json(const ReportDocument& doc);
ReportDocument report_from_json(const std::string& text);

/// "compare" reports use the cost-rate x dataset table layout with one column
/// per strategy and a geometric-mean row per cost rate; other reports list one
/// metrics row per block.
std::string to_csv(const ReportDocument& doc);

/// Fixed "%.6g" rendering used by every text output.
std::string format_number(double value);

}  // namespace egab
