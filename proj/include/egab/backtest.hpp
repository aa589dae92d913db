#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "egab/olps.hpp"

namespace egab {

/// Trading periods per year used for annualization.
inline constexpr double kPeriodsPerYear = 252.0;

/// Half-open, zero-based range of periods [begin, end) of a MarketData.
struct PeriodRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t length() const noexcept { return end - begin; }
};

/// Financial summary of a wealth trajectory. Sharpe and Calmar are empty when
/// undefined (zero return variance, zero drawdown).
struct MetricsReport {
    double apy = 0.0;
    std::optional<double> sharpe;
    std::optional<double> calmar;
    double mdd = 0.0;
};

struct BacktestResult {
    Vec wealth;              // T + 1 values, wealth[0] == 1
    Vec per_period_returns;  // net factor r_t of each period
    Vec turnovers;           // traded fraction at the close of each period
    double final_cw = 1.0;
    MetricsReport metrics;

    double mean_turnover() const;
};

/// Simulates the strategy over `range` starting from the uniform portfolio with
/// a fresh price history. Each period t: gross = w_t^T x_t, drift, predict,
/// rebalance to w_{t+1}, and net r_t = gross * (1 - c_r * turnover).
BacktestResult run_backtest(const MarketData& data, const StrategyConfig& config, PeriodRange range);

/// Whole-data convenience overload.
BacktestResult run_backtest(const MarketData& data, const StrategyConfig& config);

/// final_cw^(252 / n_periods) - 1.
double apy(double final_cw, std::size_t n_periods);

/// Largest peak-to-trough loss relative to the running peak, in [0, 1].
double max_drawdown(std::span<const double> wealth);

/// Annualized mean over annualized sample standard deviation of the per-period
/// log returns, zero risk-free rate. Empty when the deviation vanishes.
std::optional<double> sharpe(std::span<const double> per_period_returns);

/// apy / mdd, empty when mdd <= 1e-12.
std::optional<double> calmar(double apy_value, double mdd);

/// cw_test^(total_periods / test_periods).
double extrapolate_cw(double cw_test, std::size_t total_periods, std::size_t test_periods);

/// exp(mean(ln values)); all values must be positive.
double geometric_mean(std::span<const double> values);

MetricsReport compute_metrics(std::span<const double> wealth, std::span<const double> per_period_returns);

}  // namespace egab
