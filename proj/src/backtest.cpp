#include "egab/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "egab/errors.hpp"

namespace egab {

double BacktestResult::mean_turnover() const {
    if (turnovers.empty()) return 0.0;
    return std::accumulate(turnovers.begin(), turnovers.end(), 0.0) / static_cast<double>(turnovers.size());
}

BacktestResult run_backtest(const MarketData& data, const StrategyConfig& config, PeriodRange range) {
    config.validate();
    if (range.end <= range.begin || range.end > data.periods()) {
        throw PreconditionError("run_backtest: invalid period range");
    }

    PortfolioState state(data.assets(), config.window);
    BacktestResult result;
    result.wealth.reserve(range.length() + 1);
    result.per_period_returns.reserve(range.length());
    result.turnovers.reserve(range.length());
    result.wealth.push_back(1.0);

    for (std::size_t t = range.begin; t < range.end; ++t) {
        const std::span<const double> x = data.relative(t);
        const double gross = dot(state.current.span(), x);
        close_period(state, x);
        const Vec x_hat = predict_relatives(state, config.preprocess);
        Portfolio next = strategy_step(config, state, x_hat);
        const double traded = turnover(next, state.adjusted);
        const double net = gross * (1.0 - config.cost.rate() * traded);

        result.turnovers.push_back(traded);
        result.per_period_returns.push_back(net);
        result.wealth.push_back(result.wealth.back() * net);
        state.current = std::move(next);
    }
    result.final_cw = result.wealth.back();
    result.metrics = compute_metrics(result.wealth, result.per_period_returns);
    return result;
}

BacktestResult run_backtest(const MarketData& data, const StrategyConfig& config) {
    return run_backtest(data, config, PeriodRange{0, data.periods()});
}

double apy(double final_cw, std::size_t n_periods) {
    if (n_periods == 0) {
        throw PreconditionError("apy: at least one period required");
    }
    return std::pow(final_cw, kPeriodsPerYear / static_cast<double>(n_periods)) - 1.0;
}

double max_drawdown(std::span<const double> wealth) {
    if (wealth.empty()) {
        throw PreconditionError("max_drawdown: empty wealth series");
    }
    double peak = wealth.front();
    double worst = 0.0;
    for (double w : wealth) {
        peak = std::max(peak, w);
        worst = std::max(worst, (peak - w) / peak);
    }
    return std::clamp(worst, 0.0, 1.0);
}

std::optional<double> sharpe(std::span<const double> per_period_returns) {
    if (per_period_returns.size() < 2) {
        throw PreconditionError("sharpe: at least two periods required");
    }
    const double n = static_cast<double>(per_period_returns.size());
    double mean = 0.0;
    for (double r : per_period_returns) mean += std::log(r);
    mean /= n;
    double ss = 0.0;
    for (double r : per_period_returns) {
        const double d = std::log(r) - mean;
        ss += d * d;
    }
    const double sd = std::sqrt(ss / (n - 1.0));
    // Identical returns leave only rounding noise in the deviation.
    if (!(sd > 1e-14 * std::max(1.0, std::abs(mean)))) {
        return std::nullopt;
    }
    return (mean * kPeriodsPerYear) / (sd * std::sqrt(kPeriodsPerYear));
}

std::optional<double> calmar(double apy_value, double mdd) {
    if (!(mdd > 1e-12)) {
        return std::nullopt;
    }
    return apy_value / mdd;
}

double extrapolate_cw(double cw_test, std::size_t total_periods, std::size_t test_periods) {
    if (test_periods == 0 || total_periods < test_periods) {
        throw PreconditionError("extrapolate_cw: need 1 <= test_periods <= total_periods");
    }
    return std::pow(cw_test, static_cast<double>(total_periods) / static_cast<double>(test_periods));
}

double geometric_mean(std::span<const double> values) {
    if (values.empty()) {
        throw PreconditionError("geometric_mean: no values");
    }
    double log_sum = 0.0;
    for (double v : values) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw DomainError("geometric_mean: values must be positive and finite");
        }
        log_sum += std::log(v);
    }
    return std::exp(log_sum / static_cast<double>(values.size()));
}

MetricsReport compute_metrics(std::span<const double> wealth, std::span<const double> per_period_returns) {
    MetricsReport m;
    const std::size_t n = per_period_returns.size();
    m.apy = n > 0 ? apy(wealth.back(), n) : 0.0;
    m.mdd = max_drawdown(wealth);
    m.sharpe = n >= 2 ? sharpe(per_period_returns) : std::nullopt;
    m.calmar = calmar(m.apy, m.mdd);
    return m;
}

}  // namespace egab
