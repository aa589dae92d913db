#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "egab/backtest.hpp"

namespace egab {

/// Candidate hyperparameters for the learned families. eta = 1 / lambda.
struct TuningGrid {
    Vec lambdas;
    std::vector<int> directions;
    std::vector<std::pair<double, double>> ab_pairs;
    std::vector<Preprocess> preprocess_modes;
    std::size_t window = 4;

    /// lambda in {2^-10, ..., 2^1}, s in {+1, -1}, (alpha, beta) in
    /// {(1, 1), (1, 1/2), (5, -5)}, all three preprocessing modes, window 4.
    static TuningGrid defaults();

    void validate() const;
};

/// Validation/test split: the first floor(fraction * T) periods validate.
struct SplitSpec {
    double validation_fraction = 0.125;

    /// Throws PreconditionError unless 1 <= t_split < total_periods.
    std::size_t t_split(std::size_t total_periods) const;
    PeriodRange validation_range(std::size_t total_periods) const;
    PeriodRange test_range(std::size_t total_periods) const;
};

struct ScoreEntry {
    StrategyConfig config;
    double validation_cw = 0.0;
};

struct GridSearchResult {
    StrategyConfig best;
    std::size_t best_index = 0;
    std::vector<ScoreEntry> scoreboard;  // grid enumeration order
};

/// Configurations applicable to `family`, in enumeration order: lambda
/// ascending, then s = +1 before -1, then (alpha, beta) pairs, then
/// preprocessing modes. Fixed-parameter families yield their single default.
std::vector<StrategyConfig> enumerate_configs(StrategyFamily family, const TuningGrid& grid, CostModel cost);

/// Backtests every configuration on the validation span and keeps the one
/// with the largest net-of-cost final wealth (first one wins ties). Grid
/// points run on up to `threads` workers; 0 picks the hardware concurrency.
GridSearchResult grid_search(const MarketData& data, StrategyFamily family, const TuningGrid& grid,
                             const SplitSpec& split, CostModel cost, unsigned threads = 0);

/// Same, over an explicit list of candidate configurations.
GridSearchResult grid_search(const MarketData& data, const std::vector<StrategyConfig>& candidates,
                             const SplitSpec& split, unsigned threads = 0);

/// Runs `config` on the test span with a fresh state (uniform weights, empty
/// history from the split boundary on).
BacktestResult evaluate_oos(const MarketData& data, const StrategyConfig& config, const SplitSpec& split);

}  // namespace egab
