#include "egab/tuning.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "egab/errors.hpp"

namespace egab {

TuningGrid TuningGrid::defaults() {
    TuningGrid g;
    for (int k = -10; k <= 1; ++k) g.lambdas.push_back(std::ldexp(1.0, k));
    g.directions = {+1, -1};
    g.ab_pairs = {{1.0, 1.0}, {1.0, 0.5}, {5.0, -5.0}};
    g.preprocess_modes = {Preprocess::LastRelative, Preprocess::MovingMean, Preprocess::L1Median};
    g.window = 4;
    return g;
}

void TuningGrid::validate() const {
    for (double l : lambdas) {
        if (!(l > 0.0) || !std::isfinite(l)) throw PreconditionError("TuningGrid: lambdas must be positive");
    }
    for (int s : directions) {
        if (s != 1 && s != -1) throw PreconditionError("TuningGrid: directions must be +1 or -1");
    }
    if (window == 0) throw PreconditionError("TuningGrid: window must be positive");
}

std::size_t SplitSpec::t_split(std::size_t total_periods) const {
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
        throw PreconditionError("SplitSpec: validation fraction must lie in (0, 1)");
    }
    const auto split = static_cast<std::size_t>(std::floor(validation_fraction * static_cast<double>(total_periods)));
    if (split < 1 || split >= total_periods) {
        throw PreconditionError("SplitSpec: dataset too short for the requested split");
    }
    return split;
}

PeriodRange SplitSpec::validation_range(std::size_t total_periods) const {
    return PeriodRange{0, t_split(total_periods)};
}

PeriodRange SplitSpec::test_range(std::size_t total_periods) const {
    return PeriodRange{t_split(total_periods), total_periods};
}

std::vector<StrategyConfig> enumerate_configs(StrategyFamily family, const TuningGrid& grid, CostModel cost) {
    grid.validate();
    switch (family) {
        case StrategyFamily::UBAH: return {StrategyConfig::ubah(cost)};
        case StrategyFamily::EG: return {StrategyConfig::eg(cost)};
        case StrategyFamily::PAMR: return {StrategyConfig::pamr(cost)};
        case StrategyFamily::OLMAR: return {StrategyConfig::olmar(cost)};
        case StrategyFamily::RMR: return {StrategyConfig::rmr(cost)};
        default: break;
    }

    std::vector<std::pair<double, double>> pairs = grid.ab_pairs;
    if (family == StrategyFamily::EGPlus) pairs = {{1.0, 0.0}};

    Vec lambdas = grid.lambdas;
    std::stable_sort(lambdas.begin(), lambdas.end());

    std::vector<StrategyConfig> out;
    for (double lambda : lambdas) {
        for (int s : grid.directions) {
            for (const auto& [alpha, beta] : pairs) {
                for (Preprocess mode : grid.preprocess_modes) {
                    const ABParams params(alpha, beta, 1.0 / lambda);
                    switch (family) {
                        case StrategyFamily::EGPlus:
                            out.push_back(StrategyConfig::eg_plus(cost, 1.0 / lambda, s, mode, grid.window));
                            break;
                        case StrategyFamily::EgabN:
                            out.push_back(StrategyConfig::egab_n(cost, params, s, mode, grid.window));
                            break;
                        default:
                            out.push_back(StrategyConfig::egab_p(cost, params, s, mode, grid.window));
                            break;
                    }
                }
            }
        }
    }
    return out;
}

GridSearchResult grid_search(const MarketData& data, const std::vector<StrategyConfig>& candidates,
                             const SplitSpec& split, unsigned threads) {
    if (candidates.empty()) {
        throw PreconditionError("grid_search: empty grid");
    }
    const PeriodRange range = split.validation_range(data.periods());

    Vec scores(candidates.size(), 0.0);
    std::vector<std::exception_ptr> errors(candidates.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < candidates.size(); i = next++) {
            try {
                scores[i] = run_backtest(data, candidates[i], range).final_cw;
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, candidates.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    GridSearchResult result;
    result.scoreboard.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        result.scoreboard.push_back(ScoreEntry{candidates[i], scores[i]});
        if (scores[i] > scores[result.best_index]) result.best_index = i;
    }
    result.best = candidates[result.best_index];
    return result;
}

GridSearchResult grid_search(const MarketData& data, StrategyFamily family, const TuningGrid& grid,
                             const SplitSpec& split, CostModel cost, unsigned threads) {
    return grid_search(data, enumerate_configs(family, grid, cost), split, threads);
}

BacktestResult evaluate_oos(const MarketData& data, const StrategyConfig& config, const SplitSpec& split) {
    return run_backtest(data, config, split.test_range(data.periods()));
}

}  // namespace egab
