#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "egab/deformed_math.hpp"
#include "egab/simplex.hpp"

namespace egab {

/// T x N matrix of strictly positive price relatives x_{i,t} = p_{i,t} / p_{i,t-1}.
class MarketData {
public:
    /// Validates shape and positivity; throws DomainError on violation.
    /// `dates` is either empty or holds one label per period.
    MarketData(std::vector<Vec> relatives, std::vector<std::string> asset_names,
               std::vector<std::string> dates = {});

    std::size_t periods() const noexcept { return relatives_.size(); }
    std::size_t assets() const noexcept { return asset_names_.size(); }
    std::span<const double> relative(std::size_t t) const { return relatives_.at(t); }
    const std::vector<Vec>& relatives() const noexcept { return relatives_; }
    const std::vector<std::string>& asset_names() const noexcept { return asset_names_; }
    const std::vector<std::string>& dates() const noexcept { return dates_; }

    /// T + 1 price rows: row 0 is all ones, row t is the running product of
    /// relatives 0..t-1.
    std::vector<Vec> prices() const;

    /// Copy restricted to periods [begin, end).
    MarketData slice(std::size_t begin, std::size_t end) const;

private:
    std::vector<Vec> relatives_;
    std::vector<std::string> asset_names_;
    std::vector<std::string> dates_;
};

/// Proportional commission: trading a fraction T of wealth costs rate * T.
class CostModel {
public:
    /// Requires 0 <= rate < 1.
    explicit CostModel(double rate = 0.0);
    double rate() const noexcept { return rate_; }
    bool operator==(const CostModel&) const = default;

private:
    double rate_;
};

enum class StrategyFamily { UBAH, EG, PAMR, OLMAR, RMR, EGPlus, EgabN, EgabP };
enum class Preprocess { LastRelative, MovingMean, L1Median };

std::string_view to_string(StrategyFamily family);
std::string_view to_string(Preprocess mode);
/// Accepts the lower-case CLI spellings ("ubah", "eg", "eg-plus", "egab-n", ...).
StrategyFamily parse_family(std::string_view name);
/// Accepts "last", "mean", "median".
Preprocess parse_preprocess(std::string_view name);

/// True for EGPlus, EgabN and EgabP, whose hyperparameters are learned.
bool learns_hyperparameters(StrategyFamily family);

/// Complete description of one strategy run.
///
/// `params` is consulted by EG, EGPlus, EgabN and EgabP; `epsilon` by PAMR,
/// OLMAR and RMR; `direction` (the FTW/FTL switch s) by EGPlus, EgabN, EgabP.
struct StrategyConfig {
    StrategyFamily family = StrategyFamily::UBAH;
    ABParams params{1.0, 0.0, 0.05};
    int direction = +1;
    double epsilon = 0.0;
    Preprocess preprocess = Preprocess::LastRelative;
    std::size_t window = 4;
    CostModel cost{};

    /// Throws PreconditionError on inconsistent fields.
    void validate() const;

    bool operator==(const StrategyConfig&) const = default;

    static StrategyConfig ubah(CostModel cost);
    /// Classical EG, cost-unaware, last-relative prediction (default eta 0.05).
    static StrategyConfig eg(CostModel cost, double eta = 0.05);
    static StrategyConfig pamr(CostModel cost, double epsilon = 0.5);
    static StrategyConfig olmar(CostModel cost, double epsilon = 5.0, std::size_t window = 4);
    static StrategyConfig rmr(CostModel cost, double epsilon = 5.0, std::size_t window = 4);
    static StrategyConfig eg_plus(CostModel cost, double eta, int direction, Preprocess preprocess,
                                  std::size_t window = 4);
    static StrategyConfig egab_n(CostModel cost, ABParams params, int direction, Preprocess preprocess,
                                 std::size_t window = 4);
    static StrategyConfig egab_p(CostModel cost, ABParams params, int direction, Preprocess preprocess,
                                 std::size_t window = 4);
};

/// Mutable per-run state: the active recommendation, its drifted end-of-period
/// version and the recent price rows (oldest first, rebased to 1 at run start).
struct PortfolioState {
    PortfolioState(std::size_t n_assets, std::size_t window);

    Portfolio current;
    Portfolio adjusted;
    std::deque<Vec> prices;
    Vec last_relative;
    std::size_t window;
};

/// Geometric (l1) median by Weiszfeld iteration started at the mean. K <= 2
/// returns the mean. Throws NonConvergenceError (with the best iterate) after
/// 200 iterations without convergence.
Vec l1_median(const std::vector<Vec>& points);

/// Estimate of the next price relatives from the last `window + 1` price rows
/// (fewer at the start of a run). The newest row of `prices` is p_t.
Vec predict_relatives(const std::deque<Vec>& prices, std::span<const double> last_relative, Preprocess mode,
                      std::size_t window);

/// Convenience overload reading history and window from the state.
Vec predict_relatives(const PortfolioState& state, Preprocess mode);

/// -s log(w^T x_hat) - log(1 - c_r * 0.5 ||w - w'_t||_1). Returns +infinity when
/// the cost factor is not positive.
double train_loss(std::span<const double> w, std::span<const double> x_hat, const PortfolioState& state,
                  int direction, const CostModel& cost);

/// -s x_hat / (w^T x_hat) + sign(w - w'_t) / (2/c_r - ||w - w'_t||_1), with
/// sign(0) = 0 and the cost term dropped when c_r = 0.
Vec train_subgradient(std::span<const double> w, std::span<const double> x_hat, const PortfolioState& state,
                      int direction, const CostModel& cost);

/// 0.5 ||w_next - adjusted||_1.
double turnover(const Portfolio& w_next, const Portfolio& adjusted);

/// Drift the current portfolio with the realized relatives and advance history.
void close_period(PortfolioState& state, std::span<const double> x);

/// Additive mean-reversion intermediate w + eta' (x_hat - mean(x_hat) 1) shared by
/// PAMR (sign -1) and OLMAR/RMR (sign +1), before projection.
Vec mean_reversion_intermediate(const Portfolio& w, std::span<const double> x_hat, double epsilon, int sign);

/// Classical normalized EG on the cost-free negative log-return.
Portfolio eg_step(const Portfolio& w, std::span<const double> x_hat, double eta);

/// Next recommendation w_{t+1} for the configured family.
Portfolio strategy_step(const StrategyConfig& config, const PortfolioState& state, std::span<const double> x_hat);

}  // namespace egab
