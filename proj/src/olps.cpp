#include "egab/olps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "egab/egab.hpp"
#include "egab/errors.hpp"

namespace egab {

namespace {

// Guards the mean-reversion step size against a perfectly uniform x_hat.
constexpr double kMeanReversionRegularizer = 1e-12;

constexpr int kWeiszfeldMaxIterations = 200;
constexpr double kWeiszfeldTolerance = 1e-9;
constexpr double kCoincidenceRadius = 1e-12;
constexpr double kCoincidenceNudge = 1e-9;

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double sum_of_distances(const std::vector<Vec>& points, std::span<const double> y) {
    double s = 0.0;
    for (const Vec& p : points) s += euclidean_distance(p, y);
    return s;
}

Vec mean_of(const std::vector<Vec>& points) {
    Vec m(points.front().size(), 0.0);
    for (const Vec& p : points) {
        for (std::size_t j = 0; j < m.size(); ++j) m[j] += p[j];
    }
    for (double& x : m) x /= static_cast<double>(points.size());
    return m;
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void require_direction(int direction) {
    if (direction != 1 && direction != -1) {
        throw PreconditionError("direction must be +1 or -1");
    }
}

}  // namespace

// ---------------------------------------------------------------- MarketData

MarketData::MarketData(std::vector<Vec> relatives, std::vector<std::string> asset_names,
                       std::vector<std::string> dates)
    : relatives_(std::move(relatives)), asset_names_(std::move(asset_names)), dates_(std::move(dates)) {
    if (asset_names_.empty()) {
        throw DomainError("MarketData: no assets");
    }
    if (!dates_.empty() && dates_.size() != relatives_.size()) {
        throw DomainError("MarketData: one date label per period required");
    }
    for (std::size_t t = 0; t < relatives_.size(); ++t) {
        if (relatives_[t].size() != asset_names_.size()) {
            throw DomainError("MarketData: row " + std::to_string(t) + " has the wrong number of assets");
        }
        for (double x : relatives_[t]) {
            if (!(x > 0.0) || !std::isfinite(x)) {
                throw DomainError("MarketData: row " + std::to_string(t) + " has a non-positive relative");
            }
        }
    }
}

std::vector<Vec> MarketData::prices() const {
    std::vector<Vec> out;
    out.reserve(relatives_.size() + 1);
    out.emplace_back(assets(), 1.0);
    for (const Vec& x : relatives_) {
        Vec next = out.back();
        for (std::size_t i = 0; i < next.size(); ++i) next[i] *= x[i];
        out.push_back(std::move(next));
    }
    return out;
}

MarketData MarketData::slice(std::size_t begin, std::size_t end) const {
    if (begin > end || end > periods()) {
        throw PreconditionError("MarketData::slice: invalid range");
    }
    std::vector<Vec> rows(relatives_.begin() + static_cast<std::ptrdiff_t>(begin),
                          relatives_.begin() + static_cast<std::ptrdiff_t>(end));
    std::vector<std::string> dates;
    if (!dates_.empty()) {
        dates.assign(dates_.begin() + static_cast<std::ptrdiff_t>(begin),
                     dates_.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return MarketData(std::move(rows), asset_names_, std::move(dates));
}

// ----------------------------------------------------------------- CostModel

CostModel::CostModel(double rate) : rate_(rate) {
    if (!(rate >= 0.0 && rate < 1.0)) {
        throw DomainError("CostModel: rate must lie in [0, 1)");
    }
}

// ------------------------------------------------------------ StrategyConfig

std::string_view to_string(StrategyFamily family) {
    switch (family) {
        case StrategyFamily::UBAH: return "ubah";
        case StrategyFamily::EG: return "eg";
        case StrategyFamily::PAMR: return "pamr";
        case StrategyFamily::OLMAR: return "olmar";
        case StrategyFamily::RMR: return "rmr";
        case StrategyFamily::EGPlus: return "eg-plus";
        case StrategyFamily::EgabN: return "egab-n";
        case StrategyFamily::EgabP: return "egab-p";
    }
    return "unknown";
}

std::string_view to_string(Preprocess mode) {
    switch (mode) {
        case Preprocess::LastRelative: return "last";
        case Preprocess::MovingMean: return "mean";
        case Preprocess::L1Median: return "median";
    }
    return "unknown";
}

StrategyFamily parse_family(std::string_view name) {
    for (StrategyFamily f : {StrategyFamily::UBAH, StrategyFamily::EG, StrategyFamily::PAMR, StrategyFamily::OLMAR,
                             StrategyFamily::RMR, StrategyFamily::EGPlus, StrategyFamily::EgabN,
                             StrategyFamily::EgabP}) {
        if (name == to_string(f)) return f;
    }
    if (name == "eg+") return StrategyFamily::EGPlus;
    throw PreconditionError("unknown strategy '" + std::string(name) + "'");
}

Preprocess parse_preprocess(std::string_view name) {
    for (Preprocess p : {Preprocess::LastRelative, Preprocess::MovingMean, Preprocess::L1Median}) {
        if (name == to_string(p)) return p;
    }
    throw PreconditionError("unknown preprocessing mode '" + std::string(name) + "'");
}

bool learns_hyperparameters(StrategyFamily family) {
    return family == StrategyFamily::EGPlus || family == StrategyFamily::EgabN || family == StrategyFamily::EgabP;
}

void StrategyConfig::validate() const {
    require_direction(direction);
    if (window == 0) {
        throw PreconditionError("window must be positive");
    }
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw PreconditionError("epsilon must be finite and nonnegative");
    }
    if (family == StrategyFamily::EGPlus && (params.alpha() != 1.0 || params.beta() != 0.0)) {
        throw PreconditionError("eg-plus is fixed at (alpha, beta) = (1, 0)");
    }
    if (family == StrategyFamily::PAMR && preprocess != Preprocess::LastRelative) {
        throw PreconditionError("pamr predicts with the last relative");
    }
    if (family == StrategyFamily::OLMAR && preprocess != Preprocess::MovingMean) {
        throw PreconditionError("olmar predicts with the moving mean");
    }
    if (family == StrategyFamily::RMR && preprocess != Preprocess::L1Median) {
        throw PreconditionError("rmr predicts with the l1 median");
    }
}

StrategyConfig StrategyConfig::ubah(CostModel cost) {
    StrategyConfig c;
    c.family = StrategyFamily::UBAH;
    c.cost = cost;
    return c;
}

StrategyConfig StrategyConfig::eg(CostModel cost, double eta) {
    StrategyConfig c;
    c.family = StrategyFamily::EG;
    c.params = ABParams(1.0, 0.0, eta);
    c.cost = cost;
    return c;
}

StrategyConfig StrategyConfig::pamr(CostModel cost, double epsilon) {
    StrategyConfig c;
    c.family = StrategyFamily::PAMR;
    c.epsilon = epsilon;
    c.cost = cost;
    return c;
}

StrategyConfig StrategyConfig::olmar(CostModel cost, double epsilon, std::size_t window) {
    StrategyConfig c;
    c.family = StrategyFamily::OLMAR;
    c.epsilon = epsilon;
    c.preprocess = Preprocess::MovingMean;
    c.window = window;
    c.cost = cost;
    return c;
}

StrategyConfig StrategyConfig::rmr(CostModel cost, double epsilon, std::size_t window) {
    StrategyConfig c;
    c.family = StrategyFamily::RMR;
    c.epsilon = epsilon;
    c.preprocess = Preprocess::L1Median;
    c.window = window;
    c.cost = cost;
    return c;
}

StrategyConfig StrategyConfig::eg_plus(CostModel cost, double eta, int direction, Preprocess preprocess,
                                       std::size_t window) {
    StrategyConfig c;
    c.family = StrategyFamily::EGPlus;
    c.params = ABParams(1.0, 0.0, eta);
    c.direction = direction;
    c.preprocess = preprocess;
    c.window = window;
    c.cost = cost;
    return c;
}

StrategyConfig StrategyConfig::egab_n(CostModel cost, ABParams params, int direction, Preprocess preprocess,
                                      std::size_t window) {
    StrategyConfig c;
    c.family = StrategyFamily::EgabN;
    c.params = params;
    c.direction = direction;
    c.preprocess = preprocess;
    c.window = window;
    c.cost = cost;
    return c;
}

StrategyConfig StrategyConfig::egab_p(CostModel cost, ABParams params, int direction, Preprocess preprocess,
                                      std::size_t window) {
    StrategyConfig c = egab_n(cost, params, direction, preprocess, window);
    c.family = StrategyFamily::EgabP;
    return c;
}

// ------------------------------------------------------------ PortfolioState

PortfolioState::PortfolioState(std::size_t n_assets, std::size_t window_)
    : current(Portfolio::uniform(n_assets)),
      adjusted(Portfolio::uniform(n_assets)),
      prices{Vec(n_assets, 1.0)},
      last_relative(n_assets, 1.0),
      window(window_) {
    if (window == 0) {
        throw PreconditionError("PortfolioState: window must be positive");
    }
}

// -------------------------------------------------------------- prediction

Vec l1_median(const std::vector<Vec>& points) {
    if (points.empty()) {
        throw PreconditionError("l1_median: no points");
    }
    const std::size_t dim = points.front().size();
    for (const Vec& p : points) {
        if (p.size() != dim) throw DomainError("l1_median: dimension mismatch");
    }
    Vec y = mean_of(points);
    if (points.size() <= 2) {
        return y;
    }

    Vec best = y;
    double best_cost = sum_of_distances(points, y);
    for (int iter = 0; iter < kWeiszfeldMaxIterations; ++iter) {
        Vec numerator(dim, 0.0);
        Vec residual(dim, 0.0);  // sum of unit vectors towards non-coincident points
        double weight_sum = 0.0;
        std::size_t coincident = 0;
        for (const Vec& p : points) {
            const double d = euclidean_distance(p, y);
            if (d < kCoincidenceRadius) {
                ++coincident;
                continue;
            }
            for (std::size_t j = 0; j < dim; ++j) {
                numerator[j] += p[j] / d;
                residual[j] += (p[j] - y[j]) / d;
            }
            weight_sum += 1.0 / d;
        }
        if (weight_sum == 0.0) {
            return y;  // every point coincides with y
        }

        Vec next(dim);
        if (coincident > 0) {
            // y sits on a data point. It is the median when the pull of the other
            // points does not exceed the number of coincident points.
            const double pull = std::sqrt(dot(residual, residual));
            if (pull <= static_cast<double>(coincident)) {
                return y;
            }
            for (std::size_t j = 0; j < dim; ++j) next[j] = y[j] + kCoincidenceNudge * residual[j] / pull;
        } else {
            for (std::size_t j = 0; j < dim; ++j) next[j] = numerator[j] / weight_sum;
        }

        const double step = euclidean_distance(next, y);
        const double scale = std::max(1.0, std::sqrt(dot(y, y)));
        y = std::move(next);
        const double cost = sum_of_distances(points, y);
        if (cost < best_cost) {
            best_cost = cost;
            best = y;
        }
        if (step < kWeiszfeldTolerance * scale) {
            return y;
        }
    }
    throw NonConvergenceError("l1_median: Weiszfeld iteration did not converge", best);
}

Vec predict_relatives(const std::deque<Vec>& prices, std::span<const double> last_relative, Preprocess mode,
                      std::size_t window) {
    if (prices.empty()) {
        throw PreconditionError("predict_relatives: empty price history");
    }
    if (mode == Preprocess::LastRelative) {
        return Vec(last_relative.begin(), last_relative.end());
    }
    const std::size_t rows = std::min(prices.size(), window + 1);
    std::vector<Vec> recent(prices.end() - static_cast<std::ptrdiff_t>(rows), prices.end());
    const Vec& latest = prices.back();

    Vec center;
    if (mode == Preprocess::MovingMean) {
        center = mean_of(recent);
    } else {
        try {
            center = l1_median(recent);
        } catch (const NonConvergenceError& e) {
            center = e.best_iterate();
        }
    }
    for (std::size_t i = 0; i < center.size(); ++i) center[i] /= latest[i];
    return center;
}

Vec predict_relatives(const PortfolioState& state, Preprocess mode) {
    return predict_relatives(state.prices, state.last_relative, mode, state.window);
}

// ------------------------------------------------------------------- losses

double train_loss(std::span<const double> w, std::span<const double> x_hat, const PortfolioState& state,
                  int direction, const CostModel& cost) {
    require_direction(direction);
    const double ret = dot(w, x_hat);
    if (!(ret > 0.0)) {
        throw DomainError("train_loss: w^T x_hat must be positive");
    }
    double distance = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) distance += std::abs(w[i] - state.adjusted[i]);
    const double cost_factor = 1.0 - cost.rate() * 0.5 * distance;
    if (!(cost_factor > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    return -static_cast<double>(direction) * std::log(ret) - std::log(cost_factor);
}

Vec train_subgradient(std::span<const double> w, std::span<const double> x_hat, const PortfolioState& state,
                      int direction, const CostModel& cost) {
    require_direction(direction);
    const double ret = dot(w, x_hat);
    if (!(ret > 0.0)) {
        throw DomainError("train_subgradient: w^T x_hat must be positive");
    }
    Vec g(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) g[i] = -static_cast<double>(direction) * x_hat[i] / ret;
    if (cost.rate() == 0.0) {
        return g;
    }
    double distance = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) distance += std::abs(w[i] - state.adjusted[i]);
    const double denom = 2.0 / cost.rate() - distance;
    if (!(denom > 0.0)) {
        throw DomainError("train_subgradient: cost factor is not positive");
    }
    for (std::size_t i = 0; i < w.size(); ++i) g[i] += sign_of(w[i] - state.adjusted[i]) / denom;
    return g;
}

double turnover(const Portfolio& w_next, const Portfolio& adjusted) {
    if (w_next.size() != adjusted.size()) {
        throw DomainError("turnover: length mismatch");
    }
    double distance = 0.0;
    for (std::size_t i = 0; i < w_next.size(); ++i) distance += std::abs(w_next[i] - adjusted[i]);
    return 0.5 * distance;
}

void close_period(PortfolioState& state, std::span<const double> x) {
    const std::size_t n = state.current.size();
    if (x.size() != n) {
        throw DomainError("close_period: length mismatch");
    }
    const double gross = dot(state.current.span(), x);
    Vec drifted(n);
    for (std::size_t i = 0; i < n; ++i) drifted[i] = state.current[i] * x[i] / gross;
    state.adjusted = Portfolio(std::move(drifted));

    Vec next = state.prices.back();
    for (std::size_t i = 0; i < n; ++i) next[i] *= x[i];
    state.prices.push_back(std::move(next));
    while (state.prices.size() > state.window + 1) state.prices.pop_front();
    state.last_relative.assign(x.begin(), x.end());
}

// ---------------------------------------------------------------- updates

Vec mean_reversion_intermediate(const Portfolio& w, std::span<const double> x_hat, double epsilon, int sign) {
    const std::size_t n = w.size();
    const double mean = std::accumulate(x_hat.begin(), x_hat.end(), 0.0) / static_cast<double>(n);
    Vec deviation(x_hat.begin(), x_hat.end());
    double norm2 = 0.0;
    for (double& d : deviation) {
        d -= mean;
        norm2 += d * d;
    }
    const double s = static_cast<double>(sign);
    const double ret = dot(w.span(), x_hat);
    const double step = s * std::max(0.0, s * (epsilon - ret)) / (norm2 + kMeanReversionRegularizer);
    Vec star(w.weights());
    for (std::size_t i = 0; i < n; ++i) star[i] += step * deviation[i];
    return star;
}

Portfolio eg_step(const Portfolio& w, std::span<const double> x_hat, double eta) {
    const double ret = dot(w.span(), x_hat);
    Vec star(w.size());
    for (std::size_t i = 0; i < star.size(); ++i) star[i] = w[i] * std::exp(eta * x_hat[i] / ret);
    return scale_normalize(star);
}

Portfolio strategy_step(const StrategyConfig& config, const PortfolioState& state, std::span<const double> x_hat) {
    if (x_hat.size() != state.current.size()) {
        throw DomainError("strategy_step: x_hat length mismatch");
    }
    switch (config.family) {
        case StrategyFamily::UBAH:
            return state.adjusted;
        case StrategyFamily::EG:
            return eg_step(state.current, x_hat, config.params.eta());
        case StrategyFamily::PAMR:
            return simplex_projection(mean_reversion_intermediate(state.current, x_hat, config.epsilon, -1));
        case StrategyFamily::OLMAR:
        case StrategyFamily::RMR:
            return simplex_projection(mean_reversion_intermediate(state.current, x_hat, config.epsilon, +1));
        case StrategyFamily::EGPlus:
        case StrategyFamily::EgabN: {
            const Vec g = train_subgradient(state.current.span(), x_hat, state, config.direction, config.cost);
            return egab_n_step(state.current, invariant_gradient(g, state.current), config.params);
        }
        case StrategyFamily::EgabP: {
            const Vec g = train_subgradient(state.current.span(), x_hat, state, config.direction, config.cost);
            return egab_p_step(state.current, parallel_gradient(g), config.params);
        }
    }
    throw PreconditionError("strategy_step: unknown family");
}

}  // namespace egab
