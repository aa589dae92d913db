#include "egab/olps.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "egab/egab.hpp"
#include "egab/errors.hpp"
#include "oracles.hpp"

namespace egab {
namespace {

PortfolioState state_with_adjusted(const Vec& adjusted) {
    PortfolioState s(adjusted.size(), 4);
    s.adjusted = Portfolio(adjusted);
    return s;
}

TEST(MarketData, PricesAreCumulativeProducts) {
    const MarketData d({{2.0, 1.0}, {0.5, 3.0}}, {"a", "b"});
    const auto p = d.prices();
    ASSERT_EQ(p.size(), 3u);
    EXPECT_EQ(p[0], (Vec{1.0, 1.0}));
    EXPECT_EQ(p[1], (Vec{2.0, 1.0}));
    EXPECT_EQ(p[2], (Vec{1.0, 3.0}));
    EXPECT_EQ(d.slice(1, 2).relative(0)[1], 3.0);
}

TEST(MarketData, RejectsInvalidRelatives) {
    EXPECT_THROW(MarketData({{1.0, 0.0}}, {"a", "b"}), DomainError);
    EXPECT_THROW(MarketData({{1.0, 1.0}, {1.0}}, {"a", "b"}), DomainError);
    EXPECT_THROW(MarketData({{1.0, std::nan("")}}, {"a", "b"}), DomainError);
}

TEST(StrategyConfig, Validation) {
    StrategyConfig c = StrategyConfig::eg_plus(CostModel(0.001), 2.0, -1, Preprocess::MovingMean);
    EXPECT_NO_THROW(c.validate());
    c.params = ABParams(1.0, 1.0, 2.0);
    EXPECT_THROW(c.validate(), PreconditionError);
    StrategyConfig d = StrategyConfig::egab_n(CostModel(), ABParams(1.0, 1.0, 1.0), 1, Preprocess::LastRelative);
    d.direction = 0;
    EXPECT_THROW(d.validate(), PreconditionError);
    EXPECT_THROW(CostModel(-0.1), DomainError);
    EXPECT_THROW(CostModel(1.0), DomainError);
}

TEST(Names, RoundTrip) {
    for (auto f : {StrategyFamily::UBAH, StrategyFamily::EG, StrategyFamily::PAMR, StrategyFamily::OLMAR,
                   StrategyFamily::RMR, StrategyFamily::EGPlus, StrategyFamily::EgabN, StrategyFamily::EgabP}) {
        EXPECT_EQ(parse_family(to_string(f)), f);
    }
    EXPECT_EQ(parse_family("eg+"), StrategyFamily::EGPlus);
    EXPECT_THROW(parse_family("nope"), PreconditionError);
    EXPECT_EQ(parse_preprocess("median"), Preprocess::L1Median);
}

TEST(Predict, LastRelativePassesThrough) {
    PortfolioState s(2, 4);
    close_period(s, Vec{1.1, 0.9});
    const Vec x = predict_relatives(s, Preprocess::LastRelative);
    EXPECT_DOUBLE_EQ(x[0], 1.1);
    EXPECT_DOUBLE_EQ(x[1], 0.9);
}

TEST(Predict, MovingMeanOnConstantPrices) {
    std::deque<Vec> prices(5, Vec{10.0, 20.0});
    const Vec x = predict_relatives(prices, Vec{1.0, 1.0}, Preprocess::MovingMean, 4);
    EXPECT_DOUBLE_EQ(x[0], 1.0);
    EXPECT_DOUBLE_EQ(x[1], 1.0);
}

TEST(Predict, MovingMeanWindow) {
    std::deque<Vec> prices{{1.0}, {2.0}, {4.0}};
    // Mean of the last two rows over the last price.
    EXPECT_DOUBLE_EQ(predict_relatives(prices, Vec{2.0}, Preprocess::MovingMean, 1)[0], 0.75);
    EXPECT_NEAR(predict_relatives(prices, Vec{2.0}, Preprocess::MovingMean, 4)[0], 7.0 / 12.0, 1e-15);
}

TEST(L1Median, Examples) {
    const Vec c = l1_median({{0, 0}, {0, 2}, {2, 0}, {2, 2}});
    EXPECT_NEAR(c[0], 1.0, 1e-9);
    EXPECT_NEAR(c[1], 1.0, 1e-9);
    EXPECT_EQ(l1_median({{3, 4}, {3, 4}, {3, 4}}), (Vec{3, 4}));
    EXPECT_NEAR(l1_median({{0}, {1}, {10}})[0], 1.0, 1e-9);
}

TEST(L1Median, FermatPointOfRightTriangle) {
    const std::vector<Vec> pts{{0, 0}, {1, 0}, {0, 1}};
    const Vec got = l1_median(pts);
    const Vec ref = oracle::fermat_point(pts);
    EXPECT_NEAR(got[0], ref[0], 1e-7);
    EXPECT_NEAR(got[1], ref[1], 1e-7);
}

TEST(L1Median, ClosedFormFermatPoint) {
    // For this triangle every angle is below 120 degrees and the Fermat point
    // lies on the diagonal at (3 - sqrt 3) / 6.
    const double r = (3.0 - std::sqrt(3.0)) / 6.0;
    const Vec got = l1_median({{0, 0}, {1, 0}, {0, 1}});
    EXPECT_NEAR(got[0], r, 1e-8);
    EXPECT_NEAR(got[1], r, 1e-8);
}

TEST(TrainLoss, Examples) {
    const PortfolioState s = state_with_adjusted({0.5, 0.5});
    const Vec w{0.5, 0.5};
    EXPECT_NEAR(train_loss(w, Vec{1.0, 1.0}, s, 1, CostModel(0.01)), 0.0, 1e-15);
    EXPECT_NEAR(train_loss(w, Vec{2.0, 2.0}, s, 1, CostModel(0.0)), -std::log(2.0), 1e-15);
    EXPECT_NEAR(train_loss(w, Vec{2.0, 2.0}, s, -1, CostModel(0.01)), std::log(2.0), 1e-15);
}

TEST(TrainSubgradient, Examples) {
    const PortfolioState s = state_with_adjusted({0.5, 0.5});
    const Vec w{0.5, 0.5};
    const Vec g = train_subgradient(w, Vec{1.1, 0.9}, s, 1, CostModel(0.0));
    EXPECT_NEAR(g[0], -1.1, 1e-15);
    EXPECT_NEAR(g[1], -0.9, 1e-15);
    const Vec h = train_subgradient(w, Vec{1.1, 0.9}, s, -1, CostModel(0.0));
    EXPECT_NEAR(h[0], 1.1, 1e-15);
    EXPECT_NEAR(h[1], 0.9, 1e-15);
}

TEST(TrainSubgradient, MatchesFiniteDifferences) {
    oracle::Rng rng(41);
    for (double rate : {0.001, 0.0025, 0.2}) {
        for (int i = 0; i < 200; ++i) {
            const std::size_t n = 4;
            const PortfolioState s = state_with_adjusted(rng.simplex(n));
            Vec w = rng.vector(n, 0.05, 1.0);
            const Vec x_hat = rng.vector(n, 0.8, 1.2);
            const int dir = i % 2 == 0 ? 1 : -1;
            // Keep every coordinate away from the kink of |w - w'|.
            bool near_kink = false;
            for (std::size_t k = 0; k < n; ++k) near_kink |= std::abs(w[k] - s.adjusted[k]) < 1e-3;
            if (near_kink) continue;
            const Vec g = train_subgradient(w, x_hat, s, dir, CostModel(rate));
            const auto f = [&](const Vec& v) { return train_loss(v, x_hat, s, dir, CostModel(rate)); };
            for (std::size_t k = 0; k < n; ++k) {
                const double fd = oracle::central_difference(f, w, k, 1e-6);
                EXPECT_NEAR(g[k], fd, 1e-5 * std::max(1.0, std::abs(fd)));
            }
        }
    }
}

TEST(TrainLoss, SentinelWhenCostFactorVanishes) {
    const PortfolioState s = state_with_adjusted({1.0, 0.0});
    EXPECT_EQ(train_loss(Vec{0.0, 3.0}, Vec{1.0, 1.0}, s, 1, CostModel(0.9)), std::numeric_limits<double>::infinity());
}

TEST(ClosePeriod, Drift) {
    PortfolioState s(2, 4);
    close_period(s, Vec{1.0, 1.0});
    EXPECT_EQ(s.adjusted.weights(), (Vec{0.5, 0.5}));
    close_period(s, Vec{2.0, 1.0});
    EXPECT_NEAR(s.adjusted[0], 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(s.adjusted[1], 1.0 / 3.0, 1e-15);
    s.current = Portfolio({1.0, 0.0});
    close_period(s, Vec{0.3, 7.0});
    EXPECT_EQ(s.adjusted.weights(), (Vec{1.0, 0.0}));
}

TEST(ClosePeriod, HistoryIsBounded) {
    PortfolioState s(1, 2);
    for (int t = 0; t < 10; ++t) close_period(s, Vec{1.5});
    EXPECT_EQ(s.prices.size(), 3u);
}

TEST(Turnover, Examples) {
    EXPECT_EQ(turnover(Portfolio({0.3, 0.7}), Portfolio({0.3, 0.7})), 0.0);
    EXPECT_DOUBLE_EQ(turnover(Portfolio({1.0, 0.0}), Portfolio({0.0, 1.0})), 1.0);
    EXPECT_NEAR(turnover(Portfolio({0.6, 0.4}), Portfolio({0.5, 0.5})), 0.1, 1e-15);
}

TEST(StrategyStep, PamrHandTrace) {
    const Portfolio w({0.5, 0.5});
    const Vec mid = mean_reversion_intermediate(w, Vec{1.1, 0.9}, 0.5, -1);
    // The 1e-12 guard in the step-size denominator shifts w* by about 1e-10.
    EXPECT_NEAR(mid[0], -2.0, 1e-9);
    EXPECT_NEAR(mid[1], 3.0, 1e-9);
    PortfolioState s(2, 4);
    const Portfolio next = strategy_step(StrategyConfig::pamr(CostModel(), 0.5), s, Vec{1.1, 0.9});
    EXPECT_EQ(next.weights(), (Vec{0.0, 1.0}));
}

TEST(StrategyStep, PamrRetainsWhenLossIsZero) {
    PortfolioState s(2, 4);
    const Portfolio next = strategy_step(StrategyConfig::pamr(CostModel(), 1.2), s, Vec{1.1, 0.9});
    EXPECT_EQ(next, s.current);
}

TEST(StrategyStep, UbahKeepsAdjusted) {
    PortfolioState s(3, 4);
    close_period(s, Vec{1.2, 0.7, 1.0});
    EXPECT_EQ(strategy_step(StrategyConfig::ubah(CostModel(0.01)), s, Vec{9.0, 0.1, 1.0}), s.adjusted);
}

TEST(StrategyStep, EgMatchesClosedForm) {
    PortfolioState s(3, 4);
    const Vec x{1.2, 0.7, 1.0};
    const Portfolio next = strategy_step(StrategyConfig::eg(CostModel(), 0.05), s, x);
    const double wx = (1.2 + 0.7 + 1.0) / 3.0;
    const Vec ref = oracle::classical_eg(s.current.weights(), {-1.2 / wx, -0.7 / wx, -1.0 / wx}, 0.05);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(next[i], ref[i], 1e-15);
}

TEST(StrategyStep, SingleAssetIsFixed) {
    PortfolioState s(1, 4);
    for (auto cfg : {StrategyConfig::olmar(CostModel()), StrategyConfig::rmr(CostModel()),
                     StrategyConfig::egab_p(CostModel(0.001), ABParams(5, -5, 4), 1, Preprocess::L1Median)}) {
        EXPECT_EQ(strategy_step(cfg, s, Vec{1.3})[0], 1.0);
    }
}

TEST(StrategyStep, EgabPBetaOneFollowsMeanReversionDirection) {
    oracle::Rng rng(42);
    for (int i = 0; i < 300; ++i) {
        PortfolioState s(4, 4);
        s.current = Portfolio(rng.simplex(4, 0.1));
        const Vec x_hat = rng.vector(4, 0.9, 1.1);
        const Vec g = parallel_gradient(train_subgradient(s.current.span(), x_hat, s, 1, CostModel()));
        const Vec mid = egab_u_step(s.current.span(), g, ABParams(1.0, 1.0, 0.01));
        const double x_bar = oracle::mean(x_hat);
        // Least-squares fit of mid - w = c (x_hat - x_bar 1).
        double num = 0.0, den = 0.0;
        Vec dir(4), delta(4);
        for (std::size_t k = 0; k < 4; ++k) {
            dir[k] = x_hat[k] - x_bar;
            delta[k] = mid[k] - s.current[k];
            num += dir[k] * delta[k];
            den += dir[k] * dir[k];
        }
        const double c = num / den;
        EXPECT_GT(c, 0.0);
        for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(delta[k], c * dir[k], 1e-10);
    }
}

}  // namespace
}  // namespace egab
