#include "egab/simplex.hpp"

#include <gtest/gtest.h>

#include <numeric>

#include "egab/errors.hpp"
#include "oracles.hpp"

namespace egab {
namespace {

void expect_weights(const Portfolio& p, const Vec& expected, double tol = 1e-12) {
    ASSERT_EQ(p.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(p[i], expected[i], tol) << "index " << i;
}

TEST(Portfolio, Validation) {
    EXPECT_NO_THROW(Portfolio({0.25, 0.75}));
    EXPECT_THROW(Portfolio({0.5, 0.6}), DomainError);
    EXPECT_THROW(Portfolio({-0.1, 1.1}), DomainError);
    EXPECT_THROW(Portfolio(Vec{}), DomainError);
    expect_weights(Portfolio::uniform(4), {0.25, 0.25, 0.25, 0.25});
}

TEST(ScaleNormalize, Examples) {
    expect_weights(scale_normalize(Vec{0.5, 0.5}), {0.5, 0.5});
    expect_weights(scale_normalize(Vec{0.25, 0.25}), {0.5, 0.5});
    expect_weights(scale_normalize(Vec{3.0, 1.0}), {0.75, 0.25});
    EXPECT_THROW(scale_normalize(Vec{0.0, 0.0}), DegenerateInputError);
}

TEST(MinDistProjection, Examples) {
    expect_weights(min_dist_projection(Vec{2.0, 0.0}), {1.0, 0.0});
    expect_weights(min_dist_projection(Vec{1.5, 0.7, 0.3}), {0.9, 0.1, 0.0});
    expect_weights(min_dist_projection(Vec{1.0 / 3, 1.0 / 3, 1.0 / 3}), {1.0 / 3, 1.0 / 3, 1.0 / 3});
}

TEST(MinDistProjection, NegativeEntryBelowUnitMass) {
    // Clipping before the first shift would give [0.6, 0.4, 0].
    const Vec v{0.5, 0.3, -0.05};
    expect_weights(min_dist_projection(v), oracle::sort_projection(v));
}

TEST(MinDistProjection, MatchesSortOracle) {
    oracle::Rng rng(21);
    for (int i = 0; i < 3000; ++i) {
        const Vec v = rng.vector(static_cast<std::size_t>(rng.integer(1, 12)), -3.0, 3.0);
        expect_weights(min_dist_projection(v), oracle::sort_projection(v), 1e-10);
    }
}

TEST(SimplexProjection, Examples) {
    expect_weights(simplex_projection(Vec{0.2, 0.2}), {0.5, 0.5});
    expect_weights(simplex_projection(Vec{2.0, 0.0}), {1.0, 0.0});
    expect_weights(simplex_projection(Vec{0.6, 0.6}), {0.5, 0.5});
}

TEST(SimplexProjection, NegativeEntriesAlwaysProject) {
    const Vec v{0.3, -0.2};
    expect_weights(simplex_projection(v), oracle::sort_projection(v));
}

TEST(SimplexProjection, OutputIsPortfolio) {
    oracle::Rng rng(22);
    for (int i = 0; i < 2000; ++i) {
        const Vec v = rng.vector(5, -2.0, 2.0);
        const Portfolio p = simplex_projection(v);
        EXPECT_NEAR(std::accumulate(p.weights().begin(), p.weights().end(), 0.0), 1.0, 1e-10);
        for (double x : p.weights()) EXPECT_GE(x, 0.0);
    }
}

TEST(SimplexProjection, Idempotent) {
    oracle::Rng rng(24);
    for (int i = 0; i < 2000; ++i) {
        const Portfolio once = simplex_projection(rng.vector(6, -2.0, 2.0));
        const Portfolio twice = simplex_projection(once.span());
        for (std::size_t k = 0; k < 6; ++k) EXPECT_NEAR(once[k], twice[k], 1e-12);
    }
}

TEST(Gradients, ParallelExamples) {
    const Vec zero = parallel_gradient(Vec{4.0, 4.0, 4.0});
    for (double x : zero) EXPECT_EQ(x, 0.0);
    const Vec a = parallel_gradient(Vec{1.0, -1.0});
    EXPECT_EQ(a, (Vec{1.0, -1.0}));
    const Vec b = parallel_gradient(Vec{3.0, 1.0});
    EXPECT_EQ(b, (Vec{1.0, -1.0}));
}

TEST(Gradients, InvariantExamples) {
    const Portfolio half({0.5, 0.5});
    EXPECT_EQ(invariant_gradient(Vec{1.0, -1.0}, half), (Vec{1.0, -1.0}));
    const Vec g = invariant_gradient(Vec{3.0, 1.0}, Portfolio({0.75, 0.25}));
    EXPECT_NEAR(g[0], 0.5, 1e-15);
    EXPECT_NEAR(g[1], -1.5, 1e-15);
    for (double x : invariant_gradient(Vec{2.0, 2.0}, Portfolio({0.3, 0.7}))) EXPECT_NEAR(x, 0.0, 1e-15);
}

TEST(Gradients, Orthogonality) {
    oracle::Rng rng(23);
    for (int i = 0; i < 5000; ++i) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(2, 8));
        const Vec g = rng.vector(n, -5.0, 5.0);
        const Portfolio w(rng.simplex(n));
        EXPECT_NEAR(dot(w.span(), invariant_gradient(g, w)), 0.0, 1e-12);
        const Vec pg = parallel_gradient(g);
        EXPECT_NEAR(std::accumulate(pg.begin(), pg.end(), 0.0), 0.0, 1e-12);
    }
}

}  // namespace
}  // namespace egab
