#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace egab {

using Vec = std::vector<double>;

/// Nonnegative weights summing to one (within 1e-10).
class Portfolio {
public:
    static constexpr double kSumTolerance = 1e-10;

    /// Validates the simplex constraints; throws DomainError otherwise.
    explicit Portfolio(Vec weights);

    /// The uniform portfolio (1/n, ..., 1/n).
    static Portfolio uniform(std::size_t n);

    const Vec& weights() const noexcept { return weights_; }
    std::span<const double> span() const noexcept { return weights_; }
    std::size_t size() const noexcept { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }

    bool operator==(const Portfolio&) const = default;

private:
    Vec weights_;
};

/// w / ||w||_1. Entries must be nonnegative with at least one positive.
Portfolio scale_normalize(std::span<const double> w);

/// Euclidean projection of an arbitrary finite vector onto the unit simplex.
///
/// Hyperplane-shift-and-clip iteration: shift the active coordinates so they
/// sum to one, zero the negative ones, drop them from the active set, repeat.
/// The active set strictly shrinks, so at most n passes are needed.
Portfolio min_dist_projection(std::span<const double> w);

/// Scaling when the vector is nonnegative with ||w||_1 <= 1, minimum distance
/// projection otherwise. Sparsity produced by the projection is preserved.
Portfolio simplex_projection(std::span<const double> w);

/// g - mean(g) 1: the component of g parallel to the simplex.
Vec parallel_gradient(std::span<const double> g);

/// g - (w^T g) 1: gradient of the scale-invariant loss L(w / ||w||_1) at w.
Vec invariant_gradient(std::span<const double> g, const Portfolio& w);

double dot(std::span<const double> a, std::span<const double> b);
double l1_norm(std::span<const double> a);

}  // namespace egab
