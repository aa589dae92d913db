#pragma once

#include <span>

namespace egab {

/// Hyperparameters of the Alpha-Beta regularized updates.
///
/// gamma() = 1 - (alpha + beta) is always derived from alpha and beta; it is
/// the exponent applied to the current weights inside the per-coordinate
/// learning rates eta * w^gamma.
class ABParams {
public:
    /// Throws DomainError unless eta > 0 and all values are finite.
    ABParams(double alpha, double beta, double eta);

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    double eta() const noexcept { return eta_; }
    double gamma() const noexcept { return 1.0 - (alpha_ + beta_); }

    bool operator==(const ABParams&) const = default;

private:
    double alpha_;
    double beta_;
    double eta_;
};

/// Tsallis deformed logarithm log_{1-beta}(x) (Box-Cox transform):
/// (x^beta - 1) / beta, or ln(x) when beta == 0. Requires x > 0.
double deformed_log(double x, double beta);

/// Deformed exponential exp_{1-beta}(x) = [1 + beta x]_+^(1/beta), exp(x) when
/// beta == 0. A clipped bracket gives 0 for beta > 0 and +inf for beta < 0;
/// overflow also gives +inf. Only a NaN argument throws.
double deformed_exp(double x, double beta);

/// Scalar AB-divergence d(w_new || w_old). Both arguments must be positive.
///
/// Dispatch is on exact zeros of alpha, beta and alpha + beta:
///   generic            alpha, beta, alpha+beta != 0
///   generalized KL     beta == 0, alpha != 0
///   dual generalized KL alpha == 0, beta != 0
///   generalized IS     alpha == -beta != 0
///   Log-Euclidean      alpha == beta == 0
double ab_divergence_scalar(double w_new, double w_old, double alpha, double beta);

/// Sum of scalar AB-divergences over two equal-length positive vectors.
double ab_divergence(std::span<const double> p, std::span<const double> q, double alpha, double beta);

}  // namespace egab
