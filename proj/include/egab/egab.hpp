#pragma once

#include <span>

#include "egab/deformed_math.hpp"
#include "egab/simplex.hpp"

namespace egab {

/// How the unnormalized multiplicative step is brought back onto the simplex.
enum class UpdateKind { Unnormalized, ScaleNormalized, Projected };

/// Lower bound applied to every weight before w^gamma is evaluated and after
/// each multiplicative step.
inline constexpr double kPositivityFloor = 1e-8;

/// Per-coordinate learning rates eta * w^gamma. All entries of w must be > 0.
Vec learning_rates(std::span<const double> w, const ABParams& params);

/// EGAB-U: w (.) exp_{1-beta}(-eta w^gamma (.) grad), floored at kPositivityFloor.
/// Entries past the pole of a negative beta are +inf.
Vec egab_u_step(std::span<const double> w, std::span<const double> grad, const ABParams& params);

/// EGAB-N: EGAB-U on the scale-invariant gradient, then scaling to unit l1 norm.
/// If some intermediate entries are +inf they share the mass equally, which is
/// the limit of both normalizations; egab_p_step does the same.
Portfolio egab_n_step(const Portfolio& w, std::span<const double> grad_invariant, const ABParams& params);

/// EGAB-N evaluated as a single multiplicative expression,
///   w (.) exp_{1-beta}(-eta_t (.) g / S^beta + log_{1-beta}(1/S)),
/// with S = ||w_star||_1. Agrees with egab_n_step to rounding.
Portfolio egab_n_step_fused(const Portfolio& w, std::span<const double> grad_invariant, const ABParams& params);

/// EGAB-P: EGAB-U on the parallel gradient, then simplex_projection.
Portfolio egab_p_step(const Portfolio& w, std::span<const double> grad_parallel, const ABParams& params);

}  // namespace egab
