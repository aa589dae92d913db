#include "egab/egab.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "egab/errors.hpp"

namespace egab {

namespace {

Vec floored(std::span<const double> w) {
    Vec out(w.begin(), w.end());
    for (double& x : out) x = std::max(x, kPositivityFloor);
    return out;
}

// Multiplicative step without the trailing floor.
Vec raw_step(std::span<const double> w_floored, std::span<const double> grad, const ABParams& params) {
    if (grad.size() != w_floored.size()) {
        throw DomainError("egab step: gradient length mismatch");
    }
    const Vec rates = learning_rates(w_floored, params);
    Vec out(w_floored.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = w_floored[i] * deformed_exp(-rates[i] * grad[i], params.beta());
    }
    return out;
}

// Limit of both normalizations when some coordinates diverge: the mass is
// shared equally among them.
std::optional<Portfolio> divergent_limit(std::span<const double> star) {
    const auto k = std::count_if(star.begin(), star.end(), [](double x) { return std::isinf(x); });
    if (k == 0) return std::nullopt;
    Vec out(star.size(), 0.0);
    for (std::size_t i = 0; i < star.size(); ++i) {
        if (std::isinf(star[i])) out[i] = 1.0 / static_cast<double>(k);
    }
    return Portfolio(std::move(out));
}

Vec floored_intermediate(const Portfolio& w, std::span<const double> grad, const ABParams& params) {
    Vec star = raw_step(floored(w.span()), grad, params);
    if (std::all_of(star.begin(), star.end(), [](double x) { return x == 0.0; })) {
        throw DegenerateUpdateError("egab step: every coordinate was clipped to zero");
    }
    for (double& x : star) x = std::max(x, kPositivityFloor);
    return star;
}

}  // namespace

Vec learning_rates(std::span<const double> w, const ABParams& params) {
    Vec rates(w.size());
    const double gamma = params.gamma();
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!(w[i] > 0.0)) {
            throw DomainError("learning_rates: weights must be positive");
        }
        rates[i] = params.eta() * std::pow(w[i], gamma);
        if (!std::isfinite(rates[i]) || !(rates[i] > 0.0)) {
            throw ComputationError("learning_rates: rate is not a positive finite number");
        }
    }
    return rates;
}

Vec egab_u_step(std::span<const double> w, std::span<const double> grad, const ABParams& params) {
    Vec star = raw_step(floored(w), grad, params);
    for (double& x : star) x = std::max(x, kPositivityFloor);
    return star;
}

Portfolio egab_n_step(const Portfolio& w, std::span<const double> grad_invariant, const ABParams& params) {
    const Vec star = floored_intermediate(w, grad_invariant, params);
    if (auto limit = divergent_limit(star)) return *limit;
    return scale_normalize(star);
}

Portfolio egab_n_step_fused(const Portfolio& w, std::span<const double> grad_invariant, const ABParams& params) {
    const Vec base = floored(w.span());
    if (grad_invariant.size() != base.size()) {
        throw DomainError("egab step: gradient length mismatch");
    }
    const double beta = params.beta();
    const Vec rates = learning_rates(base, params);

    Vec star(base.size());
    double norm_star = 0.0;
    bool all_clipped = true;
    for (std::size_t i = 0; i < base.size(); ++i) {
        star[i] = base[i] * deformed_exp(-rates[i] * grad_invariant[i], beta);
        all_clipped = all_clipped && star[i] == 0.0;
        norm_star += std::max(star[i], kPositivityFloor);
    }
    if (all_clipped) {
        throw DegenerateUpdateError("egab step: every coordinate was clipped to zero");
    }
    if (auto limit = divergent_limit(star)) return *limit;
    if (!std::isfinite(norm_star)) {
        throw ComputationError("egab step: intermediate norm overflows");
    }

    const double rate_scale = std::pow(norm_star, -beta);
    const double offset = deformed_log(1.0 / norm_star, beta);
    const double floor_scaled = kPositivityFloor / norm_star;
    Vec out(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        const double arg = -rates[i] * grad_invariant[i] * rate_scale + offset;
        out[i] = std::max(base[i] * deformed_exp(arg, beta), floor_scaled);
    }
    return Portfolio(std::move(out));
}

Portfolio egab_p_step(const Portfolio& w, std::span<const double> grad_parallel, const ABParams& params) {
    const Vec star = floored_intermediate(w, grad_parallel, params);
    if (auto limit = divergent_limit(star)) return *limit;
    return simplex_projection(star);
}

}  // namespace egab
