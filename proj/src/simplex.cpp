#include "egab/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "egab/errors.hpp"

namespace egab {

Portfolio::Portfolio(Vec weights) : weights_(std::move(weights)) {
    if (weights_.empty()) {
        throw DomainError("Portfolio: empty weight vector");
    }
    double sum = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw DomainError("Portfolio: weights must be finite and nonnegative");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw DomainError("Portfolio: weights must sum to one");
    }
}

Portfolio Portfolio::uniform(std::size_t n) {
    if (n == 0) {
        throw DomainError("Portfolio: empty weight vector");
    }
    return Portfolio(Vec(n, 1.0 / static_cast<double>(n)));
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DomainError("dot: length mismatch");
    }
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double l1_norm(std::span<const double> a) {
    double s = 0.0;
    for (double x : a) s += std::abs(x);
    return s;
}

Portfolio scale_normalize(std::span<const double> w) {
    double sum = 0.0;
    for (double x : w) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw DomainError("scale_normalize: entries must be finite and nonnegative");
        }
        sum += x;
    }
    if (!(sum > 0.0)) {
        throw DegenerateInputError("scale_normalize: all-zero input");
    }
    Vec out(w.begin(), w.end());
    for (double& x : out) x /= sum;
    return Portfolio(std::move(out));
}

Portfolio min_dist_projection(std::span<const double> w) {
    if (w.empty()) {
        throw DomainError("min_dist_projection: empty input");
    }
    for (double x : w) {
        if (!std::isfinite(x)) {
            throw DomainError("min_dist_projection: non-finite input");
        }
    }
    const std::size_t n = w.size();
    Vec v(w.begin(), w.end());
    std::vector<bool> active(n, true);
    std::size_t n_active = n;

    // At most n passes clip; the extra passes re-center after cancellation
    // against large inputs has left the active sum off by rounding.
    for (std::size_t pass = 0; pass <= 2 * n + 2; ++pass) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (active[i]) sum += v[i];
        }
        if (pass > 0 && std::abs(sum - 1.0) <= 4.0 * static_cast<double>(n) * 2.2e-16) {
            return Portfolio(std::move(v));
        }
        const double shift = (1.0 - sum) / static_cast<double>(n_active);
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            v[i] += shift;
            if (v[i] < 0.0) {
                v[i] = 0.0;
                active[i] = false;
                --n_active;
            }
        }
        if (n_active == 0) {
            break;
        }
    }
    throw ComputationError("min_dist_projection: failed to reach a feasible point");
}

Portfolio simplex_projection(std::span<const double> w) {
    const bool nonnegative = std::all_of(w.begin(), w.end(), [](double x) { return x >= 0.0; });
    if (nonnegative && l1_norm(w) <= 1.0) {
        return scale_normalize(w);
    }
    return min_dist_projection(w);
}

Vec parallel_gradient(std::span<const double> g) {
    Vec out(g.begin(), g.end());
    if (out.empty()) return out;
    const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    for (double& x : out) x -= mean;
    return out;
}

Vec invariant_gradient(std::span<const double> g, const Portfolio& w) {
    const double offset = dot(w.span(), g);
    Vec out(g.begin(), g.end());
    for (double& x : out) x -= offset;
    return out;
}

}  // namespace egab
