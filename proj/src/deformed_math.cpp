#include "egab/deformed_math.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "egab/errors.hpp"

namespace egab {

namespace {

double checked(double value, const char* what) {
    if (!std::isfinite(value)) {
        throw ComputationError(std::string(what) + ": non-finite result");
    }
    return value;
}

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError(std::string(what) + ": argument must be positive and finite");
    }
}

// e^x - 1 - x without cancellation near zero.
double expm1_minus_x(double x) {
    if (std::abs(x) >= 0.05) return std::expm1(x) - x;
    double term = x * x / 2.0;
    double total = term;
    for (int k = 3; k <= 11; ++k) {
        term *= x / k;
        total += term;
    }
    return total;
}

}  // namespace

ABParams::ABParams(double alpha, double beta, double eta) : alpha_(alpha), beta_(beta), eta_(eta) {
    if (!std::isfinite(alpha) || !std::isfinite(beta)) {
        throw DomainError("ABParams: alpha and beta must be finite");
    }
    if (!(eta > 0.0) || !std::isfinite(eta)) {
        throw DomainError("ABParams: eta must be positive and finite");
    }
}

double deformed_log(double x, double beta) {
    require_positive(x, "deformed_log");
    if (beta == 0.0) {
        return std::log(x);
    }
    // expm1 keeps full precision when x^beta is close to one.
    return checked(std::expm1(beta * std::log(x)) / beta, "deformed_log");
}

double deformed_exp(double x, double beta) {
    if (std::isnan(x)) {
        throw ComputationError("deformed_exp: argument is NaN");
    }
    if (beta == 0.0) {
        return std::exp(x);
    }
    const double base = 1.0 + beta * x;
    if (!(base > 0.0)) {
        // Past the pole for beta < 0 the power of a vanishing base diverges.
        return beta > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return std::exp(std::log1p(beta * x) / beta);
}

double ab_divergence_scalar(double w_new, double w_old, double alpha, double beta) {
    require_positive(w_new, "ab_divergence_scalar");
    require_positive(w_old, "ab_divergence_scalar");
    if (w_new == w_old) {
        return 0.0;
    }
    // Every branch is written in d = ln p - ln q through expm1_minus_x, so the
    // zeroth- and first-order terms in d cancel symbolically rather than in
    // floating point. This keeps p close to q accurate.
    const double d = std::log(w_new) - std::log(w_old);
    const double sum = alpha + beta;

    double result = 0.0;
    if (alpha == 0.0 && beta == 0.0) {
        result = 0.5 * d * d;
    } else if (beta == 0.0) {
        const double x = alpha * d;
        result = std::pow(w_old, alpha) * (x * x + (x - 1.0) * expm1_minus_x(x)) / (alpha * alpha);
    } else if (alpha == 0.0) {
        const double y = -beta * d;
        result = std::pow(w_new, beta) * (y * y + (y - 1.0) * expm1_minus_x(y)) / (beta * beta);
    } else if (sum == 0.0) {
        result = expm1_minus_x(alpha * d) / (alpha * alpha);
    } else {
        const double inner = expm1_minus_x(alpha * d) - (alpha / sum) * expm1_minus_x(sum * d);
        result = -std::pow(w_old, sum) * inner / (alpha * beta);
    }
    checked(result, "ab_divergence_scalar");
    return result > 0.0 ? result : 0.0;
}

double ab_divergence(std::span<const double> p, std::span<const double> q, double alpha, double beta) {
    if (p.size() != q.size()) {
        throw DomainError("ab_divergence: length mismatch");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        total += ab_divergence_scalar(p[i], q[i], alpha, beta);
    }
    return total;
}

}  // namespace egab
