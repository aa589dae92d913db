#pragma once

// Test-side reference implementations. None of these call into the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
    Vec vector(std::size_t n, double lo, double hi) {
        Vec v(n);
        for (auto& x : v) x = uniform(lo, hi);
        return v;
    }
    // Strictly interior simplex point.
    Vec simplex(std::size_t n, double min_weight = 0.01) {
        Vec v = vector(n, min_weight, 1.0);
        const double s = std::accumulate(v.begin(), v.end(), 0.0);
        for (auto& x : v) x /= s;
        return v;
    }
    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

inline double log_q(double x, double beta) {
    return beta == 0.0 ? std::log(x) : (std::pow(x, beta) - 1.0) / beta;
}

inline double exp_q(double x, double beta) {
    if (beta == 0.0) return std::exp(x);
    const double base = 1.0 + beta * x;
    return base <= 0.0 ? 0.0 : std::pow(base, 1.0 / beta);
}

// Generic-branch AB divergence, straight from the closed form.
inline double ab_generic(double p, double q, double a, double b) {
    const double s = a + b;
    return -(std::pow(p, a) * std::pow(q, b) - a / s * std::pow(p, s) - b / s * std::pow(q, s)) / (a * b);
}

// Sort-based Euclidean projection onto the probability simplex.
inline Vec sort_projection(const Vec& v) {
    Vec u = v;
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        cumulative += u[j];
        const double t = (cumulative - 1.0) / static_cast<double>(j + 1);
        if (u[j] - t > 0.0) theta = t;
    }
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - theta, 0.0);
    return out;
}

inline Vec classical_eg(const Vec& w, const Vec& g, double eta) {
    Vec out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i] * std::exp(-eta * g[i]);
    const double s = std::accumulate(out.begin(), out.end(), 0.0);
    for (auto& x : out) x /= s;
    return out;
}

inline double central_difference(const std::function<double(const Vec&)>& f, Vec x, std::size_t i, double h) {
    const double x0 = x[i];
    x[i] = x0 + h;
    const double up = f(x);
    x[i] = x0 - h;
    const double down = f(x);
    return (up - down) / (2.0 * h);
}

inline double mean(const Vec& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

inline double sample_std(const Vec& v) {
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// Minimizer of summed Euclidean distances by coarse grid plus shrinking pattern search.
inline Vec fermat_point(const std::vector<Vec>& pts) {
    const auto cost = [&](double x, double y) {
        double c = 0.0;
        for (const auto& p : pts) c += std::hypot(x - p[0], y - p[1]);
        return c;
    };
    double bx = 0.0, by = 0.0, best = cost(0.0, 0.0);
    for (int i = 0; i <= 200; ++i) {
        for (int j = 0; j <= 200; ++j) {
            const double x = i / 200.0, y = j / 200.0;
            const double c = cost(x, y);
            if (c < best) best = c, bx = x, by = y;
        }
    }
    for (double step = 1.0 / 200.0; step > 1e-13; step *= 0.5) {
        bool moved = true;
        while (moved) {
            moved = false;
            for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}}) {
                const double c = cost(bx + dx * step, by + dy * step);
                if (c < best) best = c, bx += dx * step, by += dy * step, moved = true;
            }
        }
    }
    return {bx, by};
}

}  // namespace oracle
