#pragma once

// Test-only reference computations. Nothing here calls into the code paths it is used to check:
// derivatives come from central differences, and the greedy-trajectory quantities are the
// closed-form expressions written out by hand.

#include <algorithm>
#include <cmath>
#include <random>

namespace oracle {

inline constexpr double kStep = 1e-6;

template <class F>
double central_difference(F&& f, double x, double h = kStep) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// |a - b| <= tol * max(1, |a|, |b|): relative for large values, absolute near zero.
inline bool close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline double relative_error(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// Greedy trajectory from x0 = 0 with gamma = 1, written out in closed form.
struct GreedyClosedForm {
    double c1, c2, k, w1, w2, lambda;

    double x1() const { return w1 / (2.0 * (c1 + k)); }
    double x2() const { return (w2 * (c1 + k) + k * w1) / (2.0 * (c2 + k) * (c1 + k)); }
    double a0() const { return x1(); }
    double a1() const { return (w2 * (c1 + k) - c2 * w1) / (2.0 * (c2 + k) * (c1 + k)); }
    double g_approx1() const { return w1 * k / (c1 + k); }
    double g_approx2() const { return (w2 * k * (c1 + k) - k * w1 * c2) / ((c2 + k) * (c1 + k)); }
    double g_target2() const { return -(w2 * (c1 + k) + k * w1) / ((c2 + k) * (c1 + k)); }
    double g_target1() const {
        const double s2 = c2 + k;
        return w2 * k * (c2 - lambda + k * (1.0 - lambda)) / (s2 * s2) -
               w1 * k * (k * lambda + c2 * c2 + k * (1.0 - lambda) * c2) / ((c1 + k) * s2 * s2);
    }
    double total_df_dx(int t) const { return t == 2 ? 1.0 : k / ((t == 0 ? c1 : c2) + k); }
    double total_dr_dx(int t) const {
        if (t == 2) return -2.0 * x2();
        const double c = t == 0 ? c1 : c2;
        const double a = t == 0 ? a0() : a1();
        return 2.0 * k * c * a / (c + k);
    }
};

/// Deterministic generator for randomised property checks.
class Sampler {
public:
    explicit Sampler(unsigned seed) : engine_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

private:
    std::mt19937_64 engine_;
};

}  // namespace oracle
