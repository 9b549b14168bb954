#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <variant>

#include "vgl/critic.hpp"
#include "vgl/env.hpp"

namespace vgl {

/// Closed-form argmax of the approximate Q function.
struct GreedyAnalytic {};

/// Golden-section search for the argmax of the approximate Q function over [lo, hi].
struct GreedyNumeric {
    double lo = -10.0;
    double hi = 10.0;
    double tolerance = 1e-12;
};

/// Closed-form greedy action plus zero-mean Gaussian noise on every controllable action.
struct NoisyGreedy {
    double noise_variance = 0.0;
    std::uint64_t seed = 1;
};

/// Two-weight identity actor: a0 = z0, a1 = z1.
struct FixedActor {
    double z0 = 0.0;
    double z1 = 0.0;
};

using PolicyKind = std::variant<GreedyAnalytic, GreedyNumeric, NoisyGreedy, FixedActor>;

/**
 * Seedable standard normal source.
 *
 * Uniforms come from std::mt19937_64 (whose output sequence is fixed by the C++ standard)
 * as 53-bit fractions; the Box-Muller transform turns each pair of uniforms
 * into two normals, which are consumed in order.
 */
class GaussianNoise {
public:
    explicit GaussianNoise(std::uint64_t seed) : engine_(seed) {}

    double standard_normal();
    double sample(double variance) { return variance == 0.0 ? 0.0 : std::sqrt(variance) * standard_normal(); }

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

/// Q(x, a) = r(x, t, a) + gamma V(f(x, t, a), t + 1).
[[nodiscard]] double q_value(double x, TimeIndex t, double a, const CriticWeights& w,
                             const ProblemConstants& consts);

/// d^2 Q / da^2 at step t; constant for the quadratic critic. Zero at t = 2.
[[nodiscard]] double q_curvature(TimeIndex t, const ProblemConstants& consts);

/**
 * Greedy action gamma (w_{t+1} - 2 c_{t+1} x) / (2 (gamma c_{t+1} + k)) for t in {0, 1}
 * and 0 at t = 2. Throws std::domain_error when Q is not strictly concave in the action.
 */
[[nodiscard]] double greedy_action(double x, TimeIndex t, const CriticWeights& w,
                                   const ProblemConstants& consts);

[[nodiscard]] double greedy_action_numeric(double x, TimeIndex t, const CriticWeights& w,
                                           const ProblemConstants& consts,
                                           const GreedyNumeric& search = {});

/// d(greedy action)/dx: -gamma c_{t+1} / (gamma c_{t+1} + k) for t in {0, 1}, 0 at t = 2.
[[nodiscard]] double greedy_action_state_derivative(TimeIndex t, const ProblemConstants& consts);

/// A policy instance; owns the noise generator of a NoisyGreedy policy.
class Policy {
public:
    explicit Policy(PolicyKind kind);

    [[nodiscard]] const PolicyKind& kind() const { return kind_; }

    double act(double x, TimeIndex t, const CriticWeights& w, const ProblemConstants& consts);

    /// d(action)/dx when known in closed form (only for GreedyAnalytic).
    [[nodiscard]] std::optional<double> state_derivative(TimeIndex t, const ProblemConstants& consts) const;

private:
    PolicyKind kind_;
    std::optional<GaussianNoise> noise_;
};

[[nodiscard]] Trajectory unroll(const Environment& env, double x0, Policy& policy,
                                const CriticWeights& w, const ProblemConstants& consts);

/// Rollout on the three-step benchmark defined by consts.k.
[[nodiscard]] Trajectory unroll(double x0, Policy& policy, const CriticWeights& w,
                                const ProblemConstants& consts);

}  // namespace vgl
