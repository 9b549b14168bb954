#pragma once

#include <array>

namespace vgl {

/// Time index of the benchmark. Non-terminal steps are 0, 1, 2; step 3 is terminal.
using TimeIndex = int;

inline constexpr TimeIndex kHorizon = 3;

/**
 * Constants shared by the environment, the critic and the analytic update matrices.
 *
 * c1 and c2 are the fixed curvatures of the critic at t=1 and t=2, k is the action
 * cost coefficient, gamma the discount factor and lambda the return-mixing factor.
 */
struct ProblemConstants {
    double c1 = 0.01;
    double c2 = 0.01;
    double k = 0.01;
    double gamma = 1.0;
    double lambda = 0.0;

    /// Curvature of the critic at step t (t must be 1 or 2).
    [[nodiscard]] double curvature(TimeIndex t) const;

    /// Throws std::invalid_argument unless c1, c2, k > 0 and gamma, lambda lie in [0, 1].
    void validate() const;
};

/// Partial derivatives of the model and reward functions at one (x, t, a).
struct ModelJacobians {
    double df_dx = 0.0;
    double df_da = 0.0;
    double dr_dx = 0.0;
    double dr_da = 0.0;
};

/// Second derivatives needed by the greedy-policy curvature and the special Omega weighting.
struct ModelCurvature {
    double d2r_da2 = 0.0;
};

struct Step {
    TimeIndex t = 0;
    double x = 0.0;
    double a = 0.0;
    double r = 0.0;
};

/**
 * One rollout to the terminal step.
 *
 * `policy_dx` holds the derivative of the acting policy with respect to the state at each
 * step. It is only meaningful when `has_policy_derivative` is set, which is the case for
 * trajectories generated by the closed-form greedy policy.
 */
struct Trajectory {
    std::array<Step, kHorizon> steps{};
    double terminal_x = 0.0;
    double total_reward = 0.0;
    std::array<double, kHorizon> policy_dx{};
    bool has_policy_derivative = false;

    /// State at step t, including the terminal state at t = kHorizon.
    [[nodiscard]] double state(TimeIndex t) const;
};

/// Generic deterministic, time-indexed, scalar-state environment.
class Environment {
public:
    virtual ~Environment() = default;

    [[nodiscard]] virtual double next_state(double x, TimeIndex t, double a) const = 0;
    [[nodiscard]] virtual double reward(double x, TimeIndex t, double a) const = 0;
    [[nodiscard]] virtual ModelJacobians jacobians(double x, TimeIndex t, double a) const = 0;
    [[nodiscard]] virtual ModelCurvature curvature(double x, TimeIndex t, double a) const = 0;
    [[nodiscard]] virtual bool is_terminal(TimeIndex t) const = 0;
    [[nodiscard]] virtual TimeIndex horizon() const = 0;
};

/**
 * The three-step benchmark.
 *
 *   f(x, t, a) = x + a   (t in {0, 1}),   x      (t = 2)
 *   r(x, t, a) = -k a^2  (t in {0, 1}),   -x^2   (t = 2)
 *
 * The action at t = 2 has no effect. Starting from x0 the total reward is
 * -k(a0^2 + a1^2) - (x0 + a0 + a1)^2.
 */
class ThreeStepProblem final : public Environment {
public:
    explicit ThreeStepProblem(double k);

    [[nodiscard]] double k() const { return k_; }

    [[nodiscard]] double next_state(double x, TimeIndex t, double a) const override;
    [[nodiscard]] double reward(double x, TimeIndex t, double a) const override;
    [[nodiscard]] ModelJacobians jacobians(double x, TimeIndex t, double a) const override;
    [[nodiscard]] ModelCurvature curvature(double x, TimeIndex t, double a) const override;
    [[nodiscard]] bool is_terminal(TimeIndex t) const override { return t >= kHorizon; }
    [[nodiscard]] TimeIndex horizon() const override { return kHorizon; }

private:
    double k_;
};

// Free-function forms of the benchmark, parametrised by the action cost k.
[[nodiscard]] double model_step(double x, TimeIndex t, double a);
[[nodiscard]] double reward_step(double x, TimeIndex t, double a, double k);
[[nodiscard]] ModelJacobians model_jacobians(double x, TimeIndex t, double a, double k);

/// Discounted sum of the rewards in `steps`.
[[nodiscard]] double discounted_return(const std::array<Step, kHorizon>& steps, double gamma);

}  // namespace vgl
