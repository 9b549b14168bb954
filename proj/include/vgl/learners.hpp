#pragma once

#include <array>
#include <string_view>

#include "vgl/critic.hpp"
#include "vgl/env.hpp"

namespace vgl {

enum class Algorithm { TD, Sarsa, VGL, VGLOmega, HDP, DHP, GDHP };

/// How the value-gradient error is weighted at each step.
enum class OmegaMode {
    Identity,
    /// Omega_t = -(df/da)_{t-1}^2 / (d^2 Q / da^2)_{t-1} for t > 0 and 0 at t = 0.
    InverseQCurvature,
};

[[nodiscard]] std::string_view to_string(Algorithm algorithm);
[[nodiscard]] Algorithm parse_algorithm(std::string_view name);

/// True for the algorithms whose update is built from value gradients (VGL, VGLOmega, DHP).
[[nodiscard]] bool is_value_gradient(Algorithm algorithm);

struct LearnerConfig {
    Algorithm algorithm = Algorithm::VGL;
    double lambda = 0.0;
    double alpha = 1e-6;
    double gamma = 1.0;
    /// Weight of the VGL(0) update inside GDHP; the remainder goes to TD(0).
    double gdhp_mix = 0.5;

    /// Lambda actually used by the target recursions (0 for HDP, DHP and GDHP).
    [[nodiscard]] double effective_lambda() const;
    [[nodiscard]] OmegaMode omega_mode() const;
    void validate() const;
};

/// Per-step values along a trajectory; the entry at index kHorizon is the terminal step.
using StepValues = std::array<double, kHorizon + 1>;

struct TargetSequence {
    StepValues v_targets{};
    StepValues q_targets{};
    StepValues g_targets{};
};

/// lambda-return: V'_t = r_t + gamma (lambda V'_{t+1} + (1 - lambda) V_{t+1}), V'_terminal = 0.
[[nodiscard]] StepValues lambda_return_targets(const Trajectory& traj, const CriticWeights& w,
                                               const ProblemConstants& consts, const LearnerConfig& config);

/// Q_t = r_t + gamma V(x_{t+1}); zero at the terminal step.
[[nodiscard]] StepValues q_values_along(const Trajectory& traj, const CriticWeights& w,
                                        const ProblemConstants& consts, double gamma);

/// Q'_t = r_t + gamma (lambda Q'_{t+1} + (1 - lambda) Q_{t+1}), Q'_terminal = 0.
[[nodiscard]] StepValues q_lambda_targets(const Trajectory& traj, const CriticWeights& w,
                                          const ProblemConstants& consts, const LearnerConfig& config);

/**
 * Target value gradients
 *
 *   G'_t = Dr/Dx|_t + gamma Df/Dx|_t (lambda G'_{t+1} + (1 - lambda) G_{t+1}),  G'_terminal = 0,
 *
 * with D/Dx = d/dx + (d pi/dx) d/da. The trajectory must carry the policy derivative.
 */
[[nodiscard]] StepValues value_gradient_targets(const Environment& env, const Trajectory& traj,
                                                const CriticWeights& w, const ProblemConstants& consts,
                                                const LearnerConfig& config);
[[nodiscard]] StepValues value_gradient_targets(const Trajectory& traj, const CriticWeights& w,
                                                const ProblemConstants& consts, const LearnerConfig& config);

[[nodiscard]] TargetSequence all_targets(const Trajectory& traj, const CriticWeights& w,
                                         const ProblemConstants& consts, const LearnerConfig& config);

/// Omega_t for each step (index kHorizon unused).
[[nodiscard]] StepValues omega_weights(const Environment& env, const Trajectory& traj,
                                       const ProblemConstants& consts, double gamma, OmegaMode mode);

/// alpha dV/dw|_t (V'_t - V_t) for each non-terminal step; td_update is their sum.
[[nodiscard]] std::array<Vec4, kHorizon> td_step_terms(const Trajectory& traj, const CriticWeights& w,
                                                       const ProblemConstants& consts,
                                                       const LearnerConfig& config);

[[nodiscard]] Vec4 td_update(const Trajectory& traj, const CriticWeights& w, const ProblemConstants& consts,
                             const LearnerConfig& config);

/// Sarsa(lambda) with Q(x, a, w) = r(x, a) + gamma V(f(x, a), w).
[[nodiscard]] Vec4 sarsa_update(const Trajectory& traj, const CriticWeights& w, const ProblemConstants& consts,
                                const LearnerConfig& config);

[[nodiscard]] Vec4 vgl_update(const Trajectory& traj, const CriticWeights& w, const ProblemConstants& consts,
                              const LearnerConfig& config, OmegaMode mode);

/// mix * VGL(0) + (1 - mix) * TD(0).
[[nodiscard]] Vec4 gdhp_update(const Trajectory& traj, const CriticWeights& w, const ProblemConstants& consts,
                               const LearnerConfig& config, double mix);

/// Dispatches on config.algorithm.
[[nodiscard]] Vec4 weight_update(const Trajectory& traj, const CriticWeights& w, const ProblemConstants& consts,
                                 const LearnerConfig& config);

}  // namespace vgl
