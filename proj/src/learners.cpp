#include "vgl/learners.hpp"

#include <stdexcept>
#include <string>

namespace vgl {

namespace {

constexpr std::size_t idx(TimeIndex t) { return static_cast<std::size_t>(t); }

void require_policy_derivative(const Trajectory& traj) {
    if (!traj.has_policy_derivative) {
        throw std::logic_error(
            "value-gradient targets need d(policy)/dx; run the learner under the closed-form greedy policy");
    }
}

StepValues critic_values_along(const Trajectory& traj, const CriticWeights& w, const ProblemConstants& consts) {
    StepValues v{};
    for (TimeIndex t = 0; t <= kHorizon; ++t) v[idx(t)] = critic_value(traj.state(t), t, w, consts);
    return v;
}

StepValues critic_gradients_along(const Trajectory& traj, const CriticWeights& w, const ProblemConstants& consts) {
    StepValues g{};
    for (TimeIndex t = 0; t <= kHorizon; ++t) g[idx(t)] = critic_gradient(traj.state(t), t, w, consts);
    return g;
}

// Shared backward recursion y_t = base_t + gamma * scale_t * (lambda y_{t+1} + (1 - lambda) approx_{t+1}).
StepValues backward_targets(const StepValues& base, const StepValues& scale, const StepValues& approx,
                            double gamma, double lambda) {
    StepValues y{};
    y[idx(kHorizon)] = 0.0;
    for (TimeIndex t = kHorizon - 1; t >= 0; --t) {
        const auto i = idx(t);
        y[i] = base[i] + gamma * scale[i] * (lambda * y[i + 1] + (1.0 - lambda) * approx[i + 1]);
    }
    return y;
}

StepValues rewards_of(const Trajectory& traj) {
    StepValues r{};
    for (TimeIndex t = 0; t < kHorizon; ++t) r[idx(t)] = traj.steps[idx(t)].r;
    return r;
}

constexpr StepValues kOnes{1.0, 1.0, 1.0, 1.0};

}  // namespace

std::string_view to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::TD: return "td";
        case Algorithm::Sarsa: return "sarsa";
        case Algorithm::VGL: return "vgl";
        case Algorithm::VGLOmega: return "vglomega";
        case Algorithm::HDP: return "hdp";
        case Algorithm::DHP: return "dhp";
        case Algorithm::GDHP: return "gdhp";
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
    for (Algorithm a : {Algorithm::TD, Algorithm::Sarsa, Algorithm::VGL, Algorithm::VGLOmega, Algorithm::HDP,
                        Algorithm::DHP, Algorithm::GDHP}) {
        if (name == to_string(a)) return a;
    }
    throw std::invalid_argument("unknown algorithm '" + std::string(name) +
                                "' (expected td, sarsa, vgl, vglomega, hdp, dhp or gdhp)");
}

bool is_value_gradient(Algorithm algorithm) {
    return algorithm == Algorithm::VGL || algorithm == Algorithm::VGLOmega || algorithm == Algorithm::DHP;
}

double LearnerConfig::effective_lambda() const {
    switch (algorithm) {
        case Algorithm::HDP:
        case Algorithm::DHP:
        case Algorithm::GDHP: return 0.0;
        default: return lambda;
    }
}

OmegaMode LearnerConfig::omega_mode() const {
    return algorithm == Algorithm::VGLOmega ? OmegaMode::InverseQCurvature : OmegaMode::Identity;
}

void LearnerConfig::validate() const {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0, 1]");
    if (!(alpha > 0.0)) throw std::invalid_argument("learning rate alpha must be positive");
    if (!(gdhp_mix >= 0.0 && gdhp_mix <= 1.0)) throw std::invalid_argument("GDHP mix must lie in [0, 1]");
}

StepValues lambda_return_targets(const Trajectory& traj, const CriticWeights& w, const ProblemConstants& consts,
                                 const LearnerConfig& config) {
    return backward_targets(rewards_of(traj), kOnes, critic_values_along(traj, w, consts), config.gamma,
                            config.effective_lambda());
}

StepValues q_values_along(const Trajectory& traj, const CriticWeights& w, const ProblemConstants& consts,
                          double gamma) {
    StepValues q{};
    for (TimeIndex t = 0; t < kHorizon; ++t) {
        q[idx(t)] = traj.steps[idx(t)].r + gamma * critic_value(traj.state(t + 1), t + 1, w, consts);
    }
    q[idx(kHorizon)] = 0.0;
    return q;
}

StepValues q_lambda_targets(const Trajectory& traj, const CriticWeights& w, const ProblemConstants& consts,
                            const LearnerConfig& config) {
    return backward_targets(rewards_of(traj), kOnes, q_values_along(traj, w, consts, config.gamma), config.gamma,
                            config.effective_lambda());
}

StepValues value_gradient_targets(const Environment& env, const Trajectory& traj, const CriticWeights& w,
                                  const ProblemConstants& consts, const LearnerConfig& config) {
    require_policy_derivative(traj);
    StepValues total_dr{};
    StepValues total_df{};
    for (TimeIndex t = 0; t < kHorizon; ++t) {
        const Step& s = traj.steps[idx(t)];
        const ModelJacobians j = env.jacobians(s.x, t, s.a);
        const double dpi = traj.policy_dx[idx(t)];
        total_dr[idx(t)] = j.dr_dx + dpi * j.dr_da;
        total_df[idx(t)] = j.df_dx + dpi * j.df_da;
    }
    return backward_targets(total_dr, total_df, critic_gradients_along(traj, w, consts), config.gamma,
                            config.effective_lambda());
}

StepValues value_gradient_targets(const Trajectory& traj, const CriticWeights& w, const ProblemConstants& consts,
                                  const LearnerConfig& config) {
    return value_gradient_targets(ThreeStepProblem(consts.k), traj, w, consts, config);
}

TargetSequence all_targets(const Trajectory& traj, const CriticWeights& w, const ProblemConstants& consts,
                           const LearnerConfig& config) {
    TargetSequence targets;
    targets.v_targets = lambda_return_targets(traj, w, consts, config);
    targets.q_targets = q_lambda_targets(traj, w, consts, config);
    if (traj.has_policy_derivative) targets.g_targets = value_gradient_targets(traj, w, consts, config);
    return targets;
}

StepValues omega_weights(const Environment& env, const Trajectory& traj, const ProblemConstants& consts,
                         double gamma, OmegaMode mode) {
    if (mode == OmegaMode::Identity) return kOnes;
    StepValues omega{};
    omega[0] = 0.0;
    for (TimeIndex t = 1; t < kHorizon; ++t) {
        const Step& prev = traj.steps[idx(t - 1)];
        const ModelJacobians j = env.jacobians(prev.x, t - 1, prev.a);
        // The benchmark model is linear in the action, so d^2 Q / da^2 has no d^2 f / da^2 term.
        const double q_aa =
            env.curvature(prev.x, t - 1, prev.a).d2r_da2 + gamma * j.df_da * j.df_da * critic_curvature(t, consts);
        if (!(q_aa < 0.0)) {
            throw std::domain_error("Omega weighting needs strictly concave Q at t=" + std::to_string(t - 1));
        }
        omega[idx(t)] = -j.df_da * j.df_da / q_aa;
    }
    omega[idx(kHorizon)] = 0.0;
    return omega;
}

std::array<Vec4, kHorizon> td_step_terms(const Trajectory& traj, const CriticWeights& w,
                                         const ProblemConstants& consts, const LearnerConfig& config) {
    const StepValues targets = lambda_return_targets(traj, w, consts, config);
    std::array<Vec4, kHorizon> terms{};
    for (TimeIndex t = 0; t < kHorizon; ++t) {
        const double x = traj.state(t);
        const double error = targets[idx(t)] - critic_value(x, t, w, consts);
        terms[idx(t)] = (config.alpha * error) * critic_weight_jacobians(x, t).dV_dw;
    }
    return terms;
}

Vec4 td_update(const Trajectory& traj, const CriticWeights& w, const ProblemConstants& consts,
               const LearnerConfig& config) {
    Vec4 delta{};
    for (const Vec4& term : td_step_terms(traj, w, consts, config)) delta = delta + term;
    return delta;
}

Vec4 sarsa_update(const Trajectory& traj, const CriticWeights& w, const ProblemConstants& consts,
                  const LearnerConfig& config) {
    const StepValues targets = q_lambda_targets(traj, w, consts, config);
    const StepValues q = q_values_along(traj, w, consts, config.gamma);
    Vec4 delta{};
    for (TimeIndex t = 0; t < kHorizon; ++t) {
        // dQ/dw at step t is gamma dV/dw at the successor state.
        const Vec4 dq_dw = config.gamma * critic_weight_jacobians(traj.state(t + 1), t + 1).dV_dw;
        delta = delta + (config.alpha * (targets[idx(t)] - q[idx(t)])) * dq_dw;
    }
    return delta;
}

Vec4 vgl_update(const Trajectory& traj, const CriticWeights& w, const ProblemConstants& consts,
                const LearnerConfig& config, OmegaMode mode) {
    const ThreeStepProblem env(consts.k);
    const StepValues targets = value_gradient_targets(env, traj, w, consts, config);
    const StepValues omega = omega_weights(env, traj, consts, config.gamma, mode);
    Vec4 delta{};
    for (TimeIndex t = 0; t < kHorizon; ++t) {
        const double x = traj.state(t);
        const double error = targets[idx(t)] - critic_gradient(x, t, w, consts);
        delta = delta + (config.alpha * omega[idx(t)] * error) * critic_weight_jacobians(x, t).dG_dw;
    }
    return delta;
}

Vec4 gdhp_update(const Trajectory& traj, const CriticWeights& w, const ProblemConstants& consts,
                 const LearnerConfig& config, double mix) {
    if (!(mix >= 0.0 && mix <= 1.0)) throw std::invalid_argument("GDHP mix must lie in [0, 1]");
    LearnerConfig one_step = config;
    one_step.algorithm = Algorithm::TD;
    one_step.lambda = 0.0;
    const Vec4 dhp = vgl_update(traj, w, consts, one_step, OmegaMode::Identity);
    const Vec4 hdp = td_update(traj, w, consts, one_step);
    return mix * dhp + (1.0 - mix) * hdp;
}

Vec4 weight_update(const Trajectory& traj, const CriticWeights& w, const ProblemConstants& consts,
                   const LearnerConfig& config) {
    switch (config.algorithm) {
        case Algorithm::TD:
        case Algorithm::HDP: return td_update(traj, w, consts, config);
        case Algorithm::Sarsa: return sarsa_update(traj, w, consts, config);
        case Algorithm::VGL:
        case Algorithm::VGLOmega:
        case Algorithm::DHP: return vgl_update(traj, w, consts, config, config.omega_mode());
        case Algorithm::GDHP: return gdhp_update(traj, w, consts, config, config.gdhp_mix);
    }
    throw std::logic_error("unhandled algorithm");
}

}  // namespace vgl
