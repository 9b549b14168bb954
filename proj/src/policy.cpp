#include "vgl/policy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vgl {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Q is concave in a with curvature -2 (gamma c_{t+1} + k).
double concavity_margin(TimeIndex t, const ProblemConstants& consts) {
    return consts.gamma * consts.curvature(t + 1) + consts.k;
}

}  // namespace

double GaussianNoise::standard_normal() {
    if (spare_) {
        const double z = *spare_;
        spare_.reset();
        return z;
    }
    constexpr double kScale = 0x1.0p-53;
    // u1 in (0, 1] keeps the logarithm finite; u2 in [0, 1).
    const double u1 = static_cast<double>((engine_() >> 11) + 1) * kScale;
    const double u2 = static_cast<double>(engine_() >> 11) * kScale;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

double q_value(double x, TimeIndex t, double a, const CriticWeights& w, const ProblemConstants& consts) {
    const double next = model_step(x, t, a);
    return reward_step(x, t, a, consts.k) + consts.gamma * critic_value(next, t + 1, w, consts);
}

double q_curvature(TimeIndex t, const ProblemConstants& consts) {
    if (t == 2) return 0.0;
    if (t < 0 || t > 2) throw std::out_of_range("Q curvature requires t in {0, 1, 2}");
    return -2.0 * concavity_margin(t, consts);
}

double greedy_action(double x, TimeIndex t, const CriticWeights& w, const ProblemConstants& consts) {
    if (t == 2) return 0.0;
    if (t < 0 || t > 2) throw std::out_of_range("greedy action requires t in {0, 1, 2}");
    const double margin = concavity_margin(t, consts);
    if (!(margin > 0.0)) {
        throw std::domain_error("approximate Q is not strictly concave in the action");
    }
    const double c = consts.curvature(t + 1);
    return consts.gamma * (w.slope(t + 1) - 2.0 * c * x) / (2.0 * margin);
}

double greedy_action_numeric(double x, TimeIndex t, const CriticWeights& w, const ProblemConstants& consts,
                             const GreedyNumeric& search) {
    if (!(search.lo < search.hi)) throw std::invalid_argument("greedy search bracket is empty");
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = search.lo;
    double hi = search.hi;
    double a = hi - inv_phi * (hi - lo);
    double b = lo + inv_phi * (hi - lo);
    double qa = q_value(x, t, a, w, consts);
    double qb = q_value(x, t, b, w, consts);
    while (hi - lo > search.tolerance) {
        if (qa < qb) {
            lo = a;
            a = b;
            qa = qb;
            b = lo + inv_phi * (hi - lo);
            qb = q_value(x, t, b, w, consts);
        } else {
            hi = b;
            b = a;
            qb = qa;
            a = hi - inv_phi * (hi - lo);
            qa = q_value(x, t, a, w, consts);
        }
        // Guard against stalling once the bracket is at floating-point resolution.
        if (!(a < b)) break;
    }
    const double centre = 0.5 * (lo + hi);

    // Value comparisons only resolve the optimum to about sqrt(eps). Polish with one parabolic
    // step on a wide stencil, where the Q differences are well above rounding.
    const double h = 1e-2 * (search.hi - search.lo);
    const double q_minus = q_value(x, t, centre - h, w, consts);
    const double q_zero = q_value(x, t, centre, w, consts);
    const double q_plus = q_value(x, t, centre + h, w, consts);
    const double second = q_plus - 2.0 * q_zero + q_minus;
    if (!(second < 0.0)) return centre;
    const double polished = centre - 0.5 * h * (q_plus - q_minus) / second;
    if (!(polished >= search.lo && polished <= search.hi)) return centre;
    return std::abs(polished - centre) <= h ? polished : centre;
}

double greedy_action_state_derivative(TimeIndex t, const ProblemConstants& consts) {
    if (t == 2) return 0.0;
    if (t < 0 || t > 2) throw std::out_of_range("policy derivative requires t in {0, 1, 2}");
    const double gc = consts.gamma * consts.curvature(t + 1);
    return -gc / (gc + consts.k);
}

Policy::Policy(PolicyKind kind) : kind_(kind) {
    if (const auto* noisy = std::get_if<NoisyGreedy>(&kind_)) {
        if (!(noisy->noise_variance >= 0.0)) throw std::invalid_argument("noise variance must be nonnegative");
        noise_.emplace(noisy->seed);
    }
}

double Policy::act(double x, TimeIndex t, const CriticWeights& w, const ProblemConstants& consts) {
    return std::visit(
        overloaded{
            [&](const GreedyAnalytic&) { return greedy_action(x, t, w, consts); },
            [&](const GreedyNumeric& g) { return t == 2 ? 0.0 : greedy_action_numeric(x, t, w, consts, g); },
            [&](const NoisyGreedy& n) {
                const double a = greedy_action(x, t, w, consts);
                return t == 2 ? a : a + noise_->sample(n.noise_variance);
            },
            [&](const FixedActor& z) { return t == 0 ? z.z0 : t == 1 ? z.z1 : 0.0; },
        },
        kind_);
}

std::optional<double> Policy::state_derivative(TimeIndex t, const ProblemConstants& consts) const {
    if (std::holds_alternative<GreedyAnalytic>(kind_)) return greedy_action_state_derivative(t, consts);
    return std::nullopt;
}

Trajectory unroll(const Environment& env, double x0, Policy& policy, const CriticWeights& w,
                  const ProblemConstants& consts) {
    Trajectory traj;
    traj.has_policy_derivative = std::holds_alternative<GreedyAnalytic>(policy.kind());
    double x = x0;
    for (TimeIndex t = 0; t < env.horizon(); ++t) {
        const double a = policy.act(x, t, w, consts);
        auto& step = traj.steps[static_cast<std::size_t>(t)];
        step = {t, x, a, env.reward(x, t, a)};
        if (traj.has_policy_derivative) {
            traj.policy_dx[static_cast<std::size_t>(t)] = *policy.state_derivative(t, consts);
        }
        x = env.next_state(x, t, a);
    }
    traj.terminal_x = x;
    traj.total_reward = discounted_return(traj.steps, consts.gamma);
    return traj;
}

Trajectory unroll(double x0, Policy& policy, const CriticWeights& w, const ProblemConstants& consts) {
    const ThreeStepProblem env(consts.k);
    return unroll(env, x0, policy, w, consts);
}

}  // namespace vgl
