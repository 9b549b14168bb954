#include "vgl/env.hpp"

#include <stdexcept>
#include <string>

namespace vgl {

namespace {

void require_action_step(TimeIndex t) {
    if (t < 0 || t > 2) {
        throw std::out_of_range("time index " + std::to_string(t) +
                                " is not a non-terminal step (expected 0, 1 or 2)");
    }
}

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

double ProblemConstants::curvature(TimeIndex t) const {
    if (t == 1) return c1;
    if (t == 2) return c2;
    throw std::out_of_range("critic curvature is only defined at t=1 and t=2, got t=" +
                            std::to_string(t));
}

void ProblemConstants::validate() const {
    if (!(c1 > 0.0)) throw std::invalid_argument("c1 must be positive");
    if (!(c2 > 0.0)) throw std::invalid_argument("c2 must be positive");
    if (!(k > 0.0)) throw std::invalid_argument("k must be positive");
    if (!in_unit_interval(gamma)) throw std::invalid_argument("gamma must lie in [0, 1]");
    if (!in_unit_interval(lambda)) throw std::invalid_argument("lambda must lie in [0, 1]");
}

double Trajectory::state(TimeIndex t) const {
    if (t == kHorizon) return terminal_x;
    if (t < 0 || t > kHorizon) throw std::out_of_range("trajectory time index out of range");
    return steps[static_cast<std::size_t>(t)].x;
}

double model_step(double x, TimeIndex t, double a) {
    require_action_step(t);
    return t < 2 ? x + a : x;
}

double reward_step(double x, TimeIndex t, double a, double k) {
    require_action_step(t);
    return t < 2 ? -k * a * a : -x * x;
}

ModelJacobians model_jacobians(double x, TimeIndex t, double a, double k) {
    require_action_step(t);
    if (t < 2) return {1.0, 1.0, 0.0, -2.0 * k * a};
    return {1.0, 0.0, -2.0 * x, 0.0};
}

double discounted_return(const std::array<Step, kHorizon>& steps, double gamma) {
    double total = 0.0;
    double discount = 1.0;
    for (const Step& s : steps) {
        total += discount * s.r;
        discount *= gamma;
    }
    return total;
}

ThreeStepProblem::ThreeStepProblem(double k) : k_(k) {
    if (!(k > 0.0)) throw std::invalid_argument("k must be positive");
}

double ThreeStepProblem::next_state(double x, TimeIndex t, double a) const {
    return model_step(x, t, a);
}

double ThreeStepProblem::reward(double x, TimeIndex t, double a) const {
    return reward_step(x, t, a, k_);
}

ModelJacobians ThreeStepProblem::jacobians(double x, TimeIndex t, double a) const {
    return model_jacobians(x, t, a, k_);
}

ModelCurvature ThreeStepProblem::curvature(double /*x*/, TimeIndex t, double /*a*/) const {
    require_action_step(t);
    return {t < 2 ? -2.0 * k_ : 0.0};
}

}  // namespace vgl
