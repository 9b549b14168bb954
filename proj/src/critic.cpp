#include "vgl/critic.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

namespace vgl {

namespace {

void require_critic_step(TimeIndex t) {
    if (t < 0 || t > kHorizon) {
        throw std::out_of_range("critic is undefined at time index " + std::to_string(t));
    }
}

bool has_critic_terms(TimeIndex t) { return t == 1 || t == 2; }

}  // namespace

double CriticWeights::slope(TimeIndex t) const {
    if (t == 1) return w1;
    if (t == 2) return w2;
    throw std::out_of_range("critic slope weight only exists for t=1 and t=2");
}

double critic_value(double x, TimeIndex t, const CriticWeights& w, const ProblemConstants& consts) {
    require_critic_step(t);
    if (t == 1) return -consts.c1 * x * x + w.w1 * x + w.w3;
    if (t == 2) return -consts.c2 * x * x + w.w2 * x + w.w4;
    return 0.0;
}

double critic_gradient(double x, TimeIndex t, const CriticWeights& w, const ProblemConstants& consts) {
    require_critic_step(t);
    if (!has_critic_terms(t)) return 0.0;
    return -2.0 * consts.curvature(t) * x + w.slope(t);
}

double critic_curvature(TimeIndex t, const ProblemConstants& consts) {
    require_critic_step(t);
    return has_critic_terms(t) ? -2.0 * consts.curvature(t) : 0.0;
}

CriticWeightJacobians critic_weight_jacobians(double x, TimeIndex t) {
    require_critic_step(t);
    CriticWeightJacobians j;
    if (t == 1) {
        j.dV_dw = {x, 0.0, 1.0, 0.0};
        j.dG_dw = {1.0, 0.0, 0.0, 0.0};
    } else if (t == 2) {
        j.dV_dw = {0.0, x, 0.0, 1.0};
        j.dG_dw = {0.0, 1.0, 0.0, 0.0};
    }
    return j;
}

CriticWeights apply_reparam(const Matrix2& F, Vec2 p, Vec2 bias) {
    if (std::abs(F.determinant()) < 1e-12) {
        std::clog << "warning: reparametrisation matrix F is numerically singular (det="
                  << F.determinant() << ")\n";
    }
    const Vec2 w = F * p;
    return {w.v1, w.v2, bias.v1, bias.v2};
}

}  // namespace vgl
