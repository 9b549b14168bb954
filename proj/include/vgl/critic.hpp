#pragma once

#include <array>

#include "vgl/env.hpp"
#include "vgl/matrix2.hpp"

namespace vgl {

/// Weight-space vector of the four-weight critic (used for weights and for updates).
using Vec4 = std::array<double, 4>;

inline Vec4 operator+(const Vec4& a, const Vec4& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}
inline Vec4 operator*(double s, const Vec4& a) { return {s * a[0], s * a[1], s * a[2], s * a[3]}; }

/**
 * Weights of the quadratic critic
 *
 *   V(x, 1) = -c1 x^2 + w1 x + w3
 *   V(x, 2) = -c2 x^2 + w2 x + w4
 *   V(x, t) = 0 for t in {0, 3}
 *
 * w3 and w4 never enter the critic gradient, so value-gradient updates leave them fixed.
 */
struct CriticWeights {
    double w1 = 0.0;
    double w2 = 0.0;
    double w3 = 0.0;
    double w4 = 0.0;

    [[nodiscard]] Vec4 as_vec() const { return {w1, w2, w3, w4}; }
    static CriticWeights from_vec(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

    /// Slope weight paired with step t (w1 for t=1, w2 for t=2).
    [[nodiscard]] double slope(TimeIndex t) const;

    [[nodiscard]] Vec2 shortened() const { return {w1, w2}; }

    friend bool operator==(const CriticWeights&, const CriticWeights&) = default;
};

/// Derivatives of the critic value and the critic gradient with respect to the four weights.
struct CriticWeightJacobians {
    Vec4 dV_dw{};
    Vec4 dG_dw{};
};

[[nodiscard]] double critic_value(double x, TimeIndex t, const CriticWeights& w,
                                  const ProblemConstants& consts);

/// dV/dx: -2 c_t x + w_t for t in {1, 2}, zero otherwise.
[[nodiscard]] double critic_gradient(double x, TimeIndex t, const CriticWeights& w,
                                     const ProblemConstants& consts);

/// Second derivative of the critic in x.
[[nodiscard]] double critic_curvature(TimeIndex t, const ProblemConstants& consts);

[[nodiscard]] CriticWeightJacobians critic_weight_jacobians(double x, TimeIndex t);

/**
 * Builds critic weights from the reparametrisation (w1, w2) = F p. The bias weights are
 * carried through unchanged. Logs a warning when F is numerically singular.
 */
[[nodiscard]] CriticWeights apply_reparam(const Matrix2& F, Vec2 p, Vec2 bias = {});

/// Maps a weight-space update of (w1, w2) into p-space through the chain rule dw/dp = F^T.
[[nodiscard]] inline Vec2 pull_back(const Matrix2& F, Vec2 dw) { return F.transposed() * dw; }

}  // namespace vgl
