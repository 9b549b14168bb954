#pragma once

#include <cmath>
#include <ostream>

namespace vgl {

struct Vec2 {
    double v1 = 0.0;
    double v2 = 0.0;

    [[nodiscard]] double norm() const { return std::hypot(v1, v2); }

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.v1 + b.v1, a.v2 + b.v2}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.v1 - b.v1, a.v2 - b.v2}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.v1, s * a.v2}; }
    Vec2& operator+=(Vec2 o) {
        v1 += o.v1;
        v2 += o.v2;
        return *this;
    }
    friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Row-major 2x2 matrix [[m11, m12], [m21, m22]].
struct Matrix2 {
    double m11 = 0.0;
    double m12 = 0.0;
    double m21 = 0.0;
    double m22 = 0.0;

    static constexpr Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Matrix2 diagonal(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }

    [[nodiscard]] double trace() const { return m11 + m22; }
    [[nodiscard]] double determinant() const { return m11 * m22 - m12 * m21; }
    [[nodiscard]] Matrix2 transposed() const { return {m11, m21, m12, m22}; }
    [[nodiscard]] bool is_finite() const {
        return std::isfinite(m11) && std::isfinite(m12) && std::isfinite(m21) && std::isfinite(m22);
    }

    friend Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
        return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
                a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
    }
    friend Vec2 operator*(const Matrix2& a, Vec2 v) {
        return {a.m11 * v.v1 + a.m12 * v.v2, a.m21 * v.v1 + a.m22 * v.v2};
    }
    friend Matrix2 operator*(double s, const Matrix2& a) {
        return {s * a.m11, s * a.m12, s * a.m21, s * a.m22};
    }
    friend Matrix2 operator+(const Matrix2& a, const Matrix2& b) {
        return {a.m11 + b.m11, a.m12 + b.m12, a.m21 + b.m21, a.m22 + b.m22};
    }
    friend Matrix2 operator-(const Matrix2& a, const Matrix2& b) {
        return {a.m11 - b.m11, a.m12 - b.m12, a.m21 - b.m21, a.m22 - b.m22};
    }
    friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Matrix2& m) {
    return os << "[[" << m.m11 << ", " << m.m12 << "], [" << m.m21 << ", " << m.m22 << "]]";
}

inline std::ostream& operator<<(std::ostream& os, Vec2 v) {
    return os << "(" << v.v1 << ", " << v.v2 << ")";
}

}  // namespace vgl
