#pragma once

#include <array>
#include <cmath>
#include <iosfwd>

namespace lsurf {

/// Point/vector of the pseudo-Euclidean space E^4_2 with metric
/// g0 = dx1^2 + dx2^2 - dx3^2 - dx4^2.
struct Vec4 {
    double x1 = 0.0, x2 = 0.0, x3 = 0.0, x4 = 0.0;

    Vec4() = default;
    Vec4(double a, double b, double c, double d) : x1(a), x2(b), x3(c), x4(d) {}

    double operator[](int i) const { return (&x1)[i]; }
    double& operator[](int i) { return (&x1)[i]; }

    Vec4 operator+(const Vec4& o) const { return {x1 + o.x1, x2 + o.x2, x3 + o.x3, x4 + o.x4}; }
    Vec4 operator-(const Vec4& o) const { return {x1 - o.x1, x2 - o.x2, x3 - o.x3, x4 - o.x4}; }
    Vec4 operator-() const { return {-x1, -x2, -x3, -x4}; }
    Vec4 operator*(double s) const { return {s * x1, s * x2, s * x3, s * x4}; }
    Vec4 operator/(double s) const { return {x1 / s, x2 / s, x3 / s, x4 / s}; }
    Vec4& operator+=(const Vec4& o) { x1 += o.x1; x2 += o.x2; x3 += o.x3; x4 += o.x4; return *this; }
    Vec4& operator-=(const Vec4& o) { x1 -= o.x1; x2 -= o.x2; x3 -= o.x3; x4 -= o.x4; return *this; }

    /// Max-norm of the components (Euclidean gauge, used for zero tests).
    double max_abs() const {
        return std::max(std::max(std::abs(x1), std::abs(x2)), std::max(std::abs(x3), std::abs(x4)));
    }

    /// Euclidean norm of the components.
    double euclid_norm() const { return std::sqrt(x1 * x1 + x2 * x2 + x3 * x3 + x4 * x4); }
};

inline Vec4 operator*(double s, const Vec4& v) { return v * s; }

/// Metric signs of g0: (+,+,-,-).
inline double metric_sign(int i) { return i < 2 ? 1.0 : -1.0; }

/// Indefinite inner product <a,b> = a1 b1 + a2 b2 - a3 b3 - a4 b4.
inline double inner(const Vec4& a, const Vec4& b) {
    return a.x1 * b.x1 + a.x2 * b.x2 - a.x3 * b.x3 - a.x4 * b.x4;
}

enum class Causal { Spacelike, Timelike, Lightlike, Zero };

const char* causal_name(Causal c);

inline constexpr double kCausalTol = 1e-9;

/// Causal classification; the lightlike test precedes the sign test so that
/// near-null vectors are not misclassified by rounding.
inline Causal causal_character(const Vec4& v, double tol = kCausalTol) {
    if (v.max_abs() <= tol) return Causal::Zero;
    const double q = inner(v, v);
    if (std::abs(q) <= tol) return Causal::Lightlike;
    return q > 0 ? Causal::Spacelike : Causal::Timelike;
}

std::ostream& operator<<(std::ostream& os, const Vec4& v);

}  // namespace lsurf
