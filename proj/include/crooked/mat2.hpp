#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace crooked {

using Complex = std::complex<double>;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    double norm() const { return std::hypot(x, y); }
};

constexpr double det(const Vec2& u, const Vec2& v) { return u.x * v.y - u.y * v.x; }
constexpr double dot(const Vec2& u, const Vec2& v) { return u.x * v.x + u.y * v.y; }

// Row-major 2x2 real matrix [[a, b], [c, d]].
struct Mat2 {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
    double d = 1.0;

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Mat2 zero() { return {0.0, 0.0, 0.0, 0.0}; }
    static constexpr Mat2 diag(double p, double q) { return {p, 0.0, 0.0, q}; }

    constexpr double trace() const { return a + d; }
    constexpr double det() const { return a * d - b * c; }
    double frobenius() const { return std::sqrt(a * a + b * b + c * c + d * d); }

    constexpr Mat2 adjugate() const { return {d, -b, -c, a}; }
    constexpr Mat2 transpose() const { return {a, c, b, d}; }

    constexpr Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    constexpr Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    constexpr Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    constexpr Mat2 operator-() const { return {-a, -b, -c, -d}; }
    constexpr Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
    constexpr Vec2 operator*(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }

    constexpr std::array<double, 4> entries() const { return {a, b, c, d}; }
};

constexpr Mat2 operator*(double s, const Mat2& m) { return m * s; }

// Matrix whose columns are u and v.
constexpr Mat2 from_columns(const Vec2& u, const Vec2& v) { return {u.x, v.x, u.y, v.y}; }

// exp(Y) for traceless Y, using Y^2 = -det(Y) I.
inline Mat2 exp_traceless(const Mat2& y) {
    const double q = -y.det();
    double even = 0.0;
    double odd = 0.0;
    if (std::abs(q) < 1e-4) {
        even = 1.0 + q / 2.0 * (1.0 + q / 12.0 * (1.0 + q / 30.0 * (1.0 + q / 56.0)));
        odd = 1.0 + q / 6.0 * (1.0 + q / 20.0 * (1.0 + q / 42.0 * (1.0 + q / 72.0)));
    } else if (q > 0.0) {
        const double r = std::sqrt(q);
        even = std::cosh(r);
        odd = std::sinh(r) / r;
    } else {
        const double r = std::sqrt(-q);
        even = std::cos(r);
        odd = std::sin(r) / r;
    }
    return Mat2::identity() * even + y * odd;
}

// Largest absolute entry of m - n.
inline double max_abs_diff(const Mat2& m, const Mat2& n) {
    const auto e = (m - n).entries();
    double out = 0.0;
    for (double x : e) out = std::max(out, std::abs(x));
    return out;
}

}  // namespace crooked
