#pragma once

#include <cmath>

namespace csf {

/// Point or vector in the plane. Identified with a complex number x + iy where convenient.
struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2& operator+=(Vec2 o) noexcept { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) noexcept { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) noexcept { x *= s; y *= s; return *this; }

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator-(Vec2 a) noexcept { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) noexcept { return {s * a.x, s * a.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) noexcept { return {s * a.x, s * a.y}; }
    friend constexpr Vec2 operator/(Vec2 a, double s) noexcept { return {a.x / s, a.y / s}; }
    friend constexpr bool operator==(Vec2 a, Vec2 b) noexcept = default;
};

constexpr double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }

/// *(a ∧ b): the Hodge star of the wedge product, positive when b is anticlockwise of a.
constexpr double cross(Vec2 a, Vec2 b) noexcept { return a.x * b.y - a.y * b.x; }

inline double norm(Vec2 a) noexcept { return std::hypot(a.x, a.y); }

/// Anticlockwise quarter turn (the Hodge star on vectors).
constexpr Vec2 perp(Vec2 a) noexcept { return {-a.y, a.x}; }

inline Vec2 unit_from_angle(double angle) noexcept { return {std::cos(angle), std::sin(angle)}; }

inline double angle_of(Vec2 a) noexcept { return std::atan2(a.y, a.x); }

inline Vec2 rotate(Vec2 a, double angle) noexcept {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * a.x - s * a.y, s * a.x + c * a.y};
}

/// Signed angle from a to b in (-pi, pi].
inline double signed_angle(Vec2 a, Vec2 b) noexcept { return std::atan2(cross(a, b), dot(a, b)); }

}  // namespace csf
