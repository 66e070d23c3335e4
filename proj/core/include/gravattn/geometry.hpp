#pragma once

#include <cmath>
#include <cstddef>

namespace gravattn {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

    friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
    friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
    friend constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
    friend constexpr Vec2 operator/(const Vec2& a, double s) { return {a.x / s, a.y / s}; }
    friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double norm_sq(const Vec2& a) { return dot(a, a); }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
inline double distance(const Vec2& a, const Vec2& b) { return norm(a - b); }

/// Raster dimensions in pixels.
struct Size {
    std::size_t width = 0;
    std::size_t height = 0;

    constexpr std::size_t area() const { return width * height; }
    friend constexpr bool operator==(const Size&, const Size&) = default;
};

/// Pixel centres sit on integer coordinates, so the retina is the closed
/// rectangle [0, width-1] x [0, height-1].
inline Vec2 clamp_to_retina(const Vec2& p, const Size& s) {
    auto clampd = [](double v, double hi) { return v < 0.0 ? 0.0 : (v > hi ? hi : v); };
    return {clampd(p.x, static_cast<double>(s.width) - 1.0),
            clampd(p.y, static_cast<double>(s.height) - 1.0)};
}

inline Vec2 retina_center(const Size& s) {
    return {(static_cast<double>(s.width) - 1.0) / 2.0, (static_cast<double>(s.height) - 1.0) / 2.0};
}

}  // namespace gravattn
