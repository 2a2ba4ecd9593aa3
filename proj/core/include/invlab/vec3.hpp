#pragma once

#include <cmath>
#include <ostream>

namespace invlab
{

/// Cartesian 3-vector. Units are carried by context (length, velocity, force).
struct Vec3
{
    double x{0};
    double y{0};
    double z{0};

    constexpr Vec3& operator+=(Vec3 const& o)
    {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr Vec3& operator-=(Vec3 const& o)
    {
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    constexpr Vec3& operator*=(double s)
    {
        x *= s;
        y *= s;
        z *= s;
        return *this;
    }

    friend constexpr bool operator==(Vec3 const&, Vec3 const&) = default;
};

constexpr Vec3 operator+(Vec3 a, Vec3 const& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, Vec3 const& b) { return a -= b; }
constexpr Vec3 operator-(Vec3 const& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator/(Vec3 const& a, double s) { return {a.x / s, a.y / s, a.z / s}; }

constexpr double dot(Vec3 const& a, Vec3 const& b)
{
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

/// Right-handed vector product; zero whenever the operands are collinear.
constexpr Vec3 cross(Vec3 const& a, Vec3 const& b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(Vec3 const& a) { return std::hypot(a.x, a.y, a.z); }
constexpr double norm_squared(Vec3 const& a) { return dot(a, a); }

inline bool is_finite(Vec3 const& a)
{
    return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

inline std::ostream& operator<<(std::ostream& os, Vec3 const& v)
{
    return os << '(' << v.x << ", " << v.y << ", " << v.z << ')';
}

}  // namespace invlab
