#pragma once
/**
 * vec.hpp - Small value types shared across the library.
 *
 * Lattice geometry lives in index space: sites are integer vectors i in Z^2
 * and only the lattice matrix A converts them to physical coordinates.
 * IVec2 is the exact integer type used for sites, bond directions and
 * polygon vertices; Eigen supplies the floating-point types.
 */

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <iosfwd>

namespace acbond {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

struct IVec2 {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend IVec2 operator+(IVec2 a, IVec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend IVec2 operator-(IVec2 a, IVec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend IVec2 operator*(std::int64_t s, IVec2 a) { return {s * a.x, s * a.y}; }
    IVec2 operator-() const { return {-x, -y}; }
    friend bool operator==(IVec2 a, IVec2 b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(IVec2 a, IVec2 b) { return !(a == b); }
    // lexicographic, used for deterministic orderings
    friend bool operator<(IVec2 a, IVec2 b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    }

    Vec2 to_vec2() const { return Vec2(double(x), double(y)); }
};

inline std::int64_t cross(IVec2 a, IVec2 b) { return a.x * b.y - a.y * b.x; }
inline std::int64_t dot(IVec2 a, IVec2 b) { return a.x * b.x + a.y * b.y; }

// Hex-lattice ring index of a site (rings of the triangular lattice whose
// nearest-neighbor index directions are +-(1,0), +-(0,1), +-(1,1)).
inline std::int64_t hex_ring(IVec2 v) {
    std::int64_t a = v.x < 0 ? -v.x : v.x;
    std::int64_t b = v.y < 0 ? -v.y : v.y;
    std::int64_t c = v.x - v.y;
    if (c < 0) c = -c;
    return (a + b + c) / 2;
}

std::ostream& operator<<(std::ostream& os, IVec2 v);

struct IVec2Hash {
    std::size_t operator()(IVec2 v) const {
        std::size_t h = std::hash<std::int64_t>()(v.x);
        return h ^ (std::hash<std::int64_t>()(v.y) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    }
};

}  // namespace acbond
