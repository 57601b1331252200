#pragma once
/**
 * rational.hpp - Exact rational arithmetic for bond geometry.
 *
 * All segment clipping, characteristic-function averages and effective-area
 * bookkeeping is exact; floating point enters only when assembled weights are
 * handed to the energy evaluators.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include "acbond/vec.hpp"

namespace acbond {

using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& q) { return q.convert_to<double>(); }

inline Rat rat(std::int64_t num, std::int64_t den = 1) { return Rat(num, den); }

// Exact point in the index plane, typically i + t*r with rational t.
struct RVec2 {
    Rat x, y;

    RVec2() = default;
    RVec2(Rat px, Rat py) : x(std::move(px)), y(std::move(py)) {}
    RVec2(IVec2 v) : x(v.x), y(v.y) {}

    friend RVec2 operator+(const RVec2& a, const RVec2& b) { return {a.x + b.x, a.y + b.y}; }
    friend RVec2 operator-(const RVec2& a, const RVec2& b) { return {a.x - b.x, a.y - b.y}; }
    friend RVec2 operator*(const Rat& s, const RVec2& a) { return {s * a.x, s * a.y}; }
    friend bool operator==(const RVec2& a, const RVec2& b) { return a.x == b.x && a.y == b.y; }

    Vec2 to_vec2() const { return Vec2(to_double(x), to_double(y)); }
    bool is_lattice() const {
        return boost::multiprecision::denominator(x) == 1 && boost::multiprecision::denominator(y) == 1;
    }
    IVec2 to_ivec2() const {  // valid only when is_lattice()
        return {boost::multiprecision::numerator(x).convert_to<std::int64_t>(),
                boost::multiprecision::numerator(y).convert_to<std::int64_t>()};
    }
};

inline Rat cross(const RVec2& a, const RVec2& b) { return a.x * b.y - a.y * b.x; }
inline Rat dot(const RVec2& a, const RVec2& b) { return a.x * b.x + a.y * b.y; }

// Point on the segment p + t*dir for rational t.
inline RVec2 point_on(IVec2 p, IVec2 dir, const Rat& t) {
    return RVec2(Rat(p.x) + t * Rat(dir.x), Rat(p.y) + t * Rat(dir.y));
}

}  // namespace acbond
