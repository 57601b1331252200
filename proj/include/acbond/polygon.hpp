#pragma once
/**
 * polygon.hpp - Exact polygonal regions in the index plane.
 *
 * A Region is a signed union of simple lattice polygons (outer boundaries
 * carry +1, holes -1), which is enough to describe the continuum region, the
 * atomistic region and their complements used by the coupling energies. The
 * pointwise characteristic function follows the volumetric-density
 * convention: 1 inside, 1/2 on an edge, interior-angle fraction at a vertex,
 * 0 outside.
 */

#include <cstdint>
#include <optional>
#include <vector>

#include "acbond/rational.hpp"
#include "acbond/vec.hpp"

namespace acbond {

enum class PointLocus { Exterior, Interior, OnEdge, OnVertex };

struct PolygonLocation {
    PointLocus locus = PointLocus::Exterior;
    int edge = -1;    // index of the containing edge when OnEdge
    int vertex = -1;  // index of the coincident vertex when OnVertex
};

struct ChiValue {
    double value = 0.0;             // always valid
    PointLocus locus = PointLocus::Exterior;
    bool exact = true;              // true unless a vertex angle is involved
    Rat exact_value = Rat(0);       // valid when exact
};

class Polygon {
public:
    Polygon() = default;
    explicit Polygon(std::vector<IVec2> vertices);

    const std::vector<IVec2>& vertices() const { return v_; }
    std::size_t size() const { return v_.size(); }
    IVec2 vertex(std::size_t k) const { return v_[k % v_.size()]; }

    // twice the (positive) enclosed area
    std::int64_t area2() const { return area2_; }

    PolygonLocation locate(const RVec2& p) const;
    bool contains_open(const RVec2& p) const {  // strictly inside
        return locate(p).locus == PointLocus::Interior;
    }
    bool contains_closed(const RVec2& p) const {
        return locate(p).locus != PointLocus::Exterior;
    }

    // interior angle (radians) at vertex k
    double interior_angle(std::size_t k) const;

    // throws on degenerate or self-intersecting input
    void validate() const;

    bool is_convex() const;

private:
    std::vector<IVec2> v_;  // CCW
    std::int64_t area2_ = 0;
};

struct Region {
    struct Part {
        Polygon poly;
        int sign = 1;  // +1 outer material, -1 hole
    };
    std::vector<Part> parts;

    Region() = default;
    explicit Region(Polygon outer) { parts.push_back({std::move(outer), 1}); }
    Region(Polygon outer, std::vector<Polygon> holes);

    Rat area2() const;

    ChiValue chi(const RVec2& p) const;
    // characteristic value away from vertices; throws if p sits on a vertex
    Rat chi_rational(const RVec2& p) const;
};

// sign of the cross product (b-a) x (c-a); >0 left turn, <0 right, 0 collinear
int orient(IVec2 a, IVec2 b, IVec2 c);
int orient(IVec2 a, IVec2 b, const RVec2& c);

// is q on the closed segment [a,b]?
bool on_segment(IVec2 a, IVec2 b, const RVec2& q);

// characteristic function of a single simple polygon
ChiValue chi_at_point(const Polygon& poly, const RVec2& p);

}  // namespace acbond
