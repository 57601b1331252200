#include "acbond/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace acbond {

std::ostream& operator<<(std::ostream& os, IVec2 v) {
    return os << "(" << v.x << "," << v.y << ")";
}

int orient(IVec2 a, IVec2 b, IVec2 c) {
    __int128 cr = __int128(b.x - a.x) * (c.y - a.y) - __int128(b.y - a.y) * (c.x - a.x);
    return cr > 0 ? 1 : (cr < 0 ? -1 : 0);
}

int orient(IVec2 a, IVec2 b, const RVec2& c) {
    Rat cr = Rat(b.x - a.x) * (c.y - Rat(a.y)) - Rat(b.y - a.y) * (c.x - Rat(a.x));
    return cr > 0 ? 1 : (cr < 0 ? -1 : 0);
}

bool on_segment(IVec2 a, IVec2 b, const RVec2& q) {
    if (orient(a, b, q) != 0) return false;
    RVec2 ra(a), rb(b);
    return dot(q - ra, rb - ra) >= 0 && dot(q - rb, ra - rb) >= 0;
}

Polygon::Polygon(std::vector<IVec2> vertices) : v_(std::move(vertices)) {
    if (v_.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
    std::int64_t a2 = 0;
    for (std::size_t k = 0; k < v_.size(); ++k) a2 += cross(v_[k], v_[(k + 1) % v_.size()]);
    if (a2 == 0) throw std::invalid_argument("degenerate polygon");
    if (a2 < 0) {  // normalize to CCW
        std::reverse(v_.begin(), v_.end());
        a2 = -a2;
    }
    area2_ = a2;
}

void Polygon::validate() const {
    const std::size_t n = v_.size();
    for (std::size_t i = 0; i < n; ++i)
        if (v_[i] == v_[(i + 1) % n]) throw std::invalid_argument("repeated polygon vertex");
    // pairwise edge intersection check (exact); adjacent edges may share an endpoint only
    for (std::size_t i = 0; i < n; ++i) {
        IVec2 a = v_[i], b = v_[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            IVec2 c = v_[j], d = v_[(j + 1) % n];
            bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            int o1 = orient(a, b, c), o2 = orient(a, b, d);
            int o3 = orient(c, d, a), o4 = orient(c, d, b);
            bool crossing = (o1 * o2 < 0) && (o3 * o4 < 0);
            bool touching = (o1 == 0 && on_segment(a, b, RVec2(c))) ||
                            (o2 == 0 && on_segment(a, b, RVec2(d))) ||
                            (o3 == 0 && on_segment(c, d, RVec2(a))) ||
                            (o4 == 0 && on_segment(c, d, RVec2(b)));
            if (crossing || (!adjacent && touching))
                throw std::invalid_argument("self-intersecting polygon");
        }
    }
}

bool Polygon::is_convex() const {
    const std::size_t n = v_.size();
    for (std::size_t i = 0; i < n; ++i)
        if (orient(v_[i], v_[(i + 1) % n], v_[(i + 2) % n]) < 0) return false;
    return true;
}

PolygonLocation Polygon::locate(const RVec2& p) const {
    const std::size_t n = v_.size();
    for (std::size_t k = 0; k < n; ++k)
        if (RVec2(v_[k]) == p) return {PointLocus::OnVertex, -1, int(k)};
    for (std::size_t k = 0; k < n; ++k)
        if (on_segment(v_[k], v_[(k + 1) % n], p)) return {PointLocus::OnEdge, int(k), -1};
    // ray cast along +x with exact arithmetic
    bool inside = false;
    for (std::size_t k = 0; k < n; ++k) {
        IVec2 a = v_[k], b = v_[(k + 1) % n];
        bool a_above = Rat(a.y) > p.y;
        bool b_above = Rat(b.y) > p.y;
        if (a_above == b_above) continue;
        // x coordinate of the edge at height p.y
        Rat t = (p.y - Rat(a.y)) / Rat(b.y - a.y);
        Rat xi = Rat(a.x) + t * Rat(b.x - a.x);
        if (xi > p.x) inside = !inside;
    }
    return {inside ? PointLocus::Interior : PointLocus::Exterior, -1, -1};
}

double Polygon::interior_angle(std::size_t k) const {
    const std::size_t n = v_.size();
    IVec2 prev = v_[(k + n - 1) % n], cur = v_[k], next = v_[(k + 1) % n];
    Vec2 e1 = (next - cur).to_vec2();
    Vec2 e2 = (prev - cur).to_vec2();
    double ang = std::atan2(e1.x() * e2.y() - e1.y() * e2.x(), e1.dot(e2));
    if (ang <= 0) ang += 2.0 * M_PI;  // reflex corners
    return ang;
}

ChiValue chi_at_point(const Polygon& poly, const RVec2& p) {
    PolygonLocation loc = poly.locate(p);
    ChiValue out;
    out.locus = loc.locus;
    switch (loc.locus) {
        case PointLocus::Exterior:
            out.value = 0.0;
            out.exact_value = 0;
            break;
        case PointLocus::Interior:
            out.value = 1.0;
            out.exact_value = 1;
            break;
        case PointLocus::OnEdge:
            out.value = 0.5;
            out.exact_value = Rat(1, 2);
            break;
        case PointLocus::OnVertex:
            out.value = poly.interior_angle(std::size_t(loc.vertex)) / (2.0 * M_PI);
            out.exact = false;
            break;
    }
    return out;
}

Region::Region(Polygon outer, std::vector<Polygon> holes) {
    parts.push_back({std::move(outer), 1});
    for (auto& h : holes) parts.push_back({std::move(h), -1});
}

Rat Region::area2() const {
    Rat a = 0;
    for (const auto& part : parts) a += Rat(part.sign) * Rat(part.poly.area2());
    return a;
}

ChiValue Region::chi(const RVec2& p) const {
    ChiValue out;
    out.value = 0.0;
    out.exact_value = 0;
    out.locus = PointLocus::Exterior;
    for (const auto& part : parts) {
        ChiValue c = chi_at_point(part.poly, p);
        out.value += part.sign * c.value;
        if (!c.exact) out.exact = false;
        if (out.exact) out.exact_value += Rat(part.sign) * c.exact_value;
        // most specific locus wins: vertex > edge > interior
        if (c.locus == PointLocus::OnVertex)
            out.locus = PointLocus::OnVertex;
        else if (c.locus == PointLocus::OnEdge && out.locus != PointLocus::OnVertex)
            out.locus = PointLocus::OnEdge;
        else if (c.locus == PointLocus::Interior && out.locus == PointLocus::Exterior)
            out.locus = PointLocus::Interior;
    }
    if (!out.exact) out.exact_value = 0;
    return out;
}

Rat Region::chi_rational(const RVec2& p) const {
    ChiValue c = chi(p);
    if (!c.exact) throw std::domain_error("characteristic value queried at a polygon vertex");
    return c.exact_value;
}

}  // namespace acbond
