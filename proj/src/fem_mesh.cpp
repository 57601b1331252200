/**
 * fem_mesh.cpp - mesh generators, exact point location and validation.
 */

#include "acbond/fem_mesh.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace acbond {

namespace {

constexpr std::array<IVec2, 6> kCorners = {IVec2{1, 0},  IVec2{1, 1},   IVec2{0, 1},
                                           IVec2{-1, 0}, IVec2{-1, -1}, IVec2{0, -1}};

std::uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (std::uint64_t(std::uint32_t(a)) << 32) | std::uint32_t(b);
}

std::uint64_t cell_key(std::int64_t cx, std::int64_t cy) {
    constexpr std::int64_t off = std::int64_t(1) << 24;
    return (std::uint64_t(std::uint32_t(cx + off)) << 32) | std::uint32_t(cy + off);
}

std::int64_t rat_floor(const Rat& q) {
    using boost::multiprecision::cpp_int;
    cpp_int num = boost::multiprecision::numerator(q);
    cpp_int den = boost::multiprecision::denominator(q);
    cpp_int f;
    if (num >= 0) {
        f = num / den;
    } else {
        f = -((-num + den - 1) / den);
    }
    return f.convert_to<std::int64_t>();
}

struct Builder {
    std::vector<IVec2> nodes;
    std::unordered_map<IVec2, int, IVec2Hash> index;
    std::vector<Triangulation::Tri> tris;

    int node(IVec2 p) {
        auto it = index.find(p);
        if (it != index.end()) return it->second;
        int id = int(nodes.size());
        nodes.push_back(p);
        index.emplace(p, id);
        return id;
    }
    void tri(IVec2 a, IVec2 b, IVec2 c) {
        if (cross(b - a, c - a) <= 0)
            throw std::runtime_error("mesh generator produced a degenerate or CW triangle");
        int ia = node(a), ib = node(b), ic = node(c);
        tris.push_back({{ia, ib, ic}});
    }
};

// zigzag strip between the ring-a and ring-b hexagon cycles (b > a >= 0);
// for b == a+1 this reproduces the two unit lattice triangles per cell
void add_band(Builder& bld, std::int64_t a, std::int64_t b) {
    for (int k = 0; k < 6; ++k) {
        IVec2 ca = hex_corner(k);
        IVec2 step = hex_corner(k + 1) - ca;
        auto inner = [&](std::int64_t i) { return a * ca + i * step; };
        auto outer = [&](std::int64_t j) { return b * ca + j * step; };
        std::int64_t i = 0, j = 0;
        while (i < a || j < b) {
            if (j < b && (i == a || (j + 1) * a <= (i + 1) * b)) {
                bld.tri(inner(i), outer(j), outer(j + 1));
                ++j;
            } else {
                bld.tri(inner(i), outer(j), inner(i + 1));
                ++i;
            }
        }
    }
}

// keep every unit lattice triangle whose centroid lies strictly inside the
// region; the exact area check in validate() rejects non-tileable regions
void add_unit_scan(Builder& bld, const Region& region) {
    std::int64_t xmin = std::numeric_limits<std::int64_t>::max(), xmax = std::numeric_limits<std::int64_t>::min();
    std::int64_t ymin = xmin, ymax = xmax;
    for (const auto& part : region.parts) {
        if (part.sign <= 0) continue;
        for (IVec2 v : part.poly.vertices()) {
            xmin = std::min(xmin, v.x);
            xmax = std::max(xmax, v.x);
            ymin = std::min(ymin, v.y);
            ymax = std::max(ymax, v.y);
        }
    }
    if (xmin >= xmax || ymin >= ymax) throw std::invalid_argument("empty region");
    for (std::int64_t x = xmin; x < xmax; ++x) {
        for (std::int64_t y = ymin; y < ymax; ++y) {
            IVec2 p{x, y}, q{x + 1, y}, r{x + 1, y + 1}, s{x, y + 1};
            RVec2 c_lower(Rat(3 * x + 2, 3), Rat(3 * y + 1, 3));
            RVec2 c_upper(Rat(3 * x + 1, 3), Rat(3 * y + 2, 3));
            if (region.chi_rational(c_lower) == 1) bld.tri(p, q, r);
            if (region.chi_rational(c_upper) == 1) bld.tri(p, r, s);
        }
    }
}

// strict angular order around the origin, zero direction along +x
bool angle_less(IVec2 u, IVec2 v) {
    auto half = [](IVec2 w) { return (w.y > 0 || (w.y == 0 && w.x > 0)) ? 0 : 1; };
    int hu = half(u), hv = half(v);
    if (hu != hv) return hu < hv;
    return cross(u, v) > 0;
}

// triangulate the annulus between a convex hole boundary and the ring-guard
// hexagon by an angular sweep, then insert every lattice site of the zone
void add_merge_zone(Builder& bld, const Polygon& hole, std::int64_t guard) {
    if (!hole.is_convex()) throw std::invalid_argument("interface merging needs a convex hole");
    std::vector<IVec2> inner = hole.vertices();
    if (!hole.contains_open(RVec2(IVec2{0, 0})))
        throw std::invalid_argument("hole must contain the origin");
    std::vector<IVec2> outer = ring_sites(guard);

    std::size_t best = 0;
    for (std::size_t k = 1; k < inner.size(); ++k)
        if (angle_less(inner[k], inner[best])) best = k;
    std::rotate(inner.begin(), inner.begin() + std::ptrdiff_t(best), inner.end());
    for (std::size_t k = 0; k + 1 < inner.size(); ++k)
        if (!angle_less(inner[k], inner[k + 1]))
            throw std::invalid_argument("hole vertices are not angularly ordered around the origin");

    struct Event {
        IVec2 p;
        bool outer;
    };
    std::vector<Event> events;
    events.reserve(inner.size() + outer.size());
    for (IVec2 p : inner) events.push_back({p, false});
    for (IVec2 p : outer) events.push_back({p, true});
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        if (angle_less(a.p, b.p)) return true;
        if (angle_less(b.p, a.p)) return false;
        if (a.outer != b.outer) return a.outer;
        return a.p < b.p;
    });

    std::vector<std::array<IVec2, 3>> zone;
    zone.reserve(events.size());
    IVec2 ci = inner.back();
    IVec2 co = outer.back();
    for (const Event& ev : events) {
        zone.push_back({ci, co, ev.p});
        (ev.outer ? co : ci) = ev.p;
    }

    // lattice sites strictly inside the zone or on the hole boundary become
    // nodes; located against the current zone triangles and split in
    std::vector<IVec2> cands;
    for (std::int64_t x = -(guard - 1); x <= guard - 1; ++x)
        for (std::int64_t y = -(guard - 1); y <= guard - 1; ++y)
            if (hex_ring({x, y}) <= guard - 1) cands.push_back({x, y});
    std::sort(cands.begin(), cands.end());

    for (IVec2 s : cands) {
        RVec2 sp((s));
        bool is_node = false;
        int inside_tri = -1;
        std::vector<std::pair<int, int>> on_edges;  // (zone tri, edge index)
        for (int t = 0; t < int(zone.size()); ++t) {
            const auto& T = zone[t];
            if (s == T[0] || s == T[1] || s == T[2]) {
                is_node = true;
                break;
            }
            int o0 = orient(T[0], T[1], sp);
            int o1 = orient(T[1], T[2], sp);
            int o2 = orient(T[2], T[0], sp);
            if (o0 < 0 || o1 < 0 || o2 < 0) continue;
            if (o0 > 0 && o1 > 0 && o2 > 0) {
                inside_tri = t;
                break;
            }
            on_edges.emplace_back(t, o0 == 0 ? 0 : (o1 == 0 ? 1 : 2));
        }
        if (is_node) continue;
        if (inside_tri >= 0) {
            auto T = zone[std::size_t(inside_tri)];
            zone[std::size_t(inside_tri)] = {T[0], T[1], s};
            zone.push_back({T[1], T[2], s});
            zone.push_back({T[2], T[0], s});
            continue;
        }
        for (auto [t, k] : on_edges) {
            auto T = zone[std::size_t(t)];
            IVec2 a = T[std::size_t(k)], b = T[(std::size_t(k) + 1) % 3], c = T[(std::size_t(k) + 2) % 3];
            zone[std::size_t(t)] = {a, s, c};
            zone.push_back({s, b, c});
        }
    }

    for (const auto& T : zone) bld.tri(T[0], T[1], T[2]);
}

// m for an origin-centered hexagon through the ring-m corners, else -1
std::int64_t detect_ring_hexagon(const Polygon& poly) {
    if (poly.size() != 6) return -1;
    std::int64_t m = hex_ring(poly.vertices()[0]);
    if (m <= 0) return -1;
    std::vector<IVec2> want, have = poly.vertices();
    for (int k = 0; k < 6; ++k) want.push_back(m * hex_corner(k));
    std::sort(want.begin(), want.end());
    std::sort(have.begin(), have.end());
    return want == have ? m : -1;
}

}  // namespace

IVec2 hex_corner(int k) { return kCorners[std::size_t(k % 6)]; }

Polygon ring_polygon(std::int64_t m) {
    if (m <= 0) throw std::invalid_argument("ring_polygon needs m >= 1");
    std::vector<IVec2> v;
    for (int k = 0; k < 6; ++k) v.push_back(m * hex_corner(k));
    return Polygon(std::move(v));
}

std::vector<IVec2> ring_sites(std::int64_t m) {
    if (m < 0) throw std::invalid_argument("ring_sites needs m >= 0");
    if (m == 0) return {IVec2{0, 0}};
    std::vector<IVec2> out;
    out.reserve(std::size_t(6 * m));
    for (int k = 0; k < 6; ++k) {
        IVec2 c = m * hex_corner(k);
        IVec2 step = hex_corner(k + 1) - hex_corner(k);
        for (std::int64_t j = 0; j < m; ++j) out.push_back(c + j * step);
    }
    return out;
}

void Triangulation::finalize() {
    node_index_.clear();
    edge_map_.clear();
    cell_tris_.clear();
    for (int i = 0; i < int(nodes.size()); ++i)
        if (!node_index_.emplace(nodes[i], i).second)
            throw std::runtime_error("duplicate mesh node");
    area2.assign(tris.size(), 0);
    tri_bbox_.assign(tris.size(), {});
    for (int t = 0; t < int(tris.size()); ++t) {
        const Tri& T = tris[std::size_t(t)];
        for (int k = 0; k < 3; ++k)
            if (T.v[k] < 0 || T.v[k] >= int(nodes.size()))
                throw std::runtime_error("triangle vertex out of range");
        IVec2 p0 = nodes[std::size_t(T.v[0])], p1 = nodes[std::size_t(T.v[1])], p2 = nodes[std::size_t(T.v[2])];
        std::int64_t a2 = cross(p1 - p0, p2 - p0);
        if (a2 <= 0) throw std::runtime_error("triangle is degenerate or CW");
        area2[std::size_t(t)] = a2;
        for (int k = 0; k < 3; ++k) {
            auto [it, fresh] = edge_map_.try_emplace(edge_key(T.v[k], T.v[(k + 1) % 3]),
                                                     std::pair<int, int>(-1, -1));
            (void)fresh;
            if (it->second.first < 0)
                it->second.first = t;
            else if (it->second.second < 0)
                it->second.second = t;
            else
                throw std::runtime_error("edge shared by more than two triangles");
        }
        BBox& bb = tri_bbox_[std::size_t(t)];
        bb.xmin = std::min({p0.x, p1.x, p2.x});
        bb.xmax = std::max({p0.x, p1.x, p2.x});
        bb.ymin = std::min({p0.y, p1.y, p2.y});
        bb.ymax = std::max({p0.y, p1.y, p2.y});
        for (std::int64_t cx = bb.xmin; cx <= bb.xmax; ++cx)
            for (std::int64_t cy = bb.ymin; cy <= bb.ymax; ++cy)
                cell_tris_[cell_key(cx, cy)].push_back(t);
    }
}

int Triangulation::locate(const RVec2& p) const {
    auto it = cell_tris_.find(cell_key(rat_floor(p.x), rat_floor(p.y)));
    if (it == cell_tris_.end()) return -1;
    for (int t : it->second) {
        const Tri& T = tris[std::size_t(t)];
        IVec2 p0 = nodes[std::size_t(T.v[0])], p1 = nodes[std::size_t(T.v[1])], p2 = nodes[std::size_t(T.v[2])];
        if (orient(p0, p1, p) >= 0 && orient(p1, p2, p) >= 0 && orient(p2, p0, p) >= 0) return t;
    }
    return -1;
}

std::array<Rat, 3> Triangulation::barycentric(int t, const RVec2& p) const {
    const Tri& T = tris[std::size_t(t)];
    RVec2 p0(nodes[std::size_t(T.v[0])]), p1(nodes[std::size_t(T.v[1])]), p2(nodes[std::size_t(T.v[2])]);
    Rat a2(area2[std::size_t(t)]);
    return {cross(p1 - p, p2 - p) / a2, cross(p2 - p, p0 - p) / a2, cross(p0 - p, p1 - p) / a2};
}

std::array<double, 3> Triangulation::direction_coeffs(int t, IVec2 r) const {
    const Tri& T = tris[std::size_t(t)];
    IVec2 p0 = nodes[std::size_t(T.v[0])], p1 = nodes[std::size_t(T.v[1])], p2 = nodes[std::size_t(T.v[2])];
    IVec2 e1 = p1 - p0, e2 = p2 - p0;
    double det = double(area2[std::size_t(t)]);
    double a = double(cross(r, e2)) / det;
    double b = double(cross(e1, r)) / det;
    return {-a - b, a, b};
}

std::vector<int> Triangulation::tris_near(IVec2 p, IVec2 d) const {
    IVec2 q = p + d;
    std::vector<int> out;
    for (std::int64_t cx = std::min(p.x, q.x) - 1; cx <= std::max(p.x, q.x); ++cx)
        for (std::int64_t cy = std::min(p.y, q.y) - 1; cy <= std::max(p.y, q.y); ++cy) {
            auto it = cell_tris_.find(cell_key(cx, cy));
            if (it == cell_tris_.end()) continue;
            out.insert(out.end(), it->second.begin(), it->second.end());
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::pair<int, int> Triangulation::edge_tris(int a, int b) const {
    auto it = edge_map_.find(edge_key(a, b));
    if (it == edge_map_.end()) return {-1, -1};
    return it->second;
}

bool Triangulation::is_boundary_edge(int a, int b) const {
    auto [t1, t2] = edge_tris(a, b);
    return t1 >= 0 && t2 < 0;
}

void Triangulation::validate() const {
    if (nodes.empty() || tris.empty()) throw std::runtime_error("empty mesh");

    std::unordered_map<std::uint64_t, int> directed;
    for (const Tri& T : tris)
        for (int k = 0; k < 3; ++k) {
            std::uint64_t key = (std::uint64_t(std::uint32_t(T.v[k])) << 32) | std::uint32_t(T.v[(k + 1) % 3]);
            if (++directed[key] > 1) throw std::runtime_error("fold: directed edge used twice");
        }

    for (const auto& [key, ts] : edge_map_) {
        if (ts.second >= 0) continue;  // interior edge: opposite directions guaranteed above
        int a = int(key >> 32), b = int(key & 0xffffffffu);
        RVec2 na((nodes[std::size_t(a)])), nb((nodes[std::size_t(b)]));
        bool on_boundary = false;
        for (const auto& part : region.parts) {
            const auto& vs = part.poly.vertices();
            for (std::size_t k = 0; k < vs.size() && !on_boundary; ++k) {
                IVec2 A = vs[k], B = vs[(k + 1) % vs.size()];
                if (on_segment(A, B, na) && on_segment(A, B, nb)) on_boundary = true;
            }
            if (on_boundary) break;
        }
        if (!on_boundary) throw std::runtime_error("boundary edge not on the region boundary");
    }

    Rat total(0);
    for (std::int64_t a2 : area2) total += Rat(a2);
    if (total != region.area2()) throw std::runtime_error("mesh area does not match the region area");

    for (const auto& part : region.parts)
        for (IVec2 v : part.poly.vertices())
            if (node_index_.find(v) == node_index_.end())
                throw std::runtime_error("region corner is not a mesh node");

    for (IVec2 n : nodes) {
        ChiValue c = region.chi(RVec2(n));
        if (c.value <= 0.0) throw std::runtime_error("mesh node outside the region");
    }
}

void Triangulation::dump(std::ostream& os) const {
    for (IVec2 n : nodes) os << "n " << n.x << ' ' << n.y << '\n';
    for (const Tri& T : tris) os << "t " << T.v[0] << ' ' << T.v[1] << ' ' << T.v[2] << '\n';
}

Triangulation build_mesh(const Region& omega_c, const MeshParams& params) {
    Builder bld;
    if (omega_c.parts.size() == 1) {
        if (params.grading == Grading::Graded)
            throw std::invalid_argument("graded meshes are only built for annular regions");
        add_unit_scan(bld, omega_c);
    } else if (omega_c.parts.size() == 2 && omega_c.parts[0].sign == 1 && omega_c.parts[1].sign == -1) {
        const Polygon& outer = omega_c.parts[0].poly;
        const Polygon& hole = omega_c.parts[1].poly;
        std::int64_t a_out = detect_ring_hexagon(outer);
        if (a_out < 0)
            throw std::invalid_argument("annular meshing needs an origin-centered hexagonal outer boundary");
        std::int64_t m = detect_ring_hexagon(hole);
        if (m < 0) {
            std::int64_t g = 0;
            for (IVec2 v : hole.vertices()) g = std::max(g, hex_ring(v));
            m = g + 1;
            if (m >= a_out) throw std::invalid_argument("hole leaves no room for the annulus mesh");
            add_merge_zone(bld, hole, m);
        }
        if (params.grading == Grading::FullyRefined) {
            for (; m < a_out; ++m) add_band(bld, m, m + 1);
        } else {
            if (params.band_width < 1) throw std::invalid_argument("band_width must be positive");
            std::int64_t w = params.band_width;
            for (std::int64_t t = 0; t < w && m < a_out; ++t, ++m) add_band(bld, m, m + 1);
            std::int64_t h = 2;
            while (m + w < a_out) {
                std::int64_t hh = std::min(h, a_out - w - m);
                add_band(bld, m, m + hh);
                m += hh;
                h *= 2;
            }
            for (; m < a_out; ++m) add_band(bld, m, m + 1);
        }
    } else {
        throw std::invalid_argument("unsupported region shape for meshing");
    }

    Triangulation mesh;
    mesh.nodes = std::move(bld.nodes);
    mesh.tris = std::move(bld.tris);
    mesh.region = omega_c;
    mesh.finalize();
    mesh.validate();
    return mesh;
}

}  // namespace acbond
