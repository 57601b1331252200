/**
 * bond_geometry.cpp
 */

#include "acbond/bond_geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace acbond {

namespace {

// parameters t in [0,1] where segment p + t*dir meets the closed edge [A,B];
// collinear overlaps contribute both overlap endpoints
void edge_contacts(IVec2 p, IVec2 dir, IVec2 A, IVec2 B, std::vector<Rat>& out) {
    IVec2 e = B - A;
    IVec2 m = A - p;
    std::int64_t D = cross(dir, e);
    if (D != 0) {
        Rat t = Rat(cross(m, e)) / Rat(D);
        Rat s = Rat(cross(m, dir)) / Rat(D);
        if (t >= 0 && t <= 1 && s >= 0 && s <= 1) out.push_back(t);
        return;
    }
    if (cross(m, dir) != 0) return;  // parallel, not collinear
    std::int64_t dd = dot(dir, dir);
    Rat ta = Rat(dot(m, dir)) / Rat(dd);
    Rat tb = Rat(dot(B - p, dir)) / Rat(dd);
    if (ta > tb) std::swap(ta, tb);
    Rat lo = ta < 0 ? Rat(0) : ta;
    Rat hi = tb > 1 ? Rat(1) : tb;
    if (lo <= hi) {
        out.push_back(lo);
        out.push_back(hi);
    }
}

std::vector<Rat> region_contacts(IVec2 p, IVec2 dir, const Region& region) {
    std::vector<Rat> ts;
    for (const auto& part : region.parts) {
        const auto& vs = part.poly.vertices();
        for (std::size_t k = 0; k < vs.size(); ++k)
            edge_contacts(p, dir, vs[k], vs[(k + 1) % vs.size()], ts);
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

}  // namespace

bool BondPartition::has_interior_contact() const {
    for (const Rat& t : contacts)
        if (t > 0 && t < 1) return true;
    return false;
}

bool BondPartition::runs_along_boundary() const {
    for (const Piece& pc : pieces)
        if (pc.w > 0 && pc.w < 1) return true;
    return false;
}

BondPartition partition_bond(IVec2 p, IVec2 dir, const Region& region) {
    if (dir == IVec2{0, 0}) throw std::invalid_argument("bond direction must be nonzero");
    BondPartition out;
    out.contacts = region_contacts(p, dir, region);

    std::vector<Rat> cuts;
    cuts.push_back(Rat(0));
    for (const Rat& t : out.contacts)
        if (t > 0 && t < 1) cuts.push_back(t);
    cuts.push_back(Rat(1));

    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        Rat mid = (cuts[k] + cuts[k + 1]) / 2;
        Rat w = region.chi_rational(point_on(p, dir, mid));
        if (!out.pieces.empty() && out.pieces.back().w == w)
            out.pieces.back().t1 = cuts[k + 1];
        else
            out.pieces.push_back({cuts[k], cuts[k + 1], w});
    }
    return out;
}

Rat bond_average_chi(IVec2 p, IVec2 dir, const Region& region) {
    Rat sum(0);
    for (const auto& pc : partition_bond(p, dir, region).pieces) sum += (pc.t1 - pc.t0) * pc.w;
    return sum;
}

bool bond_meets_closure(IVec2 p, IVec2 dir, const Region& region) {
    BondPartition part = partition_bond(p, dir, region);
    if (!part.contacts.empty()) return true;
    for (const auto& pc : part.pieces)
        if (pc.w > 0) return true;
    return false;
}

Rat bond_average_chi_tri(IVec2 p, IVec2 dir, IVec2 a, IVec2 b, IVec2 c) {
    std::vector<Rat> ts;
    edge_contacts(p, dir, a, b, ts);
    edge_contacts(p, dir, b, c, ts);
    edge_contacts(p, dir, c, a, ts);
    ts.push_back(Rat(0));
    ts.push_back(Rat(1));
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    while (!ts.empty() && ts.front() < 0) ts.erase(ts.begin());
    while (!ts.empty() && ts.back() > 1) ts.pop_back();

    Rat sum(0);
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        RVec2 mid = point_on(p, dir, (ts[k] + ts[k + 1]) / 2);
        int o0 = orient(a, b, mid), o1 = orient(b, c, mid), o2 = orient(c, a, mid);
        if (o0 < 0 || o1 < 0 || o2 < 0) continue;
        int zeros = (o0 == 0) + (o1 == 0) + (o2 == 0);
        Rat w = zeros == 0 ? Rat(1) : Rat(1, 2);  // midpoints never sit on a vertex
        sum += (ts[k + 1] - ts[k]) * w;
    }
    return sum;
}

std::vector<std::vector<Rat>> effective_areas(const Triangulation& mesh,
                                              const std::vector<IVec2>& dirs,
                                              const std::vector<std::pair<IVec2, int>>& bonds) {
    std::vector<std::vector<Rat>> omega(mesh.tris.size());
    for (std::size_t t = 0; t < mesh.tris.size(); ++t)
        omega[t].assign(dirs.size(), Rat(mesh.area2[t], 2));

    for (const auto& [tail, d] : bonds) {
        IVec2 dir = dirs[std::size_t(d)];
        for (int t : mesh.tris_near(tail, dir)) {
            const auto& T = mesh.tris[std::size_t(t)];
            Rat f = bond_average_chi_tri(tail, dir, mesh.nodes[std::size_t(T.v[0])],
                                         mesh.nodes[std::size_t(T.v[1])], mesh.nodes[std::size_t(T.v[2])]);
            if (f != 0) omega[std::size_t(t)][std::size_t(d)] -= f;
        }
    }

    for (const auto& row : omega)
        for (const Rat& q : row)
            if (q < 0) throw std::runtime_error("negative effective area");
    return omega;
}

Rat bond_density_sum(IVec2 a, IVec2 b, IVec2 c, IVec2 r) {
    std::int64_t xmin = std::min({a.x, b.x, c.x}) - std::max<std::int64_t>(r.x, 0);
    std::int64_t xmax = std::max({a.x, b.x, c.x}) - std::min<std::int64_t>(r.x, 0);
    std::int64_t ymin = std::min({a.y, b.y, c.y}) - std::max<std::int64_t>(r.y, 0);
    std::int64_t ymax = std::max({a.y, b.y, c.y}) - std::min<std::int64_t>(r.y, 0);
    Rat sum(0);
    for (std::int64_t x = xmin; x <= xmax; ++x)
        for (std::int64_t y = ymin; y <= ymax; ++y) sum += bond_average_chi_tri({x, y}, r, a, b, c);
    return sum;
}

}  // namespace acbond
