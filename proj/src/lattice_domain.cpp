/**
 * lattice_domain.cpp
 */

#include "acbond/lattice_domain.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "acbond/bond_geometry.hpp"

namespace acbond {

using nlohmann::json;

int NeighborSet::index_of(IVec2 r) const {
    for (int k = 0; k < int(dirs.size()); ++k)
        if (dirs[std::size_t(k)] == r || dirs[std::size_t(k)] == -r) return k;
    return -1;
}

NeighborSet build_neighbor_set(const LatticeSpec& lattice) {
    if (lattice.dimension != 1 && lattice.dimension != 2)
        throw std::invalid_argument("lattice dimension must be 1 or 2");
    if (!(lattice.r_cut > 0)) throw std::invalid_argument("interaction radius must be positive");
    if (std::abs(lattice.A.determinant()) < 1e-14)
        throw std::invalid_argument("lattice matrix is singular");

    Eigen::JacobiSVD<Mat2> svd(lattice.A);
    double smin = svd.singularValues()(1);
    std::int64_t M = std::int64_t(std::ceil(lattice.r_cut / smin)) + 1;

    NeighborSet ns;
    auto consider = [&](IVec2 r) {
        double len = (lattice.A * r.to_vec2()).norm();
        if (len <= lattice.r_cut) {
            ns.dirs.push_back(r);
            ns.lengths.push_back(len);
            ns.max_length = std::max(ns.max_length, len);
        }
    };
    if (lattice.dimension == 1) {
        for (std::int64_t x = 1; x <= M; ++x) consider({x, 0});
    } else {
        for (std::int64_t x = 0; x <= M; ++x)
            for (std::int64_t y = (x == 0 ? 1 : -M); y <= M; ++y) consider({x, y});
    }
    if (ns.dirs.empty())
        throw std::invalid_argument("interaction radius does not reach any lattice site");
    return ns;
}

DomainDecomposition build_decomposition(const LatticeSpec& lattice, Polygon omega, Region omega_c,
                                        std::vector<IVec2> dirichlet, std::vector<IVec2> removed) {
    DomainDecomposition dd;
    dd.lattice = lattice;
    dd.nbrs = build_neighbor_set(lattice);

    omega.validate();
    if (omega_c.parts.empty() || omega_c.parts[0].sign != 1)
        throw std::invalid_argument("continuum region needs a positive outer part");
    for (const auto& part : omega_c.parts) part.poly.validate();
    dd.omega = std::move(omega);
    dd.omega_c = std::move(omega_c);

    dd.omega_a = Region(dd.omega);
    for (const auto& part : dd.omega_c.parts) dd.omega_a.parts.push_back({part.poly, -part.sign});

    for (const auto& part : dd.omega_c.parts)
        for (IVec2 v : part.poly.vertices())
            if (!dd.omega.contains_open(RVec2(v)))
                throw std::invalid_argument("continuum region must be strictly inside the domain");

    std::unordered_set<IVec2, IVec2Hash> removed_set(removed.begin(), removed.end());

    std::int64_t xmin = std::numeric_limits<std::int64_t>::max(), xmax = std::numeric_limits<std::int64_t>::min();
    std::int64_t ymin = xmin, ymax = xmax;
    for (IVec2 v : dd.omega.vertices()) {
        xmin = std::min(xmin, v.x);
        xmax = std::max(xmax, v.x);
        ymin = std::min(ymin, v.y);
        ymax = std::max(ymax, v.y);
    }
    for (std::int64_t x = xmin; x <= xmax; ++x)
        for (std::int64_t y = ymin; y <= ymax; ++y) {
            IVec2 p{x, y};
            if (!dd.omega.contains_open(RVec2(p))) continue;
            if (removed_set.find(p) != removed_set.end()) continue;
            dd.sites.push_back(p);
        }

    for (IVec2 p : dd.sites) {
        ChiValue c = dd.omega_c.chi(RVec2(p));
        SiteClass sc = c.value == 0.0 ? SiteClass::Atomistic
                                      : (c.value == 1.0 ? SiteClass::Continuum : SiteClass::Interface);
        dd.site_class.emplace(p, sc);
    }

    for (IVec2 p : removed) {
        if (!dd.omega.contains_open(RVec2(p)))
            throw std::invalid_argument("removed site must lie inside the domain");
        if (dd.omega_c.chi(RVec2(p)).value != 0.0)
            throw std::invalid_argument("removed site must be interior to the atomistic region");
    }
    dd.removed = std::move(removed_set);

    for (IVec2 p : dirichlet) {
        auto it = dd.site_class.find(p);
        if (it == dd.site_class.end()) {
            std::ostringstream msg;
            msg << "Dirichlet site " << p << " is not a site of the domain";
            throw std::invalid_argument(msg.str());
        }
        if (it->second == SiteClass::Continuum) {
            std::ostringstream msg;
            msg << "Dirichlet site " << p << " lies inside the continuum region";
            throw std::invalid_argument(msg.str());
        }
        dd.dirichlet.insert(p);
    }

    // free sites interact only with existing sites (or vacancies); any bond
    // reaching the continuum closure must connect two existing sites
    for (IVec2 p : dd.sites) {
        bool free_site = !dd.is_dirichlet(p);
        for (std::size_t d = 0; d < dd.nbrs.dirs.size(); ++d)
            for (int s : {1, -1}) {
                IVec2 r = std::int64_t(s) * dd.nbrs.dirs[d];
                IVec2 q = p + r;
                if (dd.has_site(q) || dd.removed.find(q) != dd.removed.end()) continue;
                if (free_site) {
                    std::ostringstream msg;
                    msg << "free site " << p << " misses interaction partner " << q
                        << "; widen the domain or the Dirichlet collar";
                    throw std::invalid_argument(msg.str());
                }
                if (bond_meets_closure(p, r, dd.omega_c)) {
                    std::ostringstream msg;
                    msg << "bond from " << p << " to missing site " << q
                        << " meets the continuum closure";
                    throw std::invalid_argument(msg.str());
                }
            }
    }
    return dd;
}

std::vector<Bond> enumerate_bonds(const DomainDecomposition& dd) {
    std::vector<Bond> out;
    for (IVec2 p : dd.sites)
        for (int d = 0; d < int(dd.nbrs.dirs.size()); ++d)
            if (dd.has_site(p + dd.nbrs.dirs[std::size_t(d)])) out.push_back({p, d});
    return out;
}

BondClass classify_bond(const DomainDecomposition& dd, const Bond& b) {
    IVec2 dir = dd.nbrs.dirs.at(std::size_t(b.dir));
    BondPartition part = partition_bond(b.tail, dir, dd.omega_a);

    if (part.contacts.empty() && part.pieces.size() == 1 && part.pieces[0].w == 1)
        return {BondTag::InteriorAtomistic, CrossingKind::Other};

    bool all_zero = true;
    for (const auto& pc : part.pieces) all_zero = all_zero && pc.w == 0;
    if (all_zero && !part.has_interior_contact() &&
        dd.omega_c.chi_rational(point_on(b.tail, dir, Rat(1, 2))) == 1)
        return {BondTag::InteriorContinuum, CrossingKind::Other};

    BondClass out{BondTag::Crossing, CrossingKind::Other};
    if (part.runs_along_boundary()) {
        out.kind = CrossingKind::IntervalOnBoundary;
    } else if (part.contacts.size() == 1) {
        out.kind = CrossingKind::OnePoint;
    } else if (part.contacts.size() == 2) {
        out.kind = CrossingKind::TwoPoints;
    }
    return out;
}

namespace {

json ivec_json(IVec2 v) { return json::array({v.x, v.y}); }

IVec2 ivec_from(const json& j) {
    return {j.at(0).get<std::int64_t>(), j.at(1).get<std::int64_t>()};
}

json ivec_list_json(std::vector<IVec2> v) {
    std::sort(v.begin(), v.end());
    json out = json::array();
    for (IVec2 p : v) out.push_back(ivec_json(p));
    return out;
}

}  // namespace

void save_decomposition(const DomainDecomposition& dd, std::ostream& os) {
    json j;
    j["lattice"]["dimension"] = dd.lattice.dimension;
    j["lattice"]["A"] = {{dd.lattice.A(0, 0), dd.lattice.A(0, 1)},
                         {dd.lattice.A(1, 0), dd.lattice.A(1, 1)}};
    j["lattice"]["r_cut"] = dd.lattice.r_cut;
    j["omega"] = json::array();
    for (IVec2 v : dd.omega.vertices()) j["omega"].push_back(ivec_json(v));
    j["omega_c"] = json::array();
    for (const auto& part : dd.omega_c.parts) {
        json p;
        p["sign"] = part.sign;
        p["vertices"] = json::array();
        for (IVec2 v : part.poly.vertices()) p["vertices"].push_back(ivec_json(v));
        j["omega_c"].push_back(p);
    }
    j["dirichlet"] = ivec_list_json({dd.dirichlet.begin(), dd.dirichlet.end()});
    j["removed"] = ivec_list_json({dd.removed.begin(), dd.removed.end()});
    os << j.dump(2) << '\n';
}

DomainDecomposition load_decomposition(std::istream& is) {
    json j;
    is >> j;
    LatticeSpec lat;
    lat.dimension = j.at("lattice").at("dimension").get<int>();
    const json& a = j.at("lattice").at("A");
    lat.A << a.at(0).at(0).get<double>(), a.at(0).at(1).get<double>(),
        a.at(1).at(0).get<double>(), a.at(1).at(1).get<double>();
    lat.r_cut = j.at("lattice").at("r_cut").get<double>();

    std::vector<IVec2> ov;
    for (const auto& v : j.at("omega")) ov.push_back(ivec_from(v));
    Polygon omega(std::move(ov));

    Region rc;
    for (const auto& p : j.at("omega_c")) {
        std::vector<IVec2> vs;
        for (const auto& v : p.at("vertices")) vs.push_back(ivec_from(v));
        rc.parts.push_back({Polygon(std::move(vs)), p.at("sign").get<int>()});
    }

    std::vector<IVec2> dir, rem;
    for (const auto& v : j.at("dirichlet")) dir.push_back(ivec_from(v));
    for (const auto& v : j.at("removed")) rem.push_back(ivec_from(v));
    return build_decomposition(lat, std::move(omega), std::move(rc), std::move(dir), std::move(rem));
}

}  // namespace acbond
