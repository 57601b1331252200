/**
 * energy_models.cpp - model assembly and evaluation.
 */

#include "acbond/energy_models.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "acbond/bond_geometry.hpp"

namespace acbond {

ModelKind model_from_name(const std::string& name) {
    if (name == "atomistic") return ModelKind::Atomistic;
    if (name == "cauchy_born" || name == "cb") return ModelKind::CauchyBorn;
    if (name == "qce") return ModelKind::QCE;
    if (name == "ecc") return ModelKind::ECC;
    if (name == "acc") return ModelKind::ACC;
    throw std::invalid_argument("unknown model: " + name);
}

std::string model_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::Atomistic: return "atomistic";
        case ModelKind::CauchyBorn: return "cauchy_born";
        case ModelKind::QCE: return "qce";
        case ModelKind::ECC: return "ecc";
        case ModelKind::ACC: return "acc";
    }
    return "?";
}

namespace {

Vec2 at(const Eigen::VectorXd& y, int k) { return Vec2(y[2 * k], y[2 * k + 1]); }

void add(Eigen::VectorXd& g, int k, const Vec2& v) {
    g[2 * k] += v.x();
    g[2 * k + 1] += v.y();
}

DofMap make_dofs(const DomainDecomposition& dd, const Triangulation* mesh, ModelKind kind) {
    std::set<IVec2> set;
    if (kind == ModelKind::Atomistic) {
        set.insert(dd.sites.begin(), dd.sites.end());
    } else {
        if (!mesh) throw std::invalid_argument("coupled models need a mesh");
        if (kind != ModelKind::CauchyBorn)
            for (IVec2 p : dd.sites)
                if (dd.klass(p) != SiteClass::Continuum) set.insert(p);
        for (IVec2 n : mesh->nodes) {
            if (!dd.has_site(n)) throw std::invalid_argument("mesh node is not a site of the domain");
            set.insert(n);
        }
    }
    DofMap dm;
    dm.carriers.assign(set.begin(), set.end());
    dm.fixed.resize(dm.carriers.size());
    dm.free_index.assign(dm.carriers.size(), -1);
    for (int k = 0; k < int(dm.carriers.size()); ++k) {
        dm.ids.emplace(dm.carriers[std::size_t(k)], k);
        bool fx = dd.is_dirichlet(dm.carriers[std::size_t(k)]);
        dm.fixed[std::size_t(k)] = fx;
        if (!fx) {
            dm.free_index[std::size_t(k)] = dm.n_free;
            dm.free_carrier.push_back(k);
            ++dm.n_free;
        }
    }
    return dm;
}

int carrier_or_throw(const DofMap& dm, IVec2 p) {
    int id = dm.id_of(p);
    if (id < 0) {
        std::ostringstream msg;
        msg << "site " << p << " carries a bond term but is neither an atom carrier nor a mesh node;"
            << " the mesh is too coarse near the interface";
        throw std::runtime_error(msg.str());
    }
    return id;
}

// linear functional evaluating the deformation at an exact point
std::vector<std::pair<int, double>> point_stencil(const DofMap& dm, const Triangulation& mesh,
                                                  const RVec2& q) {
    if (q.is_lattice()) {
        int id = dm.id_of(q.to_ivec2());
        if (id >= 0) return {{id, 1.0}};
    }
    int t = mesh.locate(q);
    if (t < 0) throw std::runtime_error("averaged bond endpoint falls outside the mesh");
    auto bary = mesh.barycentric(t, q);
    std::vector<std::pair<int, double>> out;
    for (int k = 0; k < 3; ++k) {
        double w = to_double(bary[std::size_t(k)]);
        if (w == 0.0) continue;
        out.emplace_back(carrier_or_throw(dm, mesh.nodes[std::size_t(mesh.tris[std::size_t(t)].v[k])]), w);
    }
    return out;
}

void add_element_terms(CoupledEnergy& m, const Triangulation& mesh,
                       const std::vector<IVec2>& dirs,
                       const std::vector<std::vector<double>>& weights) {
    for (int t = 0; t < int(mesh.tris.size()); ++t) {
        std::array<int, 3> c;
        for (int k = 0; k < 3; ++k)
            c[std::size_t(k)] =
                carrier_or_throw(m.dofs, mesh.nodes[std::size_t(mesh.tris[std::size_t(t)].v[k])]);
        for (std::size_t d = 0; d < dirs.size(); ++d) {
            double w = weights[std::size_t(t)][d];
            if (w == 0.0) continue;
            auto g = mesh.direction_coeffs(t, dirs[d]);
            m.elements.push_back({c, g, w});
        }
    }
}

}  // namespace

CoupledEnergy build_model(ModelKind kind, const DomainDecomposition& dd,
                          const Triangulation* mesh, const PairPotential& phi) {
    CoupledEnergy m;
    m.kind = kind;
    m.dd = &dd;
    m.mesh = kind == ModelKind::Atomistic ? nullptr : mesh;
    m.phi = &phi;
    m.dofs = make_dofs(dd, m.mesh, kind);

    const auto& dirs = dd.nbrs.dirs;

    if (kind != ModelKind::Atomistic && kind != ModelKind::CauchyBorn)
        for (IVec2 p : dd.sites)
            if (dd.klass(p) == SiteClass::Interface && !mesh->is_node(p))
                throw std::runtime_error("interface atom is not a mesh node");

    switch (kind) {
        case ModelKind::Atomistic: {
            for (const Bond& b : enumerate_bonds(dd)) {
                int ia = carrier_or_throw(m.dofs, b.tail);
                int ib = carrier_or_throw(m.dofs, b.tail + dirs[std::size_t(b.dir)]);
                m.pairs.push_back({ia, ib, 1.0});
            }
            break;
        }
        case ModelKind::CauchyBorn: {
            std::vector<std::vector<double>> w(mesh->tris.size(),
                                               std::vector<double>(dirs.size()));
            for (std::size_t t = 0; t < mesh->tris.size(); ++t)
                for (std::size_t d = 0; d < dirs.size(); ++d) w[t][d] = 0.5 * double(mesh->area2[t]);
            add_element_terms(m, *mesh, dirs, w);
            break;
        }
        case ModelKind::QCE: {
            for (const Bond& b : enumerate_bonds(dd)) {
                IVec2 head = b.tail + dirs[std::size_t(b.dir)];
                int na = (dd.klass(b.tail) != SiteClass::Continuum) +
                         (dd.klass(head) != SiteClass::Continuum);
                if (na == 0) continue;
                m.pairs.push_back({carrier_or_throw(m.dofs, b.tail), carrier_or_throw(m.dofs, head),
                                   0.5 * double(na)});
            }
            std::vector<std::vector<double>> w(mesh->tris.size(),
                                               std::vector<double>(dirs.size()));
            for (std::size_t t = 0; t < mesh->tris.size(); ++t) {
                int atoms = 0;
                for (int k = 0; k < 3; ++k)
                    if (dd.klass(mesh->nodes[std::size_t(mesh->tris[t].v[k])]) != SiteClass::Continuum)
                        ++atoms;
                double wt = 0.5 * double(mesh->area2[t]) * (1.0 - double(atoms) / 3.0);
                for (std::size_t d = 0; d < dirs.size(); ++d) w[t][d] = wt;
            }
            add_element_terms(m, *mesh, dirs, w);
            break;
        }
        case ModelKind::ECC: {
            std::vector<std::pair<IVec2, int>> off;
            for (const Bond& b : enumerate_bonds(dd)) {
                if (classify_bond(dd, b).tag == BondTag::InteriorContinuum) continue;
                IVec2 head = b.tail + dirs[std::size_t(b.dir)];
                m.pairs.push_back({carrier_or_throw(m.dofs, b.tail), carrier_or_throw(m.dofs, head), 1.0});
                off.emplace_back(b.tail, b.dir);
            }
            auto omega = effective_areas(*mesh, dirs, off);
            std::vector<std::vector<double>> w(mesh->tris.size(),
                                               std::vector<double>(dirs.size()));
            for (std::size_t t = 0; t < mesh->tris.size(); ++t)
                for (std::size_t d = 0; d < dirs.size(); ++d) w[t][d] = to_double(omega[t][d]);
            add_element_terms(m, *mesh, dirs, w);
            break;
        }
        case ModelKind::ACC: {
            for (const Bond& b : enumerate_bonds(dd)) {
                BondClass cls = classify_bond(dd, b);
                if (cls.tag == BondTag::InteriorContinuum) continue;
                IVec2 dir = dirs[std::size_t(b.dir)];
                IVec2 head = b.tail + dir;
                if (cls.tag == BondTag::InteriorAtomistic) {
                    m.pairs.push_back(
                        {carrier_or_throw(m.dofs, b.tail), carrier_or_throw(m.dofs, head), 1.0});
                    continue;
                }
                BondPartition part = partition_bond(b.tail, dir, dd.omega_a);
                Rat W(0);
                for (const auto& pc : part.pieces) W += (pc.t1 - pc.t0) * pc.w;
                if (W == 0) continue;

                // summation by parts: S = sum_m w_m (y(t_m) - y(t_{m-1}))
                // = sum over breakpoints of (w_left - w_right) y(t)
                std::map<int, double> stencil;
                auto accumulate = [&](const Rat& t, const Rat& kappa) {
                    if (kappa == 0) return;
                    double kd = to_double(kappa);
                    for (auto [id, cw] : point_stencil(m.dofs, *mesh, point_on(b.tail, dir, t)))
                        stencil[id] += kd * cw;
                };
                const auto& ps = part.pieces;
                accumulate(Rat(0), -ps.front().w);
                for (std::size_t k = 0; k + 1 < ps.size(); ++k)
                    accumulate(ps[k].t1, ps[k].w - ps[k + 1].w);
                accumulate(Rat(1), ps.back().w);

                CoupledEnergy::AvgPair ap;
                ap.W = to_double(W);
                for (auto [id, cw] : stencil)
                    if (cw != 0.0) ap.stencil.emplace_back(id, cw);
                m.avg_pairs.push_back(std::move(ap));
            }
            std::vector<std::vector<double>> w(mesh->tris.size(),
                                               std::vector<double>(dirs.size()));
            for (std::size_t t = 0; t < mesh->tris.size(); ++t)
                for (std::size_t d = 0; d < dirs.size(); ++d) w[t][d] = 0.5 * double(mesh->area2[t]);
            add_element_terms(m, *mesh, dirs, w);
            break;
        }
    }
    return m;
}

double CoupledEnergy::energy(const Eigen::VectorXd& y) const {
    double e = 0.0;
    for (const Pair& p : pairs) e += p.w * phi->value((at(y, p.b) - at(y, p.a)).norm());
    for (const Element& el : elements) {
        Vec2 s = el.g[0] * at(y, el.c[0]) + el.g[1] * at(y, el.c[1]) + el.g[2] * at(y, el.c[2]);
        e += el.w * phi->value(s.norm());
    }
    for (const AvgPair& ap : avg_pairs) {
        Vec2 s = Vec2::Zero();
        for (auto [id, cw] : ap.stencil) s += cw * at(y, id);
        e += ap.W * phi->value(s.norm() / ap.W);
    }
    return e;
}

void CoupledEnergy::gradient(const Eigen::VectorXd& y, Eigen::VectorXd& g) const {
    g.setZero(y.size());
    for (const Pair& p : pairs) {
        Vec2 d = at(y, p.b) - at(y, p.a);
        double z = d.norm();
        Vec2 f = (p.w * phi->deriv(z) / z) * d;
        add(g, p.b, f);
        add(g, p.a, -f);
    }
    for (const Element& el : elements) {
        Vec2 s = el.g[0] * at(y, el.c[0]) + el.g[1] * at(y, el.c[1]) + el.g[2] * at(y, el.c[2]);
        double z = s.norm();
        Vec2 f = (el.w * phi->deriv(z) / z) * s;
        for (int k = 0; k < 3; ++k) add(g, el.c[k], el.g[std::size_t(k)] * f);
    }
    for (const AvgPair& ap : avg_pairs) {
        Vec2 s = Vec2::Zero();
        for (auto [id, cw] : ap.stencil) s += cw * at(y, id);
        double z = s.norm() / ap.W;
        Vec2 f = (phi->deriv(z) / s.norm()) * s;
        for (auto [id, cw] : ap.stencil) add(g, id, cw * f);
    }
}

Eigen::VectorXd CoupledEnergy::uniform_state(const Mat2& F) const {
    Eigen::VectorXd y(2 * std::int64_t(dofs.carriers.size()));
    Mat2 FA = F * dd->lattice.A;
    for (int k = 0; k < int(dofs.carriers.size()); ++k) {
        Vec2 v = FA * dofs.carriers[std::size_t(k)].to_vec2();
        y[2 * k] = v.x();
        y[2 * k + 1] = v.y();
    }
    return y;
}

Vec2 CoupledEnergy::value_at_site(const Eigen::VectorXd& y, IVec2 site) const {
    int id = dofs.id_of(site);
    if (id >= 0) return at(y, id);
    if (!mesh) throw std::runtime_error("site value requested outside the carrier set");
    int t = mesh->locate(RVec2(site));
    if (t < 0) throw std::runtime_error("site value requested outside the mesh");
    auto bary = mesh->barycentric(t, RVec2(site));
    Vec2 v = Vec2::Zero();
    for (int k = 0; k < 3; ++k)
        v += to_double(bary[std::size_t(k)]) *
             at(y, dofs.id_of(mesh->nodes[std::size_t(mesh->tris[std::size_t(t)].v[k])]));
    return v;
}

Eigen::VectorXd CoupledEnergy::pack_free(const Eigen::VectorXd& y) const {
    Eigen::VectorXd x(2 * dofs.n_free);
    for (int f = 0; f < dofs.n_free; ++f) {
        int k = dofs.free_carrier[std::size_t(f)];
        x[2 * f] = y[2 * k];
        x[2 * f + 1] = y[2 * k + 1];
    }
    return x;
}

void CoupledEnergy::unpack_free(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    for (int f = 0; f < dofs.n_free; ++f) {
        int k = dofs.free_carrier[std::size_t(f)];
        y[2 * k] = x[2 * f];
        y[2 * k + 1] = x[2 * f + 1];
    }
}

double CoupledEnergy::ghost_force_residual(const Mat2& F) const {
    Eigen::VectorXd y = uniform_state(F);
    Eigen::VectorXd g;
    gradient(y, g);
    double sup = 0.0;
    for (int f = 0; f < dofs.n_free; ++f) {
        int k = dofs.free_carrier[std::size_t(f)];
        sup = std::max({sup, std::abs(g[2 * k]), std::abs(g[2 * k + 1])});
    }
    double scale = 1.0;
    Mat2 FA = F * dd->lattice.A;
    for (IVec2 r : dd->nbrs.dirs)
        scale = std::max(scale, std::abs(phi->deriv((FA * r.to_vec2()).norm())));
    return sup / scale;
}

Eigen::SparseMatrix<double> CoupledEnergy::stiffness_laplacian() const {
    // Every energy term is phi of the magnitude of a linear form in the
    // carrier values. Assemble sum k * g g^T over the terms, with k the
    // term's longitudinal stiffness at the undeformed state (clamped at
    // zero: shells beyond the inflection point would otherwise make the
    // matrix indefinite). Unit connectivity edges keep the graph anchored
    // where the clamped stiffness vanishes.
    std::vector<Eigen::Triplet<double>> trip;
    const Mat2& A = dd->lattice.A;
    auto site_pos = [&](int c) { return Vec2(A * dofs.carriers[std::size_t(c)].to_vec2()); };
    auto add_form = [&](const std::vector<std::pair<int, double>>& g, double k) {
        for (auto [ci, gi] : g) {
            int fi = dofs.free_index[std::size_t(ci)];
            if (fi < 0) continue;
            for (auto [cj, gj] : g) {
                int fj = dofs.free_index[std::size_t(cj)];
                double w = k * gi * gj;
                if (fj >= 0)
                    trip.emplace_back(fi, fj, w);
                else
                    trip.emplace_back(fi, fi, std::abs(w));  // ground Dirichlet couplings
            }
        }
    };
    const double tie = 1e-3;  // connectivity floor, relative to the term scale

    for (const Pair& p : pairs) {
        double z = (site_pos(p.b) - site_pos(p.a)).norm();
        double k = p.w * std::max(phi->deriv2(z), 0.0) + tie;
        add_form({{p.a, 1.0}, {p.b, -1.0}}, k);
    }
    for (const Element& el : elements) {
        Vec2 s = Vec2::Zero();
        for (int i = 0; i < 3; ++i) s += el.g[std::size_t(i)] * site_pos(el.c[std::size_t(i)]);
        double k = el.w * std::max(phi->deriv2(s.norm()), 0.0) + tie;
        add_form({{el.c[0], el.g[0]}, {el.c[1], el.g[1]}, {el.c[2], el.g[2]}}, k);
    }
    for (const AvgPair& ap : avg_pairs) {
        Vec2 s = Vec2::Zero();
        for (auto [c, kap] : ap.stencil) s += kap * site_pos(c);
        double k = std::max(phi->deriv2(s.norm() / ap.W), 0.0) / ap.W + tie;
        add_form(ap.stencil, k);
    }

    Eigen::SparseMatrix<double> L(dofs.n_free, dofs.n_free);
    L.setFromTriplets(trip.begin(), trip.end());
    return L;
}

double w1inf_distance(const CoupledEnergy& ma, const Eigen::VectorXd& ya,
                      const CoupledEnergy& mb, const Eigen::VectorXd& yb) {
    const DomainDecomposition& dd = *ma.dd;
    Mat2 Ainv = dd.lattice.A.inverse();
    double worst = 0.0;
    auto jac = [&](const CoupledEnergy& m, const Eigen::VectorXd& y, IVec2 p, bool lower) {
        Mat2 J;
        Vec2 y0, y1, y2;
        if (lower) {  // (p, p+e1, p+e1+e2)
            y0 = m.value_at_site(y, p);
            y1 = m.value_at_site(y, p + IVec2{1, 0});
            y2 = m.value_at_site(y, p + IVec2{1, 1});
            J.col(0) = y1 - y0;
            J.col(1) = y2 - y1;
        } else {  // (p, p+e1+e2, p+e2)
            y0 = m.value_at_site(y, p);
            y1 = m.value_at_site(y, p + IVec2{0, 1});
            y2 = m.value_at_site(y, p + IVec2{1, 1});
            J.col(0) = y2 - y1;
            J.col(1) = y1 - y0;
        }
        return Mat2(J * Ainv);
    };
    for (IVec2 p : dd.sites) {
        bool e1 = dd.has_site(p + IVec2{1, 0});
        bool e2 = dd.has_site(p + IVec2{0, 1});
        bool e12 = dd.has_site(p + IVec2{1, 1});
        if (e1 && e12)
            worst = std::max(worst, (jac(ma, ya, p, true) - jac(mb, yb, p, true)).norm());
        if (e2 && e12)
            worst = std::max(worst, (jac(ma, ya, p, false) - jac(mb, yb, p, false)).norm());
    }
    return worst;
}

}  // namespace acbond
