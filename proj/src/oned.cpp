/**
 * oned.cpp - one-dimensional reference models.
 */

#include "acbond/oned.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace acbond {

namespace {

std::vector<std::int64_t> normalized_nodes(const Chain1D& c) {
    if (c.N < 1) throw std::invalid_argument("chain needs N >= 1");
    if (c.R < 1) throw std::invalid_argument("chain needs R >= 1");
    std::vector<std::int64_t> nodes = c.mesh_nodes;
    if (nodes.empty()) {
        for (std::int64_t i = 0; i <= c.N; ++i) nodes.push_back(i);
        return nodes;
    }
    if (nodes.front() != 0 || nodes.back() != c.N)
        throw std::invalid_argument("mesh nodes must span [0, N]");
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k)
        if (nodes[k] >= nodes[k + 1])
            throw std::invalid_argument("mesh nodes must be strictly increasing");
    return nodes;
}

}  // namespace

Chain1DSystem::Chain1DSystem(Chain1D chain, const PairPotential& phi)
    : chain_(std::move(chain)), phi_(&phi) {
    chain_.mesh_nodes = normalized_nodes(chain_);
    std::set<std::int64_t> sites;
    for (std::int64_t i = lo(); i <= 0; ++i) sites.insert(i);
    for (std::int64_t i = chain_.N; i <= hi(); ++i) sites.insert(i);
    for (std::int64_t n : chain_.mesh_nodes) sites.insert(n);
    carriers_.assign(sites.begin(), sites.end());
    for (std::size_t k = 0; k < carriers_.size(); ++k)
        ids_[carriers_[k]] = int(k);
}

int Chain1DSystem::id_of(std::int64_t site) const {
    auto it = ids_.find(site);
    return it == ids_.end() ? -1 : it->second;
}

Eigen::VectorXd Chain1DSystem::uniform_state(double F) const {
    Eigen::VectorXd y(carriers_.size());
    for (std::size_t k = 0; k < carriers_.size(); ++k) y[long(k)] = F * double(carriers_[k]);
    return y;
}

double Chain1DSystem::value_at(const Eigen::VectorXd& y, std::int64_t x) const {
    int id = id_of(x);
    if (id >= 0) return y[id];
    if (x <= 0 || x >= chain_.N) {
        std::ostringstream os;
        os << "site " << x << " is outside the chain";
        throw std::out_of_range(os.str());
    }
    const auto& nodes = chain_.mesh_nodes;
    auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    std::int64_t b = *it, a = *(it - 1);
    double t = double(x - a) / double(b - a);
    return (1.0 - t) * y[id_of(a)] + t * y[id_of(b)];
}

std::vector<std::pair<int, double>> Chain1DSystem::stencil_at(std::int64_t x) const {
    int id = id_of(x);
    if (id >= 0) return {{id, 1.0}};
    if (x <= 0 || x >= chain_.N) {
        std::ostringstream os;
        os << "site " << x << " is outside the chain";
        throw std::out_of_range(os.str());
    }
    const auto& nodes = chain_.mesh_nodes;
    auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    std::int64_t b = *it, a = *(it - 1);
    double t = double(x - a) / double(b - a);
    return {{id_of(a), 1.0 - t}, {id_of(b), t}};
}

std::vector<Chain1DSystem::Piece> Chain1DSystem::atomistic_overlap(std::int64_t i, int r) const {
    std::vector<Piece> out;
    std::int64_t head = i + r;
    if (i < 0) out.push_back({double(i), double(std::min<std::int64_t>(0, head))});
    if (head > chain_.N)
        out.push_back({double(std::max<std::int64_t>(chain_.N, i)), double(head)});
    return out;
}

double Chain1DSystem::continuum_energy(const Eigen::VectorXd& y) const {
    const auto& nodes = chain_.mesh_nodes;
    double e = 0.0;
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        double h = double(nodes[k + 1] - nodes[k]);
        double s = (y[id_of(nodes[k + 1])] - y[id_of(nodes[k])]) / h;
        for (int r = 1; r <= chain_.R; ++r) e += h * phi_->value(r * s);
    }
    return e;
}

double Chain1DSystem::bond_exact(std::int64_t i, int r, const Eigen::VectorXd& y) const {
    return phi_->value(value_at(y, i + r) - value_at(y, i));
}

Eigen::VectorXd Chain1DSystem::bond_exact_gradient(std::int64_t i, int r,
                                                   const Eigen::VectorXd& y) const {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(y.size());
    double d = phi_->deriv(value_at(y, i + r) - value_at(y, i));
    for (auto& [id, w] : stencil_at(i + r)) g[id] += d * w;
    for (auto& [id, w] : stencil_at(i)) g[id] -= d * w;
    return g;
}

double Chain1DSystem::bond_continuum(std::int64_t i, int r, const Eigen::VectorXd& y) const {
    const auto& nodes = chain_.mesh_nodes;
    double e = 0.0;
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        std::int64_t ov = std::min(i + r, nodes[k + 1]) - std::max(i, nodes[k]);
        if (ov <= 0) continue;
        double h = double(nodes[k + 1] - nodes[k]);
        double s = (y[id_of(nodes[k + 1])] - y[id_of(nodes[k])]) / h;
        e += double(ov) / r * phi_->value(r * s);
    }
    return e;
}

Eigen::VectorXd Chain1DSystem::bond_continuum_gradient(std::int64_t i, int r,
                                                       const Eigen::VectorXd& y) const {
    const auto& nodes = chain_.mesh_nodes;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(y.size());
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        std::int64_t ov = std::min(i + r, nodes[k + 1]) - std::max(i, nodes[k]);
        if (ov <= 0) continue;
        double h = double(nodes[k + 1] - nodes[k]);
        double s = (y[id_of(nodes[k + 1])] - y[id_of(nodes[k])]) / h;
        double d = double(ov) * phi_->deriv(r * s) / h;
        g[id_of(nodes[k + 1])] += d;
        g[id_of(nodes[k])] -= d;
    }
    return g;
}

double Chain1DSystem::bond_averaged_tilde(std::int64_t i, int r, const Eigen::VectorXd& y) const {
    Subset1D w;
    for (const Piece& p : atomistic_overlap(i, r)) w.intervals.push_back({p.a, p.b});
    double len = w.length();
    if (len == 0.0) return 0.0;
    double jump = d_omega(w, [&](double x) { return value_at(y, std::int64_t(std::llround(x))); });
    return len / r * phi_->value(r * jump / len);
}

double Chain1DSystem::energy(Model1D model, const Eigen::VectorXd& y) const {
    const std::int64_t a = lo(), b = hi();
    double e = 0.0;
    switch (model) {
        case Model1D::Atomistic:
            for (int r = 1; r <= chain_.R; ++r)
                for (std::int64_t i = a; i + r <= b; ++i)
                    e += phi_->value(value_at(y, i + r) - value_at(y, i));
            return e;
        case Model1D::QCE: {
            for (int r = 1; r <= chain_.R; ++r)
                for (std::int64_t i = a; i + r <= b; ++i) {
                    int na = int(is_atom(i)) + int(is_atom(i + r));
                    if (na > 0)
                        e += 0.5 * na * phi_->value(value_at(y, i + r) - value_at(y, i));
                }
            const auto& nodes = chain_.mesh_nodes;
            for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
                double h = double(nodes[k + 1] - nodes[k]);
                double vol = h - 0.5 * int(is_atom(nodes[k])) - 0.5 * int(is_atom(nodes[k + 1]));
                double s = (y[id_of(nodes[k + 1])] - y[id_of(nodes[k])]) / h;
                for (int r = 1; r <= chain_.R; ++r) e += vol * phi_->value(r * s);
            }
            return e;
        }
        case Model1D::ECC: {
            for (int r = 1; r <= chain_.R; ++r)
                for (std::int64_t i = a; i + r <= b; ++i)
                    if (!in_continuum(i, r))
                        e += phi_->value(value_at(y, i + r) - value_at(y, i));
            const auto& nodes = chain_.mesh_nodes;
            for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
                std::int64_t h = nodes[k + 1] - nodes[k];
                double s = (y[id_of(nodes[k + 1])] - y[id_of(nodes[k])]) / double(h);
                for (int r = 1; r <= chain_.R; ++r) {
                    std::int64_t num = h * r;  // effective length times r
                    for (std::int64_t i = nodes[k] - r; i <= nodes[k + 1]; ++i) {
                        if (in_continuum(i, r) || i < a || i + r > b) continue;
                        num -= std::max<std::int64_t>(
                            0, std::min(i + r, nodes[k + 1]) - std::max(i, nodes[k]));
                    }
                    if (num < 0) throw std::logic_error("negative effective length");
                    e += double(num) / r * phi_->value(r * s);
                }
            }
            return e;
        }
        case Model1D::ACC: {
            for (int r = 1; r <= chain_.R; ++r)
                for (std::int64_t i = a; i + r <= b; ++i) {
                    if (in_continuum(i, r)) continue;
                    auto pieces = atomistic_overlap(i, r);
                    double len = 0.0, jump = 0.0;
                    for (const Piece& p : pieces) {
                        len += p.b - p.a;
                        jump += value_at(y, std::int64_t(p.b)) - value_at(y, std::int64_t(p.a));
                    }
                    if (len == 0.0) continue;
                    e += len / r * phi_->value(r * jump / len);
                }
            return e + continuum_energy(y);
        }
    }
    throw std::logic_error("unknown 1D model");
}

Eigen::VectorXd Chain1DSystem::gradient(Model1D model, const Eigen::VectorXd& y) const {
    const std::int64_t a = lo(), b = hi();
    Eigen::VectorXd g = Eigen::VectorXd::Zero(y.size());
    auto add_pair = [&](std::int64_t i, int r, double w) {
        double d = w * phi_->deriv(value_at(y, i + r) - value_at(y, i));
        for (auto& [id, s] : stencil_at(i + r)) g[id] += d * s;
        for (auto& [id, s] : stencil_at(i)) g[id] -= d * s;
    };
    switch (model) {
        case Model1D::Atomistic:
            for (int r = 1; r <= chain_.R; ++r)
                for (std::int64_t i = a; i + r <= b; ++i) add_pair(i, r, 1.0);
            return g;
        case Model1D::QCE: {
            for (int r = 1; r <= chain_.R; ++r)
                for (std::int64_t i = a; i + r <= b; ++i) {
                    int na = int(is_atom(i)) + int(is_atom(i + r));
                    if (na > 0) add_pair(i, r, 0.5 * na);
                }
            const auto& nodes = chain_.mesh_nodes;
            for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
                double h = double(nodes[k + 1] - nodes[k]);
                double vol = h - 0.5 * int(is_atom(nodes[k])) - 0.5 * int(is_atom(nodes[k + 1]));
                double s = (y[id_of(nodes[k + 1])] - y[id_of(nodes[k])]) / h;
                double d = 0.0;
                for (int r = 1; r <= chain_.R; ++r) d += vol * phi_->deriv(r * s) * r / h;
                g[id_of(nodes[k + 1])] += d;
                g[id_of(nodes[k])] -= d;
            }
            return g;
        }
        case Model1D::ECC: {
            for (int r = 1; r <= chain_.R; ++r)
                for (std::int64_t i = a; i + r <= b; ++i)
                    if (!in_continuum(i, r)) add_pair(i, r, 1.0);
            const auto& nodes = chain_.mesh_nodes;
            for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
                std::int64_t h = nodes[k + 1] - nodes[k];
                double s = (y[id_of(nodes[k + 1])] - y[id_of(nodes[k])]) / double(h);
                double d = 0.0;
                for (int r = 1; r <= chain_.R; ++r) {
                    std::int64_t num = h * r;
                    for (std::int64_t i = nodes[k] - r; i <= nodes[k + 1]; ++i) {
                        if (in_continuum(i, r) || i < a || i + r > b) continue;
                        num -= std::max<std::int64_t>(
                            0, std::min(i + r, nodes[k + 1]) - std::max(i, nodes[k]));
                    }
                    d += double(num) / r * phi_->deriv(r * s) * r / double(h);
                }
                g[id_of(nodes[k + 1])] += d;
                g[id_of(nodes[k])] -= d;
            }
            return g;
        }
        case Model1D::ACC: {
            for (int r = 1; r <= chain_.R; ++r)
                for (std::int64_t i = a; i + r <= b; ++i) {
                    if (in_continuum(i, r)) continue;
                    auto pieces = atomistic_overlap(i, r);
                    double len = 0.0, jump = 0.0;
                    for (const Piece& p : pieces) {
                        len += p.b - p.a;
                        jump += value_at(y, std::int64_t(p.b)) - value_at(y, std::int64_t(p.a));
                    }
                    if (len == 0.0) continue;
                    double d = phi_->deriv(r * jump / len);
                    for (const Piece& p : pieces) {
                        for (auto& [id, s] : stencil_at(std::int64_t(p.b))) g[id] += d * s;
                        for (auto& [id, s] : stencil_at(std::int64_t(p.a))) g[id] -= d * s;
                    }
                }
            const auto& nodes = chain_.mesh_nodes;
            for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
                double h = double(nodes[k + 1] - nodes[k]);
                double s = (y[id_of(nodes[k + 1])] - y[id_of(nodes[k])]) / h;
                double d = 0.0;
                for (int r = 1; r <= chain_.R; ++r) d += phi_->deriv(r * s) * r;
                g[id_of(nodes[k + 1])] += d;
                g[id_of(nodes[k])] -= d;
            }
            return g;
        }
    }
    throw std::logic_error("unknown 1D model");
}

double Chain1DSystem::ecc_energy_by_split(const Eigen::VectorXd& y) const {
    const std::int64_t a = lo(), b = hi();
    double e = 0.0;
    for (int r = 1; r <= chain_.R; ++r)
        for (std::int64_t i = a; i + r <= b; ++i)
            e += in_continuum(i, r) ? bond_continuum(i, r, y) : bond_exact(i, r, y);
    return e;
}

double Chain1DSystem::ghost_force_residual(Model1D model, double F) const {
    Eigen::VectorXd g = gradient(model, uniform_state(F));
    double sup = 0.0;
    for (std::size_t k = 0; k < carriers_.size(); ++k)
        if (!is_fixed(int(k))) sup = std::max(sup, std::abs(g[long(k)]));
    double scale = 1.0;
    for (int r = 1; r <= chain_.R; ++r) scale = std::max(scale, std::abs(phi_->deriv(r * F)));
    return sup / scale;
}

double Subset1D::length() const {
    double s = 0.0;
    for (auto& [l, r] : intervals) s += r - l;
    return s;
}

double d_omega(const Subset1D& w, const std::function<double(double)>& y) {
    double s = 0.0;
    for (auto& [l, r] : w.intervals) s += y(r) - y(l);
    return s;
}

std::array<double, 4> qce_ghost_closed_form(double F, const PairPotential& phi) {
    double m = 0.5 * phi.deriv(2.0 * F);
    return {+m, -m, -m, +m};  // atoms -1, 0, 1, 2
}

}  // namespace acbond
