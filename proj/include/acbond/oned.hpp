#pragma once
/**
 * oned.hpp - the one-dimensional reference family.
 *
 * A chain occupies Omega = (-N-R, N+R) with sites at the integers, the
 * continuum region is Omega_c = (0, N), and the sites with N <= |i| are
 * Dirichlet, so every free atom keeps R neighbors on both sides. The four
 * models mirror the 2D ones; everything is small enough to evaluate by
 * direct loops, which makes this module an independent oracle for the 2D
 * machinery (a quasi-1D strip run through the 2D code must reproduce these
 * energies).
 *
 * States carry one real value per carrier: atom sites in the closure of the
 * atomistic region plus the continuum mesh nodes; values at other sites are
 * P1-interpolated. Non-monotone states hit the potential's domain error.
 */

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "acbond/potentials.hpp"

namespace acbond {

enum class Model1D { Atomistic, QCE, ECC, ACC };

struct Chain1D {
    std::int64_t N = 8;  // continuum region (0, N)
    int R = 2;           // interaction range
    std::vector<std::int64_t> mesh_nodes;  // increasing subset of [0, N] with both ends;
                                           // empty means fully refined
};

class Chain1DSystem {
public:
    Chain1DSystem(Chain1D chain, const PairPotential& phi);

    const Chain1D& chain() const { return chain_; }
    const PairPotential& phi() const { return *phi_; }

    std::int64_t lo() const { return -chain_.N - chain_.R + 1; }
    std::int64_t hi() const { return chain_.N + chain_.R - 1; }
    bool is_atom(std::int64_t i) const { return i <= 0 || i >= chain_.N; }
    bool is_dirichlet(std::int64_t i) const { return std::abs(i) >= chain_.N; }

    const std::vector<std::int64_t>& carriers() const { return carriers_; }
    int id_of(std::int64_t site) const;
    bool is_fixed(int carrier) const { return is_dirichlet(carriers_[std::size_t(carrier)]); }

    Eigen::VectorXd uniform_state(double F) const;

    double value_at(const Eigen::VectorXd& y, std::int64_t x) const;
    std::vector<std::pair<int, double>> stencil_at(std::int64_t x) const;

    double energy(Model1D model, const Eigen::VectorXd& y) const;
    Eigen::VectorXd gradient(Model1D model, const Eigen::VectorXd& y) const;

    // ECC by its defining split (exact bonds outside the continuum plus
    // per-bond clipped continuum contributions); agrees with energy(ECC, .)
    double ecc_energy_by_split(const Eigen::VectorXd& y) const;

    // full Cauchy-Born energy of the mesh
    double continuum_energy(const Eigen::VectorXd& y) const;

    // single-bond pieces of the defining split for bond (i, i+r)
    double bond_exact(std::int64_t i, int r, const Eigen::VectorXd& y) const;
    Eigen::VectorXd bond_exact_gradient(std::int64_t i, int r, const Eigen::VectorXd& y) const;
    double bond_continuum(std::int64_t i, int r, const Eigen::VectorXd& y) const;
    Eigen::VectorXd bond_continuum_gradient(std::int64_t i, int r, const Eigen::VectorXd& y) const;

    // averaged bond contribution written through interval differences of the
    // bond's atomistic overlap; coincides with the partition form used by
    // energy(ACC, .)
    double bond_averaged_tilde(std::int64_t i, int r, const Eigen::VectorXd& y) const;

    // sup norm of the free-carrier gradient at y = Fx, divided by
    // max(1, max_r |phi'(rF)|)
    double ghost_force_residual(Model1D model, double F) const;

private:
    Chain1D chain_;
    const PairPotential* phi_;
    std::vector<std::int64_t> carriers_;
    std::unordered_map<std::int64_t, int> ids_;

    struct Piece {
        double a, b;  // subinterval of [i, i+r] inside the atomistic region
    };
    std::vector<Piece> atomistic_overlap(std::int64_t i, int r) const;
    bool in_continuum(std::int64_t i, int r) const {
        return i >= 0 && i + std::int64_t(r) <= chain_.N;
    }
};

// interval-difference operator: sum of y(r_m) - y(l_m)
struct Subset1D {
    std::vector<std::pair<double, double>> intervals;  // disjoint, l < r
    double length() const;
};
double d_omega(const Subset1D& w, const std::function<double(double)>& y);

// QCE ghost-force pattern at y = Fx for R = 2 on the atoms {-1, 0, 1, 2}
// around the interface: (+, -, -, +) * phi'(2F)/2
std::array<double, 4> qce_ghost_closed_form(double F, const PairPotential& phi);

}  // namespace acbond
