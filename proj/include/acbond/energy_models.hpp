#pragma once
/**
 * energy_models.hpp - atomistic, continuum and coupled energy functionals.
 *
 * All models share one representation: a deformation state stores one R^2
 * value per carrier (atom sites in the closure of the atomistic region plus
 * mesh nodes), and an energy is a sum of three kinds of terms
 *
 *   pair      w * phi(|y_b - y_a|)             exact bond energies
 *   element   w * phi(|sum_k g_k y_{c_k}|)     per-triangle, per-direction
 *   averaged  W * phi(|S| / W)                 S = sum_j c_j y_{carrier_j}
 *
 * The model builders differ only in which bonds keep their exact term and
 * how the element weights are formed:
 *
 *   Atomistic   every bond, weight 1; no elements
 *   CauchyBorn  no bonds; element weight = triangle area per direction
 *   QCE         bonds weighted by their number of atom endpoints / 2;
 *               element areas reduced by the atom corner cells
 *   ECC         bonds not inside the continuum, weight 1; element areas
 *               reduced by the exact averaged overlap of those bonds
 *   ACC         bonds not inside the continuum enter as averaged terms
 *               weighted by the atomistic-region partition of the bond;
 *               elements keep their full areas
 *
 * Values are physical positions; a P1 field's directional derivative along
 * an index direction r is |J A^-1 (A r)| = |J_idx r|, so phi always sees the
 * physical bond length.
 */

#include <Eigen/Sparse>

#include <string>
#include <vector>

#include "acbond/fem_mesh.hpp"
#include "acbond/lattice_domain.hpp"
#include "acbond/potentials.hpp"

namespace acbond {

enum class ModelKind { Atomistic, CauchyBorn, QCE, ECC, ACC };

ModelKind model_from_name(const std::string& name);
std::string model_name(ModelKind kind);

struct DofMap {
    std::vector<IVec2> carriers;  // lex sorted
    std::unordered_map<IVec2, int, IVec2Hash> ids;
    std::vector<bool> fixed;        // Dirichlet carriers
    std::vector<int> free_index;    // carrier -> free slot, -1 when fixed
    std::vector<int> free_carrier;  // free slot -> carrier
    int n_free = 0;

    int id_of(IVec2 p) const {
        auto it = ids.find(p);
        return it == ids.end() ? -1 : it->second;
    }
};

struct CoupledEnergy {
    struct Pair {
        int a, b;
        double w;
    };
    struct Element {
        std::array<int, 3> c;
        std::array<double, 3> g;
        double w;
    };
    struct AvgPair {
        std::vector<std::pair<int, double>> stencil;
        double W;
    };

    ModelKind kind = ModelKind::Atomistic;
    const DomainDecomposition* dd = nullptr;
    const Triangulation* mesh = nullptr;  // null for the pure atomistic model
    const PairPotential* phi = nullptr;
    DofMap dofs;
    std::vector<Pair> pairs;
    std::vector<Element> elements;
    std::vector<AvgPair> avg_pairs;

    // states pack one (x, y) pair per carrier
    double energy(const Eigen::VectorXd& y) const;
    void gradient(const Eigen::VectorXd& y, Eigen::VectorXd& g) const;

    Eigen::VectorXd uniform_state(const Mat2& F) const;  // y(p) = F A p

    // deformation value at any site: carriers directly, everything else by
    // P1 interpolation on the mesh
    Vec2 value_at_site(const Eigen::VectorXd& y, IVec2 site) const;

    Eigen::VectorXd pack_free(const Eigen::VectorXd& y) const;
    void unpack_free(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;

    // sup norm of the free-carrier gradient at the uniform state, divided by
    // max(1, max_r |phi'(|F A r|)|)
    double ghost_force_residual(const Mat2& F) const;

    // scalar stiffness surrogate over free carriers (longitudinal second
    // derivatives at the undeformed state; couplings into Dirichlet carriers
    // fold into the diagonal), used to precondition the minimizer
    Eigen::SparseMatrix<double> stiffness_laplacian() const;
};

CoupledEnergy build_model(ModelKind kind, const DomainDecomposition& dd,
                          const Triangulation* mesh, const PairPotential& phi);

// max Frobenius distance of the physical deformation gradients over unit
// lattice triangles whose three corners are all sites of the domain
double w1inf_distance(const CoupledEnergy& ma, const Eigen::VectorXd& ya,
                      const CoupledEnergy& mb, const Eigen::VectorXd& yb);

}  // namespace acbond
