#pragma once
/**
 * lattice_domain.hpp - lattice, interaction neighborhood, domain split.
 *
 * Sites live in Z^2 and only the lattice matrix A maps them to physical
 * space. The interaction neighborhood is stored as canonical direction
 * representatives (one of +-r each). A DomainDecomposition fixes the
 * computational domain Omega, the continuum subregion Omega_c with its
 * interface Gamma, the Dirichlet and removed (vacancy) sites, and enforces
 * the structural assumptions the coupled energies rely on: free sites have
 * complete interaction neighborhoods, and every bond that meets the closure
 * of Omega_c connects two existing sites.
 */

#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "acbond/polygon.hpp"
#include "acbond/vec.hpp"

namespace acbond {

struct LatticeSpec {
    int dimension = 2;  // 1 (chain, directions along e1) or 2
    Mat2 A = Mat2::Identity();
    double r_cut = 0.0;
};

struct NeighborSet {
    std::vector<IVec2> dirs;      // canonical reps: x > 0, or x == 0 and y > 0; lex sorted
    std::vector<double> lengths;  // |A r|
    double max_length = 0.0;

    int index_of(IVec2 r) const;  // id whose rep is r or -r, else -1
};

// throws if no lattice direction falls within r_cut
NeighborSet build_neighbor_set(const LatticeSpec& lattice);

struct Bond {
    IVec2 tail;
    int dir = -1;  // into NeighborSet::dirs; bond segment is [tail, tail + dirs[dir]]
};

enum class SiteClass { Atomistic, Interface, Continuum };

enum class BondTag { InteriorAtomistic, InteriorContinuum, Crossing };
enum class CrossingKind { OnePoint, TwoPoints, IntervalOnBoundary, Other };

struct BondClass {
    BondTag tag = BondTag::Crossing;
    CrossingKind kind = CrossingKind::Other;  // meaningful only when tag == Crossing
};

struct DomainDecomposition {
    LatticeSpec lattice;
    NeighborSet nbrs;
    Polygon omega;    // computational domain; sites are its interior lattice points
    Region omega_c;   // continuum subregion, strictly inside omega
    Region omega_a;   // omega minus the closure of omega_c (signed representation)

    std::vector<IVec2> sites;  // I, lex sorted
    std::unordered_map<IVec2, SiteClass, IVec2Hash> site_class;
    std::unordered_set<IVec2, IVec2Hash> dirichlet;  // in the closure of omega_a
    std::unordered_set<IVec2, IVec2Hash> removed;    // vacancies, interior to omega_a

    bool has_site(IVec2 p) const { return site_class.find(p) != site_class.end(); }
    bool is_dirichlet(IVec2 p) const { return dirichlet.find(p) != dirichlet.end(); }
    SiteClass klass(IVec2 p) const { return site_class.at(p); }
};

// validates geometry and the structural assumptions; throws on violation
DomainDecomposition build_decomposition(const LatticeSpec& lattice, Polygon omega, Region omega_c,
                                        std::vector<IVec2> dirichlet,
                                        std::vector<IVec2> removed = {});

// every interacting pair {i, i+r} with both sites present, tail lex sorted,
// direction ids ascending per tail
std::vector<Bond> enumerate_bonds(const DomainDecomposition& dd);

// strict classification against the open atomistic region:
//   InteriorAtomistic  - the closed segment lies in the open region
//   InteriorContinuum  - the open segment lies in the open continuum region
//   Crossing           - everything else, subtyped by how it meets Gamma
BondClass classify_bond(const DomainDecomposition& dd, const Bond& b);

void save_decomposition(const DomainDecomposition& dd, std::ostream& os);
DomainDecomposition load_decomposition(std::istream& is);

}  // namespace acbond
