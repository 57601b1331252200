#pragma once
/**
 * bond_geometry.hpp - exact intersection of bonds with regions and meshes.
 *
 * A bond is the closed segment from site p to p + dir in index space. All
 * quantities here are exact rationals: partitions of a bond by a region
 * boundary, averaged characteristic functions along a bond, and the
 * per-triangle effective areas that the coupled energies assemble with.
 * Characteristic values follow the volumetric convention (1 inside, 1/2 on
 * an edge), so triangle averages of a mesh sum to region averages even for
 * bonds running along mesh edges.
 */

#include <cstdint>
#include <utility>
#include <vector>

#include "acbond/fem_mesh.hpp"
#include "acbond/polygon.hpp"
#include "acbond/rational.hpp"
#include "acbond/vec.hpp"

namespace acbond {

// maximal constant-weight pieces of t -> chi(p + t*dir) on [0,1]
struct BondPartition {
    struct Piece {
        Rat t0, t1;  // 0 <= t0 < t1 <= 1
        Rat w;       // characteristic value on the open piece
    };
    std::vector<Piece> pieces;  // cover [0,1]; adjacent pieces have distinct weights
    std::vector<Rat> contacts;  // sorted parameters where the segment meets the region boundary

    bool has_interior_contact() const;  // some contact strictly inside (0,1)
    bool runs_along_boundary() const;   // some piece with 0 < w < 1
};

BondPartition partition_bond(IVec2 p, IVec2 dir, const Region& region);

// exact average of chi over the bond
Rat bond_average_chi(IVec2 p, IVec2 dir, const Region& region);

// true if the closed bond meets the closure of the region
bool bond_meets_closure(IVec2 p, IVec2 dir, const Region& region);

// exact average over the bond of the triangle characteristic (1 inside,
// 1/2 on an edge); vertices a,b,c in CCW order
Rat bond_average_chi_tri(IVec2 p, IVec2 dir, IVec2 a, IVec2 b, IVec2 c);

// Effective areas omega[t][d] for triangle t and direction dirs[d]: the index
// area of the triangle minus the averaged overlap of every listed bond.
// bonds holds (tail site, direction id) pairs, one per bond not carried by
// the continuum. Throws if any effective area turns out negative.
std::vector<std::vector<Rat>> effective_areas(const Triangulation& mesh,
                                              const std::vector<IVec2>& dirs,
                                              const std::vector<std::pair<IVec2, int>>& bonds);

// sum of bond_average_chi_tri over every lattice bond of direction r that can
// touch the triangle; equals the triangle index area for any lattice triangle
Rat bond_density_sum(IVec2 a, IVec2 b, IVec2 c, IVec2 r);

}  // namespace acbond
