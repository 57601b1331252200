#include "acbond/potentials.hpp"

#include <cmath>

namespace acbond {

std::unique_ptr<PairPotential> make_potential(const std::string& name, double morse_alpha) {
    if (name == "lennard_jones" || name == "lj") return std::make_unique<LennardJones>();
    if (name == "morse") return std::make_unique<Morse>(morse_alpha);
    throw std::invalid_argument("unknown potential: " + name);
}

}  // namespace acbond
