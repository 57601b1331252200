#pragma once
/**
 * potentials.hpp - two-body pair potentials.
 *
 * Potentials are smooth on z > 0 and are never truncated; the interaction
 * radius only selects which lattice directions interact. Scalar derivatives
 * come with the potential, vector forms (energy and gradient of v -> phi(|v|))
 * are provided for assembly and finite-difference checks.
 */

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

#include "acbond/vec.hpp"

namespace acbond {

class PairPotential {
public:
    virtual ~PairPotential() = default;

    virtual std::string name() const = 0;
    virtual double value(double z) const = 0;   // z > 0, else std::domain_error
    virtual double deriv(double z) const = 0;
    virtual double deriv2(double z) const = 0;

    double bond_energy(const Vec2& v) const { return value(v.norm()); }
    Vec2 bond_force(const Vec2& v) const {
        double z = v.norm();
        return (deriv(z) / z) * v;
    }

protected:
    static void require_positive(double z) {
        if (!(z > 0)) throw std::domain_error("pair potential evaluated at nonpositive distance");
    }
};

// phi(z) = -2 z^-6 + z^-12, minimum phi(1) = -1
class LennardJones final : public PairPotential {
public:
    std::string name() const override { return "lennard_jones"; }
    double value(double z) const override {
        require_positive(z);
        double i6 = 1.0 / (z * z * z * z * z * z);
        return i6 * (i6 - 2.0);
    }
    double deriv(double z) const override {
        require_positive(z);
        double i = 1.0 / z;
        double i6 = i * i * i * i * i * i;
        return 12.0 * i * i6 * (1.0 - i6);
    }
    double deriv2(double z) const override {
        require_positive(z);
        double i = 1.0 / z;
        double i2 = i * i;
        double i6 = i2 * i2 * i2;
        return i2 * i6 * (156.0 * i6 - 84.0);
    }
};

// phi(z) = -2 exp(-a(z-1)) + exp(-2a(z-1)), minimum phi(1) = -1
class Morse final : public PairPotential {
public:
    explicit Morse(double alpha = 3.0) : alpha_(alpha) {
        if (!(alpha > 0)) throw std::invalid_argument("Morse stiffness must be positive");
    }
    std::string name() const override { return "morse"; }
    double alpha() const { return alpha_; }
    double value(double z) const override {
        require_positive(z);
        double e = std::exp(-alpha_ * (z - 1.0));
        return e * (e - 2.0);
    }
    double deriv(double z) const override {
        require_positive(z);
        double e = std::exp(-alpha_ * (z - 1.0));
        return 2.0 * alpha_ * e * (1.0 - e);
    }
    double deriv2(double z) const override {
        require_positive(z);
        double e = std::exp(-alpha_ * (z - 1.0));
        return 2.0 * alpha_ * alpha_ * e * (2.0 * e - 1.0);
    }

private:
    double alpha_;
};

std::unique_ptr<PairPotential> make_potential(const std::string& name, double morse_alpha = 3.0);

}  // namespace acbond
