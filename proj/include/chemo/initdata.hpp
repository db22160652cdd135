#pragma once

#include "chemo/grid.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chemo {

// Truncated-power initial profile  min(K, L r^{-n(n-1)})  with the cap K
// solved so that the combined mass is exactly M0 on the given mesh, split
// between the species as v0 = split * u0.  The tail saturates the admissible
// envelope L r^{-n(n-1)}, which is the most concentrated shape the envelope
// allows within this family.
struct ConcentratedSpec {
    double M0 = 1.0;       // combined mass of u0 + v0
    double M0_tilde = 0.0; // required mass inside the ball of radius r_star
    double r_star = 0.25;
    double L = 1.0;        // envelope constant
    double split = 0.0;    // v0 = split * u0
};

struct InfeasibleData : std::runtime_error {
    double achievable; // inner-ball mass the family can reach at total mass M0
    InfeasibleData(const std::string& what, double achievable_)
        : std::runtime_error(what), achievable(achievable_) {}
};

std::pair<RadialField, RadialField> make_concentrated(const RadialGrid& g,
                                                      const ConcentratedSpec& spec);

// Inner radius used by the blow-up construction for a given moment cutoff:
// (s0/4)^{1/n}.
double proof_inner_radius(double s0, int n);

// Which structural hypothesis set to validate initial data against.
enum class HypothesisSet { Bounded, KSBlowup, JLBlowup };

struct Hypothesis {
    HypothesisSet set = HypothesisSet::Bounded;
    double M0 = 0.0;       // required mass (combined for KS, u alone for JL)
    double M0_tilde = 0.0; // required inner-ball mass
    double r_star = 0.0;
    double L = 0.0;        // envelope constant (KS only)
};

struct ValidationItem {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double bound = 0.0;
};

struct ValidationReport {
    bool all_pass = true;
    std::vector<ValidationItem> items;
    const ValidationItem* find(const std::string& name) const;
};

// Checks the structural requirements on (u0, v0) for the requested hypothesis
// set: nonnegativity always; for KSBlowup combined mass = M0 (1e-10 relative),
// inner-ball mass >= M0_tilde and the envelope bound (u0+v0) r^{n(n-1)} <= L;
// for JLBlowup the same conditions on u0 alone (no envelope) plus cellwise
// monotone nonincrease of both species.
ValidationReport validate(const RadialField& u0, const RadialField& v0,
                          const Hypothesis& hyp);

} // namespace chemo
