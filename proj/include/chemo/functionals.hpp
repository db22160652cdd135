#pragma once

#include "chemo/grid.hpp"
#include "chemo/model.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace chemo {

struct RunRecord; // defined in record.hpp

// Weighted moment configuration:
//   phi = int_0^{s0} s^{-b} (s0 - s) U(s) ds,
//   psi = int_0^{s0} s^{-b} (s0 - s) U(s) U_s(s) ds,
// evaluated exactly per cell against piecewise-linear U (U(0)=0 kills the
// endpoint singularity analytically).  The admissible b-window depends on the
// signal closure: (1 - 2/n, min{1, 2 - 4/n}) for KellerSegel and (1, 2 - 4/n)
// for JaegerLuckhaus.
struct MomentConfig {
    double s0 = 0.0;
    double b = 0.0;
    SignalKind regime = SignalKind::KellerSegel;

    // Throws std::invalid_argument when b lies outside the regime window or
    // s0 is not in (0, R^n).
    void validate(int n, double s_max) const;
    static std::pair<double, double> b_window(SignalKind regime, int n);
    // Reported-only compatibility check between the mesh growth exponents and
    // b: (n-1)(max_exponent - 1) < b/2.  Never enforced.
    bool exponent_compat(double max_exponent, int n) const;
};

// Diagnostics attached to each time sample.
struct MomentSample {
    double phi_u = 0.0, phi_v = 0.0;
    double psi_u = 0.0, psi_v = 0.0;
    double concavity_margin = 0.0;  // largest outward slope increment of the
                                    // cumulative masses (<= 0 when concave)
    double profile_constant = 0.0;  // sup (u+v) r^{n(n-1)+eps}
};

double phi(const CumulativeMass& U, const MomentConfig& cfg);
double psi(const CumulativeMass& U, const MomentConfig& cfg);

// Empirical constant psi * s0^{3-b} / phi^2; +infinity when phi == 0.
double psi_phi_gap(const CumulativeMass& U, const MomentConfig& cfg);

// Largest discrete second derivative of the cumulative mass of f over
// interior faces (in the s variable); <= 0 certifies concavity.
double concavity_margin_of(const RadialField& f);

// Max violation of the concave mean-value chain U_s(s) <= U(s)/s <= U_s(0+)
// over the nodes; <= 0 when the chain holds.
double mean_chain_margin(const CumulativeMass& U);

// Blow-up time of y' = A y^2 - B, y(0) = phi0:
//   B > 0: (1 / (2 sqrt(AB))) * log((phi0 + sqrt(B/A)) / (phi0 - sqrt(B/A)))
//          when phi0 > sqrt(B/A), else no blow-up (nullopt);
//   B = 0: 1 / (A phi0) for phi0 > 0, else nullopt.
// Requires A > 0 and B >= 0.
std::optional<double> riccati_blowup_bound(double A, double B, double phi0);

// sup over cells of (u+v) * r^{n(n-1)+eps} compared against L.
// Returns {value <= L, value}.
std::pair<bool, double> profile_check(const RadialField& u, const RadialField& v,
                                      double eps, double L);

// Default profile-monitor exponent shift satisfying 2*eps <= 1 - 2/n.
double default_profile_eps(int n);

struct InequalityAuditReport {
    bool ok = false;           // audit could be evaluated
    std::string message;
    double coeff = 0.0;        // structural coefficient in front of the gap
    double gap_min = 0.0;      // run minimum of the empirical psi-phi constant
    double A = 0.0, B = 0.0;   // dphi/dt >= A phi^2 - B, fitted B is minimal
    double min_slack = 0.0;    // smallest per-sample slack (>= 0 by fit)
    std::vector<double> slack; // per interior sample
    std::optional<double> predicted_time; // best Riccati upper bound
    double observed_time = 0.0;
    int samples_used = 0;
};

// Empirical check that the sampled phi obeys a Riccati differential
// inequality with the structural coefficient A = coeff * gap_min * s0^{b-3}
// (coeff = min(alpha chi1, beta chi2) n / (2 d3) for KellerSegel on the
// combined species, alpha chi1 n / (2 d3) for JaegerLuckhaus on u alone) and
// the smallest absorbing constant B.  Errors with fewer than 3 samples.
InequalityAuditReport audit_inequality(const RunRecord& rec,
                                       const MomentConfig& cfg,
                                       const ModelParams& p);

} // namespace chemo
