#pragma once

#include "chemo/elliptic.hpp"
#include "chemo/functionals.hpp"
#include "chemo/grid.hpp"
#include "chemo/model.hpp"
#include "chemo/record.hpp"

#include <optional>
#include <stdexcept>
#include <utility>

namespace chemo {

// Solver state; w always satisfies the signal equation for the current (u,v).
struct State {
    double t = 0.0;
    RadialField u, v, w;
    double dt_last = 0.0;
    long step_count = 0;
};

struct StepControl {
    double cfl_advection = 0.4;
    double diffusion_theta = 1.0; // 1 = backward Euler (positivity-preserving)
    double dt_min = 1e-12;
    double blowup_threshold = 1e8; // on sup u + sup v
    double t_end = 1.0;
};

// Raised when the admissible step size falls below dt_min; the run loop
// interprets it as the numerical blow-up signal.
struct StepCollapse : std::runtime_error {
    double t, dt;
    StepCollapse(double t_, double dt_)
        : std::runtime_error("step size collapsed"), t(t_), dt(dt_) {}
};

// Initializes the state at t=0 (solves the signal equation once).
State make_state(const ModelParams& p, const RadialGrid& g,
                 const RadialField& u0, const RadialField& v0);

// One IMEX step: explicit conservative upwind chemotaxis + explicit
// competition kinetics, theta-implicit diffusion, then a fresh signal solve.
// The step size obeys the advective CFL (including the exact cellwise
// positivity bound near the origin), the kinetics bound
// 0.5 / (mu (1 + sup u^{kappa-1} + a sup v^{lambda-1})) per species, and the
// remaining time to t_end.
State step(const ModelParams& p, const State& s, const StepControl& c);

// Per-run diagnostic configuration.
struct DiagnosticsConfig {
    MomentConfig moments;
    double profile_eps = 0.0;
    double profile_L = 0.0; // 0 disables the envelope comparison (monitor only)
    double lp_u = 2.0, lp_v = 2.0;
    int sample_stride = 1;
    int fit_tail = 10; // samples used by the blow-up fit
};

// Advances from the initial state until t_end, the sup-norm threshold, or
// step collapse; samples diagnostics every `sample_stride` steps (plus the
// initial and final states).  Never throws on collapse/threshold; those are
// recorded as the termination cause.  When `final_state` is non-null the
// terminal fields are copied there.
RunRecord run(const ModelParams& p, State s, const StepControl& c,
              const DiagnosticsConfig& d, State* final_state = nullptr);

struct MassAuditReport {
    bool ok = true;
    double max_violation = 0.0; // max relative excess over e^{mu t} * M(0)
    double worst_t = 0.0;
};

// Checks mass(u)(t) <= e^{mu1 t} mass(u)(0) and the v analogue at every
// sample, with relative tolerance `tol`.
MassAuditReport mass_audit(const RunRecord& rec, const ModelParams& p,
                           double tol = 1e-8);

// Least-squares power-law fit  sup(t) ~ C (T-t)^{-q}  on the trailing `k`
// samples; returns (T, q) or nullopt when degenerate.
std::optional<std::pair<double, double>> fit_blowup_time(
    const std::vector<double>& t, const std::vector<double>& sup, int k);

double lp_norm(const RadialField& f, double pexp);

} // namespace chemo
