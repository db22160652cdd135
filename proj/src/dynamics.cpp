#include "chemo/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chemo {

static constexpr double kInf = std::numeric_limits<double>::infinity();

double lp_norm(const RadialField& f, double pexp) {
    double acc = 0.0;
    const RadialGrid& g = *f.grid;
    for (int i = 0; i < g.m; ++i)
        acc += std::pow(std::fabs(f[i]), pexp) * g.shell_volumes[i];
    return std::pow(acc, 1.0 / pexp);
}

State make_state(const ModelParams& p, const RadialGrid& g,
                 const RadialField& u0, const RadialField& v0) {
    State s;
    s.u = u0;
    s.v = v0;
    s.u.grid = &g;
    s.v.grid = &g;
    s.w = solve_w(p, g, s.u, s.v);
    return s;
}

namespace {

struct SpeciesCoeffs {
    double d, chi, mu, a, kappa, lambda;
};

inline SpeciesCoeffs coeffs(const ModelParams& p, bool first) {
    if (first) return {p.d1, p.chi1, p.mu1, p.a1, p.kappa1, p.lambda1};
    return {p.d2, p.chi2, p.mu2, p.a2, p.kappa2, p.lambda2};
}

// Kinetics step bound 0.5 / (mu (1 + sup_self^{kappa-1} + a sup_other^{lambda-1})).
double kinetics_dt_bound(const SpeciesCoeffs& c, double sup_self, double sup_other) {
    double load = 1.0 + std::pow(sup_self, c.kappa - 1.0) +
                  c.a * std::pow(sup_other, c.lambda - 1.0);
    return 0.5 / (c.mu * load);
}

// Advective bounds for one species with face velocities chi * w_r:
//  - the face transit bound  min_i  dr_i / |vel_i|,
//  - the exact cellwise positivity bound  V_i / (sum of outgoing face flux
//    coefficients), which is the binding one near the origin where the face
//    area is large relative to the cell volume.
double advective_dt_bound(const RadialGrid& g, const std::vector<double>& wr,
                          double chi) {
    if (chi == 0.0) return kInf;
    double bound = kInf;
    for (int i = 1; i < g.m; ++i) {
        const double vel = std::fabs(chi * wr[i]);
        if (vel == 0.0) continue;
        const double dr = std::min(g.face_radii[i + 1] - g.face_radii[i],
                                   g.face_radii[i] - g.face_radii[i - 1]);
        bound = std::min(bound, dr / vel);
    }
    for (int i = 0; i < g.m; ++i) {
        double out = 0.0;
        const double vlo = chi * wr[i];
        const double vhi = chi * wr[i + 1];
        if (vlo < 0.0) out += -vlo * std::pow(g.face_radii[i], g.n - 1);
        if (vhi > 0.0) out += vhi * std::pow(g.face_radii[i + 1], g.n - 1);
        if (out > 0.0) bound = std::min(bound, g.cell_weight(i) / out);
    }
    return bound;
}

// Explicit update of one species: conservative upwind transport along
// chi * w_r plus the competition kinetics, both evaluated at the current
// state.  Writes the result into `out`.
void explicit_update(const RadialGrid& g, const SpeciesCoeffs& c,
                     const RadialField& self, const RadialField& other,
                     const std::vector<double>& wr, double dt, RadialField& out) {
    const int m = g.m;
    // face fluxes A_i * vel_i * upwind value (relative to omega_n, matching
    // the cell weights)
    std::vector<double> flux(static_cast<size_t>(m) + 1, 0.0);
    for (int i = 1; i < m; ++i) {
        const double vel = c.chi * wr[i];
        const double up = vel >= 0.0 ? self[i - 1] : self[i];
        flux[i] = std::pow(g.face_radii[i], g.n - 1) * vel * up;
    }
    for (int i = 0; i < m; ++i) {
        const double div = (flux[i + 1] - flux[i]) / g.cell_weight(i);
        const double kin = c.mu * self[i] *
                           (1.0 - std::pow(self[i], c.kappa - 1.0) -
                            c.a * std::pow(other[i], c.lambda - 1.0));
        out[i] = self[i] + dt * (kin - div);
    }
}

// theta-implicit diffusion solve:  (V/dt) (out - rhs_state) = theta L out +
// (1-theta) L prev  with the conservative flux Laplacian L.
void diffuse(const RadialGrid& g, double d, double theta, double dt,
             const RadialField& prev, RadialField& inout) {
    const int m = g.m;
    if (m == 1 || d == 0.0 || dt == 0.0) return;
    std::vector<double> t(static_cast<size_t>(m) + 1, 0.0);
    for (int i = 1; i < m; ++i)
        t[i] = std::pow(g.face_radii[i], g.n - 1) /
               (g.cell_centers[i] - g.cell_centers[i - 1]);
    std::vector<double> lower(m, 0.0), diag(m, 0.0), upper(m, 0.0), rhs(m, 0.0);
    for (int i = 0; i < m; ++i) {
        const double Vi = g.cell_weight(i);
        lower[i] = -theta * dt * d * t[i];
        upper[i] = -theta * dt * d * t[i + 1];
        diag[i] = Vi - lower[i] - upper[i];
        double expl = 0.0;
        if (theta < 1.0) {
            double hi = (i + 1 < m) ? t[i + 1] * (prev[i + 1] - prev[i]) : 0.0;
            double lo = (i > 0) ? t[i] * (prev[i] - prev[i - 1]) : 0.0;
            expl = (1.0 - theta) * dt * d * (hi - lo);
        }
        rhs[i] = Vi * inout[i] + expl;
    }
    detail::solve_tridiagonal(lower, diag, upper, rhs);
    inout.values = rhs;
}

// Clamp solver-roundoff negatives; anything materially negative is left in
// place so the positivity audit can flag it.
void clip_roundoff(RadialField& f) {
    const double floor = -1e-13 * std::max(1.0, f.max_abs());
    for (double& x : f.values)
        if (x < 0.0 && x > floor) x = 0.0;
}

} // namespace

State step(const ModelParams& p, const State& s, const StepControl& c) {
    const RadialGrid& g = *s.u.grid;
    const auto wr = flux_wr(p, g, s.u, s.v, s.w);

    const SpeciesCoeffs cu = coeffs(p, true);
    const SpeciesCoeffs cv = coeffs(p, false);
    const double sup_u = s.u.max_value();
    const double sup_v = s.v.max_value();

    double dt = std::min(advective_dt_bound(g, wr, cu.chi) * c.cfl_advection,
                         advective_dt_bound(g, wr, cv.chi) * c.cfl_advection);
    dt = std::min(dt, kinetics_dt_bound(cu, sup_u, sup_v));
    dt = std::min(dt, kinetics_dt_bound(cv, sup_v, sup_u));
    if (!(dt >= c.dt_min)) throw StepCollapse(s.t, dt);
    dt = std::min(dt, c.t_end - s.t);

    State out;
    out.t = s.t + dt;
    out.u = RadialField(g);
    out.v = RadialField(g);
    explicit_update(g, cu, s.u, s.v, wr, dt, out.u);
    explicit_update(g, cv, s.v, s.u, wr, dt, out.v);
    diffuse(g, cu.d, c.diffusion_theta, dt, s.u, out.u);
    diffuse(g, cv.d, c.diffusion_theta, dt, s.v, out.v);
    clip_roundoff(out.u);
    clip_roundoff(out.v);
    out.w = solve_w(p, g, out.u, out.v);
    out.dt_last = dt;
    out.step_count = s.step_count + 1;
    return out;
}

namespace {

SampleRow sample_state(const State& s, const DiagnosticsConfig& d) {
    SampleRow row;
    row.t = s.t;
    row.dt = s.dt_last;
    row.mass_u = mass(s.u);
    row.mass_v = mass(s.v);
    row.sup_u = s.u.max_value();
    row.sup_v = s.v.max_value();
    row.lp_u = lp_norm(s.u, d.lp_u);
    row.lp_v = lp_norm(s.v, d.lp_v);
    CumulativeMass U = accumulate(s.u);
    CumulativeMass V = accumulate(s.v);
    row.mom.phi_u = phi(U, d.moments);
    row.mom.phi_v = phi(V, d.moments);
    row.mom.psi_u = psi(U, d.moments);
    row.mom.psi_v = psi(V, d.moments);
    row.mom.concavity_margin =
        std::max(concavity_margin_of(s.u), concavity_margin_of(s.v));
    row.mom.profile_constant =
        profile_check(s.u, s.v, d.profile_eps, kInf).second;
    return row;
}

} // namespace

RunRecord run(const ModelParams& p, State s, const StepControl& c,
              const DiagnosticsConfig& d, State* final_state) {
    RunRecord rec;
    const int stride = std::max(1, d.sample_stride);
    rec.samples.push_back(sample_state(s, d));
    bool positivity_ok = true;

    TerminationCause cause = TerminationCause::ReachedTEnd;
    const double t_eps = 1e-12 * std::max(1.0, c.t_end);
    while (true) {
        if (s.u.max_value() + s.v.max_value() >= c.blowup_threshold) {
            cause = TerminationCause::BlowupThreshold;
            break;
        }
        if (s.t >= c.t_end - t_eps) {
            cause = TerminationCause::ReachedTEnd;
            break;
        }
        try {
            s = step(p, s, c);
        } catch (const StepCollapse&) {
            cause = TerminationCause::StepCollapse;
            break;
        }
        for (int i = 0; i < s.u.grid->m; ++i)
            if (s.u[i] < 0.0 || s.v[i] < 0.0) positivity_ok = false;
        if (s.step_count % stride == 0)
            rec.samples.push_back(sample_state(s, d));
    }
    if (rec.samples.back().t < s.t)
        rec.samples.push_back(sample_state(s, d));

    rec.termination.cause = cause;
    rec.termination.time = s.t;
    rec.audits.positivity_ok = positivity_ok;

    if (cause != TerminationCause::ReachedTEnd) {
        std::vector<double> ts, sups;
        ts.reserve(rec.samples.size());
        for (const auto& row : rec.samples) {
            ts.push_back(row.t);
            sups.push_back(row.sup_u + row.sup_v);
        }
        if (auto fit = fit_blowup_time(ts, sups, d.fit_tail)) {
            rec.termination.fit_T = fit->first;
            rec.termination.fit_q = fit->second;
        }
    }

    MassAuditReport mass_rep = mass_audit(rec, p);
    rec.audits.mass_ok = mass_rep.ok;
    rec.audits.mass_max_violation = mass_rep.max_violation;
    double cmax = -kInf;
    for (const auto& row : rec.samples)
        cmax = std::max(cmax, row.mom.concavity_margin);
    rec.audits.concavity_max = cmax;
    if (final_state) *final_state = std::move(s);
    return rec;
}

MassAuditReport mass_audit(const RunRecord& rec, const ModelParams& p, double tol) {
    MassAuditReport rep;
    if (rec.samples.empty()) return rep;
    const double mu0 = rec.samples.front().mass_u;
    const double mv0 = rec.samples.front().mass_v;
    for (const auto& row : rec.samples) {
        const double bu = std::exp(p.mu1 * row.t) * mu0;
        const double bv = std::exp(p.mu2 * row.t) * mv0;
        double viol = 0.0;
        if (bu > 0.0) viol = std::max(viol, (row.mass_u - bu) / bu);
        else if (row.mass_u > 0.0) viol = kInf;
        if (bv > 0.0) viol = std::max(viol, (row.mass_v - bv) / bv);
        else if (row.mass_v > 0.0) viol = kInf;
        if (viol > rep.max_violation) {
            rep.max_violation = viol;
            rep.worst_t = row.t;
        }
    }
    rep.ok = rep.max_violation <= tol;
    return rep;
}

std::optional<std::pair<double, double>> fit_blowup_time(
    const std::vector<double>& t, const std::vector<double>& sup, int k) {
    // last k samples with strictly positive sup
    std::vector<double> ts, ls;
    for (size_t i = t.size() > static_cast<size_t>(k) ? t.size() - k : 0;
         i < t.size(); ++i) {
        if (sup[i] > 0.0) {
            ts.push_back(t[i]);
            ls.push_back(std::log(sup[i]));
        }
    }
    const size_t N = ts.size();
    if (N < 3) return std::nullopt;
    const double t_last = ts.back();
    const double span = t_last - ts.front();
    if (!(span > 0.0)) return std::nullopt;

    // For fixed T the model log S = logC - q log(T - t) is linear least
    // squares; search the residual over log(T - t_last) by golden section.
    auto sse_and_q = [&](double T) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (size_t i = 0; i < N; ++i) {
            const double x = std::log(T - ts[i]);
            sx += x;
            sy += ls[i];
            sxx += x * x;
            sxy += x * ls[i];
        }
        const double nN = static_cast<double>(N);
        const double denom = nN * sxx - sx * sx;
        double qfit = 0.0;
        if (denom != 0.0) qfit = -(nN * sxy - sx * sy) / denom;
        const double c0 = (sy + qfit * sx) / nN;
        double sse = 0.0;
        for (size_t i = 0; i < N; ++i) {
            const double r = ls[i] - (c0 - qfit * std::log(T - ts[i]));
            sse += r * r;
        }
        return std::make_pair(sse, qfit);
    };

    double lo = std::log(1e-6 * span), hi = std::log(10.0 * span);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
    double f1 = sse_and_q(t_last + std::exp(c1)).first;
    double f2 = sse_and_q(t_last + std::exp(c2)).first;
    for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
        if (f1 < f2) {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - gr * (b - a);
            f1 = sse_and_q(t_last + std::exp(c1)).first;
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + gr * (b - a);
            f2 = sse_and_q(t_last + std::exp(c2)).first;
        }
    }
    const double T = t_last + std::exp(0.5 * (a + b));
    auto [sse, q] = sse_and_q(T);
    (void)sse;
    if (!std::isfinite(T) || !std::isfinite(q)) return std::nullopt;
    return std::make_pair(T, q);
}

} // namespace chemo
