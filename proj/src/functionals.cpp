#include "chemo/functionals.hpp"

#include "chemo/record.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace chemo {

static constexpr double kInf = std::numeric_limits<double>::infinity();

std::pair<double, double> MomentConfig::b_window(SignalKind regime, int n) {
    if (regime == SignalKind::KellerSegel)
        return {1.0 - 2.0 / n, std::min(1.0, 2.0 - 4.0 / n)};
    return {1.0, 2.0 - 4.0 / n};
}

void MomentConfig::validate(int n, double s_max) const {
    if (!(s0 > 0.0) || !(s0 < s_max))
        throw std::invalid_argument("MomentConfig: s0 must lie in (0, R^n)");
    auto [lo, hi] = b_window(regime, n);
    if (!(b > lo) || !(b < hi))
        throw std::invalid_argument("MomentConfig: b=" + std::to_string(b) +
                                    " outside the admissible window (" +
                                    std::to_string(lo) + ", " +
                                    std::to_string(hi) + ")");
}

bool MomentConfig::exponent_compat(double max_exponent, int n) const {
    return (n - 1) * (max_exponent - 1.0) < 0.5 * b;
}

namespace {

// Exact integral of s^{-b} (s0 - s) (A + B s) over [x0, x1], 0 <= x0 < x1,
// for b < 2.  Expanding gives three power terms,
//   s0*A * s^{-b}  +  (s0*B - A) * s^{1-b}  -  B * s^{2-b},
// whose antiderivatives are elementary; the s^{-b} term is only present when
// A != 0, which never happens on the cell touching s=0 (there U(0)=0 forces
// A=0 exactly), so no singular endpoint is ever evaluated.
double weighted_linear_integral(double x0, double x1, double s0, double b,
                                double A, double B) {
    double out = 0.0;
    if (A != 0.0) {
        double p0;
        if (b == 1.0)
            p0 = std::log(x1) - std::log(x0);
        else
            p0 = (std::pow(x1, 1.0 - b) - std::pow(x0, 1.0 - b)) / (1.0 - b);
        out += s0 * A * p0;
    }
    const double c1 = s0 * B - A;
    if (c1 != 0.0)
        out += c1 * (std::pow(x1, 2.0 - b) - std::pow(x0, 2.0 - b)) / (2.0 - b);
    if (B != 0.0)
        out -= B * (std::pow(x1, 3.0 - b) - std::pow(x0, 3.0 - b)) / (3.0 - b);
    return out;
}

enum class Moment { Phi, Psi };

double moment_integral(const CumulativeMass& U, const MomentConfig& cfg,
                       Moment kind) {
    if (!(cfg.b < 2.0))
        throw std::invalid_argument("moment: b must be < 2");
    if (!(cfg.s0 > 0.0) || cfg.s0 > U.s_max())
        throw std::invalid_argument("moment: s0 must lie in (0, s_max]");
    double acc = 0.0;
    const size_t segs = U.s.size() - 1;
    for (size_t i = 0; i < segs; ++i) {
        const double x0 = U.s[i];
        if (x0 >= cfg.s0) break;
        const double x1 = std::min(U.s[i + 1], cfg.s0);
        const double ds = U.s[i + 1] - U.s[i];
        const double slope = (U.value[i + 1] - U.value[i]) / ds;
        // U(s) = c0 + slope*s on this segment; c0 == 0 exactly on the first
        // one because U(0)=0 and s_0=0.
        const double c0 = U.value[i] - slope * x0;
        if (kind == Moment::Phi)
            acc += weighted_linear_integral(x0, x1, cfg.s0, cfg.b, c0, slope);
        else
            acc += weighted_linear_integral(x0, x1, cfg.s0, cfg.b, slope * c0,
                                            slope * slope);
    }
    return acc;
}

} // namespace

double phi(const CumulativeMass& U, const MomentConfig& cfg) {
    return moment_integral(U, cfg, Moment::Phi);
}

double psi(const CumulativeMass& U, const MomentConfig& cfg) {
    return moment_integral(U, cfg, Moment::Psi);
}

double psi_phi_gap(const CumulativeMass& U, const MomentConfig& cfg) {
    const double f = phi(U, cfg);
    if (f == 0.0) return kInf;
    const double g = psi(U, cfg);
    return g * std::pow(cfg.s0, 3.0 - cfg.b) / (f * f);
}

double concavity_margin_of(const RadialField& f) {
    const RadialGrid& g = *f.grid;
    double worst = -kInf;
    for (int i = 0; i + 1 < g.m; ++i) {
        // The cumulative mass is concave exactly when its per-cell slopes
        // f_i/n never increase outward.  The margin is the largest slope
        // increment, in density units so it compares against sup norms;
        // dividing by the s-spacing instead would amplify one-ulp wiggles
        // of a flat core by ~r^{-n} near the origin.
        worst = std::max(worst, (f[i + 1] - f[i]) / g.n);
    }
    return (g.m < 2) ? 0.0 : worst;
}

double mean_chain_margin(const CumulativeMass& U) {
    const size_t segs = U.s.size() - 1;
    const double ds0 = U.s[1] - U.s[0];
    const double first_slope = (U.value[1] - U.value[0]) / ds0;
    double worst = -kInf;
    for (size_t i = 1; i <= segs; ++i) {
        const double chord = U.value[i] / U.s[i];
        worst = std::max(worst, chord - first_slope);
        if (i < segs) {
            double right = (U.value[i + 1] - U.value[i]) / (U.s[i + 1] - U.s[i]);
            worst = std::max(worst, right - chord);
        }
    }
    return worst;
}

std::optional<double> riccati_blowup_bound(double A, double B, double phi0) {
    if (!(A > 0.0)) throw std::invalid_argument("riccati: A must be > 0");
    if (!(B >= 0.0)) throw std::invalid_argument("riccati: B must be >= 0");
    if (B == 0.0) {
        if (!(phi0 > 0.0)) return std::nullopt;
        return 1.0 / (A * phi0);
    }
    const double root = std::sqrt(B / A);
    if (!(phi0 > root)) return std::nullopt;
    return 0.5 / std::sqrt(A * B) * std::log((phi0 + root) / (phi0 - root));
}

std::pair<bool, double> profile_check(const RadialField& u, const RadialField& v,
                                      double eps, double L) {
    const RadialGrid& g = *u.grid;
    const double expo = static_cast<double>(g.n) * (g.n - 1) + eps;
    double sup = 0.0;
    for (int i = 0; i < g.m; ++i)
        sup = std::max(sup, (u[i] + v[i]) * std::pow(g.cell_centers[i], expo));
    return {sup <= L, sup};
}

double default_profile_eps(int n) { return 0.5 * (1.0 - 2.0 / n); }

InequalityAuditReport audit_inequality(const RunRecord& rec,
                                       const MomentConfig& cfg,
                                       const ModelParams& p) {
    InequalityAuditReport rep;
    rep.observed_time = rec.termination.time;
    const bool ks = (cfg.regime == SignalKind::KellerSegel);
    const size_t N = rec.samples.size();
    if (N < 3) {
        rep.message = "audit_inequality: need at least 3 samples";
        return rep;
    }
    std::vector<double> t(N), f(N), g(N);
    for (size_t i = 0; i < N; ++i) {
        const SampleRow& s = rec.samples[i];
        t[i] = s.t;
        f[i] = ks ? s.mom.phi_u + s.mom.phi_v : s.mom.phi_u;
        g[i] = ks ? s.mom.psi_u + s.mom.psi_v : s.mom.psi_u;
    }
    const double s0pow = std::pow(cfg.s0, 3.0 - cfg.b);
    double gap_min = kInf;
    for (size_t i = 0; i < N; ++i)
        if (f[i] > 0.0) gap_min = std::min(gap_min, g[i] * s0pow / (f[i] * f[i]));
    if (!(gap_min > 0.0) || gap_min == kInf) {
        rep.message = "audit_inequality: no usable psi/phi samples";
        return rep;
    }
    rep.gap_min = gap_min;
    rep.coeff = ks ? std::min(p.alpha * p.chi1, p.beta * p.chi2) * p.n / (2.0 * p.d3)
                   : p.alpha * p.chi1 * p.n / (2.0 * p.d3);
    if (!(rep.coeff > 0.0)) {
        rep.message = "audit_inequality: vanishing chemotactic coefficient";
        return rep;
    }
    rep.A = rep.coeff * gap_min / s0pow;

    // minimal absorbing constant over interior samples
    double B = 0.0;
    for (size_t i = 1; i + 1 < N; ++i) {
        const double dphi = (f[i + 1] - f[i - 1]) / (t[i + 1] - t[i - 1]);
        B = std::max(B, rep.A * f[i] * f[i] - dphi);
    }
    rep.B = B;
    rep.slack.reserve(N - 2);
    rep.min_slack = kInf;
    for (size_t i = 1; i + 1 < N; ++i) {
        const double dphi = (f[i + 1] - f[i - 1]) / (t[i + 1] - t[i - 1]);
        const double sl = dphi - (rep.A * f[i] * f[i] - rep.B);
        rep.slack.push_back(sl);
        rep.min_slack = std::min(rep.min_slack, sl);
    }
    rep.samples_used = static_cast<int>(N);

    // Best (smallest) valid comparison bound over possible starting samples:
    // from any sample j, the solution of y' = A y^2 - B, y(t_j) = phi_j is a
    // lower barrier for phi, so t_j plus its blow-up time bounds the
    // termination time from above.
    for (size_t j = 0; j < N; ++j) {
        auto tail = riccati_blowup_bound(rep.A, rep.B, f[j]);
        if (!tail) continue;
        const double pred = t[j] + *tail;
        if (!rep.predicted_time || pred < *rep.predicted_time)
            rep.predicted_time = pred;
    }
    rep.ok = true;
    return rep;
}

} // namespace chemo
