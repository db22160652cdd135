#include "chemo/elliptic.hpp"

#include <cmath>
#include <stdexcept>

namespace chemo {

namespace detail {

void solve_tridiagonal(std::vector<double>& lower, std::vector<double>& diag,
                       std::vector<double>& upper, std::vector<double>& rhs) {
    const size_t m = diag.size();
    for (size_t i = 1; i < m; ++i) {
        double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[m - 1] /= diag[m - 1];
    for (size_t i = m - 1; i-- > 0;)
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

} // namespace detail

namespace {

// Face transmissibilities t_i = A_i / delta_i with A_i = r_i^{n-1} and
// delta_i the center-to-center distance; t_0 = t_m = 0 encode the no-flux
// boundaries.
std::vector<double> face_coeffs(const RadialGrid& g) {
    std::vector<double> t(static_cast<size_t>(g.m) + 1, 0.0);
    for (int i = 1; i < g.m; ++i) {
        double area = std::pow(g.face_radii[i], g.n - 1);
        double delta = g.cell_centers[i] - g.cell_centers[i - 1];
        t[i] = area / delta;
    }
    return t;
}

double weighted_mean(const RadialGrid& g, const std::vector<double>& x) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < g.m; ++i) {
        num += x[i] * g.cell_weight(i);
        den += g.cell_weight(i);
    }
    return num / den;
}

} // namespace

double signal_mean(const ModelParams& p, const RadialField& u,
                   const RadialField& v) {
    const RadialGrid& g = *u.grid;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < g.m; ++i) {
        num += (p.alpha * u[i] + p.beta * v[i]) * g.shell_volumes[i];
        den += g.shell_volumes[i];
    }
    return num / den;
}

RadialField solve_w_from_source(const ModelParams& p, const RadialGrid& g,
                                const std::vector<double>& q) {
    if (static_cast<int>(q.size()) != g.m)
        throw std::invalid_argument("solve_w_from_source: size mismatch");
    const auto t = face_coeffs(g);
    const size_t m = static_cast<size_t>(g.m);
    std::vector<double> lower(m, 0.0), diag(m, 0.0), upper(m, 0.0), rhs(m, 0.0);
    const bool ks = (p.h_kind == SignalKind::KellerSegel);

    for (int i = 0; i < g.m; ++i) {
        const double Vi = g.cell_weight(i);
        lower[i] = -p.d3 * t[i];
        upper[i] = -p.d3 * t[i + 1];
        diag[i] = (ks ? p.gamma * Vi : 0.0) - lower[i] - upper[i];
        rhs[i] = Vi * q[i];
    }

    if (!ks) {
        // Mean-field closure: subtract the source mean, then restore
        // solvability exactly by projecting out the residual mean.
        double qbar = weighted_mean(g, q);
        for (int i = 0; i < g.m; ++i)
            rhs[i] = g.cell_weight(i) * (q[i] - qbar);
        double total = 0.0, vol = 0.0;
        for (int i = 0; i < g.m; ++i) {
            total += rhs[i];
            vol += g.cell_weight(i);
        }
        for (int i = 0; i < g.m; ++i) rhs[i] -= total / vol * g.cell_weight(i);
        // Singular Neumann system: pin the outermost value to zero.  The
        // dropped balance row is implied by the projected right-hand side,
        // and the outermost cell has the largest weight, so the implied-row
        // roundoff stays negligible at cell scale.
        lower[m - 1] = 0.0;
        diag[m - 1] = 1.0;
        rhs[m - 1] = 0.0;
    }

    detail::solve_tridiagonal(lower, diag, upper, rhs);

    RadialField w(g);
    w.values = rhs;
    if (!ks) {
        double wbar = weighted_mean(g, w.values);
        for (double& x : w.values) x -= wbar;
    }
    return w;
}

RadialField solve_w(const ModelParams& p, const RadialGrid& g,
                    const RadialField& u, const RadialField& v) {
    std::vector<double> q(static_cast<size_t>(g.m));
    for (int i = 0; i < g.m; ++i) q[i] = p.alpha * u[i] + p.beta * v[i];
    return solve_w_from_source(p, g, q);
}

std::vector<double> flux_wr(const ModelParams& p, const RadialGrid& g,
                            const RadialField& u, const RadialField& v,
                            const RadialField& w) {
    CumulativeMass U = accumulate(u);
    CumulativeMass V = accumulate(v);
    std::vector<double> wr(static_cast<size_t>(g.m) + 1, 0.0);
    if (p.h_kind == SignalKind::KellerSegel) {
        CumulativeMass W = accumulate(w);
        for (int i = 1; i < g.m; ++i) {
            double num = -p.alpha * U.value[i] - p.beta * V.value[i] +
                         p.gamma * W.value[i];
            wr[i] = num / (p.d3 * std::pow(g.face_radii[i], g.n - 1));
        }
    } else {
        const double mean = signal_mean(p, u, v);
        for (int i = 1; i < g.m; ++i) {
            double num = -p.alpha * U.value[i] - p.beta * V.value[i] +
                         mean * g.face_s[i] / g.n;
            wr[i] = num / (p.d3 * std::pow(g.face_radii[i], g.n - 1));
        }
    }
    // both boundary faces are exactly no-flux
    wr[0] = 0.0;
    wr[g.m] = 0.0;
    return wr;
}

double residual_w(const ModelParams& p, const RadialGrid& g,
                  const RadialField& u, const RadialField& v,
                  const RadialField& w) {
    const auto t = face_coeffs(g);
    const bool ks = (p.h_kind == SignalKind::KellerSegel);
    const double mean = ks ? 0.0 : signal_mean(p, u, v);
    double worst = 0.0;
    for (int i = 0; i < g.m; ++i) {
        double flux_hi = (i + 1 < g.m) ? t[i + 1] * (w[i + 1] - w[i]) : 0.0;
        double flux_lo = (i > 0) ? t[i] * (w[i] - w[i - 1]) : 0.0;
        double h = ks ? p.gamma * w[i] : mean;
        double balance = p.d3 * (flux_hi - flux_lo) +
                         g.cell_weight(i) * (p.alpha * u[i] + p.beta * v[i] - h);
        worst = std::max(worst, std::fabs(balance / g.cell_weight(i)));
    }
    return worst;
}

} // namespace chemo
