#include "chemo/initdata.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace chemo {

namespace {

// Combined profile value at radius r for cap K.
inline double truncated_power(double r, double K, double L, double expo) {
    return std::min(K, L * std::pow(r, -expo));
}

} // namespace

std::pair<RadialField, RadialField> make_concentrated(const RadialGrid& g,
                                                      const ConcentratedSpec& conc) {
    if (!(conc.M0 > 0.0)) throw std::invalid_argument("make_concentrated: M0 must be > 0");
    if (!(conc.L > 0.0)) throw std::invalid_argument("make_concentrated: L must be > 0");
    if (!(conc.r_star > 0.0) || conc.r_star > g.R)
        throw std::invalid_argument("make_concentrated: r_star must lie in (0, R]");
    if (conc.split < 0.0)
        throw std::invalid_argument("make_concentrated: split must be >= 0");

    const double expo = static_cast<double>(g.n) * (g.n - 1);
    const int m = g.m;
    // Capping thresholds per cell: the envelope value at the cell center.
    std::vector<double> env(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i)
        env[i] = conc.L * std::pow(g.cell_centers[i], -expo);

    // Total mass as a function of the cap K is piecewise linear and
    // increasing: cells whose envelope is below K contribute a fixed amount,
    // the rest contribute K * volume.  Solve mass(K) = M0 exactly by walking
    // the sorted envelope values.
    std::vector<int> order(static_cast<size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&env](int a, int b) { return env[a] < env[b]; });

    double fixed = 0.0;                      // mass of already-capped-by-envelope cells
    double free_vol = g.ball_volume();       // volume still at level K
    double K = -1.0;
    for (int idx = 0; idx < m; ++idx) {
        const int c = order[idx];
        // candidate: all cells with env < env[c] are on the envelope
        const double K_cand = env[c];
        const double mass_at = fixed + K_cand * free_vol;
        if (mass_at >= conc.M0) {
            K = (conc.M0 - fixed) / free_vol;
            break;
        }
        fixed += env[c] * g.shell_volumes[c];
        free_vol -= g.shell_volumes[c];
    }
    if (K < 0.0) {
        // even the full envelope cannot carry M0
        throw InfeasibleData("make_concentrated: envelope mass below M0", fixed);
    }

    RadialField combined(g);
    for (int i = 0; i < m; ++i)
        combined[i] = truncated_power(g.cell_centers[i], K, conc.L, expo);

    const double inner = mass_within(combined, conc.r_star);
    if (inner < conc.M0_tilde)
        throw InfeasibleData(
            "make_concentrated: inner-ball mass " + std::to_string(inner) +
                " below required " + std::to_string(conc.M0_tilde),
            inner);

    RadialField u0(g), v0(g);
    const double us = 1.0 / (1.0 + conc.split);
    for (int i = 0; i < m; ++i) {
        u0[i] = combined[i] * us;
        v0[i] = combined[i] * us * conc.split;
    }
    return {u0, v0};
}

double proof_inner_radius(double s0, int n) {
    if (!(s0 > 0.0)) throw std::invalid_argument("proof_inner_radius: s0 must be > 0");
    return std::pow(0.25 * s0, 1.0 / n);
}

const ValidationItem* ValidationReport::find(const std::string& name) const {
    for (const auto& it : items)
        if (it.name == name) return &it;
    return nullptr;
}

ValidationReport validate(const RadialField& u0, const RadialField& v0,
                          const Hypothesis& hyp) {
    ValidationReport rep;
    auto add = [&rep](const std::string& name, bool pass, double value, double bound) {
        rep.items.push_back({name, pass, value, bound});
        rep.all_pass = rep.all_pass && pass;
    };
    const RadialGrid& g = *u0.grid;

    double min_u = 0.0, min_v = 0.0;
    for (int i = 0; i < g.m; ++i) {
        min_u = std::min(min_u, u0[i]);
        min_v = std::min(min_v, v0[i]);
    }
    add("nonnegative_u", min_u >= 0.0, min_u, 0.0);
    add("nonnegative_v", min_v >= 0.0, min_v, 0.0);
    if (hyp.set == HypothesisSet::Bounded) return rep;

    const bool jl = (hyp.set == HypothesisSet::JLBlowup);
    // KS constrains the combined density, JL the first species alone.
    RadialField probe(g);
    for (int i = 0; i < g.m; ++i) probe[i] = jl ? u0[i] : u0[i] + v0[i];

    const double total = mass(probe);
    const double rel = std::fabs(total - hyp.M0) / std::max(hyp.M0, 1e-300);
    add("total_mass_matches", rel <= 1e-10, total, hyp.M0);
    const double inner = mass_within(probe, hyp.r_star);
    add("inner_mass_at_least", inner >= hyp.M0_tilde, inner, hyp.M0_tilde);

    if (jl) {
        bool mono = true;
        for (int i = 0; i + 1 < g.m; ++i)
            if (u0[i + 1] > u0[i] || v0[i + 1] > v0[i]) {
                mono = false;
                break;
            }
        add("nonincreasing", mono, mono ? 1.0 : 0.0, 1.0);
    } else {
        const double expo = static_cast<double>(g.n) * (g.n - 1);
        double sup = 0.0;
        for (int i = 0; i < g.m; ++i)
            sup = std::max(sup, probe[i] * std::pow(g.cell_centers[i], expo));
        add("envelope_bound", sup <= hyp.L * (1.0 + 1e-12), sup, hyp.L);
    }
    return rep;
}

} // namespace chemo
