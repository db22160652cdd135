#include "chemo/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace chemo {

static constexpr double kInf = std::numeric_limits<double>::infinity();

void ModelParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0))
            throw std::invalid_argument(std::string("ModelParams: ") + name +
                                        " must be > 0");
    };
    positive(d1, "d1");
    positive(d2, "d2");
    positive(d3, "d3");
    positive(mu1, "mu1");
    positive(mu2, "mu2");
    positive(a1, "a1");
    positive(a2, "a2");
    positive(alpha, "alpha");
    positive(beta, "beta");
    positive(R, "R");
    if (!(chi1 >= 0.0)) throw std::invalid_argument("ModelParams: chi1 must be >= 0");
    if (!(chi2 >= 0.0)) throw std::invalid_argument("ModelParams: chi2 must be >= 0");
    if (n < 2) throw std::invalid_argument("ModelParams: n must be >= 2");
    auto exponent = [](double v, const char* name) {
        if (!(v > 1.0))
            throw std::invalid_argument(std::string("ModelParams: ") + name +
                                        " must be > 1");
    };
    exponent(kappa1, "kappa1");
    exponent(kappa2, "kappa2");
    exponent(lambda1, "lambda1");
    exponent(lambda2, "lambda2");
    if (h_kind == SignalKind::KellerSegel && !(gamma > 0.0))
        throw std::invalid_argument("ModelParams: gamma must be > 0");
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Bounded: return "Bounded";
        case Verdict::KSBlowupEligible: return "KSBlowupEligible";
        case Verdict::JLBlowupEligible: return "JLBlowupEligible";
        case Verdict::Unclassified: return "Unclassified";
    }
    return "?";
}

bool RegimePrediction::condition(const std::string& name) const {
    for (const auto& c : details)
        if (c.name == name) return c.satisfied;
    return false;
}

namespace {

// Species-symmetric view of the coefficient set: `own` multiplies this
// species in the signal equation, `cross` the other one.
struct SpeciesView {
    double chi, mu, a, own, cross, kappa, lambda;
};

SpeciesView view_of(const ModelParams& p, Species sp) {
    if (sp == Species::First)
        return {p.chi1, p.mu1, p.a1, p.alpha, p.beta, p.kappa1, p.lambda1};
    return {p.chi2, p.mu2, p.a2, p.beta, p.alpha, p.kappa2, p.lambda2};
}

} // namespace

double chi_threshold_bounded(const ModelParams& p, Species sp) {
    const SpeciesView s = view_of(p, sp);
    if (s.kappa < 2.0 || s.lambda < 2.0) return 0.0; // criterion does not apply
    const bool k2 = (s.kappa == 2.0);
    const bool l2 = (s.lambda == 2.0);
    if (!k2 && !l2) return kInf;
    if (p.n == 2) return kInf;
    const double dim = static_cast<double>(p.n) / (p.n - 2);
    const double via_own = p.d3 * s.mu / s.own;
    const double via_cross = s.a * p.d3 * s.mu / s.cross;
    if (k2 && l2) return std::min(via_own, via_cross) * dim;
    if (k2) return via_own * dim;
    return via_cross * dim;
}

double ks_exponent_cap(int n) {
    if (n < 3) throw std::invalid_argument("ks_exponent_cap: n must be >= 3");
    if (n <= 4) return 7.0 / 6.0;
    return 1.0 + 1.0 / (2.0 * (n - 1));
}

RegimePrediction classify_regime(const ModelParams& p) {
    p.validate();
    RegimePrediction out;
    auto add = [&out](const std::string& name, bool ok, double threshold) {
        out.details.push_back({name, ok, threshold});
        return ok;
    };

    // Boundedness criterion: both species strictly below their chi threshold.
    const double thr1 = chi_threshold_bounded(p, Species::First);
    const double thr2 = chi_threshold_bounded(p, Species::Second);
    bool bdd = true;
    bdd &= add("bounded.chi1_below", p.chi1 < thr1, thr1);
    bdd &= add("bounded.chi2_below", p.chi2 < thr2, thr2);

    // Keller-Segel blow-up eligibility: weak competition exponents in low
    // dimension with the signal-consumption closure.
    bool ks = true;
    ks &= add("ks.signal_kind", p.h_kind == SignalKind::KellerSegel, 0.0);
    ks &= add("ks.n_range", p.n >= 3, 3.0);
    const double maxexp =
        std::max(std::max(p.kappa1, p.kappa2), std::max(p.lambda1, p.lambda2));
    if (p.n >= 3) {
        const double cap = ks_exponent_cap(p.n);
        ks &= add("ks.exponent_max_below", maxexp < cap, cap);
    } else {
        ks &= add("ks.exponent_max_below", false, 0.0);
    }

    // Mean-field (Jaeger-Luckhaus) blow-up eligibility.
    bool jl = true;
    jl &= add("jl.signal_kind", p.h_kind == SignalKind::JaegerLuckhaus, 0.0);
    jl &= add("jl.n_range", p.n >= 5, 5.0);
    jl &= add("jl.lambda1_eq_2", p.lambda1 == 2.0, 2.0);
    jl &= add("jl.lambda2_eq_2", p.lambda2 == 2.0, 2.0);
    jl &= add("jl.kappa1_in_(1,2]", p.kappa1 > 1.0 && p.kappa1 <= 2.0, 2.0);
    jl &= add("jl.kappa2_in_(1,2]", p.kappa2 > 1.0 && p.kappa2 <= 2.0, 2.0);
    const double dim4 = p.n > 4 ? static_cast<double>(p.n) / (p.n - 4) : kInf;
    // chi lower bounds; the "strong" form carries the n/(n-4) factor and, at
    // kappa=2, the max of the two coefficient routes.
    auto chi_strong = [&](const SpeciesView& s) {
        const double via_own = p.d3 * s.mu / s.own;
        const double via_cross = s.a * p.d3 * s.mu / s.cross;
        return (s.kappa == 2.0 ? std::max(via_own, via_cross) : via_cross) * dim4;
    };
    auto chi_weak = [&](const SpeciesView& s) { return s.a * p.d3 * s.mu / s.cross; };
    const SpeciesView s1 = view_of(p, Species::First);
    const SpeciesView s2 = view_of(p, Species::Second);
    const double strong1 = chi_strong(s1), weak1 = chi_weak(s1);
    const double strong2 = chi_strong(s2), weak2 = chi_weak(s2);
    const bool altA = p.chi1 > strong1 && p.chi2 > weak2;
    const bool altB = p.chi1 > weak1 && p.chi2 > strong2;
    add("jl.chi_alt_strong1", altA, strong1);
    add("jl.chi_alt_strong2", altB, strong2);
    jl &= add("jl.chi_alternatives", altA || altB, 0.0);
    // Explicit smallness of the damping rates relative to the sensitivities.
    const double mu1_cap = s1.cross * p.chi1 / (s1.a * p.d3);
    const double mu2_cap = s2.cross * p.chi2 / (s2.a * p.d3);
    jl &= add("jl.mu1_small", p.mu1 > 0.0 && p.mu1 < mu1_cap, mu1_cap);
    jl &= add("jl.mu2_small", p.mu2 > 0.0 && p.mu2 < mu2_cap, mu2_cap);

    if (bdd)
        out.verdict = Verdict::Bounded;
    else if (ks)
        out.verdict = Verdict::KSBlowupEligible;
    else if (jl)
        out.verdict = Verdict::JLBlowupEligible;
    else
        out.verdict = Verdict::Unclassified;
    return out;
}

std::optional<double> select_lp_exponent(const ModelParams& p, Species sp) {
    const SpeciesView s = view_of(p, sp);
    const double lower = 0.5 * p.n;
    // Each active constraint reads (p-1)/p < c; with c >= 1 it never binds,
    // with c < 1 it caps p at 1/(1-c).
    double upper = kInf;
    auto apply = [&upper](double c) {
        if (c < 1.0) upper = std::min(upper, 1.0 / (1.0 - c));
    };
    if (s.chi > 0.0) {
        if (s.kappa == 2.0) apply(p.d3 * s.mu / (s.own * s.chi));
        if (s.lambda == 2.0) apply(s.a * p.d3 * s.mu / (s.cross * s.chi));
    }
    if (upper == kInf) return lower + 1.0;
    if (upper <= lower) return std::nullopt;
    return 0.5 * (lower + upper);
}

} // namespace chemo
