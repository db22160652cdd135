#pragma once

#include <optional>
#include <string>
#include <vector>

namespace chemo {

enum class Species { First, Second };
enum class SignalKind { KellerSegel, JaegerLuckhaus };

// Coefficients for the two-species chemotaxis-competition system
//   u_t = d1 Lap u - chi1 div(u grad w) + mu1 u (1 - u^{kappa1-1} - a1 v^{lambda1-1})
//   v_t = d2 Lap v - chi2 div(v grad w) + mu2 v (1 - a2 u^{lambda2-1} - v^{kappa2-1})
//    0  = d3 Lap w + alpha u + beta v - h
// on the ball of radius R in dimension n with no-flux boundaries, where
//   h = gamma * w                        (KellerSegel)
//   h = mean of (alpha u + beta v)       (JaegerLuckhaus, with mean(w)=0).
struct ModelParams {
    double d1 = 1.0, d2 = 1.0, d3 = 1.0;
    double chi1 = 1.0, chi2 = 1.0;
    double mu1 = 1.0, mu2 = 1.0;
    double a1 = 1.0, a2 = 1.0;
    double alpha = 1.0, beta = 1.0;
    double kappa1 = 2.0, kappa2 = 2.0;
    double lambda1 = 2.0, lambda2 = 2.0;
    int n = 3;
    double R = 1.0;
    SignalKind h_kind = SignalKind::KellerSegel;
    double gamma = 1.0; // signal decay rate, KellerSegel only

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

enum class Verdict { Bounded, KSBlowupEligible, JLBlowupEligible, Unclassified };

const char* verdict_name(Verdict v);

struct ConditionCheck {
    std::string name;
    bool satisfied = false;
    double threshold = 0.0; // the comparison value the condition was tested against
};

struct RegimePrediction {
    Verdict verdict = Verdict::Unclassified;
    std::vector<ConditionCheck> details;
    bool condition(const std::string& name) const;
};

// Largest chemotactic sensitivity for which the global-boundedness criterion
// certifies the given species, as a function of the competition exponents:
//   kappa>2 & lambda>2 : +infinity
//   kappa=2 & lambda>2 : (d3 mu / <own signal coeff>) * n/(n-2)
//   kappa>2 & lambda=2 : (a d3 mu / <other signal coeff>) * n/(n-2)
//   kappa=2 & lambda=2 : min of the two, * n/(n-2)
// where species First uses (mu1, a1, alpha own, beta other) and Second the
// mirrored set.  n=2 yields +infinity; exponents below 2 yield 0 (the
// criterion certifies nothing there).
double chi_threshold_bounded(const ModelParams& p, Species sp);

// Dimension-dependent cap on max{kappa1,lambda1,kappa2,lambda2} under which
// the Keller-Segel blow-up construction applies: 7/6 for n in {3,4},
// 1 + 1/(2(n-1)) for n >= 5.
double ks_exponent_cap(int n);

RegimePrediction classify_regime(const ModelParams& p);

// Smallest-norm feasibility of the L^p energy argument for the species.
// Active constraints (only when the matching exponent equals 2):
//   kappa=2 : mu - ((p-1)/p) * (own signal coeff) * chi / d3 > 0
//   lambda=2: a mu - ((p-1)/p) * (other signal coeff) * chi / d3 > 0
// combined with p > n/2.  Returns the midpoint of the feasible interval when
// it is bounded, n/2 + 1 when unbounded, nullopt when empty.
std::optional<double> select_lp_exponent(const ModelParams& p, Species sp);

} // namespace chemo
