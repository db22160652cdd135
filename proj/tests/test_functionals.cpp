#include "doctest.h"

#include "chemo/functionals.hpp"
#include "chemo/grid.hpp"
#include "chemo/record.hpp"

#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

using namespace chemo;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

oracle::LinearTable as_table(const CumulativeMass& U) {
    return {U.s, U.value};
}

MomentConfig cfg_of(double s0, double b, SignalKind regime) {
    MomentConfig c;
    c.s0 = s0;
    c.b = b;
    c.regime = regime;
    return c;
}

// Synthetic record whose phi samples follow 1/(T-t) exactly, with psi chosen
// so the structural coefficient works out to A = 1 (unit parameters, s0 = 1).
RunRecord hyperbolic_record(int n, double T, double t_max, double dt,
                            bool split_between_species) {
    RunRecord rec;
    for (double t = 0.0; t <= t_max + 1e-12; t += dt) {
        SampleRow row;
        row.t = t;
        const double f = 1.0 / (T - t);
        const double g = (2.0 / n) * f * f;
        if (split_between_species) {
            row.mom.phi_u = 0.5 * f;
            row.mom.phi_v = 0.5 * f;
            row.mom.psi_u = 0.5 * g;
            row.mom.psi_v = 0.5 * g;
        } else {
            row.mom.phi_u = f;
            row.mom.psi_u = g;
        }
        rec.samples.push_back(row);
    }
    rec.termination.cause = TerminationCause::BlowupThreshold;
    rec.termination.time = t_max;
    return rec;
}

} // namespace

TEST_SUITE("functionals") {

TEST_CASE("moment weight window by closure and dimension") {
    auto ks3 = MomentConfig::b_window(SignalKind::KellerSegel, 3);
    CHECK(ks3.first == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(ks3.second == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    auto ks4 = MomentConfig::b_window(SignalKind::KellerSegel, 4);
    CHECK(ks4.first == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ks4.second == doctest::Approx(1.0).epsilon(1e-15));
    auto ks5 = MomentConfig::b_window(SignalKind::KellerSegel, 5);
    CHECK(ks5.second == doctest::Approx(1.0).epsilon(1e-15)); // min(1, 6/5)
    auto jl5 = MomentConfig::b_window(SignalKind::JaegerLuckhaus, 5);
    CHECK(jl5.first == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(jl5.second == doctest::Approx(1.2).epsilon(1e-15));

    MomentConfig c = cfg_of(0.5, 0.5, SignalKind::KellerSegel);
    c.validate(3, 1.0); // fine: 0.5 in (1/3, 2/3), s0 in (0, 1)
    c.b = 0.7;
    CHECK_THROWS_AS(c.validate(3, 1.0), std::invalid_argument);
    c.b = 0.5;
    c.s0 = 1.0;
    CHECK_THROWS_AS(c.validate(3, 1.0), std::invalid_argument);
}

TEST_CASE("mesh-growth compatibility diagnostic") {
    MomentConfig c = cfg_of(0.5, 1.1, SignalKind::JaegerLuckhaus);
    CHECK(c.exponent_compat(1.1, 5));        // 4 * 0.1 = 0.4 <  0.55
    CHECK_FALSE(c.exponent_compat(1.2, 5));  // 4 * 0.2 = 0.8 >= 0.55
}

TEST_CASE("closed form for linear cumulative mass") {
    // f = n makes U(s) = s exactly, so
    //   phi = psi = s0^{3-b} / ((2-b)(3-b))   and the ratio constant is
    //   psi * s0^{3-b} / phi^2 = (2-b)(3-b).
    const RadialGrid g = RadialGrid::uniform(3, 1.2, 57);
    RadialField f(g, 3.0);
    const CumulativeMass U = accumulate(f);

    SUBCASE("generic weight") {
        const MomentConfig c = cfg_of(1.0, 0.5, SignalKind::KellerSegel);
        CHECK(phi(U, c) == doctest::Approx(4.0 / 15.0).epsilon(1e-12));
        CHECK(psi(U, c) == doctest::Approx(4.0 / 15.0).epsilon(1e-12));
        CHECK(psi_phi_gap(U, c) == doctest::Approx(1.5 * 2.5).epsilon(1e-12));
    }
    SUBCASE("logarithmic weight b = 1") {
        const MomentConfig c = cfg_of(1.0, 1.0, SignalKind::JaegerLuckhaus);
        CHECK(phi(U, c) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(psi_phi_gap(U, c) == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("scaling in s0") {
        const double b = 0.6, s0 = 0.37;
        const MomentConfig c = cfg_of(s0, b, SignalKind::KellerSegel);
        const double expect = std::pow(s0, 3.0 - b) / ((2.0 - b) * (3.0 - b));
        CHECK(phi(U, c) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("moments agree with adaptive quadrature on random data") {
    std::mt19937 rng(424242u);
    std::uniform_real_distribution<double> val(0.05, 2.0);
    for (int trial = 0; trial < 12; ++trial) {
        const bool graded = trial % 2;
        const RadialGrid g = graded ? RadialGrid::graded(3, 1.0, 31, 5.0)
                                    : RadialGrid::uniform(4, 1.3, 31);
        RadialField f(g);
        for (int i = 0; i < g.m; ++i) f[i] = val(rng);
        const CumulativeMass U = accumulate(f);
        const oracle::LinearTable tab = as_table(U);
        for (double b : {0.5, 1.0, 1.5}) {
            const double s0 = 0.6 * U.s_max(); // lands strictly inside a cell
            const MomentConfig c = cfg_of(s0, b, SignalKind::KellerSegel);
            const double ref_phi = oracle::moment(tab, s0, b, oracle::Kind::Phi);
            const double ref_psi = oracle::moment(tab, s0, b, oracle::Kind::Psi);
            CHECK(phi(U, c) == doctest::Approx(ref_phi).epsilon(1e-10));
            CHECK(psi(U, c) == doctest::Approx(ref_psi).epsilon(1e-10));
        }
    }
}

TEST_CASE("moment cutoff edge cases") {
    const RadialGrid g = RadialGrid::uniform(3, 1.0, 20);
    RadialField f(g, 3.0);
    const CumulativeMass U = accumulate(f);
    // s0 at a face node and at the outer boundary both integrate cleanly
    for (double s0 : {U.s[7], U.s_max()}) {
        const double b = 0.5;
        const MomentConfig c = cfg_of(s0, b, SignalKind::KellerSegel);
        const double expect = std::pow(s0, 3.0 - b) / ((2.0 - b) * (3.0 - b));
        CHECK(phi(U, c) == doctest::Approx(expect).epsilon(1e-11));
    }
    CHECK_THROWS_AS(phi(U, cfg_of(2.0, 0.5, SignalKind::KellerSegel)),
                    std::invalid_argument);
    CHECK_THROWS_AS(phi(U, cfg_of(0.5, 2.0, SignalKind::KellerSegel)),
                    std::invalid_argument);

    RadialField zero(g, 0.0);
    const CumulativeMass Z = accumulate(zero);
    CHECK(psi_phi_gap(Z, cfg_of(0.5, 0.5, SignalKind::KellerSegel)) == kInf);
}

TEST_CASE("concavity margin tracks the sign of the density slope") {
    const RadialGrid g = RadialGrid::uniform(3, 1.0, 4);
    RadialField dec(g), inc(g), flat(g, 2.0);
    for (int i = 0; i < 4; ++i) {
        dec[i] = 4.0 - i;
        inc[i] = 1.0 + i;
    }
    CHECK(concavity_margin_of(dec) < 0.0);
    CHECK(concavity_margin_of(inc) > 0.0);
    CHECK(concavity_margin_of(flat) == doctest::Approx(0.0));

    const RadialGrid g1 = RadialGrid::uniform(3, 1.0, 1);
    RadialField single(g1, 5.0);
    CHECK(concavity_margin_of(single) == 0.0);
}

TEST_CASE("mean-value chain holds exactly for concave accumulations") {
    const RadialGrid g = RadialGrid::uniform(3, 1.0, 30);
    RadialField dec(g), inc(g);
    for (int i = 0; i < g.m; ++i) {
        dec[i] = 2.0 / (1.0 + i);
        inc[i] = 0.1 * (1 + i);
    }
    CHECK(mean_chain_margin(accumulate(dec)) <= 1e-14);
    CHECK(mean_chain_margin(accumulate(inc)) > 0.0);
}

TEST_CASE("comparison-solution blow-up time") {
    SUBCASE("frozen values") {
        auto t = riccati_blowup_bound(1.0, 1.0, 2.0);
        REQUIRE(t.has_value());
        CHECK(*t == doctest::Approx(0.5493061443340549).epsilon(1e-14)); // ln(3)/2
        t = riccati_blowup_bound(2.0, 0.0, 0.5);
        REQUIRE(t.has_value());
        CHECK(*t == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("no blow-up below the rest point") {
        CHECK_FALSE(riccati_blowup_bound(1.0, 4.0, 2.0).has_value());
        CHECK_FALSE(riccati_blowup_bound(1.0, 4.0, 1.9).has_value());
        CHECK_FALSE(riccati_blowup_bound(2.0, 0.0, 0.0).has_value());
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(riccati_blowup_bound(0.0, 1.0, 2.0), std::invalid_argument);
        CHECK_THROWS_AS(riccati_blowup_bound(1.0, -1.0, 2.0), std::invalid_argument);
    }
    SUBCASE("agrees with the integral form") {
        const double triples[][3] = {
            {1.0, 1.0, 2.0}, {0.5, 0.25, 3.0}, {2.0, 0.0, 0.5}, {3.0, 2.0, 1.2}};
        for (const auto& tr : triples) {
            auto t = riccati_blowup_bound(tr[0], tr[1], tr[2]);
            REQUIRE(t.has_value());
            const double ref = oracle::riccati_quadrature(tr[0], tr[1], tr[2]);
            CHECK(*t == doctest::Approx(ref).epsilon(1e-10));
        }
    }
}

TEST_CASE("tail-profile monitor") {
    const RadialGrid g = RadialGrid::uniform(3, 1.0, 10);
    RadialField u(g), v(g);
    u[5] = 5.0; // center r = 0.55
    v[5] = 1.0;
    const double expect = 6.0 * std::pow(0.55, 6.0); // exponent n(n-1) = 6
    auto [ok_tight, sup] = profile_check(u, v, 0.0, expect * 1.001);
    CHECK(ok_tight);
    CHECK(sup == doctest::Approx(expect).epsilon(1e-12));
    auto [ok_fail, sup2] = profile_check(u, v, 0.0, expect * 0.999);
    CHECK_FALSE(ok_fail);
    CHECK(sup2 == doctest::Approx(expect).epsilon(1e-12));

    CHECK(default_profile_eps(3) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(default_profile_eps(4) == doctest::Approx(0.25).epsilon(1e-15));
    // shifted exponent keeps 2*eps <= 1 - 2/n
    for (int n : {3, 4, 5, 8})
        CHECK(2.0 * default_profile_eps(n) <= 1.0 - 2.0 / n + 1e-15);
}

TEST_CASE("differential-inequality audit on a hyperbolic trajectory") {
    // phi = 1/(T-t) solves phi' = phi^2; with unit parameters and s0 = 1 the
    // structural coefficient evaluates to exactly A = 1, the fitted B stays
    // at zero (centered differences overestimate the convex derivative), and
    // every start sample predicts the true blow-up time T.
    ModelParams p;
    p.n = 5;
    p.h_kind = SignalKind::JaegerLuckhaus;
    const MomentConfig c = cfg_of(1.0, 1.1, SignalKind::JaegerLuckhaus);
    const double T = 1.0;
    const RunRecord rec = hyperbolic_record(5, T, 0.9, 0.05, false);

    const InequalityAuditReport rep = audit_inequality(rec, c, p);
    REQUIRE(rep.ok);
    CHECK(rep.coeff == doctest::Approx(2.5).epsilon(1e-14)); // n/2
    CHECK(rep.gap_min == doctest::Approx(0.4).epsilon(1e-12)); // 2/n
    CHECK(rep.A == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.B <= 1e-10);
    CHECK(rep.min_slack >= 0.0);
    REQUIRE(rep.predicted_time.has_value());
    CHECK(*rep.predicted_time == doctest::Approx(T).epsilon(1e-8));
    // the bound is an upper bound on the observed horizon
    CHECK(*rep.predicted_time >= rep.observed_time);
}

TEST_CASE("differential-inequality audit combines species under signal decay") {
    ModelParams p;
    p.n = 5;
    const MomentConfig c = cfg_of(1.0, 0.7, SignalKind::KellerSegel);
    const RunRecord rec = hyperbolic_record(5, 1.0, 0.9, 0.05, true);
    const InequalityAuditReport rep = audit_inequality(rec, c, p);
    REQUIRE(rep.ok);
    CHECK(rep.coeff == doctest::Approx(2.5).epsilon(1e-14)); // min route * n/2
    CHECK(rep.A == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(rep.predicted_time.has_value());
    CHECK(*rep.predicted_time == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("differential-inequality audit degrades gracefully") {
    ModelParams p;
    p.n = 5;
    p.h_kind = SignalKind::JaegerLuckhaus;
    const MomentConfig c = cfg_of(1.0, 1.1, SignalKind::JaegerLuckhaus);

    RunRecord two = hyperbolic_record(5, 1.0, 0.05, 0.05, false);
    REQUIRE(two.samples.size() == 2);
    InequalityAuditReport rep = audit_inequality(two, c, p);
    CHECK_FALSE(rep.ok);
    CHECK(rep.message.find("3 samples") != std::string::npos);

    RunRecord rec = hyperbolic_record(5, 1.0, 0.9, 0.05, false);
    for (auto& row : rec.samples) row.mom.phi_u = 0.0;
    rep = audit_inequality(rec, c, p);
    CHECK_FALSE(rep.ok);

    ModelParams nochi = p;
    nochi.chi1 = 0.0;
    rec = hyperbolic_record(5, 1.0, 0.9, 0.05, false);
    rep = audit_inequality(rec, c, nochi);
    CHECK_FALSE(rep.ok);
    CHECK(rep.message.find("coefficient") != std::string::npos);
}

} // TEST_SUITE("functionals")
