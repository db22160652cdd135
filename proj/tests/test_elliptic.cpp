#include "doctest.h"

#include "chemo/elliptic.hpp"
#include "chemo/grid.hpp"
#include "chemo/model.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace chemo;

namespace {

ModelParams ks_params(int n = 3, double R = 1.0) {
    ModelParams p;
    p.n = n;
    p.R = R;
    p.h_kind = SignalKind::KellerSegel;
    return p;
}

ModelParams jl_params(int n = 3, double R = 1.0) {
    ModelParams p = ks_params(n, R);
    p.h_kind = SignalKind::JaegerLuckhaus;
    return p;
}

RadialField smooth_bump(const RadialGrid& g, double amp, double decay) {
    RadialField f(g);
    for (int i = 0; i < g.m; ++i)
        f[i] = amp * std::exp(-decay * g.cell_centers[i] * g.cell_centers[i]);
    return f;
}

// Quartic with built-in no-flux boundaries: w(r) = (r^2 - R^2)^2, whose
// radial Laplacian is 4((n+2) r^2 - n R^2).
double quartic(double r, double R) {
    const double d = r * r - R * R;
    return d * d;
}

double quartic_laplacian(double r, double R, int n) {
    return 4.0 * ((n + 2) * r * r - n * R * R);
}

double max_err_vs(const RadialField& w, double shift, double R) {
    const RadialGrid& g = *w.grid;
    double err = 0.0;
    for (int i = 0; i < g.m; ++i)
        err = std::max(err, std::fabs(w[i] - (quartic(g.cell_centers[i], R) - shift)));
    return err;
}

} // namespace

TEST_SUITE("elliptic") {

TEST_CASE("tridiagonal elimination reproduces a known solution") {
    const int m = 50;
    std::vector<double> x(m);
    for (int i = 0; i < m; ++i) x[i] = std::sin(0.7 * i) + 2.0;
    std::vector<double> lower(m, 0.0), diag(m, 0.0), upper(m, 0.0), rhs(m, 0.0);
    for (int i = 0; i < m; ++i) {
        lower[i] = (i > 0) ? -1.0 - 0.1 * i : 0.0;
        upper[i] = (i + 1 < m) ? -2.0 + 0.05 * i : 0.0;
        diag[i] = 5.0 + std::fabs(lower[i]) + std::fabs(upper[i]);
        rhs[i] = diag[i] * x[i];
        if (i > 0) rhs[i] += lower[i] * x[i - 1];
        if (i + 1 < m) rhs[i] += upper[i] * x[i + 1];
    }
    detail::solve_tridiagonal(lower, diag, upper, rhs);
    for (int i = 0; i < m; ++i)
        CHECK(rhs[i] == doctest::Approx(x[i]).epsilon(1e-12));
}

TEST_CASE("constant source balances exactly under signal decay") {
    const RadialGrid g = RadialGrid::uniform(3, 1.0, 64);
    ModelParams p = ks_params();
    p.alpha = 2.0;
    p.beta = 0.5;
    p.gamma = 4.0;
    RadialField u(g, 1.0), v(g, 3.0);
    const RadialField w = solve_w(p, g, u, v);
    const double expect = (p.alpha * 1.0 + p.beta * 3.0) / p.gamma;
    for (int i = 0; i < g.m; ++i)
        CHECK(w[i] == doctest::Approx(expect).epsilon(1e-13));
    CHECK(residual_w(p, g, u, v, w) <= 1e-10);
}

TEST_CASE("constant source gives the zero signal in the mean-field closure") {
    const RadialGrid g = RadialGrid::uniform(4, 2.0, 48);
    ModelParams p = jl_params(4, 2.0);
    RadialField u(g, 2.5), v(g, 0.7);
    const RadialField w = solve_w(p, g, u, v);
    for (int i = 0; i < g.m; ++i) CHECK(std::fabs(w[i]) <= 1e-12);
    CHECK(signal_mean(p, u, v) == doctest::Approx(2.5 + 0.7).epsilon(1e-14));
}

TEST_CASE("manufactured quartic converges at second order (decay closure)") {
    const int n = 3;
    const double R = 1.0;
    ModelParams p = ks_params(n, R);
    p.d3 = 2.0;
    p.gamma = 1.5;
    auto solve_err = [&](int m) {
        const RadialGrid g = RadialGrid::uniform(n, R, m);
        std::vector<double> q(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) {
            const double r = g.cell_centers[i];
            q[i] = -p.d3 * quartic_laplacian(r, R, n) + p.gamma * quartic(r, R);
        }
        const RadialField w = solve_w_from_source(p, g, q);
        return max_err_vs(w, 0.0, R);
    };
    const double e1 = solve_err(60);
    const double e2 = solve_err(120);
    CHECK(e1 / e2 > 3.0);
    CHECK(e1 / e2 < 5.2);
    CHECK(e2 < 1e-3);
}

TEST_CASE("manufactured quartic converges at second order (mean-field closure)") {
    const int n = 3;
    const double R = 1.0;
    ModelParams p = jl_params(n, R);
    // volume mean of (r^2-R^2)^2 over the unit ball in R^3 is 8/35
    const double shift = 8.0 / 35.0;
    auto solve_err = [&](int m) {
        const RadialGrid g = RadialGrid::uniform(n, R, m);
        std::vector<double> q(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i)
            q[i] = -p.d3 * quartic_laplacian(g.cell_centers[i], R, n);
        const RadialField w = solve_w_from_source(p, g, q);
        return max_err_vs(w, shift, R);
    };
    const double e1 = solve_err(60);
    const double e2 = solve_err(120);
    CHECK(e1 / e2 > 3.0);
    CHECK(e1 / e2 < 5.2);
    CHECK(e2 < 1e-3);
}

TEST_CASE("face gradient identity matches centered differences") {
    for (bool graded : {false, true}) {
        const RadialGrid g = graded ? RadialGrid::graded(3, 1.0, 80, 6.0)
                                    : RadialGrid::uniform(3, 1.0, 80);
        RadialField u = smooth_bump(g, 2.0, 8.0);
        RadialField v = smooth_bump(g, 1.0, 3.0);
        for (ModelParams p : {ks_params(), jl_params()}) {
            p.alpha = 1.3;
            p.beta = 0.4;
            p.d3 = 0.7;
            const RadialField w = solve_w(p, g, u, v);
            const auto wr = flux_wr(p, g, u, v, w);
            REQUIRE(static_cast<int>(wr.size()) == g.m + 1);
            CHECK(wr.front() == 0.0);
            CHECK(wr.back() == 0.0);
            double scale = 0.0;
            for (double x : wr) scale = std::max(scale, std::fabs(x));
            for (int i = 1; i < g.m; ++i) {
                const double centered = (w[i] - w[i - 1]) /
                                        (g.cell_centers[i] - g.cell_centers[i - 1]);
                CHECK(std::fabs(wr[i] - centered) <= 1e-10 * std::max(1.0, scale));
            }
        }
    }
}

TEST_CASE("decay closure satisfies the integral balance identically") {
    const RadialGrid g = RadialGrid::graded(5, 1.0, 100, 10.0);
    ModelParams p = ks_params(5, 1.0);
    p.alpha = 2.0;
    p.beta = 3.0;
    p.gamma = 0.8;
    RadialField u = smooth_bump(g, 5.0, 20.0);
    RadialField v = smooth_bump(g, 1.0, 2.0);
    const RadialField w = solve_w(p, g, u, v);
    const double lhs = p.gamma * mass(w);
    const double rhs = p.alpha * mass(u) + p.beta * mass(v);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("mean-field solution has zero volume mean") {
    const RadialGrid g = RadialGrid::uniform(5, 1.0, 90);
    const ModelParams p = jl_params(5, 1.0);
    RadialField u = smooth_bump(g, 4.0, 15.0);
    RadialField v(g, 0.2);
    const RadialField w = solve_w(p, g, u, v);
    CHECK(std::fabs(mass(w)) <= 1e-12 * g.ball_volume() * w.max_abs());
    CHECK(residual_w(p, g, u, v, w) <= 1e-9);
}

TEST_CASE("residual flags corrupted solutions") {
    const RadialGrid g = RadialGrid::uniform(3, 1.0, 40);
    ModelParams p = ks_params();
    p.gamma = 2.5;
    RadialField u = smooth_bump(g, 1.0, 4.0);
    RadialField v(g, 0.5);
    RadialField w = solve_w(p, g, u, v);
    CHECK(residual_w(p, g, u, v, w) <= 1e-10);

    // a uniform shift leaves fluxes alone; only the decay term sees it
    RadialField shifted = w;
    for (int i = 0; i < g.m; ++i) shifted[i] += 1.0;
    CHECK(residual_w(p, g, u, v, shifted) == doctest::Approx(p.gamma).epsilon(1e-10));

    // a single corrupted cell shows up through the flux terms as well
    RadialField spiked = w;
    spiked[g.m / 2] += 1.0;
    CHECK(residual_w(p, g, u, v, spiked) >= p.gamma);
}

TEST_CASE("decay closure is positivity preserving") {
    const RadialGrid g = RadialGrid::uniform(3, 1.0, 50);
    const ModelParams p = ks_params();
    RadialField u(g), v(g);
    u[0] = 10.0; // mass only in the innermost cell
    const RadialField w = solve_w(p, g, u, v);
    for (int i = 0; i < g.m; ++i) CHECK(w[i] > 0.0);
}

TEST_CASE("source solve rejects mismatched sizes") {
    const RadialGrid g = RadialGrid::uniform(3, 1.0, 10);
    std::vector<double> q(9, 1.0);
    CHECK_THROWS_AS(solve_w_from_source(ks_params(), g, q), std::invalid_argument);
}

} // TEST_SUITE("elliptic")
