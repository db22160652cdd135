#pragma once

// Test-side oracles, deliberately independent of the library implementations:
// adaptive Simpson quadrature for the weighted moments (with a square-root
// substitution that removes the endpoint singularity on the first cell) and
// an adaptive RK4 march for the Riccati comparison ODE.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

inline double adaptive_simpson_rec(const std::function<double(double)>& f,
                                   double a, double b, double fa, double fm,
                                   double fb, double whole, double tol,
                                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol, int depth = 48) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Piecewise-linear table (s_i, U_i) with s_0 = 0, U_0 = 0.
struct LinearTable {
    std::vector<double> s, U;
    double value(double x) const {
        size_t lo = 0, hi = s.size() - 1;
        while (hi - lo > 1) {
            size_t mid = (lo + hi) / 2;
            (s[mid] <= x ? lo : hi) = mid;
        }
        double t = (x - s[lo]) / (s[lo + 1] - s[lo]);
        return U[lo] + t * (U[lo + 1] - U[lo]);
    }
    double slope(size_t seg) const {
        return (U[seg + 1] - U[seg]) / (s[seg + 1] - s[seg]);
    }
};

enum class Kind { Phi, Psi };

// int_0^{s0} s^{-b} (s0-s) G(s) ds with G = U (Phi) or U*U_s (Psi),
// integrated cell by cell; the first cell is mapped through s = z^2 so the
// integrand is smooth there (U(0)=0 makes G vanish linearly in s).
inline double moment(const LinearTable& tab, double s0, double b, Kind kind,
                     double tol = 1e-14) {
    double acc = 0.0;
    for (size_t seg = 0; seg + 1 < tab.s.size(); ++seg) {
        const double a = tab.s[seg];
        if (a >= s0) break;
        const double c = std::min(tab.s[seg + 1], s0);
        const double m = tab.slope(seg);
        auto G = [&](double x) {
            const double u = tab.U[seg] + m * (x - tab.s[seg]);
            return kind == Kind::Phi ? u : u * m;
        };
        if (seg == 0) {
            // At z = 0 the raw expression is 0 * inf; substitute the limit of
            // 2 m z^{3-2b} (s0 - z^2) (shape U = m s): zero for b < 3/2 and
            // 2 m s0 at b = 3/2 (psi decays faster and always vanishes).
            if (kind == Kind::Phi && b > 1.5)
                throw std::invalid_argument("oracle::moment: b > 3/2 unsupported");
            const double limit0 =
                (kind == Kind::Phi && b == 1.5) ? 2.0 * m * s0 : 0.0;
            auto fz = [&](double z) {
                if (z == 0.0) return limit0;
                const double x = z * z;
                return 2.0 * z * std::pow(x, -b) * (s0 - x) * G(x);
            };
            acc += adaptive_simpson(fz, 0.0, std::sqrt(c), tol);
        } else {
            auto fs = [&](double x) { return std::pow(x, -b) * (s0 - x) * G(x); };
            acc += adaptive_simpson(fs, a, c, tol);
        }
    }
    return acc;
}

// Blow-up time of y' = A y^2 - B via an adaptive RK4 march to a large cap,
// plus the asymptotic tail 1/(A*cap).
inline double riccati_march(double A, double B, double phi0, double cap = 1e10) {
    double t = 0.0, y = phi0;
    auto f = [&](double yy) { return A * yy * yy - B; };
    const double rate_cap = 0.05 / std::sqrt(A * std::max(B, A * phi0 * phi0));
    long guard = 0;
    while (y < cap) {
        if (++guard > 100000000L) throw std::runtime_error("riccati_march stuck");
        const double fy = f(y);
        if (!(fy > 0.0)) throw std::runtime_error("riccati_march: not blowing up");
        double dt = std::min(1e-3 * y / fy, rate_cap);
        const double k1 = f(y);
        const double k2 = f(y + 0.5 * dt * k1);
        const double k3 = f(y + 0.5 * dt * k2);
        const double k4 = f(y + dt * k3);
        y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += dt;
    }
    return t + 1.0 / (A * cap);
}

// Same blow-up time as a regular integral: with phi = phi0 / x,
//   int_{phi0}^inf dphi / (A phi^2 - B) = phi0 int_0^1 dx / (A phi0^2 - B x^2).
inline double riccati_quadrature(double A, double B, double phi0) {
    auto f = [&](double x) { return phi0 / (A * phi0 * phi0 - B * x * x); };
    return adaptive_simpson(f, 0.0, 1.0, 1e-14);
}

} // namespace oracle
