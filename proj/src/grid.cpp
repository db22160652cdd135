#include "chemo/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chemo {

double unit_sphere_area(int n) {
    // omega_n = 2 pi^{n/2} / Gamma(n/2)
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

static void finish_grid(RadialGrid& g) {
    g.cell_centers.resize(static_cast<size_t>(g.m));
    g.shell_volumes.resize(static_cast<size_t>(g.m));
    g.face_s.resize(static_cast<size_t>(g.m) + 1);
    g.omega_n = unit_sphere_area(g.n);
    for (int i = 0; i <= g.m; ++i)
        g.face_s[i] = std::pow(g.face_radii[i], g.n);
    g.face_s[0] = 0.0;
    for (int i = 0; i < g.m; ++i) {
        g.cell_centers[i] = 0.5 * (g.face_radii[i] + g.face_radii[i + 1]);
        g.shell_volumes[i] = g.omega_n / g.n * (g.face_s[i + 1] - g.face_s[i]);
    }
}

RadialGrid RadialGrid::uniform(int n, double R, int m) {
    if (n < 2 || R <= 0.0 || m < 1)
        throw std::invalid_argument("RadialGrid: need n>=2, R>0, m>=1");
    RadialGrid g;
    g.n = n;
    g.R = R;
    g.m = m;
    g.face_radii.resize(static_cast<size_t>(m) + 1);
    for (int i = 0; i <= m; ++i)
        g.face_radii[i] = R * static_cast<double>(i) / m;
    g.face_radii[m] = R;
    finish_grid(g);
    return g;
}

RadialGrid RadialGrid::graded(int n, double R, int m, double stretch) {
    if (n < 2 || R <= 0.0 || m < 1)
        throw std::invalid_argument("RadialGrid: need n>=2, R>0, m>=1");
    if (stretch < 1.0)
        throw std::invalid_argument("RadialGrid: stretch must be >= 1");
    if (m == 1 || stretch == 1.0)
        return uniform(n, R, m);
    // widths w_i = w0 * q^i with q = stretch^{1/(m-1)}; smallest cell at r=0.
    const double q = std::pow(stretch, 1.0 / (m - 1));
    const double w0 = R * (q - 1.0) / (std::pow(q, m) - 1.0);
    RadialGrid g;
    g.n = n;
    g.R = R;
    g.m = m;
    g.face_radii.assign(static_cast<size_t>(m) + 1, 0.0);
    double w = w0;
    for (int i = 1; i <= m; ++i) {
        g.face_radii[i] = g.face_radii[i - 1] + w;
        w *= q;
    }
    g.face_radii[m] = R; // absorb rounding
    finish_grid(g);
    return g;
}

double RadialGrid::ball_volume() const {
    return omega_n / n * std::pow(R, n);
}

int RadialGrid::cell_of_radius(double r) const {
    auto it = std::upper_bound(face_radii.begin(), face_radii.end(), r);
    int i = static_cast<int>(it - face_radii.begin()) - 1;
    return std::clamp(i, 0, m - 1);
}

int RadialGrid::cell_of_s(double s) const {
    auto it = std::upper_bound(face_s.begin(), face_s.end(), s);
    int i = static_cast<int>(it - face_s.begin()) - 1;
    return std::clamp(i, 0, m - 1);
}

double RadialField::max_abs() const {
    double v = 0.0;
    for (double x : values) v = std::max(v, std::fabs(x));
    return v;
}

double RadialField::max_value() const {
    double v = values.empty() ? 0.0 : values[0];
    for (double x : values) v = std::max(v, x);
    return v;
}

double mass(const RadialField& f) {
    const RadialGrid& g = *f.grid;
    double acc = 0.0;
    for (int i = 0; i < g.m; ++i) acc += f[i] * g.shell_volumes[i];
    return acc;
}

CumulativeMass accumulate(const RadialField& f) {
    const RadialGrid& g = *f.grid;
    CumulativeMass U;
    U.s = g.face_s;
    U.value.assign(static_cast<size_t>(g.m) + 1, 0.0);
    for (int i = 0; i < g.m; ++i)
        U.value[i + 1] = U.value[i] + f[i] * (g.face_s[i + 1] - g.face_s[i]) / g.n;
    return U;
}

int CumulativeMass::segment_of(double si) const {
    auto it = std::upper_bound(s.begin(), s.end(), si);
    int i = static_cast<int>(it - s.begin()) - 1;
    return std::clamp(i, 0, static_cast<int>(s.size()) - 2);
}

double CumulativeMass::at(double si) const {
    int i = segment_of(si);
    double ds = s[i + 1] - s[i];
    double slope = (value[i + 1] - value[i]) / ds;
    return value[i] + slope * (si - s[i]);
}

double CumulativeMass::slope_at(double si) const {
    const int last = static_cast<int>(s.size()) - 2;
    auto it = std::lower_bound(s.begin(), s.end(), si);
    int hit = static_cast<int>(it - s.begin());
    if (it != s.end() && *it == si && hit >= 1 && hit <= last) {
        // exact interior face hit: average the two adjacent segment slopes
        double left = (value[hit] - value[hit - 1]) / (s[hit] - s[hit - 1]);
        double right = (value[hit + 1] - value[hit]) / (s[hit + 1] - s[hit]);
        return 0.5 * (left + right);
    }
    int i = segment_of(si);
    return (value[i + 1] - value[i]) / (s[i + 1] - s[i]);
}

double slope(const CumulativeMass& U, double s) {
    if (s < 0.0 || s > U.s_max())
        throw std::out_of_range("slope: s outside [0, R^n]");
    return U.slope_at(s);
}

double mass_within(const RadialField& f, double radius) {
    const RadialGrid& g = *f.grid;
    if (radius <= 0.0) return 0.0;
    const double sr = std::pow(std::min(radius, g.R), g.n);
    double acc = 0.0;
    for (int i = 0; i < g.m; ++i) {
        double lo = std::min(g.face_s[i], sr);
        double hi = std::min(g.face_s[i + 1], sr);
        if (hi <= lo) break;
        acc += f[i] * g.omega_n / g.n * (hi - lo);
    }
    return acc;
}

} // namespace chemo
