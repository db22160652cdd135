#pragma once

#include <vector>

namespace chemo {

// Cell-centered radial mesh for a ball of radius R in dimension n.
//
// Geometry is carried in two coordinates at once: the radius r and the
// volume-like coordinate s = r^n.  Shell volumes are exact:
//   |shell_i| = (omega_n / n) * (r_{i+1}^n - r_i^n),  omega_n = n*|B_1|.
// All integrals of cellwise-constant fields against r^{n-1} dr are therefore
// exact sums, which the mass-accumulation machinery relies on.
struct RadialGrid {
    int n = 3;
    double R = 1.0;
    int m = 0;

    std::vector<double> face_radii;    // m+1, face_radii[0]=0, face_radii[m]=R
    std::vector<double> cell_centers;  // m, midpoints of adjacent faces
    std::vector<double> shell_volumes; // m, exact n-dim shell volumes
    std::vector<double> face_s;        // m+1, r^n at faces
    double omega_n = 0.0;              // surface area of the unit sphere

    // Uniform spacing in r.
    static RadialGrid uniform(int n, double R, int m);
    // Geometrically graded toward r=0; stretch = outermost/innermost cell
    // width ratio (stretch=1 reproduces the uniform mesh).
    static RadialGrid graded(int n, double R, int m, double stretch);

    double ball_volume() const;      // |B_R|
    // (s_{i+1}-s_i)/n = shell volume / omega_n; the natural cell weight for
    // integrals of the form int rho^{n-1} f drho.
    double cell_weight(int i) const { return (face_s[i + 1] - face_s[i]) / n; }
    int cell_of_radius(double r) const;  // clamped to [0, m-1]
    int cell_of_s(double s) const;
};

// Cellwise-constant scalar field (values are cell averages). The grid must
// outlive the field.
struct RadialField {
    const RadialGrid* grid = nullptr;
    std::vector<double> values;

    RadialField() = default;
    explicit RadialField(const RadialGrid& g, double fill = 0.0)
        : grid(&g), values(static_cast<size_t>(g.m), fill) {}

    int size() const { return static_cast<int>(values.size()); }
    double& operator[](int i) { return values[static_cast<size_t>(i)]; }
    double operator[](int i) const { return values[static_cast<size_t>(i)]; }
    double max_abs() const;
    double max_value() const;
};

// Piecewise-linear cumulative mass U(s) = int_0^{s^{1/n}} rho^{n-1} f drho,
// sampled at the face nodes s_i = r_i^n.  U(0)=0 and the slope on cell i is
// exactly values[i]/n, so omega_n * U(R^n) equals the total mass of f.
struct CumulativeMass {
    std::vector<double> s;     // m+1 nodes, s[0]=0
    std::vector<double> value; // U at nodes

    double s_max() const { return s.back(); }
    double at(double si) const;       // linear interpolation
    double slope_at(double si) const; // cell slope; face hits average neighbors
    int segment_of(double si) const;
};

double mass(const RadialField& f);
CumulativeMass accumulate(const RadialField& f);
// Derivative U_s at s in [0, s_max]; throws std::out_of_range outside.
double slope(const CumulativeMass& U, double s);

// Mass of f restricted to the ball of the given radius (exact partial-shell
// integral of the cellwise-constant field).
double mass_within(const RadialField& f, double radius);

double unit_sphere_area(int n);

} // namespace chemo
