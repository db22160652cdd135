#pragma once

#include "chemo/grid.hpp"
#include "chemo/model.hpp"

#include <vector>

namespace chemo {

// Finite-volume solve of the radial signal equation
//   0 = d3 Lap w + alpha u + beta v - h,   w'(0) = w'(R) = 0,
// with h = gamma w (KellerSegel) or h = volume mean of alpha u + beta v
// (JaegerLuckhaus; the returned w then has zero volume mean).  The discrete
// operator is the conservative tridiagonal flux form on the shell mesh; the
// singular mean-field system is solved by projecting the right-hand side onto
// the compatible subspace, pinning one degree of freedom, and removing the
// volume mean of the solution.
RadialField solve_w(const ModelParams& p, const RadialGrid& g,
                    const RadialField& u, const RadialField& v);

// Same solve with the combined source alpha*u + beta*v supplied directly as
// cell values; verification entry for manufactured-solution tests (the source
// need not be sign-restricted).
RadialField solve_w_from_source(const ModelParams& p, const RadialGrid& g,
                                const std::vector<double>& q);

// w_r at the m+1 faces via the integrated form of the signal equation:
//   r^{n-1} w_r(r) = ( -alpha U - beta V + gamma W )(r^n) / d3        (KS)
//   r^{n-1} w_r(r) = ( -alpha U - beta V + mean * r^n / n ) / d3      (JL)
// where U,V,W are cumulative masses and `mean` is the volume mean of
// alpha u + beta v.  Both boundary faces carry exactly zero.
std::vector<double> flux_wr(const ModelParams& p, const RadialGrid& g,
                            const RadialField& u, const RadialField& v,
                            const RadialField& w);

// Max-norm residual of the discrete signal equation at cell scale
// (flux balance divided by the cell weight).
double residual_w(const ModelParams& p, const RadialGrid& g,
                  const RadialField& u, const RadialField& v,
                  const RadialField& w);

// Volume mean of alpha*u + beta*v (the mean-field closure value).
double signal_mean(const ModelParams& p, const RadialField& u,
                   const RadialField& v);

namespace detail {
// Thomas elimination for a tridiagonal system; diag/rhs are overwritten and
// the solution is returned in rhs.
void solve_tridiagonal(std::vector<double>& lower, std::vector<double>& diag,
                       std::vector<double>& upper, std::vector<double>& rhs);
} // namespace detail

} // namespace chemo
