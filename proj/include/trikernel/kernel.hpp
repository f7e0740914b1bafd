#ifndef TRIKERNEL_KERNEL_HPP
#define TRIKERNEL_KERNEL_HPP

#include <complex>
#include <optional>

#include "trikernel/model.hpp"
#include "trikernel/poly.hpp"
#include "trikernel/pseries.hpp"

namespace trikernel {

using Cplx = std::complex<double>;

// Kernel K(x,y) = xy (t sum_S x^i y^j - 1) = a(x) y^2 + b(x) y + c(x)
//              = at(y) x^2 + bt(y) x + ct(y),
// with a(x) = t x sum_{(i,1)} x^i, b(x) = t x sum_{(i,0)} x^i - x,
// c(x) = t x sum_{(i,-1)} x^i and the tilde analogues in y. The integer step
// sums A,B,C (a = tA, b = tB - x, c = tC) are stored exactly; numeric and
// exact-series forms are derived on demand. The three groupings of K are
// cross-checked symbolically at construction.
struct KernelData {
    StepSet steps;
    Poly<Rat> A, B, C, At, Bt, Ct;

    Poly<double> a_num(double t) const;
    Poly<double> b_num(double t) const;
    Poly<double> c_num(double t) const;
    Poly<double> d_num(double t) const;   // b^2 - 4ac
    Poly<double> at_num(double t) const;
    Poly<double> bt_num(double t) const;
    Poly<double> ct_num(double t) const;
    Poly<double> dt_num(double t) const;  // bt^2 - 4 at ct

    Cplx K(Cplx x, Cplx y, double t) const;

    // d (tilde = false) or dt (tilde = true) with exact Puiseux-in-t
    // coefficients, truncated at `units` over ramification q.
    Poly<PuiseuxSeries> d_poly_series(bool tilde, long units, int q) const;
};

KernelData build_kernel(const StepSet& steps);

// Roots of d and dt at fixed t in (0, 1/|S|), classified: x1 < x2 real in the
// open unit disc with x2 > 0, the others outside the closed disc with x3 > 0;
// x4 is absent when d has degree three. The layout is asserted, not assumed.
struct BranchPointsNum {
    double x1 = 0, x2 = 0, x3 = 0;
    std::optional<double> x4;
    double y1 = 0, y2 = 0, y3 = 0;
    std::optional<double> y4;
};

BranchPointsNum branch_points_numeric(const KernelData& kd, double t);

// Puiseux expansions of the small branch points (and the large ones when the
// degree and the coefficient field allow; they may live in a quadratic
// extension of Q, in which case they are left empty).
struct BranchPointsSeries {
    PuiseuxSeries x1, x2, y1, y2;
    std::optional<PuiseuxSeries> x3, y3;
};

BranchPointsSeries branch_points_series(const KernelData& kd, long trunc_units, int q = 2);

// The two y-roots of K(x, .) = 0 ordered by modulus, |Y0| <= |Y1|; ties are
// broken by nonnegative imaginary part of Y0. When a(x) = 0 the second root
// escapes to infinity and is flagged.
struct BranchPair {
    Cplx y0, y1;
    bool y1_infinite = false;
};

BranchPair Y_branches(const KernelData& kd, Cplx x, double t);
BranchPair X_branches(const KernelData& kd, Cplx y, double t);

// Common value Y(xi) = -b(xi) / 2a(xi) of the two branches at a branch point.
double Y_at_branch_point(const KernelData& kd, double t, double xi);
double X_at_branch_point(const KernelData& kd, double t, double yi);

// The square root of dt(y) determined by the small branch X0:
// sqrt(dt)(y) = -(2 at(y) X0(y) + bt(y)). This is the determination entering
// the boundary condition of the diagonal problem.
Cplx sqrt_dt_bvp(const KernelData& kd, double t, Cplx y);

} // namespace trikernel

#endif
