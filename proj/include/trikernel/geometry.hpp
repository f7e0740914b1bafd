#ifndef TRIKERNEL_GEOMETRY_HPP
#define TRIKERNEL_GEOMETRY_HPP

#include <optional>
#include <vector>

#include "trikernel/kernel.hpp"

namespace trikernel {

// The closed curve traced by the two y-branches over the cut [x1, x2],
// parametrized by x = m + h cos(theta), theta in [0, 2pi). On the cut the
// discriminant factors as d(x) = -(x - x1)(x2 - x) E(x) with E > 0, so
//   z(theta) = (-b(x) + i eps h sin(theta) sqrt(E(x))) / (2 a(x))
// is smooth and 2pi-periodic, carries conjugation symmetry z(2pi - theta) =
// conj z(theta), and starts at the positive real crossing Y(x2). The interior
// region (the component of the complement avoiding real +infinity) lies to
// the left: the loop runs counterclockwise.
struct Contour {
    std::vector<Cplx> pts; // z(theta_k), theta_k = 2 pi k / n
    std::vector<Cplx> dz;  // z'(theta_k)
    int n = 0;             // number of samples, multiple of 4
    double t = 0;
    double y_cross_pos = 0;             // Y(x2), at theta = 0
    std::optional<double> y_cross_neg;  // Y(x1), absent for unbounded curves
    bool unbounded = false;
    BranchPointsNum bp;

    size_t upper_count() const { return static_cast<size_t>(n / 2) + 1; } // theta in [0, pi]
};

Contour trace_curve(const KernelData& kd, double t, int n_points = 2048);

enum class PointLocation { Inside, Outside, OnCurve };

PointLocation classify_point(const Contour& contour, Cplx y);
// True iff y lies in the bounded region; throws OnCurve within mesh
// tolerance and UnboundedContour on an unbounded curve.
bool in_domain(const Contour& contour, Cplx y);

// Total argument increment / 2pi of a closed chain of nonzero values,
// accumulated by unwrapped phase differences. Consecutive jumps above pi/2
// signal a too-coarse mesh; the accumulated total must be integral.
int winding_index(const std::vector<Cplx>& values);

// Unwrapped total argument variation along an open chain.
double arg_variation(const std::vector<Cplx>& values);

// Winding of dt(y) along the curve (two zeros of dt enclosed gives 2).
int dt_winding(const KernelData& kd, const Contour& contour);

// Index of the boundary coefficient sqrt(dt)(conj z)/sqrt(dt)(z) along the
// upper half, i.e. of the associated Riemann problem.
int bvp_index(const KernelData& kd, const Contour& contour);

} // namespace trikernel

#endif
