#include "trikernel/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace trikernel {

namespace {
constexpr double kPi = std::numbers::pi;
} // namespace

Contour trace_curve(const KernelData& kd, double t, int n_points) {
    if (n_points < 16) throw InvalidArgument("n_points too small");
    int n = ((n_points + 3) / 4) * 4;
    Contour c;
    c.n = n;
    c.t = t;
    c.bp = branch_points_numeric(kd, t);
    c.unbounded = !kd.steps.contains(-1, 1) && !kd.steps.contains(-1, 0);

    const double x1 = c.bp.x1, x2 = c.bp.x2;
    const double m = 0.5 * (x1 + x2), h = 0.5 * (x2 - x1);
    Poly<double> a = kd.a_num(t), b = kd.b_num(t), d = kd.d_num(t);
    Poly<double> ap = a.derivative(), bpoly = b, bprime = b.derivative();
    // E(x) = -d(x) / ((x - x1)(x2 - x)) = d(x) / ((x - x1)(x - x2)), positive on the cut
    Poly<double> E = poly_deflate(poly_deflate(d, x1), x2);
    Poly<double> Eprime = E.derivative();

    double am = a.eval(Cplx(m, 0)).real();
    double eps = am >= 0 ? 1.0 : -1.0;

    c.pts.resize(static_cast<size_t>(n));
    c.dz.resize(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        double th = 2.0 * kPi * k / n;
        double x = m + h * std::cos(th);
        double xp = -h * std::sin(th);
        double Ex = E.eval(Cplx(x, 0)).real();
        if (Ex <= 0) {
            if (c.unbounded) {
                // the branch escapes near x1; keep a large sentinel-free value
                Ex = std::abs(Ex);
            } else {
                throw ClassificationFailure("curve factor E(x) not positive on the cut");
            }
        }
        double sE = std::sqrt(Ex);
        double av = a.eval(Cplx(x, 0)).real();
        double bv = bpoly.eval(Cplx(x, 0)).real();
        Cplx N(-bv, eps * h * std::sin(th) * sE);
        Cplx D(2.0 * av, 0.0);
        c.pts[static_cast<size_t>(k)] = N / D;
        double Epx = Eprime.eval(Cplx(x, 0)).real();
        Cplx Np(-bprime.eval(Cplx(x, 0)).real() * xp,
                eps * h * (std::cos(th) * sE + std::sin(th) * Epx * xp / (2.0 * sE)));
        Cplx Dp(2.0 * ap.eval(Cplx(x, 0)).real() * xp, 0.0);
        c.dz[static_cast<size_t>(k)] = (Np * D - N * Dp) / (D * D);
    }
    c.y_cross_pos = Y_at_branch_point(kd, t, x2);
    if (!c.unbounded) c.y_cross_neg = Y_at_branch_point(kd, t, x1);
    return c;
}

PointLocation classify_point(const Contour& contour, Cplx y) {
    if (contour.unbounded)
        throw UnboundedContour("point location needs a bounded curve");
    const auto& p = contour.pts;
    size_t n = p.size(), best = 0;
    double dmin = std::abs(p[0] - y);
    for (size_t k = 1; k < n; ++k) {
        double d = std::abs(p[k] - y);
        if (d < dmin) {
            dmin = d;
            best = k;
        }
    }
    double spacing = std::abs(p[(best + 1) % n] - p[(best + n - 1) % n]) * 0.5;
    if (dmin < 0.75 * spacing) return PointLocation::OnCurve;
    double total = 0;
    for (size_t k = 0; k < n; ++k) {
        Cplx u = p[k] - y, v = p[(k + 1) % n] - y;
        total += std::arg(v / u);
    }
    int w = static_cast<int>(std::lround(total / (2.0 * kPi)));
    return w != 0 ? PointLocation::Inside : PointLocation::Outside;
}

bool in_domain(const Contour& contour, Cplx y) {
    PointLocation loc = classify_point(contour, y);
    if (loc == PointLocation::OnCurve)
        throw OnCurve("point is on the curve within mesh tolerance");
    return loc == PointLocation::Inside;
}

double arg_variation(const std::vector<Cplx>& values) {
    double total = 0;
    for (size_t k = 0; k + 1 < values.size(); ++k) {
        if (values[k] == Cplx(0, 0) || values[k + 1] == Cplx(0, 0))
            throw InvalidArgument("argument variation requires nonzero values");
        double step = std::arg(values[k + 1] / values[k]);
        if (std::abs(step) > kPi / 2)
            throw PhaseJumpTooLarge("phase step " + std::to_string(step) +
                                    " exceeds pi/2; refine the mesh");
        total += step;
    }
    return total;
}

int winding_index(const std::vector<Cplx>& values) {
    if (values.size() < 3) throw InvalidArgument("winding needs at least 3 samples");
    std::vector<Cplx> closed = values;
    closed.push_back(values.front());
    double total = arg_variation(closed);
    double w = total / (2.0 * kPi);
    int r = static_cast<int>(std::lround(w));
    if (std::abs(w - r) >= 0.1)
        throw PhaseJumpTooLarge("winding total " + std::to_string(w) + " is not integral");
    return r;
}

int dt_winding(const KernelData& kd, const Contour& contour) {
    Poly<double> dt = kd.dt_num(contour.t);
    std::vector<Cplx> vals;
    vals.reserve(contour.pts.size());
    for (Cplx z : contour.pts) vals.push_back(dt.eval(z));
    return winding_index(vals);
}

int bvp_index(const KernelData& kd, const Contour& contour) {
    size_t half = contour.upper_count();
    std::vector<Cplx> vals;
    vals.reserve(half);
    for (size_t k = 0; k < half; ++k) {
        Cplx z = contour.pts[k % contour.pts.size()];
        Cplx num = sqrt_dt_bvp(kd, contour.t, std::conj(z));
        Cplx den = sqrt_dt_bvp(kd, contour.t, z);
        vals.push_back(num / den);
    }
    double total = arg_variation(vals);
    double w = total / (2.0 * kPi);
    int r = static_cast<int>(std::lround(w));
    if (std::abs(w - r) >= 0.1)
        throw PhaseJumpTooLarge("boundary-coefficient index " + std::to_string(w) +
                                " is not integral");
    return r;
}

} // namespace trikernel
