#include "trikernel/bvp.hpp"

#include "trikernel/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace trikernel {

namespace {
constexpr double kPi = std::numbers::pi;

// Unwrap the phase of a chain of nonzero values, starting from the principal
// argument of the first.
std::vector<double> unwrap_args(const std::vector<Cplx>& v) {
    std::vector<double> phi(v.size());
    phi[0] = std::arg(v[0]);
    for (size_t k = 1; k < v.size(); ++k) {
        double step = std::arg(v[k] / v[k - 1]);
        if (std::abs(step) > kPi / 2)
            throw BranchDiscontinuity("phase step above pi/2 while tracking a branch");
        phi[k] = phi[k - 1] + step;
    }
    return phi;
}

// Composite Simpson weights over an even number of intervals.
double simpson_weight(size_t k, size_t last) {
    if (k == 0 || k == last) return 1.0 / 3.0;
    return (k % 2 == 1) ? 4.0 / 3.0 : 2.0 / 3.0;
}

} // namespace

SampledContour contour_nodes(const Contour& c) {
    if (c.unbounded) throw UnboundedContour("quadrature needs a bounded curve");
    SampledContour sc;
    sc.pts = c.pts;
    sc.dz = c.dz;
    sc.dtheta = 2.0 * kPi / c.n;
    return sc;
}

SampledContour unit_circle_nodes(int n) {
    SampledContour sc;
    sc.pts.resize(static_cast<size_t>(n));
    sc.dz.resize(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        double th = 2.0 * kPi * k / n;
        Cplx e(std::cos(th), std::sin(th));
        sc.pts[static_cast<size_t>(k)] = e;
        sc.dz[static_cast<size_t>(k)] = Cplx(0, 1) * e;
    }
    sc.dtheta = 2.0 * kPi / n;
    return sc;
}

Cplx sp_offcontour(const SampledContour& c, const std::vector<Cplx>& f, Cplx z) {
    size_t n = c.pts.size();
    double dmin = 1e300;
    Cplx acc = 0;
    for (size_t k = 0; k < n; ++k) {
        dmin = std::min(dmin, std::abs(c.pts[k] - z));
        acc += f[k] * c.dz[k] / (c.pts[k] - z);
    }
    double spacing = std::abs(c.pts[1] - c.pts[0]);
    if (dmin < spacing)
        throw PointTooCloseToContour("off-contour point within one mesh cell of the contour");
    return acc * c.dtheta / (2.0 * kPi * Cplx(0, 1));
}

PlemeljLimits sp_limits_at_mid(const SampledContour& c, const std::vector<Cplx>& f, size_t k,
                               const std::function<Cplx(Cplx)>& f_eval) {
    size_t n = c.pts.size();
    Cplx z0 = 0.5 * (c.pts[k % n] + c.pts[(k + 1) % n]);
    Cplx f0 = f_eval(z0);
    // Principal value by singularity subtraction. For a closed contour the
    // subtracted kernel integrates to i pi (half winding).
    Cplx acc = 0;
    for (size_t j = 0; j < n; ++j) acc += (f[j] - f0) * c.dz[j] / (c.pts[j] - z0);
    Cplx pv = acc * c.dtheta / (2.0 * kPi * Cplx(0, 1)) + f0 * 0.5;
    PlemeljLimits lim;
    lim.plus = pv + 0.5 * f0;
    lim.minus = pv - 0.5 * f0;
    return lim;
}

// ---- oracle ------------------------------------------------------------------

Cplx DiagonalOracle::eval(Cplx y) const {
    Cplx acc = 0;
    double tn = 1.0;
    for (int n = 0; n <= order; ++n) {
        Cplx layer = 0;
        for (const auto& [i, c] : diag[static_cast<size_t>(n)])
            layer += to_double(c) * std::pow(y, i);
        acc += layer * tn;
        tn *= t;
    }
    return acc;
}

double DiagonalOracle::tail_estimate(double abs_y) const {
    auto mag = [&](int n) {
        double m = 0;
        for (const auto& [i, c] : diag[static_cast<size_t>(n)])
            m += std::abs(to_double(c)) * std::pow(std::max(1.0, abs_y), i);
        return m * std::pow(t, n);
    };
    double m1 = mag(order - 1), m2 = mag(order);
    if (m1 <= 0 && m2 <= 0) {
        // alternate parity: look one layer further back
        m1 = mag(order - 2);
        m2 = std::max(m2, mag(order - 1));
    }
    if (m2 <= 0) return 0.0;
    double rho = m1 > 0 ? std::pow(m2 / m1, 1.0) : 1.0;
    if (m1 > 0 && m2 / m1 < 1e-30) return m2;
    if (!(rho < 0.95)) return std::numeric_limits<double>::infinity();
    return m2 * rho / (1.0 - rho);
}

DiagonalOracle make_diagonal_oracle(const StepSet& hat_model, double t, int order) {
    DiagonalOracle o;
    o.t = t;
    o.order = order;
    CountTable table = count_walks(hat_model, Domain::ThreeQuadrant, {0, 0}, order);
    o.diag = diagonal_series(table);
    return o;
}

double boundary_residual(const KernelData& kd, const Contour& curve, double t,
                         const std::function<Cplx(Cplx)>& D_oracle, int n_samples,
                         double oracle_tail, double tail_tolerance) {
    if (curve.unbounded) throw UnboundedContour("boundary residual needs a bounded curve");
    if (oracle_tail > tail_tolerance)
        throw TruncationTailTooLarge("oracle truncation tail " + std::to_string(oracle_tail) +
                                     " above " + std::to_string(tail_tolerance));
    double worst = 0;
    size_t n = curve.pts.size();
    for (int s = 0; s < n_samples; ++s) {
        Cplx y = curve.pts[(static_cast<size_t>(s) * n) / static_cast<size_t>(n_samples)];
        Cplx yb = std::conj(y);
        Cplx lhs = sqrt_dt_bvp(kd, t, y) * D_oracle(y) - sqrt_dt_bvp(kd, t, yb) * D_oracle(yb);
        worst = std::max(worst, std::abs(lhs - (y - yb)));
    }
    return worst;
}

// ---- evaluator construction -----------------------------------------------------

namespace {

std::shared_ptr<GluingMap> make_gluing_with_pole_at_y2(const StepSet& s_steps,
                                                       const KernelData& kd, double t) {
    // Explicit algebraic maps exist for the Kreweras trilogy; everything else
    // goes through the elliptic construction (pole already at y2).
    auto preset_eq = [&](const char* name) {
        auto p = model_preset(name);
        return p && StepSet(s_steps.steps()) == *p;
    };
    if (preset_eq("kreweras"))
        return repole(gluing_explicit(Trilogy::Kreweras, t), kd, t);
    if (preset_eq("reverse-kreweras"))
        return repole(gluing_explicit(Trilogy::ReverseKreweras, t), kd, t);
    if (preset_eq("double-kreweras"))
        return repole(gluing_explicit(Trilogy::DoubleKreweras, t), kd, t);
    return gluing_weierstrass(kd, t);
}

Cplx theorem2_integral(const DiagonalEvaluator& ev, Cplx wy, int stride) {
    Cplx acc = 0;
    size_t n = ev.int_pts.size();
    for (size_t k = 0; k < n; k += static_cast<size_t>(stride))
        acc += ev.int_pts[k] * ev.int_wp[k] * ev.int_dz[k] /
               (ev.sqrt_w_minus_wy1[k] * (ev.int_w[k] - wy));
    double dtheta = 2.0 * kPi * stride / n;
    return acc * dtheta / (2.0 * kPi * Cplx(0, 1));
}

Cplx theorem2_prefactor(const DiagonalEvaluator& ev, Cplx y) {
    Poly<double> dtp = ev.kd.dt_num(ev.t).derivative();
    Cplx dtp_y2 = dtp.eval(Cplx(ev.bp.y2, 0));
    Cplx wy = ev.w->value(y);
    Cplx rad = dtp_y2 * (wy - ev.wA) * (wy - ev.wB);
    // rad has a double pole at y2 and no zero in the domain, so its analytic
    // square root is sqrt(rad (y - y2)^2) / (y - y2); the principal square
    // root of rad itself would flip sign across the pole on the real axis.
    Cplx dy2 = y - Cplx(ev.bp.y2, 0);
    Cplx s = std::sqrt(rad * dy2 * dy2) / dy2;
    return -ev.w->derivative(y) * std::sqrt(ev.residue) / s;
}

Cplx theorem2_D_raw(const DiagonalEvaluator& ev, Cplx y, int stride) {
    Cplx wy = ev.w->value(y);
    return theorem2_prefactor(ev, y) * theorem2_integral(ev, wy, stride);
}

} // namespace

DiagonalEvaluator build_evaluator(const StepSet& hat_model, double t, EvaluatorOptions opts) {
    ModelValidation v = validate(hat_model);
    if (!v.satisfies_H)
        throw HypothesisViolated("the diagonal method needs a symmetric model without "
                                 "antidiagonal jumps");
    DiagonalEvaluator ev;
    ev.hat_steps = hat_model;
    ev.s_steps = phi_transform(hat_model);
    ev.kd = build_kernel(ev.s_steps);
    ev.t = t;
    ev.opts = opts;
    ev.curve = trace_curve(ev.kd, t, opts.n_contour);
    if (ev.curve.unbounded)
        throw UnboundedContour("the transformed model has an unbounded kernel curve");
    ev.bp = ev.curve.bp;
    ev.w = make_gluing_with_pole_at_y2(ev.s_steps, ev.kd, t);
    ev.wA = ev.w->value(Cplx(*ev.curve.y_cross_neg, 0));
    ev.wB = ev.w->value(Cplx(ev.curve.y_cross_pos, 0));
    ev.w_y1 = ev.w->value(Cplx(ev.bp.y1, 0));
    ev.residue = ev.w->residue_at_pole();
    ev.index = bvp_index(ev.kd, ev.curve);
    if (ev.index != -1)
        throw IndexMismatch("boundary index is " + std::to_string(ev.index) + ", expected -1");

    // integration nodes
    if (opts.deform_to_circle) {
        SampledContour sc = unit_circle_nodes(opts.n_contour);
        ev.int_pts = sc.pts;
        ev.int_dz = sc.dz;
    } else {
        ev.int_pts = ev.curve.pts;
        ev.int_dz = ev.curve.dz;
    }
    // cached map values and the phase-tracked sqrt(w(z) - w(y1)) along nodes
    {
        size_t nn = ev.int_pts.size();
        ev.int_w.resize(nn);
        ev.int_wp.resize(nn);
        std::vector<Cplx> m(nn);
        parallel_for(nn, [&](size_t k) {
            ev.int_w[k] = ev.w->value(ev.int_pts[k]);
            ev.int_wp[k] = ev.w->derivative(ev.int_pts[k]);
            m[k] = ev.int_w[k] - ev.w_y1;
        });
        std::vector<double> phi = unwrap_args(m);
        ev.sqrt_w_minus_wy1.resize(nn);
        for (size_t k = 0; k < nn; ++k)
            ev.sqrt_w_minus_wy1[k] =
                std::sqrt(std::abs(m[k])) * std::exp(Cplx(0, 0.5 * phi[k]));
    }

    // upper-half caches for the index -1 route (always on the traced curve)
    size_t half = ev.curve.upper_count();
    ev.up_w.resize(half);
    ev.up_wp.resize(half);
    ev.up_dz.resize(half);
    ev.up_g.resize(half);
    std::vector<Cplx> G(half);
    for (size_t k = 0; k < half; ++k) {
        Cplx z = ev.curve.pts[k % ev.curve.pts.size()];
        ev.up_w[k] = ev.w->value(z);
        ev.up_wp[k] = ev.w->derivative(z);
        ev.up_dz[k] = ev.curve.dz[k % ev.curve.dz.size()];
        Cplx sd = sqrt_dt_bvp(ev.kd, t, z);
        G[k] = sqrt_dt_bvp(ev.kd, t, std::conj(z)) / sd;
        ev.up_g[k] = (z - std::conj(z)) / sd;
    }
    std::vector<double> phi = unwrap_args(G);
    ev.up_logG.resize(half);
    for (size_t k = 0; k < half; ++k) ev.up_logG[k] = Cplx(0, phi[k] - phi[0]);
    ev.u_a = ev.up_w.front().real();
    ev.u_b = ev.up_w.back().real();

    // Plemelj limits of Gamma at every upper node, then Psi^+.
    ev.up_psi_plus.resize(half);
    const double dth = 2.0 * kPi / ev.curve.n;
    size_t last = half - 1;
    parallel_for(half, [&](size_t k0) {
        Cplx s0 = ev.up_w[k0];
        Cplx acc = 0;
        for (size_t k = 0; k < half; ++k) {
            Cplx num;
            if (k == k0) {
                // removable point: (d logG / d theta) at k, central differences
                size_t km = k0 == 0 ? 0 : k0 - 1, kp = k0 == last ? last : k0 + 1;
                num = (ev.up_logG[kp] - ev.up_logG[km]) / ((kp - km) * dth);
                acc += simpson_weight(k, last) * num;
                continue;
            }
            num = (ev.up_logG[k] - ev.up_logG[k0]) * ev.up_wp[k] * ev.up_dz[k] /
                  (ev.up_w[k] - s0);
            acc += simpson_weight(k, last) * num;
        }
        Cplx pv_kernel = 0;
        if (k0 != 0 && k0 != last)
            pv_kernel = ev.up_logG[k0] * std::log((ev.u_b - s0) / (s0 - ev.u_a));
        Cplx gamma_plus =
            (acc * dth + pv_kernel) / (2.0 * kPi * Cplx(0, 1)) + 0.5 * ev.up_logG[k0];
        ev.up_psi_plus[k0] = (s0 - ev.u_b) * std::exp(gamma_plus);
    });

    // Global sign of the decoupled route: the diagonal series has nonnegative
    // coefficients, so D > 0 at positive real points of the domain. Anchor
    // between the two enclosed branch points (0 itself may be one of them).
    Cplx anchor(0.5 * (ev.bp.y1 + ev.bp.y2), 0);
    Cplx d_anchor = theorem2_D_raw(ev, anchor, 1);
    ev.sign2 = d_anchor.real() >= 0 ? 1.0 : -1.0;
    return ev;
}

// ---- the two solution routes ------------------------------------------------------

Cplx theorem1_D(const DiagonalEvaluator& ev, Cplx y) {
    Cplx u = ev.w->value(y);
    size_t half = ev.up_w.size(), last = half - 1;
    const double dth = 2.0 * kPi / ev.curve.n;

    // Gamma(u) off the segment
    Cplx gamma = 0;
    for (size_t k = 0; k < half; ++k)
        gamma += simpson_weight(k, last) * ev.up_logG[k] * ev.up_wp[k] * ev.up_dz[k] /
                 (ev.up_w[k] - u);
    gamma = gamma * dth / (2.0 * kPi * Cplx(0, 1));
    Cplx psi_u = (u - ev.u_b) * std::exp(gamma);

    // outer integral over the upper half
    std::vector<Cplx> integrand(half);
    for (size_t k = 1; k < last; ++k)
        integrand[k] =
            ev.up_g[k] * ev.up_wp[k] * ev.up_dz[k] / (ev.up_psi_plus[k] * (ev.up_w[k] - u));
    // finite endpoint limits by linear extrapolation
    integrand[0] = 2.0 * integrand[1] - integrand[2];
    integrand[last] = 2.0 * integrand[last - 1] - integrand[last - 2];
    Cplx acc = 0;
    for (size_t k = 0; k < half; ++k) acc += simpson_weight(k, last) * integrand[k];
    acc = acc * dth / (2.0 * kPi * Cplx(0, 1));
    return psi_u * acc;
}

Cplx theorem2_D(const DiagonalEvaluator& ev, Cplx y) {
    return ev.sign2 * theorem2_D_raw(ev, y, 1);
}

CauchyIntegralResult theorem2_D_detailed(const DiagonalEvaluator& ev, Cplx y) {
    CauchyIntegralResult r;
    r.value = theorem2_D(ev, y);
    Cplx coarse = ev.sign2 * theorem2_D_raw(ev, y, 2);
    r.error_estimate = std::abs(r.value - coarse);
    r.contour = ev.opts.deform_to_circle ? "circle" : "curve";
    return r;
}

// ---- section reconstruction --------------------------------------------------------

SectionValues reconstruct_sections(const DiagonalEvaluator& ev, Cplx x, Cplx y) {
    const double t = ev.t;
    auto D = [&](Cplx arg) {
        if (std::abs(arg) >= 1.0) {
            PointLocation loc = classify_point(ev.curve, arg);
            if (loc != PointLocation::Inside)
                throw ConvergenceDomainViolated("diagonal argument outside its domain");
        }
        return theorem2_D(ev, arg);
    };
    auto at = [&](Cplx v) { return ev.kd.at_num(t).eval(v); };
    auto bt = [&](Cplx v) { return ev.kd.bt_num(t).eval(v); };
    auto cpoly = [&](Cplx v) { return ev.kd.c_num(t).eval(v); };
    Cplx d0 = D(Cplx(0, 0));
    // the D(0) term carries the (-1,-1) indicator of the original model
    double dm = ev.hat_steps.contains(-1, -1) ? 1.0 : 0.0;

    auto L_minus0 = [&](Cplx xv) {
        BranchPair yb = Y_branches(ev.kd, xv, t);
        Cplx y0 = yb.y0;
        Cplx inner = 0.5 * y0 + (xv * at(y0) + 0.5 * bt(y0)) * D(y0) - 0.5 * t * dm * d0;
        return xv / cpoly(xv) * inner;
    };
    auto L_fn = [&](Cplx xv, Cplx yv) {
        Cplx Kv = ev.kd.K(xv, yv, t);
        if (std::abs(Kv) < 1e-12)
            throw KernelZero("kernel vanishes at the evaluation point");
        return (cpoly(xv) * L_minus0(xv) - xv * (xv * at(yv) + 0.5 * bt(yv)) * D(yv) +
                0.5 * t * dm * xv * d0 - 0.5 * xv * yv) /
               Kv;
    };

    SectionValues out;
    out.L = L_fn(x, y);
    out.L_minus0 = L_minus0(x);
    out.C = L_fn(1.0 / y, x * y) + D(x * y) + L_fn(1.0 / x, x * y);
    return out;
}

} // namespace trikernel
