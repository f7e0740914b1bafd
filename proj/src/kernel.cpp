#include "trikernel/kernel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace trikernel {

namespace {

Poly<Rat> step_sum_poly(const StepSet& s, bool tilde, int fixed) {
    // not tilde: sum over (i, fixed) in S of x^{i+1}; tilde: sum over (fixed, j) of y^{j+1}
    Poly<Rat> p;
    for (const auto& [di, dj] : s.steps()) {
        if (!tilde && dj == fixed) p.set_coeff(static_cast<size_t>(di + 1), p.coeff(static_cast<size_t>(di + 1)) + 1);
        if (tilde && di == fixed) p.set_coeff(static_cast<size_t>(dj + 1), p.coeff(static_cast<size_t>(dj + 1)) + 1);
    }
    return p;
}

// Bivariate expansion used for the construction-time cross-check:
// map (i,j) -> (constant coefficient, t coefficient).
using KMap = std::map<std::pair<int, int>, std::pair<Rat, Rat>>;

void kmap_add(KMap& m, int i, int j, const Rat& c0, const Rat& c1) {
    auto it = m.emplace(std::pair<int, int>{i, j}, std::pair<Rat, Rat>{0, 0}).first;
    it->second.first += c0;
    it->second.second += c1;
    if (it->second.first == 0 && it->second.second == 0) m.erase(it);
}

} // namespace

KernelData build_kernel(const StepSet& steps) {
    if (!steps.small_steps())
        throw StepsTooLarge("kernel requires jumps in {-1,0,1}^2");
    KernelData kd;
    kd.steps = steps;
    kd.A = step_sum_poly(steps, false, 1);
    kd.B = step_sum_poly(steps, false, 0);
    kd.C = step_sum_poly(steps, false, -1);
    kd.At = step_sum_poly(steps, true, 1);
    kd.Bt = step_sum_poly(steps, true, 0);
    kd.Ct = step_sum_poly(steps, true, -1);

    // K from the step set directly.
    KMap direct;
    for (const auto& [di, dj] : steps.steps()) kmap_add(direct, di + 1, dj + 1, 0, 1);
    kmap_add(direct, 1, 1, -1, 0);
    // K as a(x) y^2 + b(x) y + c(x).
    KMap rows;
    for (long k = 0; k <= kd.A.degree(); ++k) kmap_add(rows, static_cast<int>(k), 2, 0, kd.A.coeff(static_cast<size_t>(k)));
    for (long k = 0; k <= kd.B.degree(); ++k) kmap_add(rows, static_cast<int>(k), 1, 0, kd.B.coeff(static_cast<size_t>(k)));
    kmap_add(rows, 1, 1, -1, 0);
    for (long k = 0; k <= kd.C.degree(); ++k) kmap_add(rows, static_cast<int>(k), 0, 0, kd.C.coeff(static_cast<size_t>(k)));
    // K as at(y) x^2 + bt(y) x + ct(y).
    KMap cols;
    for (long k = 0; k <= kd.At.degree(); ++k) kmap_add(cols, 2, static_cast<int>(k), 0, kd.At.coeff(static_cast<size_t>(k)));
    for (long k = 0; k <= kd.Bt.degree(); ++k) kmap_add(cols, 1, static_cast<int>(k), 0, kd.Bt.coeff(static_cast<size_t>(k)));
    kmap_add(cols, 1, 1, -1, 0);
    for (long k = 0; k <= kd.Ct.degree(); ++k) kmap_add(cols, 0, static_cast<int>(k), 0, kd.Ct.coeff(static_cast<size_t>(k)));
    if (!(direct == rows && direct == cols))
        throw ClassificationFailure("kernel coefficient groupings disagree");
    return kd;
}

namespace {

Poly<double> to_double_poly(const Poly<Rat>& p, double scale) {
    std::vector<double> c(static_cast<size_t>(p.degree() + 1), 0.0);
    for (long k = 0; k <= p.degree(); ++k)
        c[static_cast<size_t>(k)] = scale * to_double(p.coeff(static_cast<size_t>(k)));
    return Poly<double>(std::move(c));
}

} // namespace

Poly<double> KernelData::a_num(double t) const { return to_double_poly(A, t); }
Poly<double> KernelData::c_num(double t) const { return to_double_poly(C, t); }
Poly<double> KernelData::at_num(double t) const { return to_double_poly(At, t); }
Poly<double> KernelData::ct_num(double t) const { return to_double_poly(Ct, t); }

Poly<double> KernelData::b_num(double t) const {
    Poly<double> p = to_double_poly(B, t);
    p.set_coeff(1, p.coeff(1) - 1.0);
    return p;
}
Poly<double> KernelData::bt_num(double t) const {
    Poly<double> p = to_double_poly(Bt, t);
    p.set_coeff(1, p.coeff(1) - 1.0);
    return p;
}

Poly<double> KernelData::d_num(double t) const {
    Poly<double> b = b_num(t);
    return b * b - a_num(t) * c_num(t) * 4.0;
}
Poly<double> KernelData::dt_num(double t) const {
    Poly<double> b = bt_num(t);
    return b * b - at_num(t) * ct_num(t) * 4.0;
}

Cplx KernelData::K(Cplx x, Cplx y, double t) const {
    Cplx inv = 0;
    for (const auto& [di, dj] : steps.steps())
        inv += std::pow(x, di) * std::pow(y, dj);
    return x * y * (t * inv - 1.0);
}

Poly<PuiseuxSeries> KernelData::d_poly_series(bool tilde, long units, int q) const {
    const Poly<Rat>& Bp = tilde ? Bt : B;
    const Poly<Rat>& Ap = tilde ? At : A;
    const Poly<Rat>& Cp = tilde ? Ct : C;
    PuiseuxSeries t1 = PuiseuxSeries::monomial(1, q, q).truncated(units); // t
    PuiseuxSeries t2 = PuiseuxSeries::monomial(1, 2 * q, q).truncated(units);
    auto lift = [&](const Poly<Rat>& p, const PuiseuxSeries& tpow) {
        std::vector<PuiseuxSeries> c(static_cast<size_t>(p.degree() + 1));
        for (long k = 0; k <= p.degree(); ++k)
            c[static_cast<size_t>(k)] = tpow * p.coeff(static_cast<size_t>(k));
        return Poly<PuiseuxSeries>(std::move(c));
    };
    Poly<PuiseuxSeries> b = lift(Bp, t1);
    // b(x) = t B(x) - x
    PuiseuxSeries minus_one = PuiseuxSeries::constant(-1).with_ramification(q).truncated(units);
    Poly<PuiseuxSeries> xterm(std::vector<PuiseuxSeries>{PuiseuxSeries::zero(q, units), minus_one});
    b = b + xterm;
    Poly<PuiseuxSeries> a = lift(Ap, t1);
    Poly<PuiseuxSeries> c = lift(Cp, t1);
    Poly<PuiseuxSeries> four = Poly<PuiseuxSeries>::constant(
        PuiseuxSeries::constant(4).with_ramification(q).truncated(units));
    return b * b - four * a * c;
}

// ---- numeric branch points ---------------------------------------------------

namespace {

std::vector<Cplx> poly_roots(const Poly<double>& p) {
    long deg = p.degree();
    if (deg < 1) return {};
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    double lead = p.coeff(static_cast<size_t>(deg));
    for (long i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (long i = 0; i < deg; ++i) comp(i, deg - 1) = -p.coeff(static_cast<size_t>(i)) / lead;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
    std::vector<Cplx> roots;
    Poly<double> dp = p.derivative();
    for (long i = 0; i < deg; ++i) {
        Cplx r(es.eigenvalues()[i].real(), es.eigenvalues()[i].imag());
        for (int it = 0; it < 3; ++it) {
            Cplx f = p.eval(r), df = dp.eval(r);
            if (std::abs(df) < 1e-300) break;
            r -= f / df;
        }
        roots.push_back(r);
    }
    return roots;
}

struct Classified {
    double r1, r2, r3;
    std::optional<double> r4;
};

Classified classify_branch_points(const Poly<double>& d, const char* what) {
    long deg = d.degree();
    if (deg != 3 && deg != 4)
        throw ClassificationFailure(std::string(what) + ": discriminant degree " +
                                    std::to_string(deg) + ", expected 3 or 4");
    std::vector<Cplx> roots = poly_roots(d);
    std::vector<double> real;
    for (Cplx r : roots) {
        if (std::abs(r.imag()) > 1e-8 * (1.0 + std::abs(r.real())))
            throw ClassificationFailure(std::string(what) + ": complex branch point found");
        real.push_back(r.real());
    }
    std::sort(real.begin(), real.end());
    for (size_t i = 1; i < real.size(); ++i)
        if (std::abs(real[i] - real[i - 1]) < 1e-10 * (1.0 + std::abs(real[i])))
            throw ClassificationFailure(std::string(what) + ": branch points not distinct");
    std::vector<double> inside, outside;
    for (double r : real)
        (std::abs(r) < 1.0 ? inside : outside).push_back(r);
    if (inside.size() != 2)
        throw ClassificationFailure(std::string(what) + ": expected two branch points in the unit disc");
    Classified c{};
    c.r1 = inside[0];
    c.r2 = inside[1];
    if (c.r2 <= 0) throw ClassificationFailure(std::string(what) + ": r2 must be positive");
    if (deg == 3) {
        if (outside.size() != 1 || outside[0] <= 0)
            throw ClassificationFailure(std::string(what) + ": cubic case needs one positive outside root");
        c.r3 = outside[0];
    } else {
        if (outside.size() != 2)
            throw ClassificationFailure(std::string(what) + ": expected two roots outside the disc");
        double p = outside[0], q = outside[1];
        // r3 is the positive one; when both are positive keep r3 < r4.
        if (p > 0 && q > 0) {
            c.r3 = std::min(p, q);
            c.r4 = std::max(p, q);
        } else if (p > 0 || q > 0) {
            c.r3 = p > 0 ? p : q;
            c.r4 = p > 0 ? q : p;
        } else {
            throw ClassificationFailure(std::string(what) + ": no positive outside root");
        }
    }
    // Sign layout: negative between the small pair, positive on (r2, r3),
    // negative on the outer arc (which is (r3, inf) when r4 is absent or
    // wraps around through infinity when r4 < 0).
    auto val = [&](double x) { return d.eval(Cplx(x, 0)).real(); };
    if (!(val(0.5 * (c.r1 + c.r2)) < 0))
        throw ClassificationFailure(std::string(what) + ": discriminant not negative between r1 and r2");
    if (!(val(0.5 * (c.r2 + c.r3)) > 0))
        throw ClassificationFailure(std::string(what) + ": discriminant not positive on (r2, r3)");
    double outer = (c.r4 && *c.r4 > c.r3) ? 0.5 * (c.r3 + *c.r4) : c.r3 + 1.0;
    if (!(val(outer) < 0))
        throw ClassificationFailure(std::string(what) + ": discriminant not negative past r3");
    return c;
}

} // namespace

BranchPointsNum branch_points_numeric(const KernelData& kd, double t) {
    if (!(t > 0 && t < 1.0 / static_cast<double>(kd.steps.size())))
        throw InvalidArgument("t must lie in (0, 1/|S|)");
    Classified cx = classify_branch_points(kd.d_num(t), "d(x)");
    Classified cy = classify_branch_points(kd.dt_num(t), "dt(y)");
    BranchPointsNum bp;
    bp.x1 = cx.r1;
    bp.x2 = cx.r2;
    bp.x3 = cx.r3;
    bp.x4 = cx.r4;
    bp.y1 = cy.r1;
    bp.y2 = cy.r2;
    bp.y3 = cy.r3;
    bp.y4 = cy.r4;
    return bp;
}

// ---- series branch points ----------------------------------------------------

namespace {

// Small roots of a quartic with Puiseux coefficients: the quadratic part is
// dominant as t -> 0; iterate the exact quadratic formula with the cubic and
// quartic terms folded into the constant coefficient.
std::pair<PuiseuxSeries, PuiseuxSeries> small_roots(const Poly<PuiseuxSeries>& d, int q,
                                                    long units) {
    PuiseuxSeries d0 = d.coeff(0), d1 = d.coeff(1), d2 = d.coeff(2);
    PuiseuxSeries d3 = d.coeff(3), d4 = d.coeff(4);
    PuiseuxSeries lo = PuiseuxSeries::zero(q, units), hi = lo;
    auto norm_trunc = [](const PuiseuxSeries& s) {
        return static_cast<double>(s.trunc()) / s.ramification();
    };
    for (int round = 0; round < 400; ++round) {
        PuiseuxSeries c_lo = d0 + d3 * lo.pow_int(3) + d4 * lo.pow_int(4);
        PuiseuxSeries c_hi = d0 + d3 * hi.pow_int(3) + d4 * hi.pow_int(4);
        PuiseuxSeries lo2 = solve_quadratic_roots(d2, d1, c_lo).first;
        PuiseuxSeries hi2 = solve_quadratic_roots(d2, d1, c_hi).second;
        bool stable = lo2.agrees_with(lo) && hi2.agrees_with(hi) &&
                      norm_trunc(lo2) == norm_trunc(lo) && norm_trunc(hi2) == norm_trunc(hi);
        lo = lo2;
        hi = hi2;
        if (stable) return {lo, hi};
    }
    throw NoConvergence("branch-point iteration did not stabilize");
}

// Simple Newton root of p near -p0/p1 (used for the finite large root of a
// cubic discriminant, via the reversed polynomial).
PuiseuxSeries newton_root(const Poly<PuiseuxSeries>& p, const PuiseuxSeries& seed) {
    Poly<PuiseuxSeries> dp = p.derivative();
    PuiseuxSeries u = seed;
    for (int round = 0; round < 200; ++round) {
        PuiseuxSeries f = p.eval(u);
        if (f.known_zero()) return u;
        PuiseuxSeries u2 = u - f / dp.eval(u);
        if (u2.agrees_with(u) && u2.trunc() == u.trunc()) return u2;
        u = u2;
    }
    throw NoConvergence("Newton root iteration did not stabilize");
}

} // namespace

BranchPointsSeries branch_points_series(const KernelData& kd, long trunc_units, int q) {
    BranchPointsSeries out;
    // Work with slack: the square roots in the iteration shave off half the
    // discriminant's valuation from the window.
    const long work_units = trunc_units + 16;
    for (bool tilde : {false, true}) {
        Poly<PuiseuxSeries> d = kd.d_poly_series(tilde, work_units, q);
        auto [lo, hi] = small_roots(d, q, work_units);
        lo = lo.truncated(trunc_units * (lo.ramification() / q));
        hi = hi.truncated(trunc_units * (hi.ramification() / q));
        int eff_deg = 0;
        for (int k = 0; k <= static_cast<int>(d.degree()); ++k)
            if (!d.coeff(static_cast<size_t>(k)).known_zero()) eff_deg = k;
        std::optional<PuiseuxSeries> big;
        if (eff_deg == 3) {
            // reversed cubic: u^3 d(1/u) = d3 + d2 u + d1 u^2 + d0 u^3
            Poly<PuiseuxSeries> rev(std::vector<PuiseuxSeries>{d.coeff(3), d.coeff(2),
                                                               d.coeff(1), d.coeff(0)});
            try {
                PuiseuxSeries seed = -d.coeff(3) / d.coeff(2);
                PuiseuxSeries u = newton_root(rev, seed);
                big = u.inverse();
            } catch (const Error&) {
                big.reset();
            }
        }
        if (!tilde) {
            out.x1 = lo;
            out.x2 = hi;
            out.x3 = big;
        } else {
            out.y1 = lo;
            out.y2 = hi;
            out.y3 = big;
        }
    }
    return out;
}

// ---- branches -----------------------------------------------------------------

namespace {

BranchPair ordered_roots(Cplx a, Cplx b, Cplx c) {
    double scale = std::abs(a) + std::abs(b) + std::abs(c);
    if (std::abs(a) < 1e-14 * scale) {
        BranchPair r;
        r.y1_infinite = true;
        r.y0 = (std::abs(b) > 1e-14 * scale) ? -c / b : Cplx(0, 0);
        r.y1 = Cplx(std::numeric_limits<double>::infinity(), 0);
        return r;
    }
    Cplx s = std::sqrt(b * b - 4.0 * a * c);
    // pick the sign that avoids cancellation in b + s
    if (std::real(std::conj(b) * s) < 0) s = -s;
    Cplx qq = -0.5 * (b + s);
    Cplx r1, r2;
    if (std::abs(qq) > 1e-300) {
        r1 = qq / a;
        r2 = c / qq;
    } else {
        r1 = (-b + s) / (2.0 * a);
        r2 = (-b - s) / (2.0 * a);
    }
    BranchPair out;
    double m1 = std::abs(r1), m2 = std::abs(r2);
    if (std::abs(m1 - m2) <= 1e-12 * (m1 + m2)) {
        // conjugate pair on a cut: label the upper one first
        if (r1.imag() >= r2.imag()) {
            out.y0 = r1;
            out.y1 = r2;
        } else {
            out.y0 = r2;
            out.y1 = r1;
        }
    } else if (m1 <= m2) {
        out.y0 = r1;
        out.y1 = r2;
    } else {
        out.y0 = r2;
        out.y1 = r1;
    }
    return out;
}

} // namespace

BranchPair Y_branches(const KernelData& kd, Cplx x, double t) {
    return ordered_roots(kd.a_num(t).eval(x), kd.b_num(t).eval(x), kd.c_num(t).eval(x));
}

BranchPair X_branches(const KernelData& kd, Cplx y, double t) {
    return ordered_roots(kd.at_num(t).eval(y), kd.bt_num(t).eval(y), kd.ct_num(t).eval(y));
}

double Y_at_branch_point(const KernelData& kd, double t, double xi) {
    Cplx a = kd.a_num(t).eval(Cplx(xi, 0)), b = kd.b_num(t).eval(Cplx(xi, 0));
    if (std::abs(a) < 1e-14 * (std::abs(a) + std::abs(b)))
        throw BranchPointImageInfinite("Y at branch point is infinite");
    return (-b / (2.0 * a)).real();
}

double X_at_branch_point(const KernelData& kd, double t, double yi) {
    Cplx a = kd.at_num(t).eval(Cplx(yi, 0)), b = kd.bt_num(t).eval(Cplx(yi, 0));
    if (std::abs(a) < 1e-14 * (std::abs(a) + std::abs(b)))
        throw BranchPointImageInfinite("X at branch point is infinite");
    return (-b / (2.0 * a)).real();
}

Cplx sqrt_dt_bvp(const KernelData& kd, double t, Cplx y) {
    BranchPair xb = X_branches(kd, y, t);
    Cplx at = kd.at_num(t).eval(y), bt = kd.bt_num(t).eval(y);
    return -(2.0 * at * xb.y0 + bt);
}

} // namespace trikernel
