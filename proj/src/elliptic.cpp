#include <algorithm>
#include <cmath>
#include <numbers>

#include "trikernel/conformal.hpp"

namespace trikernel {

namespace {
constexpr double kPi = std::numbers::pi;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(static_cast<size_t>(n), 0.0);
    weights.assign(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[static_cast<size_t>(i)] = -x;
        nodes[static_cast<size_t>(n - 1 - i)] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[static_cast<size_t>(i)] = w;
        weights[static_cast<size_t>(n - 1 - i)] = w;
    }
}

namespace {

double gl_integrate(const std::function<double(double)>& f, double a, double b, int n) {
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0;
    for (int i = 0; i < n; ++i)
        acc += w[static_cast<size_t>(i)] * f(mid + half * x[static_cast<size_t>(i)]);
    return acc * half;
}



// int_a^{y1} dy / sqrt(dt) with a single sqrt singularity at y1:
// y = y1 - (y1 - a) sin^2(psi) gives 2 sqrt(y1 - a) int cos(psi)/sqrt(-G).
double one_zero_period(const Poly<double>& dt, double a, double y1, int n) {
    Poly<double> G = poly_deflate(dt, y1);
    auto f = [&](double psi) {
        double s = std::sin(psi);
        double y = y1 - (y1 - a) * s * s;
        double g = -G.eval(Cplx(y, 0)).real();
        if (g <= 0) throw QuadratureNotConverged("period integrand left its sign domain");
        return std::cos(psi) / std::sqrt(g);
    };
    return 2.0 * std::sqrt(y1 - a) * gl_integrate(f, 0.0, kPi / 2, n);
}

// Tail int_{-infinity}^{c} dy / sqrt(dt) through u = 1/y.
double tail_period(const Poly<double>& dt, double c, int n) {
    long deg = dt.degree();
    std::vector<double> rc(5, 0.0);
    for (long k = 0; k <= deg; ++k)
        rc[static_cast<size_t>(4 - k)] = dt.coeff(static_cast<size_t>(k));
    Poly<double> rev(std::move(rc)); // u^4 dt(1/u)
    if (deg == 4) {
        auto f = [&](double u) {
            double v = rev.eval(Cplx(u, 0)).real();
            if (v <= 0) throw QuadratureNotConverged("tail integrand left its sign domain");
            return 1.0 / std::sqrt(v);
        };
        return gl_integrate(f, 1.0 / c, 0.0, n);
    }
    // cubic: u^4 dt(1/u) = u * rev3(u); substitute u = -v^2
    Poly<double> rev3 = poly_deflate(rev, 0.0); // divide by u
    auto f = [&](double v) {
        double g = -rev3.eval(Cplx(-v * v, 0)).real();
        if (g <= 0) throw QuadratureNotConverged("tail integrand left its sign domain");
        return 2.0 / std::sqrt(g);
    };
    return gl_integrate(f, 0.0, std::sqrt(-1.0 / c), n);
}

} // namespace

// With p = (y - lo)(y - hi) R(y) and y = m + h sin(phi), the measure cancels
// the square-root vanishing at both ends and the integrand becomes the
// smooth 1 / sqrt(-sign * R).
double sqrt_poly_period(const Poly<double>& p, double lo, double hi, double sign_inside,
                        int n) {
    Poly<double> R = poly_deflate(poly_deflate(p, lo), hi);
    double m = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    auto f = [&](double phi) {
        double y = m + h * std::sin(phi);
        double v = -sign_inside * R.eval(Cplx(y, 0)).real();
        if (v <= 0) throw QuadratureNotConverged("period integrand left its sign domain");
        return 1.0 / std::sqrt(v);
    };
    return gl_integrate(f, -kPi / 2, kPi / 2, n);
}

EllipticData elliptic_periods(const KernelData& kd, double t, int n_nodes, double tol) {
    BranchPointsNum bp = branch_points_numeric(kd, t);
    Poly<double> dt_poly = kd.dt_num(t);
    EllipticData ed;
    ed.t = t;
    ed.y1 = bp.y1;
    ed.y2 = bp.y2;
    ed.y3 = bp.y3;
    ed.y4 = bp.y4;
    ed.y4_finite = bp.y4.has_value();

    bool yx1_infinite = !kd.steps.contains(-1, 1) && !kd.steps.contains(-1, 0);

    auto with_check = [&](const std::function<double(int)>& calc) {
        double v1 = calc(n_nodes), v2 = calc(2 * n_nodes);
        if (std::abs(v1 - v2) > tol * (1.0 + std::abs(v2)))
            throw QuadratureNotConverged("period quadrature did not converge");
        return v2;
    };

    double om1 = with_check([&](int n) { return sqrt_poly_period(dt_poly, bp.y1, bp.y2, -1.0, n); });
    ed.omega1 = Cplx(0, om1);
    ed.omega2 = with_check([&](int n) { return sqrt_poly_period(dt_poly, bp.y2, bp.y3, 1.0, n); });
    if (yx1_infinite) {
        double c = bp.y1 - 2.0 * (bp.y3 - bp.y1) - 1.0;
        ed.omega3 = with_check([&](int n) {
            return tail_period(dt_poly, c, n) + one_zero_period(dt_poly, c, bp.y1, n);
        });
    } else {
        double yx1 = Y_at_branch_point(kd, t, bp.x1);
        if (!(yx1 < bp.y1))
            throw ClassificationFailure("expected Y(x1) below y1 for the third period");
        ed.omega3 =
            with_check([&](int n) { return one_zero_period(dt_poly, yx1, bp.y1, n); });
    }
    if (!(om1 > 0) || !(ed.omega2 > 0) || !(ed.omega3 > 0))
        throw ClassificationFailure("period signs violate the expected layout");

    Poly<double> d1 = dt_poly.derivative(), d2 = d1.derivative(), d3 = d2.derivative();
    if (ed.y4_finite) {
        ed.f_c0 = d2.eval(Cplx(*bp.y4, 0)).real() / 6.0;
        ed.f_c1 = d1.eval(Cplx(*bp.y4, 0)).real();
    } else {
        ed.f_c0 = d2.eval(Cplx(0, 0)).real() / 6.0;
        ed.f_c1 = d3.eval(Cplx(0, 0)).real() / 6.0;
    }
    return ed;
}

// ---- Weierstrass function ------------------------------------------------------

WeierstrassP::WeierstrassP(Cplx wa, Cplx wb) : wa_(wa), wb_(wb) {
    // Invariants through Eisenstein series in q = exp(2 pi i tau); pick the
    // basis ordering with Im(tau) maximal so |q| <= exp(-2 pi) at worst for
    // rectangular lattices.
    Cplx A = wa, B = wb;
    Cplx tau = A / B;
    if (tau.imag() < 0) {
        A = -A;
        tau = A / B;
    }
    if (tau.imag() < 1.0) {
        Cplx A2 = B, B2 = -A;
        Cplx tau2 = A2 / B2;
        if (tau2.imag() > tau.imag()) {
            A = A2;
            B = B2;
            tau = tau2;
        }
    }
    Cplx q = std::exp(Cplx(0, 2.0 * kPi) * tau);
    Cplx e4 = 1, e6 = 1, qn = q;
    for (int n = 1; n < 64; ++n) {
        double nd = n;
        Cplx lam = qn / (1.0 - qn);
        e4 += 240.0 * nd * nd * nd * lam;
        e6 -= 504.0 * nd * nd * nd * nd * nd * lam;
        qn *= q;
        if (std::abs(qn) < 1e-19) break;
    }
    Cplx base = 2.0 * kPi / B;
    Cplx g2c = std::pow(base, 4) * e4 / 12.0;
    Cplx g3c = std::pow(base, 6) * e6 / 216.0;
    g2_ = g2c.real();
    g3_ = g3c.real();

    rmin_ = std::min({std::abs(wa_), std::abs(wb_), std::abs(wa_ + wb_), std::abs(wa_ - wb_)});

    // Laurent coefficients: p(z) = z^-2 + sum_{k>=2} c_k z^{2k-2}.
    series_.assign(64, 0.0);
    series_[2] = g2_ / 20.0;
    series_[3] = g3_ / 28.0;
    for (size_t k = 4; k < series_.size(); ++k) {
        double s = 0;
        for (size_t m = 2; m + 2 <= k; ++m) s += series_[m] * series_[k - m];
        series_[k] = 3.0 * s / ((2.0 * k + 1.0) * (k - 3.0));
    }
}

std::pair<double, double> WeierstrassP::coords(Cplx z) const {
    double det = wa_.real() * wb_.imag() - wa_.imag() * wb_.real();
    double s = (z.real() * wb_.imag() - z.imag() * wb_.real()) / det;
    double r = (wa_.real() * z.imag() - wa_.imag() * z.real()) / det;
    return {s, r};
}

Cplx WeierstrassP::reduce(Cplx z) const {
    auto [s, r] = coords(z);
    return z - std::round(s) * wa_ - std::round(r) * wb_;
}

Cplx WeierstrassP::series_eval(Cplx u) const {
    Cplx u2 = u * u;
    Cplx acc = 0, p = u2;
    for (size_t k = 2; k < series_.size(); ++k) {
        acc += series_[k] * p;
        p *= u2;
    }
    return 1.0 / u2 + acc;
}

Cplx WeierstrassP::eval(Cplx z) const {
    Cplx u = reduce(z);
    if (std::abs(u) < 1e-12 * rmin_)
        throw EvaluationAtPole("Weierstrass evaluation at a lattice point");
    int halvings = 0;
    while (std::abs(u) > 0.40 * rmin_ && halvings < 48) {
        u *= 0.5;
        ++halvings;
    }
    Cplx p = series_eval(u);
    for (int i = 0; i < halvings; ++i) {
        Cplx num = 6.0 * p * p - 0.5 * g2_;
        Cplx den = 4.0 * (4.0 * p * p * p - g2_ * p - g3_);
        p = -2.0 * p + num * num / den;
    }
    return p;
}

Cplx WeierstrassP::derivative_fd(Cplx z) const {
    double h = 1e-6 * rmin_;
    return (-eval(z + 2.0 * h) + 8.0 * eval(z + h) - 8.0 * eval(z - h) + eval(z - 2.0 * h)) /
           (12.0 * h);
}

Cplx WeierstrassP::derivative(Cplx z) const {
    Cplx p = eval(z);
    Cplx rhs = 4.0 * p * p * p - g2_ * p - g3_;
    Cplx s = std::sqrt(rhs);
    Cplx fd = derivative_fd(z);
    return (std::abs(s - fd) <= std::abs(s + fd)) ? s : -s;
}

Cplx WeierstrassP::invert(Cplx v) const {
    auto newton = [&](Cplx z0) -> std::optional<Cplx> {
        Cplx z = z0, best = z0;
        double best_res = 1e300;
        for (int it = 0; it < 100; ++it) {
            Cplx f = eval(z) - v;
            double res = std::abs(f);
            if (res < best_res) {
                best_res = res;
                best = z;
            }
            if (res < 3e-14 * (1.0 + std::abs(v))) return z;
            Cplx df = derivative_fd(z);
            if (std::abs(df) < 1e-280) break;
            Cplx step = f / df;
            double cap = 0.25 * rmin_;
            if (std::abs(step) > cap) step *= cap / std::abs(step);
            z -= step;
        }
        if (best_res < 1e-10 * (1.0 + std::abs(v))) return best;
        return std::nullopt;
    };

    std::optional<Cplx> sol;
    Cplx seed = 1.0 / std::sqrt(v);
    for (Cplx s : {seed, -seed}) {
        sol = newton(s);
        if (sol) break;
    }
    if (!sol) {
        // coarse scan of the half-parallelogram, then refine
        double best = 1e300;
        Cplx bestz = 0;
        for (int i = 1; i < 48; ++i) {
            for (int j = 1; j < 48; ++j) {
                Cplx z = (i / 48.0) * wa_ + (j / 96.0) * wb_;
                double d = std::abs(eval(z) - v);
                if (d < best) {
                    best = d;
                    bestz = z;
                }
            }
        }
        sol = newton(bestz);
    }
    if (!sol) throw InversionOutsideFundamentalDomain("could not invert the elliptic map");

    // Project onto the injectivity determination: representative with second
    // coordinate in [0, 1/2]; on the symmetry lines r = 0 and r = 1/2 the
    // function is still even about the half-period, so fold the first
    // coordinate into [0, 1/2] there as well.
    Cplx z = *sol;
    auto frac = [](double x) { return x - std::floor(x); };
    auto [s, r] = coords(z);
    double sf = frac(s), rf = frac(r);
    if (rf > 0.5) {
        sf = frac(-sf);
        rf = 1.0 - rf;
    }
    const double eps = 1e-9;
    if ((rf < eps || std::abs(rf - 0.5) < eps) && sf > 0.5) sf = 1.0 - sf;
    return sf * wa_ + rf * wb_;
}

// ---- elliptic gluing map --------------------------------------------------------

WeierstrassGluing::WeierstrassGluing(const KernelData& kd, double /*t*/, EllipticData ed)
    : ed_(std::move(ed)),
      p12_(ed_.omega1, Cplx(ed_.omega2, 0)),
      p13_(ed_.omega1, Cplx(ed_.omega3, 0)),
      shift_(-0.5 * (ed_.omega1 + Cplx(ed_.omega2, 0))) {
    (void)kd;
    double gap = std::min(ed_.y2 - ed_.y1, ed_.y3 - ed_.y2);
    residue_radius = 0.25 * gap;
    // the map value carries the inversion tolerance; balance the difference
    // step against that noise floor rather than pure roundoff
    fd_step = 1e-4 * gap;
}

Cplx WeierstrassGluing::value(Cplx y) const {
    if (std::abs(y - Cplx(ed_.y2, 0)) < 1e-11 * (1.0 + std::abs(y)))
        throw EvaluationAtPole("gluing map has its pole at y2");
    Cplx u = p12_.invert(ed_.f(y));
    return p13_.eval(shift_ + u);
}

Cplx WeierstrassGluing::derivative(Cplx y) const {
    if (std::abs(y - Cplx(ed_.y2, 0)) < 1e-11 * (1.0 + std::abs(y)))
        throw EvaluationAtPole("gluing map has its pole at y2");
    Cplx u = p12_.invert(ed_.f(y));
    Cplx fprime = ed_.y4_finite ? -ed_.f_c1 / ((y - *ed_.y4) * (y - *ed_.y4))
                                : Cplx(ed_.f_c1, 0);
    return p13_.derivative(shift_ + u) * fprime / p12_.derivative(u);
}

std::shared_ptr<GluingMap> gluing_weierstrass(const KernelData& kd, double t) {
    EllipticData ed = elliptic_periods(kd, t);
    return std::make_shared<WeierstrassGluing>(kd, t, std::move(ed));
}

} // namespace trikernel
