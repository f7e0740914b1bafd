#ifndef TRIKERNEL_CONFORMAL_HPP
#define TRIKERNEL_CONFORMAL_HPP

#include <memory>

#include "trikernel/geometry.hpp"
#include "trikernel/kernel.hpp"
#include "trikernel/pseries.hpp"

namespace trikernel {

// Conformal gluing function for the domain bounded by the kernel curve:
// meromorphic and one-to-one inside, identifying conjugate boundary points
// (w(y) = w(conj y) on the curve).
class GluingMap {
public:
    virtual ~GluingMap() = default;
    virtual Cplx value(Cplx y) const = 0;
    virtual Cplx derivative(Cplx y) const; // default: 4th-order central differences
    virtual Cplx pole() const = 0;
    virtual Cplx residue_at_pole() const;  // default: small-circle Cauchy integral
    virtual const char* kind() const = 0;

    double fd_step = 1e-5;
    double residue_radius = 1e-2;
};

enum class Trilogy { Kreweras, ReverseKreweras, DoubleKreweras };

// Algebraic series W = t(2 + W^3) and Z = t(1 - 2Z + 6Z^2 - 2Z^3 + Z^4)/(1-Z)^2,
// the latter the unique solution with no constant term.
double solve_W_numeric(double t);
double solve_Z_numeric(double t);
PuiseuxSeries solve_W_series(long trunc_units);
PuiseuxSeries solve_Z_series(long trunc_units);

// Closed-form gluing maps for the Kreweras trilogy; all have their pole at 0.
Cplx trilogy_w_value(Trilogy which, Cplx y, double wz, double t);
Cplx trilogy_w_derivative(Trilogy which, Cplx y, double wz, double t);

// Exact series-mode evaluation of the same formulas at a Puiseux argument.
PuiseuxSeries trilogy_w_series(Trilogy which, const PuiseuxSeries& y,
                               const PuiseuxSeries& wz);
PuiseuxSeries kreweras_w_prime_series(const PuiseuxSeries& y, const PuiseuxSeries& W);

std::shared_ptr<GluingMap> gluing_explicit(Trilogy which, double t);

// Moebius re-poling w_{y2} = 1/(w - w(y2)); a Moebius image of a gluing
// function is again a gluing function, with the pole moved to y2.
class MoebiusGluing : public GluingMap {
public:
    MoebiusGluing(std::shared_ptr<const GluingMap> inner, Cplx y2);
    Cplx value(Cplx y) const override;
    Cplx derivative(Cplx y) const override;
    Cplx pole() const override { return y2_; }
    Cplx residue_at_pole() const override;
    const char* kind() const override { return "moebius"; }
    const GluingMap& inner() const { return *inner_; }
    Cplx inner_w_at_y2() const { return w_y2_; }

private:
    std::shared_ptr<const GluingMap> inner_;
    Cplx y2_, w_y2_, inner_pole_, inner_res_;
    bool at_inner_pole(Cplx y) const;
};

std::shared_ptr<GluingMap> repole(std::shared_ptr<const GluingMap> w, const KernelData& kd,
                                  double t);

// Periods and invariants of the two period lattices attached to the quartic
// dt, plus the rational map fed into the elliptic parametrization:
//   omega1 = i * int_{y1}^{y2} dy / sqrt(-dt),
//   omega2 = int_{y2}^{y3} dy / sqrt(dt),
//   omega3 = int_{Y(x1)}^{y1} dy / sqrt(dt)  (from -infinity when Y(x1) is).
struct EllipticData {
    double t = 0;
    double y1 = 0, y2 = 0, y3 = 0;
    std::optional<double> y4;
    Cplx omega1;
    double omega2 = 0, omega3 = 0;
    double f_c0 = 0, f_c1 = 0;
    bool y4_finite = false;
    Cplx f(Cplx y) const {
        return y4_finite ? Cplx(f_c0) + f_c1 / (y - *y4) : Cplx(f_c0) + f_c1 * y;
    }
};

EllipticData elliptic_periods(const KernelData& kd, double t, int n_nodes = 160,
                              double tol = 1e-10);

// Weierstrass elliptic function on the lattice spanned by (wa, wb), with
// invariants from Eisenstein q-series and evaluation by argument reduction,
// Laurent series and duplication.
class WeierstrassP {
public:
    WeierstrassP(Cplx wa, Cplx wb);
    double g2() const { return g2_; }
    double g3() const { return g3_; }
    Cplx eval(Cplx z) const;
    Cplx derivative_fd(Cplx z) const;
    // derivative through (p')^2 = 4p^3 - g2 p - g3, sign resolved against the
    // finite difference; accurate even near the half-periods where p' -> 0
    Cplx derivative(Cplx z) const;
    // Inverse within the half-parallelogram determination: lattice
    // coordinates (s, r) with r in [0, 1/2] along the second generator.
    Cplx invert(Cplx v) const;
    Cplx reduce(Cplx z) const;
    double min_period() const { return rmin_; }

private:
    Cplx wa_, wb_;
    double g2_ = 0, g3_ = 0, rmin_ = 0;
    std::vector<double> series_; // c_k, k >= 2
    Cplx series_eval(Cplx u) const;
    std::pair<double, double> coords(Cplx z) const;
};

// w(y) = p_{1,3}(-(omega1+omega2)/2 + p_{1,2}^{-1}(f(y))), simple pole at y2.
class WeierstrassGluing : public GluingMap {
public:
    WeierstrassGluing(const KernelData& kd, double t, EllipticData ed);
    Cplx value(Cplx y) const override;
    // chain rule through the construction; differencing the composite map
    // would amplify the inversion tolerance
    Cplx derivative(Cplx y) const override;
    Cplx pole() const override { return Cplx(ed_.y2, 0); }
    const char* kind() const override { return "weierstrass"; }
    const EllipticData& elliptic() const { return ed_; }

private:
    EllipticData ed_;
    WeierstrassP p12_, p13_;
    Cplx shift_;
};

std::shared_ptr<GluingMap> gluing_weierstrass(const KernelData& kd, double t);

// Decoupling pair: g maps the domain onto the unit disc with
// g(conj y) = conj g(y), built as g = h(what) with h(z) = -z + sqrt(z^2 - 1)
// and what an affine renormalization of w; f = g/g' satisfies
// sqrt(dt)(conj y)/sqrt(dt)(y) = f(conj y)/f(y) on the curve.
struct AntiTuttePair {
    std::shared_ptr<const GluingMap> w;
    Cplx wA, wB; // w(Y(x1)), w(Y(x2))
    Cplx g(Cplx y) const;
    Cplx f(Cplx y) const;        // g / g'
    Cplx f_closed(Cplx y) const; // -sqrt((w - wA)(w - wB)) / w'
};

AntiTuttePair anti_tutte_pair(std::shared_ptr<const GluingMap> w, const KernelData& kd,
                              double t);

// Residual of the first-order algebraic differential equation satisfied by
// the gluing function, sampled on the real segment between y2 and the
// positive curve crossing. For a Moebius re-poled map the equation carries
// the factor dt'(y2) w'(y2) of the inner map; for the elliptic construction
// it is dt w'^2 = (w - w(Y(x1)))(w - w(Y(x2)))(w - w(y1)).
struct WOdeReport {
    double max_rel_residual = 0;
    bool monotone_checked = false;
    bool monotone_ok = false;
};

WOdeReport check_w_ode(const GluingMap& w, const KernelData& kd, double t, int n_samples = 20);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// int_lo^hi dy / sqrt(sign * p(y)) between two consecutive simple roots of p,
// through the substitution y = mid + half * sin(phi) which removes both
// inverse-square-root endpoint singularities.
double sqrt_poly_period(const Poly<double>& p, double lo, double hi, double sign_inside,
                        int n);

} // namespace trikernel

#endif
