#include "trikernel/conformal.hpp"

#include <cmath>

namespace trikernel {

Cplx GluingMap::derivative(Cplx y) const {
    double h = fd_step * (1.0 + std::abs(y));
    Cplx f1 = value(y + h), f_1 = value(y - h);
    Cplx f2 = value(y + 2.0 * h), f_2 = value(y - 2.0 * h);
    return (-f2 + 8.0 * f1 - 8.0 * f_1 + f_2) / (12.0 * h);
}

Cplx GluingMap::residue_at_pole() const {
    const int n = 128;
    Cplx p = pole();
    double rho = residue_radius;
    Cplx acc = 0;
    for (int k = 0; k < n; ++k) {
        double th = 2.0 * M_PI * k / n;
        Cplx e(std::cos(th), std::sin(th));
        acc += value(p + rho * e) * e;
    }
    return acc * rho / static_cast<double>(n);
}

// ---- algebraic series W and Z -------------------------------------------------

double solve_W_numeric(double t) {
    double w = 2.0 * t;
    for (int it = 0; it < 200; ++it) {
        double f = w - t * (2.0 + w * w * w);
        double df = 1.0 - 3.0 * t * w * w;
        double w2 = w - f / df;
        if (std::abs(w2 - w) < 1e-16 * (1.0 + std::abs(w2))) return w2;
        w = w2;
    }
    throw NoConvergence("Newton for W did not converge");
}

double solve_Z_numeric(double t) {
    double z = t;
    for (int it = 0; it < 200; ++it) {
        double om = 1.0 - z;
        double f = z * om * om - t * (1.0 - 2.0 * z + 6.0 * z * z - 2.0 * z * z * z + z * z * z * z);
        double df = om * om - 2.0 * z * om - t * (-2.0 + 12.0 * z - 6.0 * z * z + 4.0 * z * z * z);
        double z2 = z - f / df;
        if (std::abs(z2 - z) < 1e-16 * (1.0 + std::abs(z2))) return z2;
        z = z2;
    }
    throw NoConvergence("Newton for Z did not converge");
}

PuiseuxSeries solve_W_series(long trunc_units) {
    PuiseuxSeries t = PuiseuxSeries::variable();
    auto F = [&](const PuiseuxSeries& s) { return t * (s.pow_int(3) + Rat(2)); };
    return solve_fixed_point(F, PuiseuxSeries::zero(1, trunc_units), 1, trunc_units);
}

PuiseuxSeries solve_Z_series(long trunc_units) {
    PuiseuxSeries t = PuiseuxSeries::variable();
    PuiseuxSeries one = PuiseuxSeries::constant(1);
    auto F = [&](const PuiseuxSeries& s) {
        PuiseuxSeries num = one - s * Rat(2) + s.pow_int(2) * Rat(6) - s.pow_int(3) * Rat(2) +
                            s.pow_int(4);
        PuiseuxSeries den = (one - s).pow_int(2).truncated(trunc_units + 2);
        return t * (num / den);
    };
    return solve_fixed_point(F, PuiseuxSeries::zero(1, trunc_units), 1, trunc_units);
}

// ---- explicit gluing formulas ---------------------------------------------------

namespace {

Cplx kreweras_w(Cplx y, double W) {
    return (1.0 / y - 1.0 / W) * std::sqrt(1.0 - y * W * W);
}

Cplx kreweras_wp(Cplx y, double W) {
    Cplx s = std::sqrt(1.0 - y * W * W);
    return -s / (y * y) - (1.0 / y - 1.0 / W) * W * W / (2.0 * s);
}

Cplx revkreweras_w(Cplx y, double W, double t) {
    Cplx num = -t * y * y * y + y * y + t;
    Cplx rad = 1.0 - y * W * (W * W * W + 4.0) / 4.0 + y * y * W * W / 4.0;
    Cplx pre = (2.0 * y * y - y * W * W - W) / (2.0 * y * W);
    return num / (2.0 * y * t) - pre * std::sqrt(rad);
}

Cplx doublekreweras_w(Cplx y, double Z) {
    double om = 1.0 - Z;
    Cplx rad = 1.0 - 2.0 * y * Z * (1.0 + Z * Z) / (om * om) + Z * Z * y * y;
    Cplx t1 = std::sqrt(rad) * (Z * om + 2.0 * y * Z - om * y * y) /
              (2.0 * y * Z * om * (1.0 + y));
    Cplx t2 = (Z * om * om - Z * Z * (-1.0 + 2.0 * Z + Z * Z) * y +
               (1.0 - 2.0 * Z + 7.0 * Z * Z - 4.0 * Z * Z * Z) * y * y -
               Z * om * om * y * y * y) /
              (2.0 * y * (1.0 + y) * Z * om * om);
    return t1 + t2;
}

class ExplicitGluing : public GluingMap {
public:
    ExplicitGluing(Trilogy which, double t)
        : which_(which), t_(t),
          wz_(which == Trilogy::DoubleKreweras ? solve_Z_numeric(t) : solve_W_numeric(t)) {}

    Cplx value(Cplx y) const override {
        if (std::abs(y) < 1e-13) throw EvaluationAtPole("gluing map has its pole at 0");
        switch (which_) {
            case Trilogy::Kreweras: return kreweras_w(y, wz_);
            case Trilogy::ReverseKreweras: return revkreweras_w(y, wz_, t_);
            case Trilogy::DoubleKreweras: return doublekreweras_w(y, wz_);
        }
        return 0;
    }
    Cplx derivative(Cplx y) const override {
        if (which_ == Trilogy::Kreweras) return kreweras_wp(y, wz_);
        return GluingMap::derivative(y);
    }
    Cplx pole() const override { return 0; }
    Cplx residue_at_pole() const override { return 1.0; } // y*w(y) -> 1 for all three
    const char* kind() const override {
        switch (which_) {
            case Trilogy::Kreweras: return "kreweras-explicit";
            case Trilogy::ReverseKreweras: return "reverse-kreweras-explicit";
            case Trilogy::DoubleKreweras: return "double-kreweras-explicit";
        }
        return "?";
    }

private:
    Trilogy which_;
    double t_;
    double wz_;
};

} // namespace

Cplx trilogy_w_value(Trilogy which, Cplx y, double wz, double t) {
    switch (which) {
        case Trilogy::Kreweras: return kreweras_w(y, wz);
        case Trilogy::ReverseKreweras: return revkreweras_w(y, wz, t);
        case Trilogy::DoubleKreweras: return doublekreweras_w(y, wz);
    }
    return 0;
}

Cplx trilogy_w_derivative(Trilogy which, Cplx y, double wz, double t) {
    if (which == Trilogy::Kreweras) return kreweras_wp(y, wz);
    ExplicitGluing g(which, t);
    return g.GluingMap::derivative(y);
}

std::shared_ptr<GluingMap> gluing_explicit(Trilogy which, double t) {
    return std::make_shared<ExplicitGluing>(which, t);
}

// ---- series mode -----------------------------------------------------------------

PuiseuxSeries trilogy_w_series(Trilogy which, const PuiseuxSeries& y,
                               const PuiseuxSeries& wz) {
    const Rat one(1), two(2), four(4);
    PuiseuxSeries t = PuiseuxSeries::variable();
    switch (which) {
        case Trilogy::Kreweras: {
            PuiseuxSeries rad = PuiseuxSeries::constant(1) - y * wz * wz;
            return (y.inverse() - wz.inverse()) * sqrt_series(rad);
        }
        case Trilogy::ReverseKreweras: {
            PuiseuxSeries num = -(t * y.pow_int(3)) + y * y + t;
            PuiseuxSeries rad = PuiseuxSeries::constant(1) -
                                y * wz * (wz.pow_int(3) + four) / four +
                                y * y * wz * wz / four;
            PuiseuxSeries pre = (y * y * two - y * wz * wz - wz) / (y * wz * two);
            return num / (y * t * two) - pre * sqrt_series(rad);
        }
        case Trilogy::DoubleKreweras: {
            PuiseuxSeries om = PuiseuxSeries::constant(1) - wz;
            PuiseuxSeries om2 = om * om;
            PuiseuxSeries rad = PuiseuxSeries::constant(1) -
                                (y * wz * (wz * wz + one) * two) / om2 + wz * wz * y * y;
            PuiseuxSeries one_plus_y = PuiseuxSeries::constant(1) + y;
            PuiseuxSeries t1 = sqrt_series(rad) * (wz * om + y * wz * two - om * y * y) /
                               (y * wz * om * one_plus_y * two);
            PuiseuxSeries t2 =
                (wz * om2 - wz * wz * (wz * wz + wz * two - one) * y +
                 (PuiseuxSeries::constant(1) - wz * two + wz * wz * Rat(7) - wz.pow_int(3) * four) *
                     (y * y) -
                 wz * om2 * y.pow_int(3)) /
                (y * one_plus_y * wz * om2 * two);
            return t1 + t2;
        }
    }
    throw InvalidArgument("unknown trilogy member");
}

PuiseuxSeries kreweras_w_prime_series(const PuiseuxSeries& y, const PuiseuxSeries& W) {
    PuiseuxSeries rad = PuiseuxSeries::constant(1) - y * W * W;
    PuiseuxSeries s = sqrt_series(rad);
    return -(s / (y * y)) - (y.inverse() - W.inverse()) * W * W / (s * Rat(2));
}

// ---- Moebius re-poling -------------------------------------------------------------

MoebiusGluing::MoebiusGluing(std::shared_ptr<const GluingMap> inner, Cplx y2)
    : inner_(std::move(inner)), y2_(y2), w_y2_(inner_->value(y2)) {
    fd_step = inner_->fd_step;
    residue_radius = inner_->residue_radius;
    inner_pole_ = inner_->pole();
    inner_res_ = inner_->residue_at_pole();
}

// The composite is regular at the inner pole p: near it
// 1/(w0 - w0(y2)) = (y - p)/res + O((y - p)^2).
bool MoebiusGluing::at_inner_pole(Cplx y) const {
    return std::abs(y - inner_pole_) < 1e-11 * (1.0 + std::abs(inner_pole_));
}

Cplx MoebiusGluing::value(Cplx y) const {
    if (at_inner_pole(y)) return (y - inner_pole_) / inner_res_;
    return 1.0 / (inner_->value(y) - w_y2_);
}

Cplx MoebiusGluing::derivative(Cplx y) const {
    if (at_inner_pole(y)) return 1.0 / inner_res_;
    Cplx d = inner_->value(y) - w_y2_;
    return -inner_->derivative(y) / (d * d);
}

Cplx MoebiusGluing::residue_at_pole() const { return 1.0 / inner_->derivative(y2_); }

std::shared_ptr<GluingMap> repole(std::shared_ptr<const GluingMap> w, const KernelData& kd,
                                  double t) {
    BranchPointsNum bp = branch_points_numeric(kd, t);
    Cplx y2(bp.y2, 0);
    if (std::abs(w->pole() - y2) < 1e-9 * (1.0 + std::abs(y2)))
        throw PoleAlreadyAtY2("gluing map already has its pole at y2");
    return std::make_shared<MoebiusGluing>(std::move(w), y2);
}

// ---- anti-Tutte pair ----------------------------------------------------------------

namespace {

// h(z) = -z + sqrt(z^2 - 1) with the cut on [-1, 1]; |h| < 1 off the cut.
Cplx h_map(Cplx z) { return -z + z * std::sqrt(1.0 - 1.0 / (z * z)); }

} // namespace

Cplx AntiTuttePair::g(Cplx y) const {
    Cplx what = (2.0 * w->value(y) - (wA + wB)) / (wB - wA);
    return h_map(what);
}

Cplx AntiTuttePair::f(Cplx y) const {
    Cplx what = (2.0 * w->value(y) - (wA + wB)) / (wB - wA);
    Cplx s = what * std::sqrt(1.0 - 1.0 / (what * what)); // sqrt(what^2 - 1)
    Cplx whatp = 2.0 * w->derivative(y) / (wB - wA);
    return -s / whatp;
}

Cplx AntiTuttePair::f_closed(Cplx y) const {
    Cplx wv = w->value(y);
    return -std::sqrt((wv - wA) * (wv - wB)) / w->derivative(y);
}

AntiTuttePair anti_tutte_pair(std::shared_ptr<const GluingMap> w, const KernelData& kd,
                              double t) {
    if (!kd.steps.contains(-1, 1) && !kd.steps.contains(-1, 0))
        throw BranchPointImageInfinite("Y(x1) is infinite: the curve is unbounded");
    BranchPointsNum bp = branch_points_numeric(kd, t);
    AntiTuttePair pair;
    pair.w = std::move(w);
    pair.wA = pair.w->value(Cplx(Y_at_branch_point(kd, t, bp.x1), 0));
    pair.wB = pair.w->value(Cplx(Y_at_branch_point(kd, t, bp.x2), 0));
    return pair;
}

// ---- differential equation of the gluing function -----------------------------------

WOdeReport check_w_ode(const GluingMap& w, const KernelData& kd, double t, int n_samples) {
    BranchPointsNum bp = branch_points_numeric(kd, t);
    double ycross = Y_at_branch_point(kd, t, bp.x2);
    double hi = std::min(bp.y3, ycross);
    if (!(hi > bp.y2)) throw InvalidArgument("no real segment between y2 and the crossing");

    Poly<double> dt_poly = kd.dt_num(t);
    Poly<double> dt_prime = dt_poly.derivative();
    Cplx yx1(Y_at_branch_point(kd, t, bp.x1), 0);
    Cplx yx2(ycross, 0);
    Cplx wA = w.value(yx1), wB = w.value(yx2), wy1 = w.value(Cplx(bp.y1, 0));

    const MoebiusGluing* moeb = dynamic_cast<const MoebiusGluing*>(&w);
    Cplx factor = 1.0;
    if (moeb) {
        // dt(z) w'(z)^2 = dt'(y2) w0'(y2) (w - w(Y(x1)))(w - w(Y(x2)))(w - w(y1))
        factor = dt_prime.eval(Cplx(bp.y2, 0)) * moeb->inner().derivative(Cplx(bp.y2, 0));
    }

    WOdeReport rep;
    rep.monotone_checked = !moeb;
    rep.monotone_ok = true;
    for (int k = 0; k < n_samples; ++k) {
        double frac = 0.08 + 0.84 * (k + 0.5) / n_samples;
        Cplx z(bp.y2 + frac * (hi - bp.y2), 0);
        Cplx wv = w.value(z), wp = w.derivative(z);
        Cplx lhs = dt_poly.eval(z) * wp * wp;
        Cplx rhs = factor * (wv - wA) * (wv - wB) * (wv - wy1);
        double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-30});
        rep.max_rel_residual = std::max(rep.max_rel_residual, std::abs(lhs - rhs) / scale);
        if (!moeb && !(wp.real() < 0)) rep.monotone_ok = false;
    }
    return rep;
}

} // namespace trikernel
