#include "trikernel/bvp.hpp"

namespace trikernel {

namespace {

// Truncated power series in the algebraic quantity W whose coefficients are
// Laurent polynomials in the integration variable z. This is the ring in
// which the excursion integrand is expanded before extracting unit-circle
// residues order by order.
struct WPoly {
    int K = 0;
    std::vector<ZRat> c;
    explicit WPoly(int K_) : K(K_), c(static_cast<size_t>(K_)) {}

    static WPoly constant(int K, const Rat& v) {
        WPoly p(K);
        if (v != 0) p.c[0] = ZRat::z_power(0, v);
        return p;
    }
    void add_term(int worder, int zpow, const Rat& v) {
        if (worder < K) c[static_cast<size_t>(worder)].add_term(zpow, v);
    }
};

WPoly add(const WPoly& a, const WPoly& b) {
    WPoly r(a.K);
    for (int k = 0; k < a.K; ++k) r.c[static_cast<size_t>(k)] = a.c[static_cast<size_t>(k)] + b.c[static_cast<size_t>(k)];
    return r;
}
WPoly sub(const WPoly& a, const WPoly& b) {
    WPoly r(a.K);
    for (int k = 0; k < a.K; ++k) r.c[static_cast<size_t>(k)] = a.c[static_cast<size_t>(k)] - b.c[static_cast<size_t>(k)];
    return r;
}
WPoly mul(const WPoly& a, const WPoly& b) {
    WPoly r(a.K);
    for (int i = 0; i < a.K; ++i) {
        if (a.c[static_cast<size_t>(i)].empty()) continue;
        for (int j = 0; i + j < a.K; ++j) {
            if (b.c[static_cast<size_t>(j)].empty()) continue;
            r.c[static_cast<size_t>(i + j)] =
                r.c[static_cast<size_t>(i + j)] + a.c[static_cast<size_t>(i)] * b.c[static_cast<size_t>(j)];
        }
    }
    return r;
}
WPoly scale(const WPoly& a, const Rat& s) {
    WPoly r(a.K);
    for (int k = 0; k < a.K; ++k) r.c[static_cast<size_t>(k)] = a.c[static_cast<size_t>(k)].scaled(s);
    return r;
}
// z d/dz, term-wise.
WPoly z_dz(const WPoly& a) {
    WPoly r(a.K);
    for (int k = 0; k < a.K; ++k) r.c[static_cast<size_t>(k)] = a.c[static_cast<size_t>(k)].dz().shifted(1);
    return r;
}

// Newton iteration r <- r (3 - B r^2) / 2 for 1/sqrt(B); the constant term of
// B must be a z-free rational square.
WPoly inv_sqrt(const WPoly& B) {
    const ZRat& b0 = B.c[0];
    if (b0.terms().size() != 1 || b0.terms().begin()->first != 0)
        throw NonSquareLeading("leading coefficient must be z-free");
    auto s0 = exact_sqrt(b0.coeff(0));
    if (!s0 || *s0 == 0) throw NonSquareLeading("leading coefficient is not a positive rational square");
    WPoly r = WPoly::constant(B.K, 1 / *s0);
    int correct = 1;
    while (correct < B.K) {
        WPoly br2 = mul(B, mul(r, r));
        WPoly three = WPoly::constant(B.K, 3);
        r = scale(mul(r, sub(three, br2)), Rat(1, 2));
        correct *= 2;
    }
    return r;
}

WPoly sqrt_w(const WPoly& B) { return mul(B, inv_sqrt(B)); }

} // namespace

D0SeriesBundle d0_series_bundle(int order) {
    if (order < 3) throw InvalidArgument("order must be at least 3");
    const int N = order;
    const long margin = 4;
    const long Tq1 = N + margin;       // t-order window at ramification 1
    const long Tq2 = 2 * (N + margin); // units at ramification 2

    StepSet kreweras = *model_preset("kreweras");
    KernelData kd = build_kernel(kreweras);

    D0SeriesBundle b;
    BranchPointsSeries bp = branch_points_series(kd, Tq2, 2);
    b.x1 = bp.x1;
    b.x2 = bp.x2;
    b.y3 = bp.y3;
    b.W = solve_W_series(Tq1);

    b.w_at_y2 = trilogy_w_series(Trilogy::Kreweras, b.x2, b.W);
    PuiseuxSeries wp_y2 = kreweras_w_prime_series(b.x2, b.W);
    Poly<PuiseuxSeries> dt = kd.d_poly_series(true, Tq2, 2);
    PuiseuxSeries dtp_y2 = dt.derivative().eval(b.x2);
    b.sqrt_dtp_y2 = sqrt_series(dtp_y2);
    b.sqrt_neg_wp_y2 = sqrt_series(-wp_y2);

    PuiseuxSeries Yx1 = -sqrt_series(b.x1.inverse());
    PuiseuxSeries Yx2 = sqrt_series(b.x2.inverse());
    PuiseuxSeries w_y1 = trilogy_w_series(Trilogy::Kreweras, b.x1, b.W);
    PuiseuxSeries w_Yx1 = trilogy_w_series(Trilogy::Kreweras, Yx1, b.W);
    PuiseuxSeries w_Yx2 = trilogy_w_series(Trilogy::Kreweras, Yx2, b.W);
    b.wy2_at_y1 = (w_y1 - b.w_at_y2).inverse();
    b.wy2_at_Yx1 = (w_Yx1 - b.w_at_y2).inverse();
    b.wy2_at_Yx2 = (w_Yx2 - b.w_at_y2).inverse();

    // The prefactor -sqrt(w(y1) - w(y2)) / sqrt(wy2(Y(x1)) wy2(Y(x2)) dt'(y2) w'(y2))
    // is real and negative (the excursion series is positive, the residue
    // series negative); it is recovered from its square to keep every branch
    // rational.
    PuiseuxSeries A = w_y1 - b.w_at_y2;
    PuiseuxSeries Bprod = b.wy2_at_Yx1 * b.wy2_at_Yx2 * dtp_y2 * wp_y2;
    b.prefactor = -sqrt_series(A / (-Bprod));

    // Integrand z w'(z) / sqrt(P - S w(z) + w(z)^2) in the W-ring, with
    //   P = w(y1) w(y2) = (1 - W^3)^{3/2} / W^2,
    //   S = w(y1) + w(y2) = sqrt(2P - (W^6 - 20 W^3 - 8)/(4 W^2)),
    // cleared of the 1/W pole: with wh = W w = (W/z - 1) sqrt(1 - z W^2),
    //   integrand = z (d wh / d z) / sqrt(Ph - Sh wh + wh^2)
    // where Ph = W^2 P, Sh = W S.
    const int K = N + 3;
    WPoly one_m_zW2(K);
    one_m_zW2.add_term(0, 0, 1);
    one_m_zW2.add_term(2, 1, -1);
    WPoly s1 = sqrt_w(one_m_zW2);
    WPoly pre(K);
    pre.add_term(1, -1, 1);
    pre.add_term(0, 0, -1);
    WPoly wh = mul(pre, s1);

    WPoly one_m_W3(K);
    one_m_W3.add_term(0, 0, 1);
    one_m_W3.add_term(3, 0, -1);
    WPoly Ph = mul(one_m_W3, sqrt_w(one_m_W3)); // (1 - W^3)^{3/2}
    WPoly Sarg = scale(Ph, 2);
    Sarg.add_term(0, 0, 2);
    Sarg.add_term(3, 0, 5);
    Sarg.add_term(6, 0, Rat(-1, 4));
    WPoly Sh = sqrt_w(Sarg);

    WPoly Bh = add(sub(Ph, mul(Sh, wh)), mul(wh, wh));
    WPoly integrand = mul(z_dz(wh), inv_sqrt(Bh));

    std::vector<Rat> residues(static_cast<size_t>(K), Rat(0));
    for (int k = 0; k < K; ++k) {
        if (!integrand.c[static_cast<size_t>(k)].empty())
            b.integrand_w[k] = integrand.c[static_cast<size_t>(k)];
        residues[static_cast<size_t>(k)] = integrand.c[static_cast<size_t>(k)].residue();
    }

    PuiseuxSeries acc = PuiseuxSeries::zero(1, Tq1);
    for (int k = K - 1; k >= 0; --k)
        acc = acc * b.W + PuiseuxSeries::constant(residues[static_cast<size_t>(k)]);
    b.integral_t = acc;

    b.d0 = b.prefactor * b.integral_t;
    long t_order = b.d0.trunc() / b.d0.ramification();
    if (t_order < N)
        throw TruncationInsufficient("excursion series known only through t^" +
                                     std::to_string(t_order));
    return b;
}

PuiseuxSeries theorem2_D0_series(int order) { return d0_series_bundle(order).d0; }

} // namespace trikernel
