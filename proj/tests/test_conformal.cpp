#include "doctest.h"

#include <cmath>
#include <numbers>

#include "trikernel/bvp.hpp"
#include "trikernel/conformal.hpp"

using namespace trikernel;

namespace {
StepSet preset(const char* name) { return *model_preset(name); }

double gluing_symmetry_residual(const GluingMap& w, const Contour& c, int samples) {
    double worst = 0;
    size_t n = c.pts.size();
    for (int k = 1; k <= samples; ++k) {
        Cplx y = c.pts[(static_cast<size_t>(k) * n) / (static_cast<size_t>(samples) + 2)];
        if (!std::isfinite(std::abs(y)) || std::abs(y) > 1e6) continue;
        worst = std::max(worst, std::abs(w.value(y) - w.value(std::conj(y))));
    }
    return worst;
}
} // namespace

TEST_CASE("explicit gluing maps identify conjugate boundary points") {
    SUBCASE("kreweras, t = 1/6") {
        KernelData kd = build_kernel(preset("kreweras"));
        Contour c = trace_curve(kd, 1.0 / 6.0, 2048);
        auto w = gluing_explicit(Trilogy::Kreweras, 1.0 / 6.0);
        CHECK(gluing_symmetry_residual(*w, c, 50) < 1e-8);
    }
    SUBCASE("double kreweras, t = 0.12") {
        KernelData kd = build_kernel(preset("double-kreweras"));
        Contour c = trace_curve(kd, 0.12, 2048);
        auto w = gluing_explicit(Trilogy::DoubleKreweras, 0.12);
        CHECK(gluing_symmetry_residual(*w, c, 50) < 1e-8);
    }
    SUBCASE("reverse kreweras (unbounded curve), t = 0.15") {
        KernelData kd = build_kernel(preset("reverse-kreweras"));
        Contour c = trace_curve(kd, 0.15, 2048);
        CHECK(c.unbounded);
        auto w = gluing_explicit(Trilogy::ReverseKreweras, 0.15);
        // test on the part of the curve with moderate modulus
        double worst = 0;
        for (size_t k = 0; k < c.pts.size(); k += 31) {
            Cplx y = c.pts[k];
            if (std::abs(y) > 3.0) continue;
            worst = std::max(worst, std::abs(w->value(y) - w->value(std::conj(y))));
        }
        CHECK(worst < 1e-8);
    }
    SUBCASE("evaluation at the pole is rejected") {
        auto w = gluing_explicit(Trilogy::Kreweras, 0.1);
        CHECK_THROWS_AS(w->value(Cplx(0, 0)), EvaluationAtPole);
    }
}

TEST_CASE("series and numeric gluing evaluations agree") {
    const double t = 0.05;
    PuiseuxSeries W = solve_W_series(24), Z = solve_Z_series(24);
    for (double c : {0.4, 0.7}) {
        PuiseuxSeries yc = PuiseuxSeries::constant(Rat(parse_rational(std::to_string(c))));
        double wk = trilogy_w_series(Trilogy::Kreweras, yc, W).eval_double(t);
        CHECK(wk == doctest::Approx(trilogy_w_value(Trilogy::Kreweras, Cplx(c, 0),
                                                    solve_W_numeric(t), t)
                                        .real())
                        .epsilon(1e-9));
        double wr = trilogy_w_series(Trilogy::ReverseKreweras, yc, W).eval_double(t);
        CHECK(wr == doctest::Approx(trilogy_w_value(Trilogy::ReverseKreweras, Cplx(c, 0),
                                                    solve_W_numeric(t), t)
                                        .real())
                        .epsilon(1e-9));
        double wd = trilogy_w_series(Trilogy::DoubleKreweras, yc, Z).eval_double(t);
        CHECK(wd == doctest::Approx(trilogy_w_value(Trilogy::DoubleKreweras, Cplx(c, 0),
                                                    solve_Z_numeric(t), t)
                                        .real())
                        .epsilon(1e-9));
    }
}

TEST_CASE("moebius re-poling") {
    KernelData kd = build_kernel(preset("kreweras"));
    const double t = 1.0 / 6.0;
    Contour c = trace_curve(kd, t, 1024);
    auto w0 = gluing_explicit(Trilogy::Kreweras, t);
    auto w = repole(w0, kd, t);

    CHECK(std::abs(w->pole() - Cplx(c.bp.y2, 0)) < 1e-12);
    CHECK_THROWS_AS(repole(w, kd, t), PoleAlreadyAtY2);

    SUBCASE("a moebius image keeps the gluing identification") {
        CHECK(gluing_symmetry_residual(*w, c, 50) < 1e-10);
    }
    SUBCASE("residue from the inner derivative, and w_{y2}(0) = 0, w_{y2}'(0) = +1") {
        Cplx r = w->residue_at_pole();
        CHECK(std::abs(r - 1.0 / w0->derivative(Cplx(c.bp.y2, 0))) < 1e-12);
        // w_{y2} = 1/(w - w(y2)) with w ~ 1/y near its pole at 0
        CHECK(std::abs(w->value(Cplx(0, 0))) < 1e-12);
        CHECK(std::abs(w->derivative(Cplx(0, 0)) - 1.0) < 1e-8);
    }
    SUBCASE("statistical injectivity inside the domain") {
        std::vector<Cplx> pts, vals;
        for (int i = -4; i <= 4; ++i)
            for (int j = 0; j <= 4; ++j) {
                Cplx y(0.35 * i, 0.35 * j);
                try {
                    if (classify_point(c, y) != PointLocation::Inside) continue;
                    if (std::abs(y - Cplx(c.bp.y2, 0)) < 0.2) continue;
                    pts.push_back(y);
                    vals.push_back(w->value(y));
                } catch (const Error&) {
                }
            }
        REQUIRE(pts.size() > 12);
        for (size_t a = 0; a < pts.size(); ++a)
            for (size_t b = a + 1; b < pts.size(); ++b) {
                if (std::abs(pts[a] - std::conj(pts[b])) < 1e-12) continue; // conjugates only meet on the curve
                CHECK(std::abs(vals[a] - vals[b]) > 1e-8);
            }
    }
}

TEST_CASE("period machinery") {
    SUBCASE("calibration: int_0^1 dy/sqrt(y(1-y)) = pi") {
        Poly<double> p({0.0, -1.0, 1.0}); // y^2 - y; -p = y(1-y)
        double v = sqrt_poly_period(p, 0.0, 1.0, -1.0, 64);
        CHECK(std::abs(v - std::numbers::pi) < 1e-10);
    }
    SUBCASE("periods of the transformed infinite-group model {E,NE,N,SW}, t = 1/8") {
        KernelData kd = build_kernel(phi_transform(preset("e-ne-n-sw")));
        EllipticData ed = elliptic_periods(kd, 0.125);
        CHECK(ed.omega1.real() == 0);
        CHECK(ed.omega1.imag() > 0);
        CHECK(ed.omega2 > 0);
        CHECK(ed.omega3 > 0);
        CHECK(ed.y4_finite);

        // node doubling moves the periods below the convergence tolerance
        EllipticData ed2 = elliptic_periods(kd, 0.125, 320);
        CHECK(std::abs(ed.omega2 - ed2.omega2) < 1e-10);
        CHECK(std::abs(ed.omega1.imag() - ed2.omega1.imag()) < 1e-10);
        CHECK(std::abs(ed.omega3 - ed2.omega3) < 1e-10);
    }
    SUBCASE("third period with an infinite start (unbounded curve)") {
        KernelData kd = build_kernel(StepSet({{1, 0}, {0, 1}, {-1, -1}, {0, -1}}));
        EllipticData ed = elliptic_periods(kd, 0.125);
        CHECK(ed.omega3 > 0);
        CHECK(std::isfinite(ed.omega3));
    }
}

TEST_CASE("weierstrass evaluation") {
    KernelData kd = build_kernel(phi_transform(preset("e-ne-n-sw")));
    const double t = 0.125;
    EllipticData ed = elliptic_periods(kd, t);
    WeierstrassP p12(ed.omega1, Cplx(ed.omega2, 0));

    SUBCASE("periodicity") {
        for (Cplx z : {Cplx(0.21, 0.13), Cplx(-0.4, 0.37), Cplx(0.8, -0.2)}) {
            Cplx base = p12.eval(z);
            CHECK(std::abs(p12.eval(z + ed.omega1) - base) < 1e-9 * (1.0 + std::abs(base)));
            CHECK(std::abs(p12.eval(z + ed.omega2) - base) < 1e-9 * (1.0 + std::abs(base)));
        }
    }
    SUBCASE("evenness and the differential equation") {
        Cplx z(0.3, 0.22);
        CHECK(std::abs(p12.eval(z) - p12.eval(-z)) < 1e-10);
        // (p')^2 = 4p^3 - g2 p - g3 with a finite-difference derivative
        Cplx pv = p12.eval(z), dv = p12.derivative_fd(z);
        Cplx rhs = 4.0 * pv * pv * pv - p12.g2() * pv - p12.g3();
        CHECK(std::abs(dv * dv - rhs) < 1e-7 * (1.0 + std::abs(rhs)));
    }
    SUBCASE("inversion lands in the half-parallelogram and inverts") {
        for (Cplx v : {Cplx(3.0, 1.0), Cplx(-2.0, 0.5), Cplx(0.4, -2.0)}) {
            Cplx z = p12.invert(v);
            CHECK(std::abs(p12.eval(z) - v) < 1e-9 * (1.0 + std::abs(v)));
        }
    }
}

TEST_CASE("weierstrass gluing map") {
    SUBCASE("quartic discriminant: transformed {E,NE,N,SW}, t = 1/8") {
        StepSet s = phi_transform(preset("e-ne-n-sw"));
        KernelData kd = build_kernel(s);
        const double t = 0.125;
        Contour c = trace_curve(kd, t, 2048);
        REQUIRE_FALSE(c.unbounded);
        auto w = gluing_weierstrass(kd, t);
        CHECK(gluing_symmetry_residual(*w, c, 50) < 1e-6);

        SUBCASE("f / sqrt(dt) = 1 / sqrt(w - w(y1)) for the normalized map") {
            AntiTuttePair pair = anti_tutte_pair(w, kd, t);
            Cplx wy1 = w->value(Cplx(c.bp.y1, 0));
            double hi = std::min(c.bp.y3, c.y_cross_pos);
            double worst = 0;
            for (int k = 1; k < 10; ++k) {
                Cplx z(c.bp.y2 + k * (hi - c.bp.y2) / 11.0, 0);
                Cplx lhs = pair.f_closed(z) / sqrt_dt_bvp(kd, t, z);
                Cplx rhs = 1.0 / std::sqrt(w->value(z) - wy1);
                worst = std::max(worst, std::min(std::abs(lhs - rhs), std::abs(lhs + rhs)));
            }
            CHECK(worst < 1e-5);
        }

        SUBCASE("pole at y2 from three directions") {
            for (Cplx dir : {Cplx(1, 0), Cplx(0, 1), Cplx(-0.7, 0.7)}) {
                double prev = 0;
                for (double eps : {1e-2, 1e-3, 1e-4}) {
                    double mag = std::abs(w->value(Cplx(c.bp.y2, 0) + eps * dir));
                    CHECK(mag > prev);
                    prev = mag;
                }
                CHECK(prev > 1e2);
            }
        }
    }
    SUBCASE("cubic discriminant: kreweras through the elliptic construction") {
        KernelData kd = build_kernel(preset("kreweras"));
        const double t = 1.0 / 6.0;
        Contour c = trace_curve(kd, t, 2048);
        auto w = gluing_weierstrass(kd, t);
        CHECK(gluing_symmetry_residual(*w, c, 50) < 1e-6);
    }
}

TEST_CASE("anti-Tutte invariant") {
    SUBCASE("gessel closed forms: g = y/(t(y+1)^2), f = y(y+1)/(y-1)") {
        KernelData kd = build_kernel(preset("gessel"));
        const double t = 0.125;
        BranchPointsNum bp = branch_points_numeric(kd, t);
        auto g = [&](Cplx y) { return y / (t * (y + 1.0) * (y + 1.0)); };
        auto f = [&](Cplx y) { return y * (y + 1.0) / (y - 1.0); };
        double worst_g = 0;
        for (int k = 1; k < 20; ++k) {
            double x = bp.x1 + k * (bp.x2 - bp.x1) / 20.0;
            BranchPair yb = Y_branches(kd, Cplx(x, 0), t);
            worst_g = std::max(worst_g, std::abs(g(yb.y0) * g(yb.y1) - 1.0));
        }
        CHECK(worst_g < 1e-8);

        Contour c = trace_curve(kd, t, 2048);
        double worst_f = 0;
        for (size_t k = 3; k < c.pts.size() / 2; k += 57) {
            Cplx y = c.pts[k], yb = std::conj(y);
            Cplx lhs = sqrt_dt_bvp(kd, t, yb) / sqrt_dt_bvp(kd, t, y);
            Cplx rhs = f(yb) / f(y);
            worst_f = std::max(worst_f, std::abs(lhs - rhs));
        }
        CHECK(worst_f < 1e-6);
    }
    SUBCASE("constructed pair for the kreweras curve") {
        KernelData kd = build_kernel(preset("kreweras"));
        const double t = 1.0 / 6.0;
        Contour c = trace_curve(kd, t, 2048);
        auto w = repole(gluing_explicit(Trilogy::Kreweras, t), kd, t);
        AntiTuttePair pair = anti_tutte_pair(w, kd, t);

        double worst_mod = 0, worst_dec = 0;
        for (size_t k = 5; k < c.pts.size() / 2; k += 41) {
            Cplx y = c.pts[k];
            worst_mod = std::max(worst_mod, std::abs(std::abs(pair.g(y)) - 1.0));
            Cplx lhs = sqrt_dt_bvp(kd, t, std::conj(y)) / sqrt_dt_bvp(kd, t, y);
            Cplx rhs = pair.f(std::conj(y)) / pair.f(y);
            worst_dec = std::max(worst_dec, std::abs(lhs - rhs));
        }
        CHECK(worst_mod < 1e-7);
        CHECK(worst_dec < 1e-6);

        SUBCASE("f / sqrt(dt) = 1 / sqrt(dt'(y2) w0'(y2) (w - w(y1))) on the real segment") {
            // The re-poled map satisfies the differential equation with the
            // extra factor dt'(y2) w0'(y2), which reappears here.
            Cplx wy1 = w->value(Cplx(c.bp.y1, 0));
            const MoebiusGluing& moeb = dynamic_cast<const MoebiusGluing&>(*w);
            Cplx factor = kd.dt_num(t).derivative().eval(Cplx(c.bp.y2, 0)) *
                          moeb.inner().derivative(Cplx(c.bp.y2, 0));
            double hi = std::min(c.bp.y3, c.y_cross_pos);
            double worst = 0;
            for (int k = 1; k < 12; ++k) {
                Cplx z(c.bp.y2 + k * (hi - c.bp.y2) / 13.0, 0);
                Cplx lhs = pair.f_closed(z) / sqrt_dt_bvp(kd, t, z);
                Cplx rhs = 1.0 / std::sqrt(factor * (w->value(z) - wy1));
                worst = std::max(worst, std::min(std::abs(lhs - rhs), std::abs(lhs + rhs)));
            }
            CHECK(worst < 1e-6);
        }
        SUBCASE("unbounded curves are refused") {
            KernelData kdr = build_kernel(preset("reverse-kreweras"));
            CHECK_THROWS_AS(
                anti_tutte_pair(gluing_explicit(Trilogy::ReverseKreweras, t), kdr, t),
                BranchPointImageInfinite);
        }
    }
}

TEST_CASE("differential equation of the gluing map") {
    SUBCASE("re-poled kreweras map, t = 1/6") {
        KernelData kd = build_kernel(preset("kreweras"));
        auto w = repole(gluing_explicit(Trilogy::Kreweras, 1.0 / 6.0), kd, 1.0 / 6.0);
        WOdeReport rep = check_w_ode(*w, kd, 1.0 / 6.0, 20);
        CHECK(rep.max_rel_residual < 1e-7);
    }
    SUBCASE("elliptic map for transformed {E,NE,N,SW}, t = 1/8") {
        StepSet s = phi_transform(preset("e-ne-n-sw"));
        KernelData kd = build_kernel(s);
        auto w = gluing_weierstrass(kd, 0.125);
        WOdeReport rep = check_w_ode(*w, kd, 0.125, 20);
        CHECK(rep.max_rel_residual < 1e-5);
        CHECK(rep.monotone_checked);
        CHECK(rep.monotone_ok); // -sqrt(dt) w' > 0: w decreases past its pole
    }
}
