#include "doctest.h"

#include <random>

#include "trikernel/conformal.hpp"
#include "trikernel/kernel.hpp"

using namespace trikernel;

namespace {
StepSet preset(const char* name) { return *model_preset(name); }

// x1 = t - 2t^{5/2} + 6t^4 - 21t^{11/2} + 80t^7 - (1287/4) t^{17/2} + O(t^10)
PuiseuxSeries x1_expected() {
    return PuiseuxSeries::from_terms(
        2, 20, {{2, 1}, {5, -2}, {8, 6}, {11, -21}, {14, 80}, {17, Rat(-1287, 4)}});
}
PuiseuxSeries x2_expected() {
    return PuiseuxSeries::from_terms(
        2, 20, {{2, 1}, {5, 2}, {8, 6}, {11, 21}, {14, 80}, {17, Rat(1287, 4)}});
}
} // namespace

TEST_CASE("kernel coefficients") {
    SUBCASE("kreweras: a = t x^2, b = t - x, c = t x") {
        KernelData kd = build_kernel(preset("kreweras"));
        CHECK(kd.A == Poly<Rat>({0, 0, 1}));
        CHECK(kd.B == Poly<Rat>({1}));
        CHECK(kd.C == Poly<Rat>({0, 1}));
        CHECK(kd.At == kd.A);
        CHECK(kd.Bt == kd.B);
        CHECK(kd.Ct == kd.C);
        // d(x) = (t - x)^2 - 4 t^2 x^3 at t = 1/2
        Poly<double> d = kd.d_num(0.5);
        CHECK(d.coeff(0) == doctest::Approx(0.25));
        CHECK(d.coeff(1) == doctest::Approx(-1.0));
        CHECK(d.coeff(2) == doctest::Approx(1.0));
        CHECK(d.coeff(3) == doctest::Approx(-1.0));
    }
    SUBCASE("image of the simple walk: a = t x^2, b = t + t x^2 - x, c = t") {
        KernelData kd = build_kernel(phi_transform(preset("simple")));
        CHECK(kd.A == Poly<Rat>({0, 0, 1}));
        CHECK(kd.B == Poly<Rat>({1, 0, 1}));
        CHECK(kd.C == Poly<Rat>({1}));
    }
    SUBCASE("longer jumps are rejected") {
        CHECK_THROWS_AS(build_kernel(phi_transform(preset("diagonal"))), StepsTooLarge);
    }
}

TEST_CASE("numeric branch points") {
    SUBCASE("kreweras at t = 1/6: cubic discriminant, two roots in the unit disc") {
        KernelData kd = build_kernel(preset("kreweras"));
        BranchPointsNum bp = branch_points_numeric(kd, 1.0 / 6.0);
        CHECK(bp.y1 > 0);
        CHECK(bp.y1 < bp.y2);
        CHECK(bp.y2 < 1);
        CHECK(bp.y3 > 1);
        CHECK_FALSE(bp.y4.has_value());
        // roots of d
        Poly<double> d = kd.d_num(1.0 / 6.0);
        for (double r : {bp.x1, bp.x2, bp.x3})
            CHECK(std::abs(d.eval(Cplx(r, 0))) < 1e-12);
    }
    SUBCASE("gessel at t = 1/8: quartic, four real roots, two in the disc") {
        KernelData kd = build_kernel(preset("gessel"));
        BranchPointsNum bp = branch_points_numeric(kd, 0.125);
        CHECK(bp.x4.has_value());
        CHECK(std::abs(bp.x1) < 1);
        CHECK(std::abs(bp.x2) < 1);
        CHECK(std::abs(bp.x3) > 1);
        CHECK(std::abs(*bp.x4) > 1);
        CHECK(bp.x3 > 0);
    }
    SUBCASE("t out of range is rejected") {
        KernelData kd = build_kernel(preset("kreweras"));
        CHECK_THROWS_AS(branch_points_numeric(kd, 0.5), InvalidArgument);
    }
}

TEST_CASE("branch point expansions") {
    KernelData kd = build_kernel(preset("kreweras"));
    BranchPointsSeries bp = branch_points_series(kd, 20, 2);

    CHECK(bp.x1.agrees_with(x1_expected()));
    CHECK(bp.x2.agrees_with(x2_expected()));
    CHECK(bp.x1.trunc() * 2 >= 18 * bp.x1.ramification()); // verified through t^{17/2}
    CHECK(bp.y1.agrees_with(bp.x1));
    CHECK(bp.y2.agrees_with(bp.x2));

    SUBCASE("the large root of the cubic discriminant is 1/W^2") {
        REQUIRE(bp.y3.has_value());
        PuiseuxSeries W = solve_W_series(16);
        CHECK(bp.y3->agrees_with((W * W).inverse()));
    }
    SUBCASE("series and numeric roots agree at t = 0.01") {
        BranchPointsNum num = branch_points_numeric(kd, 0.01);
        CHECK(bp.x1.eval_double(0.01) == doctest::Approx(num.x1).epsilon(1e-10));
        CHECK(bp.x2.eval_double(0.01) == doctest::Approx(num.x2).epsilon(1e-10));
        CHECK(bp.y3->eval_double(0.01) == doctest::Approx(num.y3).epsilon(1e-8));
    }
    SUBCASE("small roots vanish at rate t when c has a factor x") {
        // leading term of both small roots is proportional to t
        CHECK(bp.x1.coeff(1, 1) != 0);
        CHECK(bp.x1.coeff(1, 2) == 0);
    }
}

TEST_CASE("kernel branches") {
    KernelData kd = build_kernel(preset("kreweras"));
    const double t = 1.0 / 6.0;
    BranchPointsNum bp = branch_points_numeric(kd, t);

    SUBCASE("defining property and Vieta identities at random points") {
        std::mt19937_64 rng(41);
        std::uniform_real_distribution<double> re(-2.0, 2.0);
        for (int k = 0; k < 100; ++k) {
            Cplx x(re(rng), re(rng));
            if (std::abs(kd.a_num(t).eval(x)) < 1e-6) continue;
            BranchPair yb = Y_branches(kd, x, t);
            CHECK(std::abs(kd.K(x, yb.y0, t)) < 1e-10);
            CHECK(std::abs(kd.K(x, yb.y1, t)) < 1e-10);
            CHECK(std::abs(yb.y0) <= std::abs(yb.y1) * (1 + 1e-12));
            Cplx a = kd.a_num(t).eval(x), b = kd.b_num(t).eval(x), c = kd.c_num(t).eval(x);
            CHECK(std::abs(yb.y0 * yb.y1 - c / a) < 1e-10 * std::abs(c / a));
            CHECK(std::abs(yb.y0 + yb.y1 + b / a) < 1e-10 * (1 + std::abs(b / a)));
        }
    }
    SUBCASE("conjugate branches on the cut") {
        for (double s : {0.15, 0.4, 0.6, 0.85}) {
            double x = bp.x1 + s * (bp.x2 - bp.x1);
            BranchPair yb = Y_branches(kd, Cplx(x, 0), t);
            CHECK(std::abs(yb.y0 - std::conj(yb.y1)) < 1e-10);
            CHECK(yb.y0.imag() >= 0);
        }
    }
    SUBCASE("values at the branch points: Y(x1) = -1/sqrt(x1), Y(x2) = 1/sqrt(x2)") {
        CHECK(Y_at_branch_point(kd, t, bp.x1) ==
              doctest::Approx(-1.0 / std::sqrt(bp.x1)).epsilon(1e-12));
        CHECK(Y_at_branch_point(kd, t, bp.x2) ==
              doctest::Approx(1.0 / std::sqrt(bp.x2)).epsilon(1e-12));
    }
    SUBCASE("X inverts Y on the real segment inside the companion domain") {
        double xm = X_at_branch_point(kd, t, bp.y2);
        for (double s : {0.1, 0.4, 0.8}) {
            double x = bp.x2 + s * (0.9 * xm - bp.x2);
            Cplx y0 = Y_branches(kd, Cplx(x, 0), t).y0;
            Cplx back = X_branches(kd, y0, t).y0;
            CHECK(std::abs(back - Cplx(x, 0)) < 1e-9 * (1 + std::abs(x)));
        }
    }
    SUBCASE("derivative identity -sqrt(d) Y0' = sqrt(dt(Y0))") {
        Poly<double> d = kd.d_num(t), dt = kd.dt_num(t);
        double xm = X_at_branch_point(kd, t, bp.y2);
        for (double s : {0.1, 0.25, 0.45, 0.65, 0.9}) {
            double x = bp.x2 + s * (0.9 * xm - bp.x2);
            double h = 1e-6;
            Cplx yp = Y_branches(kd, Cplx(x + h, 0), t).y0;
            Cplx ym = Y_branches(kd, Cplx(x - h, 0), t).y0;
            Cplx y0p = (yp - ym) / (2.0 * h);
            Cplx y0 = Y_branches(kd, Cplx(x, 0), t).y0;
            Cplx lhs = -std::sqrt(d.eval(Cplx(x, 0))) * y0p;
            Cplx rhs = std::sqrt(dt.eval(y0));
            CHECK(std::abs(lhs - rhs) < 1e-6 * (1.0 + std::abs(rhs)));
        }
    }
    SUBCASE("the boundary determination of sqrt(dt) squares to dt") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> re(-1.5, 1.5);
        Poly<double> dt = kd.dt_num(t);
        for (int k = 0; k < 50; ++k) {
            Cplx y(re(rng), re(rng));
            if (std::abs(kd.at_num(t).eval(y)) < 1e-6) continue;
            Cplx s = sqrt_dt_bvp(kd, t, y);
            CHECK(std::abs(s * s - dt.eval(y)) < 1e-9 * (1.0 + std::abs(dt.eval(y))));
        }
    }
    SUBCASE("vanishing leading coefficient flags the infinite root") {
        BranchPair yb = Y_branches(kd, Cplx(0, 0), t); // a(0) = 0 for kreweras
        CHECK(yb.y1_infinite);
        CHECK(std::abs(yb.y0) < 1e-12); // the finite root -c/b vanishes with c
    }
}
