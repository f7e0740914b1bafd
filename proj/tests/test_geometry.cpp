#include "doctest.h"

#include <cmath>
#include <numbers>

#include "trikernel/geometry.hpp"

using namespace trikernel;

namespace {
StepSet preset(const char* name) { return *model_preset(name); }
}

TEST_CASE("tracing the kernel curve (kreweras, t = 1/6)") {
    KernelData kd = build_kernel(preset("kreweras"));
    const double t = 1.0 / 6.0;
    Contour c = trace_curve(kd, t, 1024);
    REQUIRE_FALSE(c.unbounded);

    SUBCASE("real crossings match the closed forms") {
        CHECK(c.y_cross_pos == doctest::Approx(1.0 / std::sqrt(c.bp.x2)).epsilon(1e-12));
        REQUIRE(c.y_cross_neg.has_value());
        CHECK(*c.y_cross_neg == doctest::Approx(-1.0 / std::sqrt(c.bp.x1)).epsilon(1e-12));
        CHECK(std::abs(c.pts.front() - Cplx(c.y_cross_pos, 0)) < 1e-12);
        CHECK(std::abs(c.pts[c.pts.size() / 2] - Cplx(*c.y_cross_neg, 0)) < 1e-12);
    }
    SUBCASE("conjugation symmetry of the samples") {
        size_t n = c.pts.size();
        for (size_t k = 1; k < n; ++k)
            CHECK(std::abs(c.pts[n - k] - std::conj(c.pts[k])) < 1e-12);
    }
    SUBCASE("the samples satisfy the kernel equation") {
        const double m = 0.5 * (c.bp.x1 + c.bp.x2), h = 0.5 * (c.bp.x2 - c.bp.x1);
        for (size_t k = 0; k < c.pts.size(); k += 37) {
            double th = 2.0 * std::numbers::pi * k / c.n;
            Cplx x(m + h * std::cos(th), 0);
            CHECK(std::abs(kd.K(x, c.pts[k], t)) < 1e-10);
        }
    }
    SUBCASE("counterclockwise orientation") {
        std::vector<Cplx> rel;
        for (Cplx z : c.pts) rel.push_back(z - Cplx(c.bp.y1, 0));
        CHECK(winding_index(rel) == 1);
    }
    SUBCASE("derivative samples match finite differences") {
        size_t n = c.pts.size();
        double dth = 2.0 * std::numbers::pi / c.n;
        for (size_t k = 5; k < n; k += 101) {
            Cplx fd = (c.pts[(k + 1) % n] - c.pts[(k - 1) % n]) / (2.0 * dth);
            CHECK(std::abs(fd - c.dz[k]) < 1e-3 * (1.0 + std::abs(fd)));
        }
    }
    SUBCASE("doubling the mesh leaves the crossings put") {
        Contour c2 = trace_curve(kd, t, 2048);
        CHECK(std::abs(c2.y_cross_pos - c.y_cross_pos) < 1e-8);
        CHECK(std::abs(*c2.y_cross_neg - *c.y_cross_neg) < 1e-8);
    }
}

TEST_CASE("unbounded curves are flagged") {
    // the step set {E, N, SW, S}: neither (-1,1) nor (-1,0) present
    KernelData kd = build_kernel(StepSet({{1, 0}, {0, 1}, {-1, -1}, {0, -1}}));
    Contour c = trace_curve(kd, 0.125, 512);
    CHECK(c.unbounded);
    CHECK_FALSE(c.y_cross_neg.has_value());
    CHECK(std::abs(c.bp.x1) < 1e-9); // x1 = 0 in the unbounded case
    CHECK_THROWS_AS(in_domain(c, Cplx(0.5, 0)), UnboundedContour);
}

TEST_CASE("point location") {
    KernelData kd = build_kernel(preset("kreweras"));
    const double t = 1.0 / 6.0;
    Contour c = trace_curve(kd, t, 1024);
    CHECK(in_domain(c, Cplx(c.bp.y1, 0)));
    CHECK(in_domain(c, Cplx(c.bp.y2, 0)));
    CHECK_FALSE(in_domain(c, Cplx(c.bp.y3, 0)));
    double far = 0;
    for (Cplx z : c.pts) far = std::max(far, std::abs(z));
    CHECK_FALSE(in_domain(c, Cplx(2.0 * far, 0)));
    CHECK_THROWS_AS(in_domain(c, c.pts[37]), OnCurve);

    SUBCASE("conjugation symmetry of the domain") {
        for (Cplx y : {Cplx(0.3, 0.4), Cplx(-0.5, 0.8), Cplx(1.2, 1.9)})
            CHECK(classify_point(c, y) == classify_point(c, std::conj(y)));
    }
}

TEST_CASE("winding numbers") {
    SUBCASE("constant chain has index zero") {
        std::vector<Cplx> v(64, Cplx(2.0, 1.0));
        CHECK(winding_index(v) == 0);
    }
    SUBCASE("unit circle has index one") {
        std::vector<Cplx> v;
        for (int k = 0; k < 64; ++k) {
            double th = 2.0 * std::numbers::pi * k / 64;
            v.emplace_back(std::cos(th), std::sin(th));
        }
        CHECK(winding_index(v) == 1);
    }
    SUBCASE("coarse meshes are detected") {
        std::vector<Cplx> v;
        for (int k = 0; k < 3; ++k) {
            double th = 2.0 * std::numbers::pi * k / 3;
            v.emplace_back(std::cos(th), std::sin(th));
        }
        CHECK_THROWS_AS(winding_index(v), PhaseJumpTooLarge);
    }
}

TEST_CASE("discriminant winding and boundary index") {
    SUBCASE("gessel, t = 1/8") {
        KernelData kd = build_kernel(preset("gessel"));
        Contour c = trace_curve(kd, 0.125, 2048);
        CHECK(dt_winding(kd, c) == 2);
        CHECK(bvp_index(kd, c) == -1);
    }
    SUBCASE("kreweras at two mesh sizes") {
        KernelData kd = build_kernel(preset("kreweras"));
        for (int n : {1024, 4096}) {
            Contour c = trace_curve(kd, 0.1, n);
            CHECK(dt_winding(kd, c) == 2);
            CHECK(bvp_index(kd, c) == -1);
        }
    }
}
