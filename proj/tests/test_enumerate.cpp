#include "doctest.h"

#include "trikernel/enumerate.hpp"

using namespace trikernel;

namespace {
StepSet preset(const char* name) { return *model_preset(name); }
} // namespace

TEST_CASE("three-quadrant excursions of the reverse Kreweras walk") {
    CountTable t = count_walks(preset("reverse-kreweras"), Domain::ThreeQuadrant, {0, 0}, 21);
    const long expected[] = {1, 4, 46, 706, 12472, 239632, 4869440, 102995616};
    for (int k = 0; k < 8; ++k) {
        CHECK(t.count(3 * k, 0, 0) == expected[k]);
        if (k) {
            CHECK(t.count(3 * k - 1, 0, 0) == 0);
            CHECK(t.count(3 * k - 2, 0, 0) == 0);
        }
    }
}

TEST_CASE("basic table properties") {
    SUBCASE("empty walk") {
        for (Domain d : {Domain::ThreeQuadrant, Domain::Quadrant, Domain::LowerWedge,
                         Domain::FullPlane}) {
            CountTable t = count_walks(preset("simple"), d, {0, 0}, 0);
            CHECK(t.count(0, 0, 0) == 1);
            CHECK(t.layer_sum(0) == 1);
        }
    }
    SUBCASE("start point must lie in the domain") {
        CHECK_THROWS_AS(count_walks(preset("simple"), Domain::Quadrant, {-1, 0}, 3),
                        StartOutsideDomain);
        CHECK_THROWS_AS(count_walks(preset("simple"), Domain::ThreeQuadrant, {-1, -2}, 3),
                        StartOutsideDomain);
    }
    SUBCASE("row sums") {
        for (const char* name : {"simple", "reverse-kreweras", "double-kreweras"}) {
            StepSet s = preset(name);
            CountTable plane = count_walks(s, Domain::FullPlane, {0, 0}, 9);
            CountTable cone = count_walks(s, Domain::ThreeQuadrant, {0, 0}, 9);
            Int total = 1;
            for (int n = 0; n <= 9; ++n) {
                CHECK(plane.layer_sum(n) == total);
                CHECK(cone.layer_sum(n) <= total);
                total *= static_cast<long>(s.size());
            }
        }
    }
    SUBCASE("diagonal symmetry for symmetric models") {
        CountTable t = count_walks(preset("simple"), Domain::ThreeQuadrant, {0, 0}, 8);
        for (int n = 0; n <= 8; ++n)
            for (int i = -8; i <= 8; ++i)
                for (int j = -8; j <= 8; ++j) CHECK(t.count(n, i, j) == t.count(n, j, i));
    }
}

TEST_CASE("sections") {
    CountTable t = count_walks(preset("reverse-kreweras"), Domain::ThreeQuadrant, {0, 0}, 9);
    SectionSeries dhat = extract_section(t, SectionKind::Dhat);
    CHECK(dhat.coef[0].at({0, 0}) == 1);
    CHECK(dhat.coef[0].size() == 1);
    CHECK(dhat.coef[3].at({0, 0}) == 4);

    SUBCASE("upper section is the mirrored lower section for symmetric models") {
        SectionSeries lhat = extract_section(t, SectionKind::Lhat);
        SectionSeries uhat = extract_section(t, SectionKind::Uhat);
        for (int n = 0; n <= 9; ++n) {
            CHECK(lhat.coef[n].size() == uhat.coef[n].size());
            for (const auto& [e, c] : lhat.coef[n])
                CHECK(uhat.coef[n].at({e.second, e.first}) == c);
        }
    }
    SUBCASE("support predicates") {
        SectionSeries l0m = extract_section(t, SectionKind::Lhat0Minus);
        for (int n = 0; n <= 9; ++n)
            for (const auto& [e, c] : l0m.coef[n]) {
                CHECK(e.first == 0);
                CHECK(e.second < 0);
            }
        SectionSeries dl = extract_section(t, SectionKind::DhatLower);
        for (int n = 0; n <= 9; ++n)
            for (const auto& [e, c] : dl.coef[n]) CHECK(e.second == e.first - 1);
    }
}

TEST_CASE("counting identities have zero residual") {
    SUBCASE("simple walk, order 8") {
        FunctionalEquationReport rep = check_functional_equation(preset("simple"), 8);
        CHECK(rep.all_zero());
    }
    SUBCASE("reverse Kreweras, order 12") {
        FunctionalEquationReport rep = check_functional_equation(preset("reverse-kreweras"), 12);
        CHECK(rep.all_zero());
    }
    SUBCASE("asymmetric models are rejected") {
        CHECK_THROWS_AS(check_functional_equation(preset("gessel"), 4), HypothesisViolated);
    }
}

TEST_CASE("wedge counts match quadrant counts of the transformed model") {
    // The linear map (i,j) -> (i-j, i) sends the wedge {i >= 0, j <= i} onto
    // the quadrant and the step set onto its image, walk by walk.
    for (const char* name : {"reverse-kreweras", "simple", "double-kreweras"}) {
        StepSet hat = preset(name);
        CountTable wedge = count_walks(hat, Domain::LowerWedge, {0, 0}, 10);
        CountTable quad = count_walks(phi_transform(hat), Domain::Quadrant, {0, 0}, 10);
        for (int n = 0; n <= 10; ++n) {
            CHECK(wedge.layer_sum(n) == quad.layer_sum(n));
            for (int i = 0; i <= n; ++i)
                for (int j = -n; j <= i; ++j)
                    CHECK(wedge.count(n, i, j) == quad.count(n, i - j, i));
        }
    }
}
