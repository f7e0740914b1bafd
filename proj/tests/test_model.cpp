#include "doctest.h"

#include "trikernel/model.hpp"

using namespace trikernel;

namespace {
StepSet preset(const char* name) { return *model_preset(name); }
} // namespace

TEST_CASE("validation flags") {
    CHECK(validate(preset("simple")).satisfies_H);
    ModelValidation diag = validate(preset("diagonal"));
    CHECK(diag.symmetric);
    CHECK(diag.has_antidiagonal);
    CHECK_FALSE(diag.satisfies_H);
    ModelValidation gessel = validate(preset("gessel"));
    CHECK_FALSE(gessel.symmetric); // (1,0) in S but (0,1) not
    CHECK_FALSE(gessel.satisfies_H);

    for (const auto& name : model_preset_names()) {
        StepSet s = preset(name.c_str());
        CHECK(validate(s).satisfies_H == validate(mirror(s)).satisfies_H);
    }
}

TEST_CASE("the change of variable on the eight symmetric models") {
    auto row = [](std::initializer_list<Step> from, std::initializer_list<Step> to) {
        CHECK(phi_transform(StepSet(from)) == StepSet(to));
    };
    const Step N{0, 1}, S{0, -1}, E{1, 0}, W{-1, 0}, NE{1, 1}, SW{-1, -1};
    row({N, S, E, W}, {E, W, NE, SW});
    row({S, W, NE}, {E, N, SW});
    row({E, N, SW}, {S, W, NE});
    row({E, NE, N, W, SW, S}, {E, NE, N, W, SW, S});
    row({E, NE, N, SW}, {NE, N, W, S});
    row({NE, W, SW, S}, {E, N, SW, S});
    row({E, N, W, SW, S}, {E, NE, W, SW, S});
    row({E, NE, N, W, S}, {E, NE, N, W, SW});

    // antidiagonal jumps leave the small-step window
    StepSet big = phi_transform(preset("diagonal"));
    CHECK(big == StepSet({{0, 1}, {0, -1}, {-2, -1}, {2, 1}}));
    CHECK_FALSE(big.small_steps());
}

TEST_CASE("group orders") {
    CHECK(group_order(preset("simple")) == GroupOrder{true, 4, 0});
    CHECK(group_order(preset("kreweras")) == GroupOrder{true, 6, 0});
    CHECK(group_order(preset("reverse-kreweras")) == GroupOrder{true, 6, 0});
    CHECK(group_order(preset("double-kreweras")) == GroupOrder{true, 6, 0});
    for (const char* name : {"e-ne-n-sw", "w-ne-s-sw", "e-w-n-s-sw", "e-w-n-s-ne"}) {
        GroupOrder g = group_order(preset(name), 400);
        CHECK_FALSE(g.finite);
        CHECK(g.bound == 400);
    }

    SUBCASE("mirror invariance for symmetric models") {
        for (const char* name : {"simple", "kreweras", "double-kreweras", "e-ne-n-sw"}) {
            StepSet s = preset(name);
            CHECK(group_order(s) == group_order(mirror(s)));
        }
    }
    SUBCASE("gessel (asymmetric) also has a computable group") {
        GroupOrder g = group_order(preset("gessel"));
        CHECK(g.finite);
        CHECK(g.order == 8);
    }
    SUBCASE("degenerate models are rejected") {
        CHECK_THROWS_AS(group_order(StepSet({{1, 0}, {-1, 0}, {0, -1}})), DegenerateModel);
    }
}

TEST_CASE("step set plumbing") {
    CHECK_THROWS_AS(StepSet({{0, 0}}), InvalidArgument);
    CHECK_THROWS_AS(StepSet(std::vector<Step>{}), InvalidArgument);
    StepSet a({{1, 0}, {0, 1}}), b({{0, 1}, {1, 0}});
    CHECK(a == b); // canonical ordering
    CHECK(model_preset("union-kreweras") == model_preset("double-kreweras"));
    CHECK_FALSE(model_preset("no-such-model").has_value());
}
