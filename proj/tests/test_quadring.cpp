#include "support.hpp"

#include "bianchi/errors.hpp"
#include "bianchi/quadring.hpp"

#include "doctest.h"

using namespace bianchi;
using namespace bianchi::testing;

TEST_CASE("ring spec rejects non square-free m")
{
    CHECK_THROWS_AS(RingSpec::make(4), InvalidRing);
    CHECK_THROWS_AS(RingSpec::make(0), InvalidRing);
    CHECK_THROWS_AS(RingSpec::make(-3), InvalidRing);
    CHECK_THROWS_AS(RingSpec::make(18), InvalidRing);
    CHECK_NOTHROW(RingSpec::make(13));
}

TEST_CASE("ring spec integral basis")
{
    CHECK(RingSpec::make(1).omega_kind == OmegaKind::SqrtM);
    CHECK(RingSpec::make(2).omega_kind == OmegaKind::SqrtM);
    CHECK(RingSpec::make(3).omega_kind == OmegaKind::HalfPlusSqrtM);
    CHECK(RingSpec::make(15).omega_kind == OmegaKind::HalfPlusSqrtM);
    CHECK(RingSpec::make(5).discriminant == -20);
    CHECK(RingSpec::make(7).discriminant == -7);
}

TEST_CASE("omega squared")
{
    for (long m : {1, 2, 3, 5, 7, 13, 15}) {
        RingSpec r = RingSpec::make(m);
        QuadInt w = QuadInt::omega(r);
        CHECK(w * w == QuadInt(r, r.w0(), r.w1()));
    }
}

TEST_CASE("units")
{
    CHECK(units(RingSpec::make(1)).size() == 4);
    CHECK(units(RingSpec::make(3)).size() == 6);
    for (long m : {2, 5, 6, 7, 10, 11, 13, 15}) CHECK(units(RingSpec::make(m)).size() == 2);
}

TEST_CASE("class numbers")
{
    for (long m : {1, 2, 3, 7, 11}) CHECK(class_group_order(RingSpec::make(m)) == 1);
    for (long m : {5, 6, 10, 13, 15}) CHECK(class_group_order(RingSpec::make(m)) == 2);
}

TEST_CASE("elements of a given norm")
{
    RingSpec r = RingSpec::make(1);
    CHECK(elements_of_norm(r, 5).size() == 8);
    CHECK(elements_of_norm(r, 3).empty());
    RingSpec r5 = RingSpec::make(5);
    CHECK(elements_of_norm(r5, 2).empty());
    CHECK(elements_of_norm(r5, 6).size() == 4);
}

TEST_CASE("non-principal ideal of Z[sqrt -5]")
{
    RingSpec r = RingSpec::make(5);
    OIdeal I = ideal_from_pair(QuadInt(r, 2), QuadInt(r, 1, 1));
    CHECK(I.norm == 2);
    CHECK_FALSE(ideal_class_is_principal(I));
    OIdeal I2 = ideal_product(I, I);
    QuadInt gen;
    REQUIRE(principal_generator(I2, gen));
    CHECK(abs(norm(gen)) == 4);
    CHECK(same_ideal_class(I, ideal_conj(I)));
    CHECK(is_unimodular_pair(QuadInt(r, 2), QuadInt(r, 1, 1)) == false);
}

TEST_CASE("exact division")
{
    RingSpec r = RingSpec::make(2);
    QuadInt u(r, 3, 1), v(r, 1, -2), q;
    REQUIRE(exact_div(u * v, v, q));
    CHECK(q == u);
    CHECK_FALSE(exact_div(QuadInt(r, 1), QuadInt(r, 2), q));
}

TEST_CASE("unimodular pairs complete to matrices")
{
    std::mt19937 rng(7);
    for (long m : {1, 2, 3, 5, 13}) {
        RingSpec r = RingSpec::make(m);
        for (int i = 0; i < 20; ++i) {
            PslMatrix g = random_element(r, rng, 6);
            QuadInt a, b;
            REQUIRE(solve_unimodular(g.c, g.d, a, b));
            CHECK(a * g.d - b * g.c == QuadInt(r, 1));
        }
    }
}

TEST_CASE("norm is multiplicative")
{
    std::mt19937 rng(2024);
    const long ms[] = {1, 2, 3, 5, 6, 7, 10, 11, 13, 15};
    for (int i = 0; i < 500; ++i) {
        RingSpec r = RingSpec::make(ms[i % 10]);
        QuadInt u = random_quad(r, rng, 60), v = random_quad(r, rng, 60);
        CHECK(norm(u * v) == norm(u) * norm(v));
        CHECK(norm(conj(u)) == norm(u));
        CHECK(knorm(r.m, u.xy()) == Rat(norm(u)));
    }
}
