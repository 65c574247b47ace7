#include "support.hpp"

#include "bianchi/errors.hpp"
#include "bianchi/halfspace.hpp"

#include "doctest.h"

using namespace bianchi;
using namespace bianchi::testing;

TEST_CASE("determinant is enforced")
{
    RingSpec r = RingSpec::make(1);
    QuadInt one(r, 1), two(r, 2), zero(r, 0);
    CHECK_THROWS_AS(PslMatrix(two, zero, zero, one), InvalidRing);
    CHECK_NOTHROW(PslMatrix(one, two, zero, one));
}

TEST_CASE("sign canonical form")
{
    RingSpec r = RingSpec::make(2);
    QuadInt one(r, 1), zero(r, 0), k(r, 1, 1);
    PslMatrix g(one, k, zero, one), h(-one, -k, zero, -one);
    CHECK(g == h);
}

TEST_CASE("inverse")
{
    std::mt19937 rng(3);
    RingSpec r = RingSpec::make(13);
    for (int i = 0; i < 30; ++i) {
        PslMatrix g = random_element(r, rng, 8);
        CHECK((g * g.inverse()).is_identity());
    }
}

TEST_CASE("translation acts on the boundary")
{
    RingSpec r = RingSpec::make(5);
    QuadInt k(r, 2, -1);
    Kxy z{frac(1, 3), frac(2, 7)};
    auto w = act_boundary(PslMatrix::translation(k), z);
    REQUIRE(w);
    CHECK(*w == z + k.xy());
}

TEST_CASE("inversion moves infinity")
{
    RingSpec r = RingSpec::make(1);
    QuadInt zero(r, 0), one(r, 1);
    PslMatrix s(zero, one, -one, zero);
    CHECK_FALSE(act_boundary(s, Kxy{0, 0}).has_value());
    HPoint p{0, 0, 1};
    CHECK(act_interior(s, p) == p);
    CHECK_THROWS_AS(act_interior(s, HPoint{0, 0, 0}), NotInterior);
}

TEST_CASE("standard convention round trip")
{
    std::mt19937 rng(5);
    RingSpec r = RingSpec::make(7);
    for (int i = 0; i < 20; ++i) {
        PslMatrix g = random_element(r, rng, 6);
        CHECK(from_standard(to_standard(g)) == g);
    }
}

TEST_CASE("group action law")
{
    std::mt19937 rng(99);
    const long ms[] = {1, 2, 3, 5, 6, 7, 10, 11, 13, 15};
    for (int i = 0; i < 500; ++i) {
        RingSpec r = RingSpec::make(ms[i % 10]);
        PslMatrix g = random_element(r, rng, 4), h = random_element(r, rng, 4);
        HPoint p = random_point(rng);
        CHECK(act_interior(g, act_interior(h, p)) == act_interior(g * h, p));
    }
}

TEST_CASE("cusp action law")
{
    std::mt19937 rng(17);
    RingSpec r = RingSpec::make(6);
    for (int i = 0; i < 100; ++i) {
        PslMatrix g = random_element(r, rng, 4), h = random_element(r, rng, 4);
        Cusp s = Cusp::make(random_quad(r, rng, 5), QuadInt(r, 1 + (int)(rng() % 4), (int)(rng() % 3)));
        CHECK(act_cusp(g, act_cusp(h, s)) == act_cusp(g * h, s));
    }
}
