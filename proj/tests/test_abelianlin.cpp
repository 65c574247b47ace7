#include "support.hpp"

#include "bianchi/abelianlin.hpp"
#include "bianchi/errors.hpp"

#include "doctest.h"

#include <algorithm>

using namespace bianchi;
using namespace bianchi::testing;

namespace {

bool is_smith(const IntMatrix& s)
{
    for (int i = 0; i < s.rows; ++i)
        for (int j = 0; j < s.cols; ++j)
            if (i != j && s.at(i, j) != 0) return false;
    int n = std::min(s.rows, s.cols);
    for (int i = 0; i < n; ++i) {
        if (s.at(i, i) < 0) return false;
        if (i + 1 < n && s.at(i + 1, i + 1) != 0 && (s.at(i, i) == 0 || s.at(i + 1, i + 1) % s.at(i, i) != 0))
            return false;
        if (i + 1 < n && s.at(i, i) == 0 && s.at(i + 1, i + 1) != 0) return false;
    }
    return true;
}

bool contains(const std::vector<FgAbelianGroup>& v, const std::string& s)
{
    return std::find(v.begin(), v.end(), FgAbelianGroup::parse(s)) != v.end();
}

}  // namespace

TEST_CASE("smith form of a small matrix")
{
    IntMatrix m = IntMatrix::from_rows({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
    SmithForm f = smith_normal_form(m);
    CHECK(f.U * m * f.V == f.S);
    CHECK(f.diagonal() == IntVec{2, 6, 12});
    CHECK(f.U * f.U_inv == IntMatrix::identity(3));
}

TEST_CASE("smith form canonicity")
{
    std::mt19937 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        int r = 1 + (int)(rng() % 6), c = 1 + (int)(rng() % 6);
        IntMatrix m = random_matrix(r, c, rng, 9);
        SmithForm f = smith_normal_form(m);
        CHECK(f.U * m * f.V == f.S);
        CHECK(is_smith(f.S));
        IntMatrix p = random_unimodular(r, rng, 12), q = random_unimodular(c, rng, 12);
        CHECK(elementary_divisors(p * m * q) == elementary_divisors(m));
        CHECK(rank_over_q(m) == f.rank());
    }
}

TEST_CASE("rank modulo a prime")
{
    IntMatrix m = IntMatrix::from_rows({{2, 0}, {0, 3}});
    CHECK(rank_mod_p(m, 2) == 1);
    CHECK(rank_mod_p(m, 3) == 1);
    CHECK(rank_mod_p(m, 5) == 2);
}

TEST_CASE("integer solutions and kernels")
{
    IntMatrix a = IntMatrix::from_rows({{2, 4}, {0, 3}});
    IntVec x;
    CHECK(solve_integer(a, {6, 3}, x));
    CHECK(a.apply(x) == IntVec{6, 3});
    CHECK_FALSE(solve_integer(a, {1, 0}, x));
    IntMatrix k = integer_kernel(IntMatrix::from_rows({{1, 2, 3}}));
    CHECK(k.cols == 2);
    CHECK(IntMatrix::from_rows({{1, 2, 3}}) * k == IntMatrix(1, 2));
}

TEST_CASE("abelian group normal form and parsing")
{
    FgAbelianGroup g = FgAbelianGroup::from_orders({0, 4, 2, 6, 1, 0});
    CHECK(g.free_rank == 2);
    CHECK(g.invariant_factors == IntVec{2, 2, 12});
    CHECK(FgAbelianGroup::parse(g.str()) == g);
    CHECK(FgAbelianGroup::parse("Z^2 + Z/4 + (Z/3)^2 + Z/2") == FgAbelianGroup::from_orders({0, 0, 4, 3, 3, 2}));
    CHECK(FgAbelianGroup::parse("0").is_zero());
    CHECK(g.primary_orders() == IntVec{4, 2, 2, 3});
    CHECK(g.p_rank(2) == 3);
    CHECK(g.tensor_order(2) == 32);
    CHECK(g.tor_order(4) == 16);
    CHECK_THROWS(FgAbelianGroup::parse("Z/"));
}

TEST_CASE("cokernel coordinates")
{
    Cokernel c = cokernel(2, IntMatrix::from_rows({{2}, {0}}));
    CHECK(c.group == FgAbelianGroup::parse("Z + Z/2"));
    CHECK(c.coords({2, 0}) == c.coords({0, 0}));
}

TEST_CASE("chain homology")
{
    PresentedGroup at = PresentedGroup::cyclic_sum({0, 0});
    PresentedGroup target = PresentedGroup::cyclic_sum({0});
    IntMatrix d_in = IntMatrix::from_rows({{2}, {0}});
    IntMatrix d_out = IntMatrix::from_rows({{0, 0}});
    Homology h = chain_homology(d_in, d_out, at, target);
    CHECK(h.group == FgAbelianGroup::parse("Z + Z/2"));
    CHECK_THROWS_AS(chain_homology(d_in, IntMatrix::from_rows({{1, 0}}), at, target), NotAComplex);
}

TEST_CASE("chain homology with torsion coefficients")
{
    PresentedGroup at = PresentedGroup::cyclic_sum({2, 2});
    PresentedGroup target = PresentedGroup::cyclic_sum({2});
    Homology h = chain_homology(IntMatrix(2, 0), IntMatrix::from_rows({{1, 1}}), at, target);
    CHECK(h.group == FgAbelianGroup::parse("Z/2"));
}

TEST_CASE("extension candidates")
{
    auto c = group_extension_candidates(FgAbelianGroup::parse("Z/2"), FgAbelianGroup::parse("Z/2"));
    CHECK(c.size() == 2);
    CHECK(contains(c, "Z/4"));
    CHECK(contains(c, "(Z/2)^2"));
    auto d = group_extension_candidates(FgAbelianGroup::parse("Z"), FgAbelianGroup::parse("Z/2"));
    CHECK(d.size() == 2);
    CHECK(contains(d, "Z"));
    CHECK(contains(d, "Z + Z/2"));
    auto e = group_extension_candidates(FgAbelianGroup::parse("Z/3"), FgAbelianGroup::parse("Z/2"));
    CHECK(e.size() == 1);
    auto f = group_extension_candidates(FgAbelianGroup::parse("(Z/2)^2"), FgAbelianGroup::parse("Z/2"));
    CHECK(contains(f, "(Z/2)^3"));
    CHECK(contains(f, "Z/4 + Z/2"));
    CHECK_FALSE(contains(f, "Z/8"));
}

TEST_CASE("Littlewood-Richardson positivity")
{
    CHECK(lr_positive({2, 1}, {1}, {1, 1}));
    CHECK(lr_positive({2, 2}, {2}, {2}));
    CHECK(lr_positive({3, 1}, {2}, {1, 1}));
    CHECK_FALSE(lr_positive({4}, {2}, {1, 1}));
    CHECK_FALSE(lr_positive({3}, {2, 1}, {}));
}
