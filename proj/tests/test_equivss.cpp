#include "support.hpp"

#include "bianchi/equivss.hpp"
#include "bianchi/errors.hpp"

#include "doctest.h"

using namespace bianchi;
using namespace bianchi::testing;

namespace {

const long fixture_rings[] = {5, 6, 10, 13, 15};
const long trivial_rings[] = {1, 2, 3, 7, 11};

IntVec generator_orders(const PresentedGroup& g)
{
    IntVec o;
    for (int i = 0; i < g.generators; ++i) o.push_back(g.relations.at(i, i));
    return o;
}

Int diagonal_order(const SpectralPages& P, int n)
{
    Int o = 1;
    for (int p = 0; p <= 2 && p <= n; ++p) o *= P.e_infinity(p, n - p).torsion_order();
    return o;
}

std::vector<FgAbelianGroup> parse_all(std::initializer_list<const char*> xs)
{
    std::vector<FgAbelianGroup> out;
    for (auto x : xs) out.push_back(FgAbelianGroup::parse(x));
    return out;
}

}  // namespace

TEST_CASE("d1 squares to zero")
{
    for (long m : {1, 2, 3, 5, 6, 7, 10, 11, 13, 15})
        for (auto& [c, P] : pipeline(m).runs)
            for (int q = 0; q <= P.q_max; ++q) {
                CAPTURE(m);
                CAPTURE(q);
                IntMatrix dd = P.d1[1][q] * P.d1[2][q];
                IntVec ord = generator_orders(P.e1[0][q]);
                for (int i = 0; i < dd.rows; ++i)
                    for (int j = 0; j < dd.cols; ++j)
                        CHECK((ord[i] == 0 ? dd.at(i, j) == 0 : dd.at(i, j) % ord[i] == 0));
            }
}

TEST_CASE("E1 bottom row is free on the cell orbits")
{
    for (long m : fixture_rings) {
        const Pipeline& p = pipeline(m);
        const SpectralPages& z = p.runs.at(CoeffRing::Z);
        for (int d = 0; d < 3; ++d) CHECK(z.e1[d][0].normal_form() == FgAbelianGroup::free(p.complex.orbit_count(d)));
    }
}

TEST_CASE("bottom row homology is that of the quotient")
{
    for (long m : fixture_rings) {
        const SpectralPages& z = pipeline(m).runs.at(CoeffRing::Z);
        CHECK(z.e2_group(0, 0) == FgAbelianGroup::free(1));
    }
}

TEST_CASE("d2 vanishes for class number one")
{
    for (long m : trivial_rings)
        for (auto& [c, P] : pipeline(m).runs) {
            CAPTURE(m);
            CHECK(P.e2_group(2, 0).is_zero());
            CHECK(P.has_d2);
            CHECK(P.d2.is_zero());
        }
}

TEST_CASE("d2 does not depend on the coset section")
{
    for (long m : fixture_rings) {
        const Pipeline& p = pipeline(m);
        for (auto& [c, P] : p.runs) {
            CAPTURE(m);
            SpectralPages alt = P;
            compute_d2(alt, p.complex, SectionOrder::Max);
            CHECK(alt.d2 == P.d2);
            CHECK(alt.e_infinity(0, 1) == P.e_infinity(0, 1));
            CHECK(alt.e_infinity(2, 0) == P.e_infinity(2, 0));
        }
    }
}

TEST_CASE("final answer is consistent with every finite coefficient run")
{
    for (long m : {1, 2, 3, 5, 6, 7, 10, 11, 13, 15}) {
        const Pipeline& p = pipeline(m);
        FgAbelianGroup prev = FgAbelianGroup::free(1);
        for (auto& e : p.homology) {
            CAPTURE(m);
            CAPTURE(e.q);
            CHECK(e.unique());
            for (auto c : {CoeffRing::Z2, CoeffRing::Z3, CoeffRing::Z4})
                CHECK(uct_order(e.group(), prev, coeff_modulus(c)) == diagonal_order(p.runs.at(c), e.q));
            prev = e.group();
        }
    }
}

TEST_CASE("homology of class number one rings")
{
    const std::pair<long, std::vector<FgAbelianGroup>> expected[] = {
        {1, parse_all({"(Z/2)^2", "(Z/2)^2 + Z/3", "(Z/2)^4 + Z/3", "(Z/2)^2", "(Z/2)^6", "(Z/2)^4 + Z/3"})},
        {2, parse_all({"Z + Z/2 + Z/3", "Z/4 + Z/2 + Z/3", "(Z/2)^2 + Z/3", "(Z/2)^2 + Z/3", "(Z/2)^4 + Z/3",
                       "(Z/2)^4 + Z/3"})},
        {3, parse_all({"Z/3", "Z/4 + Z/2", "Z/2 + (Z/3)^2", "0", "(Z/2)^3 + Z/3", "(Z/2)^2"})},
        {7, parse_all({"Z + Z/2", "Z/2 + Z/3", "Z/2 + Z/3", "Z/2", "Z/2", "Z/2 + Z/3"})},
        {11, parse_all({"Z + Z/3", "Z/4 + Z/2 + Z/3", "Z/2 + Z/3", "Z/3", "(Z/2)^3 + Z/3", "(Z/2)^2 + Z/3"})},
    };
    for (auto& [m, groups] : expected) {
        const Pipeline& p = pipeline(m);
        for (size_t i = 0; i < groups.size(); ++i) {
            CAPTURE(m);
            CAPTURE(i + 1);
            CHECK(p.homology[i].group() == groups[i]);
        }
    }
}

TEST_CASE("low-degree sequence for class number one")
{
    PresentedGroup z3 = PresentedGroup::cyclic_sum({3});
    auto r = low_degree_check(pipeline(3).runs.at(CoeffRing::Z), z3);
    CHECK(r.consistent);
    CHECK_THROWS_AS(low_degree_check(pipeline(3).runs.at(CoeffRing::Z), PresentedGroup::cyclic_sum({2})), CheckFailed);
}

TEST_CASE("primary rank and unit divisors")
{
    IntMatrix d = IntMatrix::from_rows({{1, 0, 1}, {0, 1, 1}, {0, 0, 3}});
    CHECK(primary_rank(d, {2, 2, 3}, {2, 2, 2}, 2) == 2);
    CHECK(primary_rank(d, {2, 2, 3}, {3, 3, 3}, 3) == 0);
    CHECK(primary_rank(d, {3, 3, 3}, {3, 3, 3}, 3) == 2);
    CHECK(unit_divisor_count(d) == 2);
}

TEST_CASE("mod-p dimension rejects free summands")
{
    const SpectralPages& z = pipeline(2).runs.at(CoeffRing::Z);
    CHECK_THROWS_AS(mod_p_dimension(z, 1), CheckFailed);
}

TEST_CASE("family detection")
{
    std::vector<FgAbelianGroup> g;
    for (int q = 3; q <= 12; ++q) g.push_back(FgAbelianGroup::from_orders({3}) + FgAbelianGroup::from_orders(IntVec(q, 2)));
    auto f = detect_family(g, 3);
    REQUIRE(f);
    CHECK(f->period == 1);
    CHECK(f->confirmed);
    CHECK(f->evaluate(20) == FgAbelianGroup::from_orders({3}) + FgAbelianGroup::from_orders(IntVec(20, 2)));

    std::vector<FgAbelianGroup> alt;
    for (int q = 3; q <= 14; ++q) alt.push_back(FgAbelianGroup::from_orders(IntVec(q % 2 ? 1 : 2, 2)));
    auto h = detect_family(alt, 3);
    REQUIRE(h);
    CHECK(h->period == 2);

    std::vector<FgAbelianGroup> shrinking;
    for (int q = 3; q <= 6; ++q) shrinking.push_back(FgAbelianGroup::from_orders(IntVec(10 - q, 2)));
    CHECK_FALSE(detect_family(shrinking, 3).has_value());
}

TEST_CASE("family JSON round trip")
{
    HomologyFamily f;
    f.period = 4;
    f.start = 3;
    f.branches = {{3, 0, {{2, 4, 3}, {3, 0, 2}}}, {4, 0, {{2, 4, 4}}}, {5, 1, {{2, 4, 5}}}, {6, 0, {}}};
    HomologyFamily g = HomologyFamily::from_json(f.to_json());
    CHECK(g.to_json() == f.to_json());
    for (int q = 3; q < 30; ++q) CHECK(g.evaluate(q) == f.evaluate(q));
    CHECK_THROWS_AS(f.evaluate(2), std::out_of_range);
    nlohmann::json bad = f.to_json();
    bad["period"] = 5;
    CHECK_THROWS_AS(HomologyFamily::from_json(bad), FormatError);
}

TEST_CASE("pages JSON is deterministic")
{
    const SpectralPages& z = pipeline(5).runs.at(CoeffRing::Z);
    CHECK(z.to_json().dump() == SpectralPages(z).to_json().dump());
    RunConfig cfg;
    cfg.m = 5;
    cfg.q_max = 4;
    Pipeline again = run_geometry(cfg);
    SpectralPages fresh = run_spectral_sequence(again.complex, CoeffRing::Z, 4);
    SpectralPages cached = run_spectral_sequence(pipeline(5).complex, CoeffRing::Z, 4);
    CHECK(fresh.to_json().dump() == cached.to_json().dump());
}

TEST_CASE("coset section on a finite stabilizer")
{
    const GammaComplex& cx = pipeline(1).complex;
    std::mt19937 rng(4);
    for (auto& rep : cx.reps[0]) {
        EpsilonContext ctx;
        ctx.stabilizer = rep.stab;
        for (int i = 0; i < 10; ++i) {
            PslMatrix g = random_element(cx.ring, rng, 5);
            PslMatrix e = epsilon(ctx, g);
            CHECK(in_stabilizer(ctx, e));
            CHECK(coset_representative(ctx, g) * e == g);
        }
        for (auto& s : rep.stab.elements) CHECK(coset_representative(ctx, s).is_identity());
    }
}
