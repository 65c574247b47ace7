#include "support.hpp"

#include "bianchi/errors.hpp"
#include "bianchi/finhom.hpp"

#include "doctest.h"

using namespace bianchi;
using namespace bianchi::testing;

namespace {

const CoeffRing all_rings[] = {CoeffRing::Z, CoeffRing::Z2, CoeffRing::Z3, CoeffRing::Z4};

// Index of alpha, alpha*beta, beta as V4 elements.
const int involution[3] = {1, 3, 2};

bool same_mod(const IntMatrix& a, const IntMatrix& b, const IntVec& row_orders)
{
    if (a.rows != b.rows || a.cols != b.cols) return false;
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) {
            Int d = a.at(i, j) - b.at(i, j);
            if (row_orders[i] == 0 ? d != 0 : d % row_orders[i] != 0) return false;
        }
    return true;
}

IntMatrix reduce_rows(IntMatrix m, const IntVec& orders)
{
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            if (orders[i] != 0) {
                Int r = m.at(i, j) % orders[i];
                if (r < 0) r += orders[i];
                m.at(i, j) = r;
            }
    return m;
}

Cokernel a4_coinvariants(int q, CoeffRing c)
{
    Homology h = resolution_homology(SmallGroup::V4, q, c);
    IntMatrix sigma = resolution_oracle({SmallGroup::V4, SmallGroup::V4, {2, 3}}, q, c)[q];
    int r = (int)h.orders.size();
    return cokernel(r, IntMatrix::diagonal(h.orders).hcat(sigma - IntMatrix::identity(r)));
}

FgAbelianGroup cyclic_z(long n, int q)
{
    if (q == 0) return FgAbelianGroup::free(1);
    return q % 2 ? FgAbelianGroup::from_orders({n}) : FgAbelianGroup{};
}

}  // namespace

TEST_CASE("coefficient names")
{
    CHECK(coeff_from_name("Z2") == CoeffRing::Z2);
    CHECK(coeff_from_name("Z/4") == CoeffRing::Z4);
    CHECK(coeff_name(CoeffRing::Z3) == "Z3");
    CHECK(coeff_modulus(CoeffRing::Z) == 0);
    CHECK_THROWS_AS(coeff_from_name("Q"), FormatError);
}

TEST_CASE("integral homology of cyclic and dihedral stabilizers")
{
    for (int q = 0; q <= 12; ++q) {
        CAPTURE(q);
        CHECK(stab_homology(StabType::C2, q, CoeffRing::Z) == cyclic_z(2, q));
        CHECK(stab_homology(StabType::C3, q, CoeffRing::Z) == cyclic_z(3, q));
        FgAbelianGroup s3 = q == 0 ? FgAbelianGroup::free(1)
                            : q % 4 == 1 ? FgAbelianGroup::parse("Z/2")
                            : q % 4 == 3 ? FgAbelianGroup::parse("Z/6")
                                         : FgAbelianGroup{};
        CHECK(stab_homology(StabType::S3, q, CoeffRing::Z) == s3);
        CHECK(stab_homology(StabType::Trivial, q, CoeffRing::Z) == (q ? FgAbelianGroup{} : FgAbelianGroup::free(1)));
    }
    CHECK(stab_homology(StabType::ZxZ, 1, CoeffRing::Z) == FgAbelianGroup::free(2));
    CHECK(stab_homology(StabType::ZxZ, 2, CoeffRing::Z) == FgAbelianGroup::free(1));
    CHECK(stab_homology(StabType::ZxZ, 3, CoeffRing::Z).is_zero());
}

TEST_CASE("closed forms agree with explicit resolutions")
{
    const std::pair<StabType, SmallGroup> pairs[] = {
        {StabType::C2, SmallGroup::C2}, {StabType::C3, SmallGroup::C3}, {StabType::V4, SmallGroup::V4}};
    for (auto c : all_rings)
        for (auto& [t, g] : pairs)
            for (int q = 0; q <= 12; ++q) {
                CAPTURE(q);
                CHECK(stab_homology(t, q, c) == resolution_homology(g, q, c).group);
            }
}

TEST_CASE("A4 homology splits into V4 coinvariants and the C3 part")
{
    for (auto c : all_rings)
        for (int q = 1; q <= 12; ++q) {
            CAPTURE(q);
            FgAbelianGroup three = q % 2 && c != CoeffRing::Z2 && c != CoeffRing::Z4 ? FgAbelianGroup::parse("Z/3")
                                                                                   : FgAbelianGroup{};
            if (c == CoeffRing::Z3) three = FgAbelianGroup::parse("Z/3");
            CHECK(stab_homology(StabType::A4, q, c) == a4_coinvariants(q, c).group + three);
        }
}

TEST_CASE("finite coefficients follow the universal coefficient theorem")
{
    for (StabType t : {StabType::C2, StabType::C3, StabType::V4, StabType::S3, StabType::A4, StabType::ZxZ})
        for (auto c : {CoeffRing::Z2, CoeffRing::Z3, CoeffRing::Z4})
            for (int q = 1; q <= 12; ++q) {
                CAPTURE(q);
                Int want = stab_homology(t, q, CoeffRing::Z).tensor_order(coeff_modulus(c)) *
                           stab_homology(t, q - 1, CoeffRing::Z).tor_order(coeff_modulus(c));
                FgAbelianGroup got = stab_homology(t, q, c);
                if (t == StabType::ZxZ) CHECK(got.free_rank == 0);
                CHECK(got.torsion_order() == want);
            }
}

TEST_CASE("basis orders match the closed forms")
{
    for (StabType t : {StabType::C2, StabType::C3, StabType::V4, StabType::S3, StabType::A4})
        for (auto c : all_rings)
            for (int q = 0; q <= 12; ++q) {
                StabBasis b = stab_homology_basis(t, q, c);
                CHECK(b.group() == stab_homology(t, q, c));
                CHECK(b.labels.size() == b.orders.size());
            }
}

TEST_CASE("cyclic rules agree with the resolution oracle")
{
    for (auto c : all_rings) {
        auto o2 = resolution_oracle({SmallGroup::C2, SmallGroup::C2, {1}}, 12, c);
        for (int k : {1, 2}) {
            auto o3 = resolution_oracle({SmallGroup::C3, SmallGroup::C3, {k}}, 12, c);
            for (int q = 0; q <= 12; ++q) {
                CAPTURE(q);
                IntVec ord3 = stab_homology_basis(StabType::C3, q, c).orders;
                CHECK(same_mod(induced_map({StabType::C3, StabType::C3, k}, q, c), o3[q], ord3));
            }
        }
        for (int q = 0; q <= 12; ++q) {
            IntVec ord2 = stab_homology_basis(StabType::C2, q, c).orders;
            CHECK(same_mod(induced_map({StabType::C2, StabType::C2, 1}, q, c), o2[q], ord2));
        }
    }
}

TEST_CASE("Klein inclusions agree with the resolution oracle")
{
    for (auto c : all_rings)
        for (int i = 0; i < 3; ++i) {
            auto o = resolution_oracle({SmallGroup::C2, SmallGroup::V4, {involution[i]}}, 12, c);
            for (int q = 0; q <= 12; ++q) {
                IntVec ord = stab_homology_basis(StabType::V4, q, c).orders;
                CHECK(same_mod(induced_map({StabType::C2, StabType::V4, i}, q, c), o[q], ord));
            }
        }
}

TEST_CASE("inclusion then projection is the identity")
{
    for (auto c : all_rings) {
        auto inc = resolution_oracle({SmallGroup::C2, SmallGroup::V4, {1}}, 12, c);
        auto proj = resolution_oracle({SmallGroup::V4, SmallGroup::C2, {1, 0}}, 12, c);
        for (int q = 0; q <= 12; ++q) {
            CAPTURE(q);
            IntVec ord = stab_homology_basis(StabType::C2, q, c).orders;
            IntMatrix id = IntMatrix::identity((int)ord.size());
            CHECK(same_mod(proj[q] * inc[q], id, ord));
        }
    }
}

TEST_CASE("rotation of V4 permutes the involutions")
{
    SmallHom rot{SmallGroup::V4, SmallGroup::V4, {2, 3}};
    for (auto c : all_rings) {
        auto s = resolution_oracle(rot, 12, c);
        auto a = resolution_oracle({SmallGroup::C2, SmallGroup::V4, {1}}, 12, c);
        auto b = resolution_oracle({SmallGroup::C2, SmallGroup::V4, {2}}, 12, c);
        for (int q = 0; q <= 12; ++q) {
            CAPTURE(q);
            IntVec ord = stab_homology_basis(StabType::V4, q, c).orders;
            CHECK(same_mod(s[q] * a[q], b[q], ord));
            CHECK(same_mod(s[q] * s[q] * s[q], IntMatrix::identity((int)ord.size()), ord));
        }
    }
}

TEST_CASE("conjugate involutions induce the same map into A4")
{
    for (auto c : all_rings)
        for (int q = 1; q <= 12; ++q) {
            CAPTURE(q);
            if (stab_homology(StabType::C2, q, c).is_zero()) continue;
            Cokernel co = a4_coinvariants(q, c);
            IntVec first;
            for (int i = 0; i < 3; ++i) {
                IntMatrix img = resolution_oracle({SmallGroup::C2, SmallGroup::V4, {involution[i]}}, q, c)[q];
                IntVec v = co.coords(img.column(0));
                if (i == 0) first = v;
                else CHECK(v == first);
            }
            IntMatrix rule = induced_map({StabType::C2, StabType::A4, 1}, q, c);
            IntVec ord = stab_homology_basis(StabType::A4, q, c).orders;
            for (size_t k = 0; k < first.size(); ++k) CHECK(reduce_rows(rule, ord).at((int)k, 0) == first[k]);
        }
}

TEST_CASE("frozen induced maps")
{
    CHECK(induced_map({StabType::C2, StabType::A4, 1}, 2, CoeffRing::Z4).is_zero());
    CHECK(induced_map({StabType::C2, StabType::A4, 1}, 1, CoeffRing::Z).is_zero());
    IntMatrix s3 = induced_map({StabType::C3, StabType::S3, 1}, 3, CoeffRing::Z);
    CHECK(s3.rows == 2);
    CHECK(induced_map({StabType::C3, StabType::C3, 2}, 1, CoeffRing::Z).at(0, 0) == 2);
    CHECK(induced_map({StabType::C3, StabType::C3, 2}, 3, CoeffRing::Z).at(0, 0) == 1);
    CHECK_THROWS_AS(induced_map({StabType::V4, StabType::A4, 0}, 1, CoeffRing::Z), UnsupportedInclusion);
    CHECK_THROWS_AS(induced_map({StabType::C2, StabType::C3, 1}, 1, CoeffRing::Z), UnsupportedInclusion);
}

TEST_CASE("oracle rejects non-homomorphisms")
{
    CHECK_THROWS_AS(resolution_oracle({SmallGroup::C2, SmallGroup::C3, {1}}, 3, CoeffRing::Z), LiftFailure);
}

TEST_CASE("Klein involutions in the H1 basis")
{
    const GammaComplex& cx = pipeline(1).complex;
    for (auto& rep : cx.reps[0]) {
        if (rep.stab.type != StabType::V4) continue;
        auto inv = klein_involutions(rep.stab);
        CHECK(h1_class(rep.stab, inv[0]) == IntVec{1, 0});
        CHECK(h1_class(rep.stab, inv[1]) == IntVec{1, 1});
        CHECK(h1_class(rep.stab, inv[2]) == IntVec{0, 1});
        CHECK(reduce_h1(StabType::V4, {1, 1}, CoeffRing::Z4) == IntVec{1, 1});
    }
}

TEST_CASE("cyclic generators have the stabilizer order")
{
    for (long m : {1, 3, 13})
        for (auto& reps : pipeline(m).complex.reps)
            for (auto& rep : reps) {
                if (rep.stab.type != StabType::C2 && rep.stab.type != StabType::C3) continue;
                PslMatrix g = cyclic_generator(rep.stab);
                CHECK(element_order(g) == type_order(rep.stab.type));
                IntVec cls = h1_class(rep.stab, g);
                CHECK(cls == IntVec{1});
            }
}
