#include "support.hpp"

#include "bianchi/errors.hpp"
#include "bianchi/orbifold.hpp"
#include "bianchi/swanfloor.hpp"

#include "doctest.h"

#include <algorithm>
#include <sstream>

using namespace bianchi;
using namespace bianchi::testing;

namespace {

std::map<std::string, int> multiset(const GammaComplex& cx, int d)
{
    std::map<std::string, int> out;
    for (auto& r : cx.reps[d]) ++out[type_name(r.stab.type)];
    return out;
}

}  // namespace

TEST_CASE("hemisphere data")
{
    RingSpec r = RingSpec::make(5);
    Hemisphere h = Hemisphere::make(QuadInt(r, 1, 1), QuadInt(r, 2));
    CHECK(h.radius_sq == frac(1, 4));
    CHECK(h.center == Kxy{frac(1, 2), frac(1, 2)});
    CHECK(h.height(5, h.center) == h.radius_sq);
    CHECK(h.height(5, Kxy{frac(1, 2), 0}) < h.radius_sq);
}

TEST_CASE("singular cusps")
{
    for (long m : {1, 2, 3, 7, 11}) CHECK(singular_points(RingSpec::make(m)).empty());
    const std::pair<long, Kxy> expected[] = {{5, {frac(1, 2), frac(1, 2)}},
                                             {6, {0, frac(1, 2)}},
                                             {10, {0, frac(1, 2)}},
                                             {13, {frac(1, 2), frac(1, 2)}},
                                             {15, {frac(1, 4), frac(1, 4)}}};
    for (auto& [m, z] : expected) {
        auto s = singular_points(RingSpec::make(m));
        REQUIRE(s.size() == 1);
        CHECK(s[0].value() == z);
        CHECK(is_singular_cusp(RingSpec::make(m), z));
    }
    CHECK_FALSE(is_singular_cusp(RingSpec::make(5), Kxy{0, 0}));
}

TEST_CASE("floor certificates")
{
    for (long m : {1, 2, 3, 5, 6, 7, 10, 11, 13, 15}) {
        CAPTURE(m);
        const Pipeline& p = pipeline(m);
        CHECK(p.floor.certificate.holds());
        CHECK_FALSE(p.floor.faces.empty());
    }
}

TEST_CASE("norm ceiling is enforced")
{
    FloorOptions opt;
    opt.start_bound = 1;
    opt.ceiling = 1;
    CHECK_THROWS_AS(compute_floor(RingSpec::make(13), opt), BoundExceeded);
}

TEST_CASE("OBJ export lists every vertex and face")
{
    const RawCellComplex& raw = pipeline(2).complex.raw;
    std::istringstream in(raw.to_obj());
    std::string line;
    size_t v = 0, f = 0;
    while (std::getline(in, line)) {
        if (line.rfind("v ", 0) == 0) ++v;
        if (line.rfind("f ", 0) == 0) ++f;
    }
    CHECK(v == raw.vertices.size());
    CHECK(f == raw.faces.size());
}

TEST_CASE("cell orbits for class number one")
{
    struct Case {
        long m;
        std::array<int, 3> counts;
        std::map<std::string, int> vertices, edges;
    };
    const Case cases[] = {
        {1, {4, 5, 2}, {{"A4", 1}, {"S3", 2}, {"V4", 1}}, {{"C2", 2}, {"C3", 2}, {"Trivial", 1}}},
        {2, {2, 3, 1}, {{"A4", 1}, {"V4", 1}}, {{"C2", 2}, {"C3", 1}}},
        {3, {3, 3, 1}, {{"A4", 2}, {"S3", 1}}, {{"C2", 2}, {"C3", 1}}},
        {7, {2, 3, 1}, {{"S3", 2}}, {{"C2", 2}, {"C3", 1}}},
        {11, {2, 3, 1}, {{"A4", 2}}, {{"C2", 1}, {"C3", 2}}},
    };
    for (auto& c : cases) {
        CAPTURE(c.m);
        const GammaComplex& cx = pipeline(c.m).complex;
        for (int d = 0; d < 3; ++d) CHECK(cx.orbit_count(d) == c.counts[d]);
        CHECK(multiset(cx, 0) == c.vertices);
        CHECK(multiset(cx, 1) == c.edges);
        CHECK(multiset(cx, 2) == std::map<std::string, int>{{"Trivial", c.counts[2]}});
    }
}

TEST_CASE("Euler characteristic vanishes")
{
    for (long m : {1, 2, 3, 5, 6, 7, 10, 11, 13, 15}) {
        CAPTURE(m);
        CHECK(equivariant_euler_characteristic(pipeline(m).complex) == 0);
    }
}

TEST_CASE("finite subgroup recognition")
{
    RingSpec r = RingSpec::make(1);
    QuadInt i(r, 0, 1);
    auto rot = group_closure(r, {PslMatrix::unit_rotation(i)});
    CHECK(rot.size() == 2);
    CHECK(recognize(rot) == StabType::C2);
    QuadInt zero(r, 0), one(r, 1);
    CHECK_THROWS_AS(group_closure(r, {PslMatrix(zero, one, -one, zero), PslMatrix(one, one, -one, zero)}),
                    UnboundedStabilizer);
    const GammaComplex& cx = pipeline(7).complex;
    for (auto& rep : cx.reps[0]) {
        auto s3 = group_closure(cx.ring, rep.stab.generators);
        CHECK(s3.size() == 6);
        CHECK(recognize(s3) == StabType::S3);
    }
    CHECK(type_from_name("ZxZ") == StabType::ZxZ);
    CHECK_THROWS_AS(type_from_name("D5"), UnknownType);
}

TEST_CASE("stabilizers are conjugation covariant")
{
    for (long m : {1, 5, 13}) {
        CAPTURE(m);
        const GammaComplex& cx = pipeline(m).complex;
        for (int d = 0; d < 2; ++d)
            for (int id : cx.fundamental_cells(d)) {
                const CellRef& ref = cx.located[d][id];
                const StabilizerInfo& rep = cx.reps[d][ref.orbit].stab;
                if (rep.type == StabType::ZxZ) continue;
                std::vector<PslMatrix> conj;
                for (auto& s : rep.elements) conj.push_back(ref.g * s * ref.g.inverse());
                std::sort(conj.begin(), conj.end());
                CHECK(stabilizer(cx, d, id).elements == conj);
            }
    }
}

TEST_CASE("gamma complex JSON round trip")
{
    for (long m : {2, 13}) {
        const GammaComplex& cx = pipeline(m).complex;
        nlohmann::json j = cx.to_json();
        GammaComplex back = GammaComplex::from_json(j);
        CHECK(back.to_json() == j);
        CHECK(back.orbit_count(0) == cx.orbit_count(0));
    }
}
