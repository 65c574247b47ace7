#include "properties.hpp"
#include "support.hpp"

#include "doctest.h"

using namespace bianchi;
using namespace bianchi::testing;

namespace {

void expect_none(const std::vector<std::string>& failures)
{
    for (auto& f : failures) MESSAGE(f);
    CHECK(failures.empty());
}

const long all_rings[] = {1, 2, 3, 5, 6, 7, 10, 11, 13, 15};

}  // namespace

TEST_CASE("property: norm multiplicativity") { expect_none(norm_multiplicativity(500, 1)); }

TEST_CASE("property: group action law") { expect_none(action_law(500, 2)); }

TEST_CASE("property: Smith form canonicity") { expect_none(smith_canonicity(200, 3)); }

TEST_CASE("property: induced maps agree with the resolution oracle") { expect_none(oracle_agreement(12)); }

TEST_CASE("property: stabilizer conjugation covariance")
{
    for (long m : all_rings) expect_none(conjugation_covariance(pipeline(m).complex));
}

TEST_CASE("property: d1 squares to zero")
{
    for (long m : all_rings) expect_none(d1_squares_to_zero(pipeline(m)));
}

TEST_CASE("property: d2 is independent of the section")
{
    for (long m : all_rings) expect_none(section_independence(pipeline(m)));
}

TEST_CASE("property: UCT self-consistency")
{
    for (long m : all_rings) expect_none(uct_consistency(pipeline(m)));
}
