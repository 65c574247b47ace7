#pragma once

#include "bianchi/reportcli.hpp"

#include <string>
#include <vector>

namespace bianchi::testing {

// Each returns the failures found; empty means the property holds.
std::vector<std::string> norm_multiplicativity(int cases, unsigned seed);
std::vector<std::string> action_law(int cases, unsigned seed);
std::vector<std::string> smith_canonicity(int cases, unsigned seed);
std::vector<std::string> oracle_agreement(int q_max);
std::vector<std::string> conjugation_covariance(const GammaComplex& cx);
std::vector<std::string> d1_squares_to_zero(const Pipeline& p);
std::vector<std::string> section_independence(const Pipeline& p);
std::vector<std::string> uct_consistency(const Pipeline& p);

}  // namespace bianchi::testing
