#pragma once

#include "bianchi/equivss.hpp"
#include "bianchi/reportcli.hpp"

#include <map>
#include <random>

namespace bianchi::testing {

// Geometry and spectral sequences are cached per process.
const Pipeline& pipeline(long m, int q_max = 12);
const Fixture& fixture(long m);

QuadInt random_quad(const RingSpec& r, std::mt19937& rng, int bound);
// Word of length `length` in translations, unit rotations and z -> -1/z.
PslMatrix random_element(const RingSpec& r, std::mt19937& rng, int length);
HPoint random_point(std::mt19937& rng);
// Product of random elementary operations.
IntMatrix random_unimodular(int n, std::mt19937& rng, int steps);
IntMatrix random_matrix(int rows, int cols, std::mt19937& rng, int bound);

}  // namespace bianchi::testing
