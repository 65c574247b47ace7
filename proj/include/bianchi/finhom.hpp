#pragma once

#include "bianchi/abelianlin.hpp"
#include "bianchi/orbifold.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bianchi {

enum class CoeffRing { Z, Z2, Z3, Z4 };

std::string coeff_name(CoeffRing c);
// Throws FormatError.
CoeffRing coeff_from_name(const std::string& s);
// 0 for Z.
long coeff_modulus(CoeffRing c);

// Closed-form value of H_q(type; coeff).
FgAbelianGroup stab_homology(StabType t, int q, CoeffRing c);

// H_q(type; coeff) in the fixed basis used for every map: cyclic summands, 2-primary part first.
struct StabBasis {
    IntVec orders;                     // 0 for infinite cyclic
    std::vector<std::string> labels;
    FgAbelianGroup group() const { return FgAbelianGroup::from_orders(orders); }
};
StabBasis stab_homology_basis(StabType t, int q, CoeffRing c);

// Inclusion of a cyclic (or trivial) stabilizer, reduced to its outer datum:
// the exponent k with t -> t^k for cyclic and A4 targets, the involution index for V4 targets.
struct InclusionData {
    StabType source = StabType::Trivial;
    StabType target = StabType::Trivial;
    int datum = 1;
};

// Classifies h -> g^-1 h g from src into tgt; throws OrbitInconsistency if the image leaves tgt.
InclusionData classify_inclusion(const StabilizerInfo& src, const StabilizerInfo& tgt, const PslMatrix& g);

// Induced map on H_q in the bases of stab_homology_basis; throws UnsupportedInclusion.
IntMatrix induced_map(const InclusionData& inc, int q, CoeffRing c);

// Canonical generators of finite stabilizers.
PslMatrix cyclic_generator(const StabilizerInfo& s);
// The three involutions alpha < beta of a Klein four group, then alpha * beta.
std::vector<PslMatrix> klein_involutions(const StabilizerInfo& s);
// Smallest element of order three in S3 or A4.
PslMatrix order_three_reference(const StabilizerInfo& s);
int element_order(const PslMatrix& g);

// Class of u in H_1(stabilizer; Z) in the basis of stab_homology_basis(type, 1, Z).
// For ZxZ the cusp is required; u must lie in the stabilizer.
IntVec h1_class(const StabilizerInfo& s, const PslMatrix& u, const std::optional<Kxy>& cusp = std::nullopt);
// Image of integral H_1 coordinates in H_1(type; coeff) coordinates.
IntVec reduce_h1(StabType t, const IntVec& z_coords, CoeffRing c);

// Independent check by explicit resolutions over the group ring.
enum class SmallGroup { C2, C3, V4 };

// Homomorphism given by the images of the standard generators (t, or alpha and beta),
// as element indices: t^k is k; in V4 bit 1 is alpha and bit 2 is beta.
struct SmallHom {
    SmallGroup source = SmallGroup::C2;
    SmallGroup target = SmallGroup::C2;
    std::vector<int> images;
};

// H_q(G; coeff) computed from the periodic (cyclic) or tensor-product (V4) resolution.
Homology resolution_homology(SmallGroup g, int q, CoeffRing c);
// Induced maps on H_q for q = 0..q_max, lifted by the comparison theorem; throws LiftFailure.
std::vector<IntMatrix> resolution_oracle(const SmallHom& hom, int q_max, CoeffRing c);

}  // namespace bianchi
