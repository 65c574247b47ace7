#pragma once

#include "bianchi/abelianlin.hpp"
#include "bianchi/finhom.hpp"
#include "bianchi/orbifold.hpp"

#include "json.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bianchi {

// One generator of d^2 on E^2_{2,0} and how its image was obtained.
struct D2Trace {
    IntVec cycle;          // coefficients on the 2-cell orbits
    IntVec e1_image;       // in E^1_{0,1} coordinates
    IntVec e2_image;       // in E^2_{0,1} coordinates
    Int order = 0;         // order of the image, 0 for infinite
    bool primitive = false;   // generates a direct summand Z of E^2_{0,1} modulo torsion
};

struct SpectralPages {
    CoeffRing coeff = CoeffRing::Z;
    int q_max = 0;
    std::array<std::vector<PresentedGroup>, 3> e1;   // e1[p][q]
    std::array<std::vector<IntMatrix>, 3> d1;        // d1[p][q] : E^1_{p,q} -> E^1_{p-1,q}, p = 1, 2
    std::array<std::vector<Homology>, 3> e2;
    bool has_d2 = false;
    IntMatrix d2;                                    // E^2_{2,0} generators -> E^2_{0,1} coordinates
    std::vector<D2Trace> d2_trace;
    Homology e3_20;                                  // kernel of d^2
    Cokernel e3_01;                                  // E^2_{0,1} / image of d^2

    // E^3 = E^infinity.
    FgAbelianGroup e_infinity(int p, int q) const;
    FgAbelianGroup e2_group(int p, int q) const;
    // Image of d^2 as an abstract group.
    FgAbelianGroup d2_image() const;
    nlohmann::json to_json() const;
};

SpectralPages assemble_e1(const GammaComplex& cx, CoeffRing c, int q_max);
// Throws NotAComplex when d1 * d1 is nonzero.
void compute_d1(SpectralPages& pages, const GammaComplex& cx);
void compute_e2(SpectralPages& pages);

enum class SectionOrder { Min, Max };

// Section of Gamma -> Gamma / Gamma_sigma: the coset of 1 is sent to 1, any other coset to its
// least (or greatest) element. For a cusp stabilizer cosets are keyed by the image of the cusp
// and, when memoized, the first element met in a coset represents it.
struct EpsilonContext {
    StabilizerInfo stabilizer;
    SectionOrder order = SectionOrder::Min;
    std::optional<Kxy> cusp;
    bool memoize = false;
    std::map<std::string, PslMatrix> memo;
};

bool in_stabilizer(const EpsilonContext& ctx, const PslMatrix& g);
// Throws CosetUndecidable for a cusp stabilizer without memo and g outside it.
PslMatrix coset_representative(EpsilonContext& ctx, const PslMatrix& g);
// l(g Gamma_sigma)^-1 g, an element of Gamma_sigma.
PslMatrix epsilon(EpsilonContext& ctx, const PslMatrix& g);

// Fills d2, d2_trace and E^3. Throws CycleConditionViolated.
void compute_d2(SpectralPages& pages, const GammaComplex& cx, SectionOrder order = SectionOrder::Min);

SpectralPages run_spectral_sequence(const GammaComplex& cx, CoeffRing c, int q_max);

// Rank over F_p of a block of d^1 restricted to summands of order p.
int primary_rank(const IntMatrix& d, const IntVec& row_orders, const IntVec& col_orders, long p);
// Number of elementary divisors equal to 1.
int unit_divisor_count(const IntMatrix& d);

struct ExtensionResult {
    int q = 0;
    std::vector<FgAbelianGroup> candidates;
    std::vector<FgAbelianGroup> survivors;
    bool unique() const { return survivors.size() == 1; }
    const FgAbelianGroup& group() const { return survivors.front(); }
};

// H_q(Gamma; Z) for q = 1..q_max from the Z run, filtered by the orders of the Z/2, Z/3, Z/4 runs.
// Throws NoConsistentExtension when no candidate survives.
std::vector<ExtensionResult> resolve_extensions(const std::map<CoeffRing, SpectralPages>& runs);

// Order of H_q(Gamma; Z/n) under the universal coefficient theorem.
Int uct_order(const FgAbelianGroup& hq, const FgAbelianGroup& hq_minus_1, long n);
// Sum of the E^infinity dimensions on the diagonal p + q = n of a Z/p run.
int mod_p_dimension(const SpectralPages& pages, int n);

struct LowDegreeReport {
    FgAbelianGroup abelianization;
    FgAbelianGroup e_inf_01;
    FgAbelianGroup e_inf_10;
    bool consistent = false;
};
// 0 -> E_{0,1} -> Gamma^ab -> E_{1,0} -> 0 must admit an extension; throws CheckFailed otherwise.
LowDegreeReport low_degree_check(const SpectralPages& z_pages, const PresentedGroup& presentation);

// H_q for q >= start as q = period * k + residue, k >= 0, residue in [start, start + period).
struct TorsionTerm {
    long order = 2;   // prime power
    int slope = 0;    // exponent is slope * k + offset
    int offset = 0;
};
struct FamilyBranch {
    int residue = 0;
    int free_rank = 0;
    std::vector<TorsionTerm> torsion;
};
struct HomologyFamily {
    int period = 1;
    int start = 0;
    std::vector<FamilyBranch> branches;
    bool confirmed = false;   // at least three degrees per branch

    FgAbelianGroup evaluate(int q) const;
    std::string str() const;
    nlohmann::json to_json() const;
    static HomologyFamily from_json(const nlohmann::json& j);
};

// Smallest period dividing 12 that fits groups[q - start] with affine exponents and at least
// two degrees per branch.
std::optional<HomologyFamily> detect_family(const std::vector<FgAbelianGroup>& groups, int start);

}  // namespace bianchi
