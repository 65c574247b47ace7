#pragma once

#include "bianchi/halfspace.hpp"
#include "bianchi/swanfloor.hpp"

#include "json.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace bianchi {

enum class StabType { Trivial, C2, C3, V4, S3, A4, ZxZ };

std::string type_name(StabType t);
// Throws UnknownType.
StabType type_from_name(const std::string& s);
// Group order; 0 for ZxZ.
int type_order(StabType t);

struct StabilizerInfo {
    StabType type = StabType::Trivial;
    std::vector<PslMatrix> generators;
    std::vector<PslMatrix> elements;   // sorted; empty for ZxZ
};

// Closure of the generators under multiplication; throws UnboundedStabilizer past order 12.
std::vector<PslMatrix> group_closure(const RingSpec& r, const std::vector<PslMatrix>& gens);
// Throws UnknownType for orders outside the finite subgroup list.
StabType recognize(const std::vector<PslMatrix>& elements);
StabilizerInfo finite_stabilizer(const RingSpec& r, std::vector<PslMatrix> elements);

// Elliptic element data: the fixed geodesic is the semicircle of radius^2 radius_sq
// centred at center over the line through center with direction dir; vertical when c = 0.
struct EllipticAxis {
    bool vertical = false;
    Kxy center;
    Kxy dir;
    Rat radius_sq;
};
EllipticAxis elliptic_axis(const PslMatrix& g);

// Parabolic subgroup fixing a singular cusp: two generators of the translation lattice.
std::array<PslMatrix, 2> cusp_stabilizer(const RingSpec& r, const Kxy& s);

// Matrix with isometric sphere h: bottom row (mu, lambda).
PslMatrix hemisphere_matrix(const Hemisphere& h);

// Image of a floor vertex under g; nullopt when a cusp goes to infinity.
std::optional<HPoint> image_vertex(const PslMatrix& g, const RawVertex& v);

struct Incidence {
    int orbit = -1;        // representative of one dimension lower
    int sign = 1;
    PslMatrix pairing;     // pairing * representative = actual boundary cell
};

struct OrbitRep {
    int raw = -1;                      // cell id in the raw complex
    std::vector<int> vertices;         // oriented raw vertex ids
    std::vector<RawVertex> geometry;   // the same vertices as points
    StabilizerInfo stab;
    std::vector<Incidence> boundary;
    std::vector<int> members;          // cells anchored in the strip that lie in this orbit
};

// Where a cell of the raw complex sits: g * rep = cell, with orientation sign.
struct CellRef {
    int orbit = -1;
    int sign = 1;
    PslMatrix g;
};

class GammaComplex {
public:
    RingSpec ring;
    RawCellComplex raw;
    std::array<std::vector<OrbitRep>, 3> reps;
    int subdivisions = 0;

    int orbit_count(int dim) const { return (int)reps[dim].size(); }
    // Locate a cell of the raw complex anchored anywhere in the trusted region.
    std::optional<CellRef> locate(int dim, int raw_id) const;

    nlohmann::json to_json() const;
    static GammaComplex from_json(const nlohmann::json& j);

    // Cells anchored in the half-open strip.
    std::vector<int> fundamental_cells(int dim) const;
    Kxy anchor(int dim, int raw_id) const;

    // Ordered vertex ids of a cell: edges v0 -> v1, faces counter-clockwise.
    std::vector<int> oriented(int dim, int raw_id) const;
    // Cell with the given vertex ids (any order), or -1.
    int find_cell(int dim, const std::vector<int>& vs) const;

    void index_cells();

    std::array<std::vector<CellRef>, 3> located;   // by raw id, for fundamental cells

private:
    std::map<std::vector<int>, int> face_index_;
};

// g with g * a = b as oriented cells, searched among candidate matrices.
std::optional<PslMatrix> find_pairing(const GammaComplex& cx, int dim, int a, int b);
// Setwise stabilizer of a cell (all elements mapping it onto itself).
std::vector<PslMatrix> setwise_stabilizer(const GammaComplex& cx, int dim, int id);
StabilizerInfo stabilizer(const GammaComplex& cx, int dim, int id);

GammaComplex build_orbits(const RawCellComplex& raw);
// Subdivide until every stabilizer fixes its cell pointwise.
GammaComplex rigidify(const GammaComplex& cx);
// Floor: cells of the hemisphere arrangement. StripWalls: those cells further cut along the walls
// of the lattice translates of the strip and along every image of such a cut under face pairings.
enum class CellConvention { Floor, StripWalls };

RawCellComplex cut_along_walls(const RawCellComplex& raw);
// Full pipeline from a certified floor.
GammaComplex build_gamma_complex(const FloorResult& floor, CellConvention conv = CellConvention::Floor);

Rat equivariant_euler_characteristic(const GammaComplex& cx);
// Summands (-1)^dim / |stab| for finite stabilizers.
std::vector<Rat> euler_terms(const GammaComplex& cx);

nlohmann::json matrix_json(const PslMatrix& g);
PslMatrix matrix_from_json(const RingSpec& r, const nlohmann::json& j);

}  // namespace bianchi
