#pragma once

#include "bianchi/halfspace.hpp"
#include "bianchi/quadring.hpp"

#include "json.hpp"

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace bianchi {

struct Hemisphere {
    QuadInt lambda, mu;
    Kxy center;
    Rat radius_sq;

    static Hemisphere make(const QuadInt& lambda, const QuadInt& mu);
    // t-coordinate of the sphere over z (negative outside the disk).
    Rat height(long m, const Kxy& z) const;
    bool same_sphere(const Hemisphere& o) const { return center == o.center && radius_sq == o.radius_sq; }
};

bool hemisphere_order(const Hemisphere& u, const Hemisphere& v);

// Closed boxes in (x, y) coordinates, y measured in units of sqrt(m).
struct Strip {
    Rat re_lo, re_hi, im_lo, im_hi;

    bool contains(const Kxy& z) const;
    bool contains_half_open(const Kxy& z) const;
    // Box grown by a Euclidean distance of at least `margin` on every side.
    Strip grown(long m, const Rat& margin) const;
};

Strip fundamental_strip(const RingSpec& r);
// Lattice vector k with z - k in the half-open fundamental strip.
QuadInt lattice_shift(const RingSpec& r, const Kxy& z);

// Bucketed lookup of hemispheres by their disks.
class HemisphereIndex {
public:
    HemisphereIndex() = default;
    HemisphereIndex(long m, const std::vector<Hemisphere>& hs);
    // Superset of the hemispheres whose closed disk contains z.
    std::vector<int> near_point(const Kxy& z) const;
    // Superset of the hemispheres whose disk meets the disk of Euclidean radius r at c.
    std::vector<int> near_disk(const Kxy& c, double radius) const;

private:
    double sqrt_m_ = 1.0;
    double cell_ = 1.0;
    std::unordered_map<long long, std::vector<int>> buckets_;
    long long key(long ix, long iy) const { return (long long)ix * 1000003LL + iy; }
    void cell_of(const Kxy& z, long& ix, long& iy) const;
};

// Hemispheres of norm at most norm_bound centred in the half-open strip, minus those
// lying strictly inside another one.
std::vector<Hemisphere> fundamental_hemispheres(const RingSpec& r, long norm_bound);
Hemisphere translate(const Hemisphere& h, const QuadInt& k);
// Lattice vectors k with z + k in the box.
std::vector<QuadInt> lattice_vectors_into(const RingSpec& r, const Kxy& z, const Strip& box);
// Translates of the fundamental hemispheres centred in the box.
std::vector<Hemisphere> enumerate_hemispheres(const RingSpec& r, long norm_bound, const Strip& box);
// Centers within one unit of the fundamental strip.
std::vector<Hemisphere> enumerate_hemispheres(const RingSpec& r, long norm_bound);

using Polygon = std::vector<Kxy>;

// Region of the plane where h is at least as high as every candidate, intersected
// with a box around h's disk; counter-clockwise.
Polygon power_cell(long m, const Hemisphere& h, const std::vector<const Hemisphere*>& candidates);
Rat polygon_area2(long m, const Polygon& p);
bool is_strictly_below(long m, const std::vector<Hemisphere>& candidates, const Hemisphere& h);

struct FloorFace {
    int hemi = -1;
    Polygon poly;
};

struct Certificate {
    long norm_bound = 0;
    bool coverage = false;
    Rat min_height;                 // least positive vertex height near the strip
    long needed_regular = 0;        // bound forced by min_height
    bool uncovered_cusps = false;   // every vertex at height 0 is a singular cusp
    std::vector<std::string> notes;
    bool holds() const { return coverage && uncovered_cusps && norm_bound >= needed_regular; }
};

struct FloorResult {
    RingSpec ring;
    Strip strip;
    Strip face_region;               // every hemisphere centred here is in the pool
    Rat cell_diameter;               // bound on the Euclidean diameter of a face
    std::vector<Hemisphere> hemispheres;   // every enumerated hemisphere (carrier pool)
    std::vector<FloorFace> faces;          // faces of every pool hemisphere that reaches the floor
    std::vector<Kxy> singular;             // singular cusps among face vertices
    Certificate certificate;
};

struct FloorOptions {
    long start_bound = 8;
    long ceiling = 4000;
};

FloorResult compute_floor(const RingSpec& r, const FloorOptions& opt = {});
// Floor for a fixed norm bound; the certificate is filled but not enforced.
FloorResult floor_at_bound(const RingSpec& r, long norm_bound);

std::vector<Cusp> singular_points(const RingSpec& r);
// No hemisphere contains s in its open disk.
bool is_singular_cusp(const RingSpec& r, const Kxy& s);

struct RawVertex {
    HPoint p;
    bool singular = false;
};

struct RawEdge {
    int v0 = -1, v1 = -1;
    std::vector<int> carriers;   // hemispheres containing the edge
};

struct RawFace {
    int hemi = -1;
    std::vector<int> boundary;   // vertex ids, counter-clockwise in the (x, y) projection
};

// Geometric floor complex over a region; edges are derived from face boundaries.
class RawCellComplex {
public:
    RingSpec ring;
    Strip strip;
    Strip region;                     // cells entirely inside are trusted; holds every cell anchored in the strip
    std::vector<Hemisphere> hemispheres;
    std::vector<RawVertex> vertices;
    std::vector<RawEdge> edges;
    std::vector<RawFace> faces;

    int find_vertex(const Kxy& z) const;
    int add_vertex(const Kxy& z, const Rat& t, bool singular);
    int find_edge(int a, int b) const;
    // Recompute edges and carrier caches after faces changed.
    void rebuild();
    const std::vector<int>& vertex_carriers(int v) const;
    // Hemispheres through both points (heights measured against the floor).
    std::vector<int> carriers_through(int a, int b) const;
    bool cell_in_region(int dim, int id) const;
    std::vector<int> cell_vertices(int dim, int id) const;
    Rat floor_height(const Kxy& z, int hemi_hint) const;
    // Pool hemispheres through p (p on the floor, t > 0).
    std::vector<int> carriers_at(const HPoint& p) const;
    // Put vertex v between the consecutive vertices a, b in every face having that side.
    void insert_on_side(int a, int b, int v);
    // Cut face f along the chord between two of its boundary vertices.
    void split_face(int f, int va, int vb);
    // Replace face f by faces with the given boundaries on the same hemisphere.
    void replace_face(int f, const std::vector<std::vector<int>>& parts);

    nlohmann::json to_json() const;
    std::string to_obj() const;

    void build_index();

private:
    std::map<std::pair<Rat, Rat>, int> vindex_;
    std::map<std::pair<int, int>, int> eindex_;
    HemisphereIndex hindex_;
    mutable std::vector<std::vector<int>> vcarriers_;
    mutable std::vector<char> vcarriers_done_;
};

RawCellComplex extract_cells(const FloorResult& floor);

nlohmann::json rat_json(const Rat& q);
Rat rat_from_json(const nlohmann::json& j);

}  // namespace bianchi
