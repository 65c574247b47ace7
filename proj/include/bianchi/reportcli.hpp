#pragma once

#include "bianchi/equivss.hpp"

#include "json.hpp"

#include <array>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace bianchi {

// count * sign / order
struct ChiTerm {
    int count = 1;
    int sign = 1;
    int order = 1;
};

struct PageEntry {
    CoeffRing coeff = CoeffRing::Z;
    int page = 2;   // 1, 2 or 3 (= infinity)
    int p = 0, q = 0;
    FgAbelianGroup group;
};

struct PrimaryRank {
    long prime = 2;
    int q = 1;
    int rank = 0;
};

struct D2Expectation {
    CoeffRing coeff = CoeffRing::Z;
    std::optional<FgAbelianGroup> image;
    std::optional<FgAbelianGroup> kernel;
    bool primitive = false;        // some generator has a primitive infinite-order image
    bool zero_generator = false;   // some generator maps to 0
    long has_order = 0;            // some generator image has this finite order
};

struct ModPExpectation {
    std::map<int, int> explicit_dims;
    std::optional<HomologyFamily> family;   // torsion terms of order p count dimensions

    std::optional<int> dimension(int q) const;
};

struct Fixture {
    long m = 0;
    CellConvention convention = CellConvention::Floor;
    std::array<int, 3> orbit_counts{};
    std::array<std::map<std::string, int>, 3> stabilizers;
    std::vector<ChiTerm> chi_terms;
    std::map<int, FgAbelianGroup> homology;
    std::optional<HomologyFamily> family;
    std::vector<FgAbelianGroup> h2_listed_candidates;
    std::map<CoeffRing, ModPExpectation> mod_p;
    std::optional<std::array<int, 2>> bottom_unit_divisors;
    std::vector<PrimaryRank> primary_ranks;
    std::vector<D2Expectation> d2;
    std::vector<PageEntry> pages;
    std::optional<PresentedGroup> abelianization;

    // One rational per cell orbit, sorted.
    std::vector<Rat> chi_summands() const;
    // Explicit value if listed, else the family value, else nullopt.
    std::optional<FgAbelianGroup> expected_homology(int q) const;
};

// Throws FormatError.
Fixture fixture_from_json(const nlohmann::json& j);
Fixture load_fixture(const std::string& path);

// BIANCHI_FIXTURES if set, else the fixtures directory of the source tree.
std::string default_fixture_dir();
// Path of the fixture for m, or nullopt.
std::optional<std::string> find_fixture(const std::string& dir, long m);

struct RunConfig {
    long m = 1;
    std::vector<CoeffRing> coeffs = {CoeffRing::Z, CoeffRing::Z2, CoeffRing::Z3, CoeffRing::Z4};
    int q_max = 12;
    long norm_ceiling = 4000;
    std::optional<CellConvention> convention;   // from the fixture when unset
    std::string export_dir;
    std::string fixture_dir;
    bool json = false;
    bool check_geometry = true;
    bool check_homology = true;

    // Throws InvalidRing or FormatError.
    void validate() const;
};

struct Pipeline {
    RunConfig config;
    std::optional<Fixture> fixture;
    FloorResult floor;
    GammaComplex complex;
    std::map<CoeffRing, SpectralPages> runs;
    std::vector<ExtensionResult> homology;
    std::optional<HomologyFamily> family;
};

Pipeline run_geometry(const RunConfig& cfg);
// Spectral sequences over Z, Z/2, Z/3 and Z/4, extensions and family detection.
// The coefficient list of the config only selects what is reported.
void run_homology(Pipeline& p);

struct CheckItem {
    std::string name;
    bool pass = false;
    std::string detail;
};

class CheckLedger {
public:
    std::vector<CheckItem> items;

    void add(std::string name, bool pass, std::string detail = {});
    void append(const std::vector<CheckItem>& more);
    bool all_pass() const;
    const CheckItem* first_failure() const;
    nlohmann::json to_json() const;
    void print(std::ostream& os) const;
};

std::vector<CheckItem> check_geometry(const GammaComplex& cx, const Fixture& f);
std::vector<CheckItem> check_euler(const GammaComplex& cx, const Fixture& f);
std::vector<CheckItem> check_d1(const SpectralPages& z, const Fixture& f);
std::vector<CheckItem> check_d2(const std::map<CoeffRing, SpectralPages>& runs, const Fixture& f);
std::vector<CheckItem> check_pages(const std::map<CoeffRing, SpectralPages>& runs, const Fixture& f);
std::vector<CheckItem> check_homology(const std::vector<ExtensionResult>& h, const Fixture& f);
std::vector<CheckItem> check_mod_p(const std::map<CoeffRing, SpectralPages>& runs, const Fixture& f);
std::vector<CheckItem> check_low_degree(const SpectralPages& z, const Fixture& f);
// Facts that hold when the class number is one: no singular cusps and d^2 = 0.
std::vector<CheckItem> check_structural(const Pipeline& p);

// Per-orbit summary, orbit counts, chi and singular points.
nlohmann::json domain_summary(const Pipeline& p);
nlohmann::json homology_report(const Pipeline& p);

// Subcommands; the return value is the process exit status.
int cmd_domain(const RunConfig& cfg, std::ostream& out);
int cmd_homology(const RunConfig& cfg, std::ostream& out);
int cmd_pages(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::ostream& out);

}  // namespace bianchi
