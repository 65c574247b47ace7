#include "bianchi/reportcli.hpp"

#include "bianchi/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifndef BIANCHI_FIXTURE_DIR
#define BIANCHI_FIXTURE_DIR "fixtures"
#endif

namespace bianchi {

namespace fs = std::filesystem;
using nlohmann::json;

// ---- fixtures ----

std::optional<int> ModPExpectation::dimension(int q) const
{
    auto it = explicit_dims.find(q);
    if (it != explicit_dims.end()) return it->second;
    if (family && q >= family->start) return (int)family->evaluate(q).invariant_factors.size();
    return std::nullopt;
}

std::vector<Rat> Fixture::chi_summands() const
{
    std::vector<Rat> out;
    for (auto& t : chi_terms)
        for (int i = 0; i < t.count; ++i) out.push_back(frac(t.sign, t.order));
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<FgAbelianGroup> Fixture::expected_homology(int q) const
{
    auto it = homology.find(q);
    if (it != homology.end()) return it->second;
    if (family && q >= family->start) return family->evaluate(q);
    return std::nullopt;
}

namespace {

FgAbelianGroup group_field(const json& j)
{
    try {
        return FgAbelianGroup::parse(j.get<std::string>());
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw FormatError(std::string("bad group entry: ") + e.what());
    }
}

CellConvention convention_from_name(const std::string& s)
{
    if (s == "Floor") return CellConvention::Floor;
    if (s == "StripWalls") return CellConvention::StripWalls;
    throw FormatError("unknown cell convention " + s);
}

std::string convention_name(CellConvention c)
{
    return c == CellConvention::Floor ? "Floor" : "StripWalls";
}

}  // namespace

Fixture fixture_from_json(const json& j)
{
    try {
        if (j.value("schema", "") != "bianchi-fixture/1") throw FormatError("unknown fixture schema");
        Fixture f;
        f.m = j.at("m").get<long>();
        f.convention = convention_from_name(j.value("cell_convention", "Floor"));
        auto oc = j.at("orbit_counts");
        if (oc.size() != 3) throw FormatError("orbit_counts needs three entries");
        for (int d = 0; d < 3; ++d) f.orbit_counts[d] = oc[d].get<int>();
        auto st = j.at("stabilizers");
        if (st.size() != 3) throw FormatError("stabilizers needs three entries");
        for (int d = 0; d < 3; ++d)
            for (auto& [k, v] : st[d].items()) {
                type_from_name(k);
                f.stabilizers[d][k] = v.get<int>();
            }
        for (auto& t : j.at("chi_terms")) {
            if (t.size() != 3) throw FormatError("chi term needs [count, sign, order]");
            ChiTerm c{t[0].get<int>(), t[1].get<int>(), t[2].get<int>()};
            if (c.count < 0 || (c.sign != 1 && c.sign != -1) || c.order < 1) throw FormatError("bad chi term");
            f.chi_terms.push_back(c);
        }
        Rat chi = 0;
        for (auto& r : f.chi_summands()) chi += r;
        if (chi != 0) throw FormatError("chi terms do not sum to 0");

        if (j.contains("homology")) {
            auto& h = j["homology"];
            json explicit_groups = h.value("explicit", json::object());
            for (auto& [k, v] : explicit_groups.items()) f.homology[std::stoi(k)] = group_field(v);
            if (h.contains("family")) f.family = HomologyFamily::from_json(h["family"]);
        }
        for (auto& c : j.value("h2_listed_candidates", json::array())) f.h2_listed_candidates.push_back(group_field(c));
        json mod_p = j.value("mod_p", json::object());
        for (auto& [k, v] : mod_p.items()) {
            ModPExpectation e;
            json dims = v.value("explicit", json::object());
            for (auto& [q, d] : dims.items()) e.explicit_dims[std::stoi(q)] = d.get<int>();
            if (v.contains("family")) e.family = HomologyFamily::from_json(v["family"]);
            f.mod_p[coeff_from_name(k)] = e;
        }
        if (j.contains("d1")) {
            auto& d = j["d1"];
            if (d.contains("bottom_unit_divisors"))
                f.bottom_unit_divisors = std::array<int, 2>{d["bottom_unit_divisors"][0].get<int>(),
                                                            d["bottom_unit_divisors"][1].get<int>()};
            for (auto& r : d.value("primary_ranks", json::array()))
                f.primary_ranks.push_back({r.at("p").get<long>(), r.at("q").get<int>(), r.at("rank").get<int>()});
        }
        for (auto& d : j.value("d2", json::array())) {
            D2Expectation e;
            e.coeff = coeff_from_name(d.at("coeff").get<std::string>());
            if (d.contains("image")) e.image = group_field(d["image"]);
            if (d.contains("kernel")) e.kernel = group_field(d["kernel"]);
            e.primitive = d.value("primitive", false);
            e.zero_generator = d.value("zero_generator", false);
            e.has_order = d.value("has_order", 0L);
            f.d2.push_back(e);
        }
        for (auto& p : j.value("pages", json::array())) {
            PageEntry e;
            e.coeff = coeff_from_name(p.at("coeff").get<std::string>());
            e.page = p.at("page").get<int>();
            e.p = p.at("p").get<int>();
            e.q = p.at("q").get<int>();
            if (e.page < 1 || e.page > 3 || e.p < 0 || e.p > 2 || e.q < 0) throw FormatError("bad page entry");
            e.group = group_field(p.at("group"));
            f.pages.push_back(e);
        }
        if (j.contains("abelianization")) {
            auto& a = j["abelianization"];
            std::vector<std::string> gens = a.at("generators").get<std::vector<std::string>>();
            auto rels = a.value("relations", json::array());
            PresentedGroup g;
            g.generators = (int)gens.size();
            g.labels = gens;
            g.relations = IntMatrix(g.generators, (int)rels.size());
            for (int c = 0; c < (int)rels.size(); ++c)
                for (auto& [name, coef] : rels[c].items()) {
                    auto it = std::find(gens.begin(), gens.end(), name);
                    if (it == gens.end()) throw FormatError("relation uses unknown generator " + name);
                    g.relations.at((int)(it - gens.begin()), c) = coef.get<long>();
                }
            f.abelianization = g;
        }
        return f;
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw FormatError(std::string("malformed fixture: ") + e.what());
    }
}

Fixture load_fixture(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open fixture " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
    return fixture_from_json(j);
}

std::string default_fixture_dir()
{
    if (const char* env = std::getenv("BIANCHI_FIXTURES"); env && *env) return env;
    return BIANCHI_FIXTURE_DIR;
}

std::optional<std::string> find_fixture(const std::string& dir, long m)
{
    fs::path p = fs::path(dir) / ("m" + std::to_string(m) + ".json");
    if (fs::exists(p)) return p.string();
    return std::nullopt;
}

// ---- configuration and pipeline ----

void RunConfig::validate() const
{
    RingSpec::make(m);
    if (q_max < 2) throw FormatError("q_max must be at least 2");
    if (norm_ceiling < 1) throw FormatError("norm ceiling must be at least 1");
}

Pipeline run_geometry(const RunConfig& cfg)
{
    cfg.validate();
    Pipeline p;
    p.config = cfg;
    std::string dir = cfg.fixture_dir.empty() ? default_fixture_dir() : cfg.fixture_dir;
    if (auto path = find_fixture(dir, cfg.m)) p.fixture = load_fixture(*path);
    CellConvention conv = cfg.convention.value_or(p.fixture ? p.fixture->convention : CellConvention::Floor);
    FloorOptions opt;
    opt.ceiling = cfg.norm_ceiling;
    opt.start_bound = std::min(opt.start_bound, cfg.norm_ceiling);
    p.floor = compute_floor(RingSpec::make(cfg.m), opt);
    p.complex = build_gamma_complex(p.floor, conv);
    return p;
}

void run_homology(Pipeline& p)
{
    for (CoeffRing c : {CoeffRing::Z, CoeffRing::Z2, CoeffRing::Z3, CoeffRing::Z4}) p.runs[c] = run_spectral_sequence(p.complex, c, p.config.q_max);
    p.homology = resolve_extensions(p.runs);
    std::vector<FgAbelianGroup> tail;
    for (auto& e : p.homology)
        if (e.q >= 3) tail.push_back(e.group());
    p.family = detect_family(tail, 3);
}

// ---- ledger ----

void CheckLedger::add(std::string name, bool pass, std::string detail)
{
    items.push_back({std::move(name), pass, std::move(detail)});
}

void CheckLedger::append(const std::vector<CheckItem>& more)
{
    items.insert(items.end(), more.begin(), more.end());
}

bool CheckLedger::all_pass() const
{
    return std::all_of(items.begin(), items.end(), [](const CheckItem& c) { return c.pass; });
}

const CheckItem* CheckLedger::first_failure() const
{
    for (auto& c : items)
        if (!c.pass) return &c;
    return nullptr;
}

json CheckLedger::to_json() const
{
    json a = json::array();
    for (auto& c : items) a.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    return {{"checks", a}, {"all_pass", all_pass()}};
}

void CheckLedger::print(std::ostream& os) const
{
    for (auto& c : items) {
        os << (c.pass ? "PASS " : "FAIL ") << c.name;
        if (!c.detail.empty()) os << "  (" << c.detail << ")";
        os << "\n";
    }
    int n = (int)std::count_if(items.begin(), items.end(), [](const CheckItem& c) { return c.pass; });
    os << n << "/" << items.size() << " checks passed\n";
}

// ---- checks ----

namespace {

const char* dim_name(int d)
{
    static const char* names[] = {"vertex", "edge", "face"};
    return names[d];
}

std::map<std::string, int> stab_multiset(const GammaComplex& cx, int d)
{
    std::map<std::string, int> out;
    for (auto& r : cx.reps[d]) ++out[type_name(r.stab.type)];
    return out;
}

std::string multiset_str(const std::map<std::string, int>& m)
{
    std::string s;
    for (auto& [k, v] : m) s += (s.empty() ? "" : " ") + std::to_string(v) + "x" + k;
    return s.empty() ? "-" : s;
}

std::string expect_str(const std::string& got, const std::string& want)
{
    return got == want ? got : "got " + got + ", expected " + want;
}

CheckItem group_item(std::string name, const FgAbelianGroup& got, const FgAbelianGroup& want)
{
    return {std::move(name), got.normal_form() == want.normal_form(), expect_str(got.str(), want.normal_form().str())};
}

CheckItem int_item(std::string name, long got, long want)
{
    return {std::move(name), got == want, expect_str(std::to_string(got), std::to_string(want))};
}

IntVec generator_orders(const PresentedGroup& g)
{
    IntVec o;
    for (int i = 0; i < g.generators; ++i) o.push_back(g.relations.at(i, i));
    return o;
}

const SpectralPages* find_run(const std::map<CoeffRing, SpectralPages>& runs, CoeffRing c)
{
    auto it = runs.find(c);
    return it == runs.end() ? nullptr : &it->second;
}

}  // namespace

std::vector<CheckItem> check_geometry(const GammaComplex& cx, const Fixture& f)
{
    std::vector<CheckItem> out;
    for (int d = 0; d < 3; ++d) {
        out.push_back(int_item(std::string(dim_name(d)) + " orbits", cx.orbit_count(d), f.orbit_counts[d]));
        auto got = stab_multiset(cx, d);
        out.push_back({std::string(dim_name(d)) + " stabilizers", got == f.stabilizers[d],
                       expect_str(multiset_str(got), multiset_str(f.stabilizers[d]))});
    }
    return out;
}

std::vector<CheckItem> check_euler(const GammaComplex& cx, const Fixture& f)
{
    std::vector<CheckItem> out;
    Rat chi = equivariant_euler_characteristic(cx);
    out.push_back({"equivariant Euler characteristic", chi == 0, "chi = " + chi.get_str()});
    auto got = euler_terms(cx);
    std::sort(got.begin(), got.end());
    auto want = f.chi_summands();
    std::string detail = std::to_string(got.size()) + " summands";
    if (got != want) detail += ", expected " + std::to_string(want.size()) + " with a different multiset";
    out.push_back({"Euler summands", got == want, detail});
    return out;
}

std::vector<CheckItem> check_d1(const SpectralPages& z, const Fixture& f)
{
    std::vector<CheckItem> out;
    if (f.bottom_unit_divisors) {
        out.push_back(int_item("d1_1,0 unit divisors", unit_divisor_count(z.d1[1][0]), (*f.bottom_unit_divisors)[0]));
        out.push_back(int_item("d1_2,0 unit divisors", unit_divisor_count(z.d1[2][0]), (*f.bottom_unit_divisors)[1]));
    }
    for (auto& r : f.primary_ranks) {
        std::string name = "d1_1," + std::to_string(r.q) + " " + std::to_string(r.prime) + "-primary rank";
        if (r.q > z.q_max) {
            out.push_back({name, true, "skipped above q_max"});
            continue;
        }
        int got = primary_rank(z.d1[1][r.q], generator_orders(z.e1[0][r.q]), generator_orders(z.e1[1][r.q]), r.prime);
        out.push_back(int_item(name, got, r.rank));
    }
    return out;
}

std::vector<CheckItem> check_d2(const std::map<CoeffRing, SpectralPages>& runs, const Fixture& f)
{
    std::vector<CheckItem> out;
    for (auto& e : f.d2) {
        std::string tag = "d2 over " + coeff_name(e.coeff);
        const SpectralPages* P = find_run(runs, e.coeff);
        if (!P || !P->has_d2) {
            out.push_back({tag, false, "no run"});
            continue;
        }
        if (e.image) out.push_back(group_item(tag + " image", P->d2_image(), *e.image));
        if (e.kernel) out.push_back(group_item(tag + " kernel", P->e3_20.group, *e.kernel));
        auto any = [&](auto pred) { return std::any_of(P->d2_trace.begin(), P->d2_trace.end(), pred); };
        if (e.primitive)
            out.push_back({tag + " primitive generator image", any([](const D2Trace& t) { return t.primitive; }), ""});
        if (e.zero_generator)
            out.push_back({tag + " generator with zero image", any([](const D2Trace& t) { return t.order == 1; }), ""});
        if (e.has_order)
            out.push_back({tag + " generator image of order " + std::to_string(e.has_order),
                           any([&](const D2Trace& t) { return t.order == e.has_order; }), ""});
    }
    return out;
}

std::vector<CheckItem> check_pages(const std::map<CoeffRing, SpectralPages>& runs, const Fixture& f)
{
    std::vector<CheckItem> out;
    for (auto& e : f.pages) {
        std::string name = "E" + (e.page == 3 ? std::string("inf") : std::to_string(e.page)) + "_" +
                           std::to_string(e.p) + "," + std::to_string(e.q) + " over " + coeff_name(e.coeff);
        const SpectralPages* P = find_run(runs, e.coeff);
        if (!P || e.q > P->q_max) {
            out.push_back({name, false, "no run"});
            continue;
        }
        FgAbelianGroup got = e.page == 1   ? P->e1[e.p][e.q].normal_form()
                             : e.page == 2 ? P->e2_group(e.p, e.q)
                                           : P->e_infinity(e.p, e.q);
        out.push_back(group_item(name, got, e.group));
    }
    return out;
}

std::vector<CheckItem> check_homology(const std::vector<ExtensionResult>& h, const Fixture& f)
{
    std::vector<CheckItem> out;
    for (auto& e : h) {
        std::string name = "H_" + std::to_string(e.q);
        out.push_back({name + " unique", e.unique(), std::to_string(e.survivors.size()) + " survivors"});
        if (auto want = f.expected_homology(e.q)) out.push_back(group_item(name, e.group(), *want));
        if (e.q == 2 && !f.h2_listed_candidates.empty()) {
            bool listed = std::find(f.h2_listed_candidates.begin(), f.h2_listed_candidates.end(), e.group()) !=
                          f.h2_listed_candidates.end();
            out.push_back({"H_2 among listed candidates", listed, e.group().str()});
        }
    }
    return out;
}

std::vector<CheckItem> check_mod_p(const std::map<CoeffRing, SpectralPages>& runs, const Fixture& f)
{
    std::vector<CheckItem> out;
    for (auto& [c, e] : f.mod_p) {
        const SpectralPages* P = find_run(runs, c);
        if (!P) {
            out.push_back({"mod-p dimensions over " + coeff_name(c), false, "no run"});
            continue;
        }
        for (int q = 1; q <= P->q_max; ++q)
            if (auto want = e.dimension(q))
                out.push_back(int_item("dim H_" + std::to_string(q) + " over " + coeff_name(c), mod_p_dimension(*P, q),
                                       *want));
    }
    return out;
}

std::vector<CheckItem> check_low_degree(const SpectralPages& z, const Fixture& f)
{
    if (!f.abelianization) return {};
    try {
        auto r = low_degree_check(z, *f.abelianization);
        return {{"low-degree sequence", true,
                 r.e_inf_01.str() + " -> " + r.abelianization.str() + " -> " + r.e_inf_10.str()}};
    } catch (const CheckFailed& e) {
        return {{"low-degree sequence", false, e.what()}};
    }
}

std::vector<CheckItem> check_structural(const Pipeline& p)
{
    std::vector<CheckItem> out;
    out.push_back(int_item("singular points", (long)singular_points(p.complex.ring).size(), 0));
    Rat chi = equivariant_euler_characteristic(p.complex);
    out.push_back({"equivariant Euler characteristic", chi == 0, "chi = " + chi.get_str()});
    for (auto& [c, P] : p.runs)
        out.push_back({"d2 = 0 over " + coeff_name(c), P.has_d2 && P.d2.is_zero(),
                       std::to_string(P.d2.rows) + "x" + std::to_string(P.d2.cols)});
    return out;
}

// ---- reports ----

json domain_summary(const Pipeline& p)
{
    const GammaComplex& cx = p.complex;
    json orbits = json::array();
    for (int d = 0; d < 3; ++d)
        for (int i = 0; i < cx.orbit_count(d); ++i) {
            const OrbitRep& r = cx.reps[d][i];
            orbits.push_back({{"dim", d}, {"index", i}, {"stabilizer", type_name(r.stab.type)},
                              {"members", (int)r.members.size()}});
        }
    json singular = json::array();
    for (auto& c : singular_points(cx.ring)) {
        Kxy s = c.value();
        singular.push_back({{"x", rat_json(s.x)}, {"y", rat_json(s.y)}});
    }
    json counts = json::array();
    for (int d = 0; d < 3; ++d) counts.push_back(cx.orbit_count(d));
    return {{"m", p.config.m},
            {"cell_convention", convention_name(p.config.convention.value_or(
                                    p.fixture ? p.fixture->convention : CellConvention::Floor))},
            {"orbit_counts", counts},
            {"orbits", orbits},
            {"chi", rat_json(equivariant_euler_characteristic(cx))},
            {"singular_points", singular},
            {"norm_bound", p.floor.certificate.norm_bound}};
}

json homology_report(const Pipeline& p)
{
    json degrees = json::array();
    for (auto& e : p.homology) {
        json cands = json::array();
        for (auto& c : e.candidates) cands.push_back(c.str());
        degrees.push_back({{"q", e.q},
                           {"group", e.group().str()},
                           {"status", e.unique() ? "Unique" : "Ambiguous"},
                           {"candidates", cands}});
    }
    json mod = json::object();
    for (auto& [c, P] : p.runs) {
        if (c != CoeffRing::Z2 && c != CoeffRing::Z3) continue;
        if (std::find(p.config.coeffs.begin(), p.config.coeffs.end(), c) == p.config.coeffs.end()) continue;
        json dims = json::array();
        for (int q = 1; q <= P.q_max; ++q) dims.push_back(mod_p_dimension(P, q));
        mod[coeff_name(c)] = dims;
    }
    json j = {{"m", p.config.m}, {"q_max", p.config.q_max}, {"degrees", degrees}, {"dimensions", mod}};
    j["family"] = p.family ? p.family->to_json() : json();
    return j;
}

namespace {

void write_file(const fs::path& path, const std::string& text)
{
    fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path.string());
    out << text;
}

void export_json(const RunConfig& cfg, const std::string& name, const json& j)
{
    if (cfg.export_dir.empty()) return;
    write_file(fs::path(cfg.export_dir) / name, j.dump(2) + "\n");
}

// Runs body and turns library errors into a diagnostic and exit status 1.
template <class F>
int guarded(std::ostream& out, bool as_json, F body)
{
    try {
        return body();
    } catch (const Error& e) {
        if (as_json) out << json{{"error", e.kind()}, {"message", e.what()}}.dump(2) << "\n";
        else out << "error: " << e.what() << "\n";
        return 1;
    }
}

void print_domain(const Pipeline& p, std::ostream& out)
{
    const GammaComplex& cx = p.complex;
    out << "m = " << p.config.m << "\n";
    out << cx.orbit_count(0) << " vertex orbits, " << cx.orbit_count(1) << " edge orbits, " << cx.orbit_count(2)
        << " face orbits\n";
    for (int d = 0; d < 3; ++d) out << "  " << dim_name(d) << " stabilizers: " << multiset_str(stab_multiset(cx, d)) << "\n";
    out << "chi = " << equivariant_euler_characteristic(cx).get_str() << "\n";
    out << singular_points(cx.ring).size() << " singular points modulo translations\n";
}

std::string coeff_list(const std::vector<CoeffRing>& cs)
{
    std::string s;
    for (auto c : cs) s += (s.empty() ? "" : ",") + coeff_name(c);
    return s;
}

}  // namespace

int cmd_domain(const RunConfig& cfg, std::ostream& out)
{
    return guarded(out, cfg.json, [&] {
        Pipeline p = run_geometry(cfg);
        CheckLedger ledger;
        ledger.add("equivariant Euler characteristic", equivariant_euler_characteristic(p.complex) == 0);
        if (p.fixture) ledger.append(check_geometry(p.complex, *p.fixture));
        json summary = domain_summary(p);
        summary["checks"] = ledger.to_json();
        if (cfg.json) out << summary.dump(2) << "\n";
        else {
            print_domain(p, out);
            ledger.print(out);
        }
        if (!cfg.export_dir.empty()) {
            export_json(cfg, "gamma_complex.json", p.complex.to_json());
            export_json(cfg, "floor_complex.json", p.complex.raw.to_json());
            export_json(cfg, "domain_summary.json", summary);
            write_file(fs::path(cfg.export_dir) / "floor.obj", p.complex.raw.to_obj());
        }
        return ledger.all_pass() ? 0 : 1;
    });
}

int cmd_homology(const RunConfig& cfg, std::ostream& out)
{
    return guarded(out, cfg.json, [&] {
        Pipeline p = run_geometry(cfg);
        run_homology(p);
        json report = homology_report(p);
        if (cfg.json) out << report.dump(2) << "\n";
        else {
            out << "m = " << cfg.m << ", coefficients " << coeff_list(cfg.coeffs) << "\n";
            for (auto& e : p.homology)
                out << "H_" << e.q << " = " << e.group().str() << "  [" << (e.unique() ? "Unique" : "Ambiguous") << "]\n";
            if (p.family) out << "family from q = 3: " << p.family->str() << (p.family->confirmed ? "" : " (tentative)") << "\n";
            else out << "no family detected up to q = " << cfg.q_max << "\n";
            for (auto& [c, P] : p.runs) {
                if (c != CoeffRing::Z2 && c != CoeffRing::Z3) continue;
                if (std::find(cfg.coeffs.begin(), cfg.coeffs.end(), c) == cfg.coeffs.end()) continue;
                out << "dim H_q over " << coeff_name(c) << ", q = 1.." << P.q_max << ":";
                for (int q = 1; q <= P.q_max; ++q) out << " " << mod_p_dimension(P, q);
                out << "\n";
            }
        }
        export_json(cfg, "homology.json", report);
        for (auto& [c, P] : p.runs) export_json(cfg, "pages_" + coeff_name(c) + ".json", P.to_json());
        bool unique = std::all_of(p.homology.begin(), p.homology.end(), [](auto& e) { return e.unique(); });
        return unique ? 0 : 1;
    });
}

int cmd_pages(const RunConfig& cfg, std::ostream& out)
{
    return guarded(out, cfg.json, [&] {
        Pipeline p = run_geometry(cfg);
        for (CoeffRing c : cfg.coeffs) p.runs[c] = run_spectral_sequence(p.complex, c, cfg.q_max);
        if (cfg.json) {
            json j = json::object();
            for (auto& [c, P] : p.runs) j[coeff_name(c)] = P.to_json();
            out << j.dump(2) << "\n";
        } else {
            for (auto& [c, P] : p.runs) {
                out << "coefficients " << coeff_name(c) << "\n";
                for (int page = 2; page <= 3; ++page) {
                    out << (page == 2 ? "E2" : "Einf") << ":\n";
                    for (int q = P.q_max; q >= 0; --q) {
                        out << "  q=" << q << ":";
                        for (int pp = 0; pp < 3; ++pp)
                            out << (pp ? " | " : " ") << (page == 2 ? P.e2_group(pp, q) : P.e_infinity(pp, q)).str();
                        out << "\n";
                    }
                }
                if (P.has_d2) out << "d2 image: " << P.d2_image().str() << "\n";
            }
        }
        for (auto& [c, P] : p.runs) export_json(cfg, "pages_" + coeff_name(c) + ".json", P.to_json());
        return 0;
    });
}

int cmd_verify(const RunConfig& cfg, std::ostream& out)
{
    return guarded(out, cfg.json, [&] {
        Pipeline p = run_geometry(cfg);
        CheckLedger ledger;
        if (cfg.check_homology) run_homology(p);
        if (p.fixture) {
            const Fixture& f = *p.fixture;
            if (cfg.check_geometry) {
                ledger.append(check_geometry(p.complex, f));
                ledger.append(check_euler(p.complex, f));
            }
            if (cfg.check_homology) {
                const SpectralPages& z = p.runs.at(CoeffRing::Z);
                ledger.append(check_d1(z, f));
                ledger.append(check_d2(p.runs, f));
                ledger.append(check_pages(p.runs, f));
                ledger.append(check_homology(p.homology, f));
                if (p.family && f.family) {
                    bool same = true;
                    for (int q = 3; q < 3 + 24; ++q) same = same && p.family->evaluate(q) == f.family->evaluate(q);
                    ledger.add("detected family", same, p.family->str());
                }
                ledger.append(check_mod_p(p.runs, f));
                ledger.append(check_low_degree(z, f));
            }
        } else {
            ledger.append(check_structural(p));
        }
        json j = ledger.to_json();
        j["m"] = cfg.m;
        j["fixture"] = p.fixture.has_value();
        if (cfg.json) out << j.dump(2) << "\n";
        else {
            out << "verify m = " << cfg.m << (p.fixture ? "" : " (structural checks only)") << "\n";
            ledger.print(out);
            if (auto* bad = ledger.first_failure()) out << "first divergence: " << bad->name << "\n";
        }
        export_json(cfg, "verify.json", j);
        return ledger.all_pass() ? 0 : 1;
    });
}

}  // namespace bianchi
