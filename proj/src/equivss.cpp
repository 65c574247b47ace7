#include "bianchi/equivss.hpp"

#include "bianchi/errors.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace bianchi {

namespace {

const char cell_letter[3] = {'v', 'e', 'f'};

nlohmann::json int_json(const Int& x)
{
    if (x.fits_slong_p()) return x.get_si();
    return x.get_str();
}

nlohmann::json vec_json(const IntVec& v)
{
    nlohmann::json a = nlohmann::json::array();
    for (auto& x : v) a.push_back(int_json(x));
    return a;
}

nlohmann::json mat_json(const IntMatrix& m)
{
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows; ++i) {
        nlohmann::json r = nlohmann::json::array();
        for (int j = 0; j < m.cols; ++j) r.push_back(int_json(m.at(i, j)));
        rows.push_back(r);
    }
    return {{"rows", m.rows}, {"cols", m.cols}, {"entries", rows}};
}

Int reduce_mod(const Int& x, const Int& n)
{
    if (n == 0) return x;
    Int r = x % n;
    if (r < 0) r += n;
    return r;
}

// Order of the element with the given coordinates in a cyclic decomposition; 0 for infinite.
Int element_order_in(const IntVec& orders, const IntVec& y)
{
    Int ord = 1;
    for (size_t i = 0; i < y.size(); ++i) {
        if (y[i] == 0) continue;
        if (orders[i] == 0) return 0;
        Int g = gcd(orders[i], y[i]);
        ord = lcm(ord, orders[i] / g);
    }
    return ord;
}

bool primitive_free(const IntVec& orders, const IntVec& y)
{
    Int g = 0;
    for (size_t i = 0; i < y.size(); ++i)
        if (orders[i] == 0) g = gcd(g, y[i]);
    return g == 1;
}

}  // namespace

FgAbelianGroup SpectralPages::e2_group(int p, int q) const
{
    if (p < 0 || p > 2 || q < 0 || q > q_max) return {};
    return e2[p][q].group;
}

FgAbelianGroup SpectralPages::e_infinity(int p, int q) const
{
    if (has_d2 && p == 2 && q == 0) return e3_20.group;
    if (has_d2 && p == 0 && q == 1) return e3_01.group;
    return e2_group(p, q);
}

FgAbelianGroup SpectralPages::d2_image() const
{
    if (!has_d2) return {};
    const Homology& src = e2[2][0];
    int k = (int)src.orders.size();
    IntMatrix rel = IntMatrix::diagonal(src.orders).hcat(e3_20.kernel_basis);
    return cokernel(k, rel).group;
}

nlohmann::json SpectralPages::to_json() const
{
    nlohmann::json j;
    j["coeff"] = coeff_name(coeff);
    j["q_max"] = q_max;
    nlohmann::json e1j = nlohmann::json::array(), e2j = nlohmann::json::array(), d1j = nlohmann::json::array();
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q <= q_max; ++q) {
            const PresentedGroup& g = e1[p][q];
            IntVec orders;
            for (int i = 0; i < g.generators; ++i) orders.push_back(g.relations.at(i, i));
            e1j.push_back({{"p", p}, {"q", q}, {"group", g.normal_form().str()}, {"orders", vec_json(orders)},
                           {"basis", g.labels}});
            e2j.push_back({{"p", p}, {"q", q}, {"group", e2[p][q].group.str()}, {"orders", vec_json(e2[p][q].orders)},
                           {"cycles", mat_json(e2[p][q].cycles)}});
            if (p >= 1) d1j.push_back({{"p", p}, {"q", q}, {"matrix", mat_json(d1[p][q])}});
        }
    j["e1"] = e1j;
    j["d1"] = d1j;
    j["e2"] = e2j;
    if (has_d2) {
        nlohmann::json tr = nlohmann::json::array();
        for (auto& t : d2_trace)
            tr.push_back({{"cycle", vec_json(t.cycle)},
                          {"e1_image", vec_json(t.e1_image)},
                          {"e2_image", vec_json(t.e2_image)},
                          {"order", int_json(t.order)},
                          {"primitive", t.primitive}});
        j["d2"] = {{"matrix", mat_json(d2)}, {"trace", tr}, {"image", d2_image().str()}};
    }
    nlohmann::json e3j = nlohmann::json::array();
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q <= q_max; ++q) e3j.push_back({{"p", p}, {"q", q}, {"group", e_infinity(p, q).str()}});
    j["e3"] = e3j;
    return j;
}

SpectralPages assemble_e1(const GammaComplex& cx, CoeffRing c, int q_max)
{
    SpectralPages P;
    P.coeff = c;
    P.q_max = q_max;
    for (int p = 0; p < 3; ++p) {
        P.e1[p].resize((size_t)q_max + 1);
        for (int q = 0; q <= q_max; ++q) {
            IntVec orders;
            std::vector<std::string> labels;
            for (int i = 0; i < cx.orbit_count(p); ++i) {
                StabBasis b = stab_homology_basis(cx.reps[p][i].stab.type, q, c);
                for (size_t k = 0; k < b.orders.size(); ++k) {
                    orders.push_back(b.orders[k]);
                    labels.push_back(std::string(1, cell_letter[p]) + std::to_string(i) + ":" + b.labels[k]);
                }
            }
            P.e1[p][q] = PresentedGroup::cyclic_sum(orders, labels);
        }
    }
    return P;
}

namespace {

std::vector<int> block_offsets(const GammaComplex& cx, int p, int q, CoeffRing c)
{
    std::vector<int> off;
    int total = 0;
    for (int i = 0; i < cx.orbit_count(p); ++i) {
        off.push_back(total);
        total += (int)stab_homology_basis(cx.reps[p][i].stab.type, q, c).orders.size();
    }
    off.push_back(total);
    return off;
}

IntVec generator_orders(const PresentedGroup& g)
{
    IntVec o;
    for (int i = 0; i < g.generators; ++i) o.push_back(g.relations.at(i, i));
    return o;
}

}  // namespace

void compute_d1(SpectralPages& P, const GammaComplex& cx)
{
    for (int p = 1; p <= 2; ++p) {
        P.d1[p].resize((size_t)P.q_max + 1);
        for (int q = 0; q <= P.q_max; ++q) {
            std::vector<int> src = block_offsets(cx, p, q, P.coeff);
            std::vector<int> tgt = block_offsets(cx, p - 1, q, P.coeff);
            IntMatrix D(tgt.back(), src.back());
            for (int i = 0; i < cx.orbit_count(p); ++i) {
                const OrbitRep& sigma = cx.reps[p][i];
                for (const Incidence& inc : sigma.boundary) {
                    const OrbitRep& tau = cx.reps[p - 1][inc.orbit];
                    InclusionData data = classify_inclusion(sigma.stab, tau.stab, inc.pairing);
                    IntMatrix M = induced_map(data, q, P.coeff);
                    for (int r = 0; r < M.rows; ++r)
                        for (int s = 0; s < M.cols; ++s) D.at(tgt[inc.orbit] + r, src[i] + s) += inc.sign * M.at(r, s);
                }
            }
            IntVec rows = generator_orders(P.e1[p - 1][q]);
            for (int r = 0; r < D.rows; ++r)
                for (int s = 0; s < D.cols; ++s) D.at(r, s) = reduce_mod(D.at(r, s), rows[r]);
            P.d1[p][q] = D;
        }
    }
    for (int q = 0; q <= P.q_max; ++q) {
        IntMatrix comp = P.d1[1][q] * P.d1[2][q];
        IntVec rows = generator_orders(P.e1[0][q]);
        for (int r = 0; r < comp.rows; ++r)
            for (int s = 0; s < comp.cols; ++s)
                if (reduce_mod(comp.at(r, s), rows[r]) != 0)
                    throw NotAComplex("d1 * d1 is nonzero in row q = " + std::to_string(q));
    }
}

void compute_e2(SpectralPages& P)
{
    for (int p = 0; p < 3; ++p) {
        P.e2[p].resize((size_t)P.q_max + 1);
        for (int q = 0; q <= P.q_max; ++q) {
            const PresentedGroup& at = P.e1[p][q];
            IntMatrix d_in = p < 2 ? P.d1[p + 1][q] : IntMatrix(at.generators, 0);
            IntMatrix d_out = p > 0 ? P.d1[p][q] : IntMatrix(0, at.generators);
            PresentedGroup target = p > 0 ? P.e1[p - 1][q] : PresentedGroup::cyclic_sum({});
            P.e2[p][q] = chain_homology(d_in, d_out, at, target);
        }
    }
}

// ---- the section and epsilon ----

namespace {

std::string cusp_key(const std::optional<Kxy>& z)
{
    if (!z) return "inf";
    return z->x.get_str() + "," + z->y.get_str();
}

}  // namespace

bool in_stabilizer(const EpsilonContext& ctx, const PslMatrix& g)
{
    if (ctx.stabilizer.type == StabType::ZxZ) {
        if (!ctx.cusp) throw CosetUndecidable("cusp stabilizer without its cusp");
        auto img = act_boundary(g, *ctx.cusp);
        return img && *img == *ctx.cusp;
    }
    const auto& el = ctx.stabilizer.elements;
    return std::binary_search(el.begin(), el.end(), g);
}

PslMatrix coset_representative(EpsilonContext& ctx, const PslMatrix& g)
{
    if (in_stabilizer(ctx, g)) return PslMatrix::identity(g.ring());
    if (ctx.stabilizer.type == StabType::ZxZ) {
        if (!ctx.memoize) throw CosetUndecidable("coset of an element outside the cusp stabilizer");
        std::string key = cusp_key(act_boundary(g, *ctx.cusp));
        auto it = ctx.memo.find(key);
        if (it == ctx.memo.end()) it = ctx.memo.emplace(key, g).first;
        return it->second;
    }
    if (ctx.stabilizer.elements.empty()) return g;
    std::optional<PslMatrix> best;
    for (const PslMatrix& h : ctx.stabilizer.elements) {
        PslMatrix x = g * h;
        if (!best || (ctx.order == SectionOrder::Min ? x < *best : *best < x)) best = x;
    }
    return *best;
}

PslMatrix epsilon(EpsilonContext& ctx, const PslMatrix& g)
{
    return coset_representative(ctx, g).inverse() * g;
}

// ---- d2 ----

namespace {

struct EdgeTerm {
    Int coef;
    PslMatrix h;
};

struct VertexTerm {
    Int coef;
    PslMatrix a, b;
};

bool divisible(const Int& x, long n) { return n == 0 ? x == 0 : x % n == 0; }

}  // namespace

void compute_d2(SpectralPages& P, const GammaComplex& cx, SectionOrder order)
{
    long n = coeff_modulus(P.coeff);
    const Homology& e20 = P.e2[2][0];
    const Homology& e01 = P.e2[0][1];
    std::vector<int> off = block_offsets(cx, 0, 1, P.coeff);
    int nv = cx.orbit_count(0), ne = cx.orbit_count(1);

    P.d2 = IntMatrix((int)e01.orders.size(), (int)e20.orders.size());
    P.d2_trace.clear();
    for (int k = 0; k < (int)e20.orders.size(); ++k) {
        IntVec z = e20.cycles.column(k);
        // Boundary of the 2-chain, written as e (x) h over the edge representatives.
        std::vector<std::vector<EdgeTerm>> at_edge((size_t)ne);
        for (int f = 0; f < (int)z.size(); ++f) {
            if (z[f] == 0) continue;
            for (const Incidence& inc : cx.reps[2][f].boundary)
                at_edge[inc.orbit].push_back({z[f] * inc.sign, inc.pairing.inverse()});
        }
        // Lift through the resolution as e (x) (1, h), then push to the vertices.
        std::vector<std::vector<VertexTerm>> at_vertex((size_t)nv);
        for (int e = 0; e < ne; ++e) {
            Int sum = 0;
            for (auto& t : at_edge[e]) sum += t.coef;
            if (!divisible(sum, n))
                throw CycleConditionViolated("2-chain is not a cycle at edge orbit " + std::to_string(e));
            for (auto& t : at_edge[e])
                for (const Incidence& inc : cx.reps[1][e].boundary) {
                    PslMatrix gi = inc.pairing.inverse();
                    at_vertex[inc.orbit].push_back({t.coef * inc.sign, gi, gi * t.h});
                }
        }
        IntVec image((size_t)off.back());
        for (int v = 0; v < nv; ++v) {
            const OrbitRep& rep = cx.reps[0][v];
            EpsilonContext ctx;
            ctx.stabilizer = rep.stab;
            ctx.order = order;
            if (rep.stab.type == StabType::ZxZ) {
                ctx.cusp = rep.geometry.at(0).p.z();
                ctx.memoize = true;
            }
            auto terms = at_vertex[v];
            if (order == SectionOrder::Max) std::reverse(terms.begin(), terms.end());
            std::map<PslMatrix, Int> balance;
            IntVec cls = h1_class(rep.stab, PslMatrix::identity(cx.ring), ctx.cusp);
            for (auto& t : terms) {
                PslMatrix ai = t.a.inverse(), bi = t.b.inverse();
                balance[coset_representative(ctx, ai)] -= t.coef;
                balance[coset_representative(ctx, bi)] += t.coef;
                IntVec ca = h1_class(rep.stab, epsilon(ctx, ai), ctx.cusp);
                IntVec cb = h1_class(rep.stab, epsilon(ctx, bi), ctx.cusp);
                for (size_t i = 0; i < cls.size(); ++i) cls[i] += t.coef * (ca[i] - cb[i]);
            }
            for (auto& [rep_elt, c] : balance)
                if (!divisible(c, n))
                    throw CycleConditionViolated("vertex chain is not a cycle at vertex orbit " + std::to_string(v));
            IntVec red = reduce_h1(rep.stab.type, cls, P.coeff);
            for (size_t i = 0; i < red.size(); ++i) image[off[v] + i] = red[i];
        }
        D2Trace tr;
        tr.cycle = z;
        tr.e1_image = image;
        tr.e2_image = e01.coords(image);
        tr.order = element_order_in(e01.orders, tr.e2_image);
        tr.primitive = tr.order == 0 && primitive_free(e01.orders, tr.e2_image);
        for (int i = 0; i < P.d2.rows; ++i) P.d2.at(i, k) = tr.e2_image[i];
        P.d2_trace.push_back(tr);
    }
    int r = (int)e01.orders.size();
    P.e3_20 = chain_homology(IntMatrix((int)e20.orders.size(), 0), P.d2, PresentedGroup::cyclic_sum(e20.orders),
                             PresentedGroup::cyclic_sum(e01.orders));
    P.e3_01 = cokernel(r, IntMatrix::diagonal(e01.orders).hcat(P.d2));
    P.has_d2 = true;
}

SpectralPages run_spectral_sequence(const GammaComplex& cx, CoeffRing c, int q_max)
{
    SpectralPages P = assemble_e1(cx, c, q_max);
    compute_d1(P, cx);
    compute_e2(P);
    if (q_max >= 1) compute_d2(P, cx);
    return P;
}

int primary_rank(const IntMatrix& d, const IntVec& row_orders, const IntVec& col_orders, long p)
{
    std::vector<int> rows, cols;
    for (int i = 0; i < (int)row_orders.size(); ++i)
        if (row_orders[i] == p) rows.push_back(i);
    for (int j = 0; j < (int)col_orders.size(); ++j)
        if (col_orders[j] == p) cols.push_back(j);
    IntMatrix sub((int)rows.size(), (int)cols.size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j) sub.at((int)i, (int)j) = d.at(rows[i], cols[j]);
    return rank_mod_p(sub, p);
}

int unit_divisor_count(const IntMatrix& d)
{
    IntVec e = elementary_divisors(d);
    return (int)std::count_if(e.begin(), e.end(), [](const Int& x) { return abs(x) == 1; });
}

// ---- extensions ----

Int uct_order(const FgAbelianGroup& hq, const FgAbelianGroup& hq_minus_1, long n)
{
    return hq.tensor_order(n) * hq_minus_1.tor_order(n);
}

int mod_p_dimension(const SpectralPages& pages, int n)
{
    int d = 0;
    for (int p = 0; p <= 2 && p <= n; ++p) {
        FgAbelianGroup g = pages.e_infinity(p, n - p);
        if (g.free_rank) throw CheckFailed("free summand in a finite-coefficient run");
        d += (int)g.invariant_factors.size();
    }
    return d;
}

namespace {

Int diagonal_order(const SpectralPages& pages, int n)
{
    Int o = 1;
    for (int p = 0; p <= 2 && p <= n; ++p) o *= pages.e_infinity(p, n - p).torsion_order();
    return o;
}

void add_unique(std::vector<FgAbelianGroup>& v, const FgAbelianGroup& g)
{
    FgAbelianGroup h = g.normal_form();
    if (std::find(v.begin(), v.end(), h) == v.end()) v.push_back(h);
}

}  // namespace

std::vector<ExtensionResult> resolve_extensions(const std::map<CoeffRing, SpectralPages>& runs)
{
    auto zit = runs.find(CoeffRing::Z);
    if (zit == runs.end()) throw CheckFailed("extension problem needs the integral run");
    const SpectralPages& Z = zit->second;
    std::vector<ExtensionResult> out;
    std::vector<FgAbelianGroup> prev = {FgAbelianGroup::free(1)};
    for (int q = 1; q <= Z.q_max; ++q) {
        ExtensionResult res;
        res.q = q;
        std::vector<FgAbelianGroup> cands = {Z.e_infinity(0, q).normal_form()};
        for (int p = 1; p <= 2 && p <= q; ++p) {
            std::vector<FgAbelianGroup> next;
            for (auto& c : cands)
                for (auto& g : group_extension_candidates(c, Z.e_infinity(p, q - p))) add_unique(next, g);
            cands = next;
        }
        res.candidates = cands;
        for (auto& c : cands) {
            bool ok = std::any_of(prev.begin(), prev.end(), [&](const FgAbelianGroup& h) {
                for (auto& [ring, pages] : runs) {
                    long n = coeff_modulus(ring);
                    if (n == 0 || q > pages.q_max) continue;
                    if (uct_order(c, h, n) != diagonal_order(pages, q)) return false;
                }
                return true;
            });
            if (ok) res.survivors.push_back(c);
        }
        if (res.survivors.empty())
            throw NoConsistentExtension("no extension of the E-infinity terms matches all coefficient runs in degree " +
                                        std::to_string(q));
        prev = res.survivors;
        out.push_back(res);
    }
    return out;
}

LowDegreeReport low_degree_check(const SpectralPages& z_pages, const PresentedGroup& presentation)
{
    LowDegreeReport r;
    r.abelianization = presentation.normal_form();
    r.e_inf_01 = z_pages.e_infinity(0, 1);
    r.e_inf_10 = z_pages.e_infinity(1, 0);
    auto cands = group_extension_candidates(r.e_inf_01, r.e_inf_10);
    r.consistent = std::find(cands.begin(), cands.end(), r.abelianization) != cands.end();
    if (!r.consistent)
        throw CheckFailed("abelianization " + r.abelianization.str() + " is no extension of " + r.e_inf_10.str() +
                          " by " + r.e_inf_01.str());
    return r;
}

// ---- families ----

FgAbelianGroup HomologyFamily::evaluate(int q) const
{
    if (q < start) throw std::out_of_range("degree below the start of the family");
    int r = start + (q - start) % period;
    int k = (q - start) / period;
    for (auto& b : branches) {
        if (b.residue != r) continue;
        IntVec orders((size_t)b.free_rank, Int(0));
        for (auto& t : b.torsion) {
            int e = t.slope * k + t.offset;
            for (int i = 0; i < e; ++i) orders.push_back(t.order);
        }
        return FgAbelianGroup::from_orders(orders);
    }
    throw std::out_of_range("no branch for residue " + std::to_string(r));
}

std::string HomologyFamily::str() const
{
    std::ostringstream s;
    for (size_t i = 0; i < branches.size(); ++i) {
        const auto& b = branches[i];
        if (i) s << "; ";
        s << "q = " << (period == 1 ? "" : std::to_string(period)) << "k+" << b.residue << ": ";
        std::vector<std::string> parts;
        if (b.free_rank) parts.push_back(b.free_rank == 1 ? "Z" : "Z^" + std::to_string(b.free_rank));
        for (auto& t : b.torsion) {
            if (t.slope == 0 && t.offset == 0) continue;
            std::string base = "Z/" + std::to_string(t.order);
            std::string e;
            if (t.slope == 0) e = std::to_string(t.offset);
            else {
                e = (t.slope == 1 ? "" : std::to_string(t.slope)) + "k";
                if (t.offset) e += "+" + std::to_string(t.offset);
            }
            if (e == "1") parts.push_back(base);
            else if (t.slope == 0) parts.push_back("(" + base + ")^" + e);
            else parts.push_back("(" + base + ")^(" + e + ")");
        }
        if (parts.empty()) parts.push_back("0");
        for (size_t j = 0; j < parts.size(); ++j) s << (j ? " + " : "") << parts[j];
    }
    return s.str();
}

nlohmann::json HomologyFamily::to_json() const
{
    nlohmann::json br = nlohmann::json::array();
    for (auto& b : branches) {
        nlohmann::json t = nlohmann::json::array();
        for (auto& x : b.torsion) t.push_back({{"order", x.order}, {"slope", x.slope}, {"offset", x.offset}});
        br.push_back({{"residue", b.residue}, {"free_rank", b.free_rank}, {"torsion", t}});
    }
    return {{"period", period}, {"start", start}, {"branches", br}, {"confirmed", confirmed}};
}

HomologyFamily HomologyFamily::from_json(const nlohmann::json& j)
{
    HomologyFamily f;
    f.period = j.at("period").get<int>();
    f.start = j.at("start").get<int>();
    if (f.period < 1 || 12 % f.period != 0) throw FormatError("family period must divide 12");
    for (auto& b : j.at("branches")) {
        FamilyBranch br;
        br.residue = b.at("residue").get<int>();
        br.free_rank = b.value("free_rank", 0);
        for (auto& t : b.value("torsion", nlohmann::json::array()))
            br.torsion.push_back({t.at("order").get<long>(), t.value("slope", 0), t.value("offset", 0)});
        f.branches.push_back(br);
    }
    f.confirmed = j.value("confirmed", false);
    return f;
}

std::optional<HomologyFamily> detect_family(const std::vector<FgAbelianGroup>& groups, int start)
{
    int n = (int)groups.size();
    for (int period : {1, 2, 3, 4, 6, 12}) {
        HomologyFamily fam;
        fam.period = period;
        fam.start = start;
        fam.confirmed = true;
        bool fits = true;
        for (int r = 0; r < period && fits; ++r) {
            std::vector<int> idx;
            for (int i = r; i < n; i += period) idx.push_back(i);
            if (idx.size() < 2) {
                fits = false;
                break;
            }
            if (idx.size() < 3) fam.confirmed = false;
            FamilyBranch br;
            br.residue = start + r;
            br.free_rank = groups[idx[0]].free_rank;
            std::set<long> orders;
            std::vector<std::map<long, int>> mult;
            for (int i : idx) {
                if (groups[i].free_rank != br.free_rank) fits = false;
                std::map<long, int> m;
                for (auto& o : groups[i].primary_orders()) {
                    ++m[o.get_si()];
                    orders.insert(o.get_si());
                }
                mult.push_back(m);
            }
            for (long o : orders) {
                int e0 = mult[0][o], slope = mult[1][o] - e0;
                if (slope < 0) fits = false;
                for (size_t k = 0; k < mult.size(); ++k)
                    if (mult[k][o] != e0 + slope * (int)k) fits = false;
                br.torsion.push_back({o, slope, e0});
            }
            fam.branches.push_back(br);
        }
        if (fits) return fam;
    }
    return std::nullopt;
}

}  // namespace bianchi
