#include "bianchi/orbifold.hpp"

#include "bianchi/errors.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace bianchi {

std::string type_name(StabType t)
{
    switch (t) {
    case StabType::Trivial: return "Trivial";
    case StabType::C2: return "C2";
    case StabType::C3: return "C3";
    case StabType::V4: return "V4";
    case StabType::S3: return "S3";
    case StabType::A4: return "A4";
    case StabType::ZxZ: return "ZxZ";
    }
    return "?";
}

StabType type_from_name(const std::string& s)
{
    for (StabType t : {StabType::Trivial, StabType::C2, StabType::C3, StabType::V4, StabType::S3, StabType::A4,
                       StabType::ZxZ})
        if (type_name(t) == s)
            return t;
    if (s == "D2")
        return StabType::V4;
    throw UnknownType("unknown stabilizer type " + s);
}

int type_order(StabType t)
{
    switch (t) {
    case StabType::Trivial: return 1;
    case StabType::C2: return 2;
    case StabType::C3: return 3;
    case StabType::V4: return 4;
    case StabType::S3: return 6;
    case StabType::A4: return 12;
    case StabType::ZxZ: return 0;
    }
    return 0;
}

std::vector<PslMatrix> group_closure(const RingSpec& r, const std::vector<PslMatrix>& gens)
{
    std::set<PslMatrix> els{PslMatrix::identity(r)};
    std::vector<PslMatrix> frontier{PslMatrix::identity(r)};
    while (!frontier.empty()) {
        std::vector<PslMatrix> next;
        for (auto& x : frontier)
            for (auto& g : gens) {
                PslMatrix y = x * g;
                if (els.insert(y).second) {
                    if (els.size() > 12)
                        throw UnboundedStabilizer("stabilizer closure exceeds order 12");
                    next.push_back(y);
                }
            }
        frontier = std::move(next);
    }
    return {els.begin(), els.end()};
}

StabType recognize(const std::vector<PslMatrix>& elements)
{
    size_t n = elements.size();
    auto commutative = [&] {
        for (auto& x : elements)
            for (auto& y : elements)
                if (!(x * y == y * x))
                    return false;
        return true;
    };
    auto exponent2 = [&] {
        for (auto& x : elements)
            if (!(x * x).is_identity())
                return false;
        return true;
    };
    switch (n) {
    case 1: return StabType::Trivial;
    case 2: return StabType::C2;
    case 3: return StabType::C3;
    case 4:
        if (exponent2())
            return StabType::V4;
        break;
    case 6:
        if (!commutative())
            return StabType::S3;
        break;
    case 12:
        if (!commutative())
            return StabType::A4;
        break;
    default: break;
    }
    throw UnknownType("finite stabilizer of order " + std::to_string(n) + " is not on the list");
}

StabilizerInfo finite_stabilizer(const RingSpec& r, std::vector<PslMatrix> elements)
{
    StabilizerInfo info;
    elements.push_back(PslMatrix::identity(r));
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    auto closed = group_closure(r, elements);
    if (closed.size() != elements.size())
        throw OrbitInconsistency("stabilizer element list is not closed");
    info.elements = closed;
    info.type = recognize(closed);
    // Greedy generating set in element order.
    std::vector<PslMatrix> gens;
    std::set<PslMatrix> span{PslMatrix::identity(r)};
    for (auto& g : closed) {
        if (span.count(g))
            continue;
        gens.push_back(g);
        auto c = group_closure(r, gens);
        span = {c.begin(), c.end()};
    }
    info.generators = gens;
    return info;
}

EllipticAxis elliptic_axis(const PslMatrix& g)
{
    long m = g.ring().m;
    EllipticAxis ax;
    Kxy a = g.a.xy(), b = g.b.xy(), c = g.c.xy(), d = g.d.xy();
    Kxy tr = a + d;
    if (tr.y != 0 || tr.x * tr.x >= 4)
        throw OrbitInconsistency("not an elliptic element: " + g.str());
    if (g.c.is_zero()) {
        ax.vertical = true;
        ax.center = kdiv(m, b, a - d);
        return ax;
    }
    ax.center = kdiv(m, d - a, Kxy{2 * c.x, 2 * c.y});
    ax.radius_sq = (4 - tr.x * tr.x) / (4 * knorm(m, c));
    ax.dir = kdiv(m, Kxy{0, 1}, c);
    return ax;
}

namespace {

// s = lambda / mu with mu a positive integer.
void cusp_pair(const RingSpec& r, const Kxy& s, QuadInt& lambda, QuadInt& mu)
{
    auto w = QuadInt::omega_coords(r, s);
    Int n = lcm(w[0].get_den(), w[1].get_den());
    lambda = QuadInt(r, Int(w[0] * n), Int(w[1] * n));
    mu = QuadInt(r, n);
}

QuadInt exact(const QuadInt& u, const Int& n)
{
    if (u.a % n != 0 || u.b % n != 0)
        throw OrbitInconsistency("cusp stabilizer entry is not integral");
    return QuadInt(u.ring, u.a / n, u.b / n);
}

}  // namespace

std::array<PslMatrix, 2> cusp_stabilizer(const RingSpec& r, const Kxy& s)
{
    QuadInt lam, mu;
    cusp_pair(r, s, lam, mu);
    OIdeal I = ideal_from_pair(lam, mu);
    OIdeal J = ideal_product(ideal_conj(I), ideal_conj(I));
    Int n2 = I.norm * I.norm;
    auto basis = ideal_basis(J);
    // Gauss reduction of the lattice basis by norm.
    QuadInt u = basis[0], v = basis[1];
    long m = r.m;
    while (true) {
        if (norm(u) > norm(v))
            std::swap(u, v);
        Rat q = kdot(m, v.xy(), u.xy()) / Rat(norm(u));
        Int k;
        Rat qh = q + Rat(1, 2);
        mpz_fdiv_q(k.get_mpz_t(), qh.get_num_mpz_t(), qh.get_den_mpz_t());
        if (k == 0)
            break;
        v = v - QuadInt(r, k) * u;
        if (norm(v) >= norm(u))
            break;
    }
    std::array<PslMatrix, 2> out;
    int i = 0;
    QuadInt one(r, 1);
    for (auto& t : {u, v}) {
        QuadInt tll = exact(t * lam * lam, n2), tlm = exact(t * lam * mu, n2), tmm = exact(t * mu * mu, n2);
        out[i++] = from_standard({one - tlm, tll, QuadInt(r, 0) - tmm, one + tlm});
    }
    return out;
}

PslMatrix hemisphere_matrix(const Hemisphere& h)
{
    QuadInt a, b;
    if (!solve_unimodular(h.mu, h.lambda, a, b))
        throw InvalidRing("hemisphere pair is not unimodular");
    return PslMatrix(a, b, h.mu, h.lambda);
}

std::optional<HPoint> image_vertex(const PslMatrix& g, const RawVertex& v)
{
    if (v.singular) {
        auto z = act_boundary(g, v.p.z());
        if (!z)
            return std::nullopt;
        return HPoint{z->x, z->y, 0};
    }
    return act_interior(g, v.p);
}

nlohmann::json matrix_json(const PslMatrix& g)
{
    nlohmann::json e = nlohmann::json::array();
    for (const QuadInt* x : {&g.a, &g.b, &g.c, &g.d})
        e.push_back({x->a.get_str(), x->b.get_str()});
    return {{"m", g.ring().m}, {"entries", e}};
}

PslMatrix matrix_from_json(const RingSpec& r, const nlohmann::json& j)
{
    if (j.at("m").get<long>() != r.m)
        throw FormatError("matrix ring tag does not match");
    std::array<QuadInt, 4> q;
    for (int i = 0; i < 4; ++i)
        q[i] = QuadInt(r, Int(j.at("entries").at(i).at(0).get<std::string>()),
                       Int(j.at("entries").at(i).at(1).get<std::string>()));
    return PslMatrix(q[0], q[1], q[2], q[3]);
}

namespace {

bool lex_less(const Kxy& u, const Kxy& v)
{
    return kless(u, v);
}

std::vector<Kxy> points_of(const RawCellComplex& raw, const std::vector<int>& vs)
{
    std::vector<Kxy> out;
    for (int v : vs)
        out.push_back(raw.vertices[v].p.z());
    return out;
}

Kxy lexmin(const std::vector<Kxy>& pts)
{
    return *std::min_element(pts.begin(), pts.end(), lex_less);
}

std::vector<QuadInt> units_mod_sign(const RingSpec& r)
{
    std::vector<QuadInt> out;
    for (auto& u : units(r))
        if (lex_positive(u))
            out.push_back(u);
    std::sort(out.begin(), out.end());
    return out;
}

// A point of the cell strictly above the boundary.
std::optional<HPoint> witness(const RawCellComplex& raw, int dim, const std::vector<int>& vs)
{
    for (int v : vs)
        if (!raw.vertices[v].singular)
            return raw.vertices[v].p;
    if (dim == 1) {
        Kxy a = raw.vertices[vs[0]].p.z(), b = raw.vertices[vs[1]].p.z();
        Kxy mid{(a.x + b.x) / 2, (a.y + b.y) / 2};
        return HPoint{mid.x, mid.y, raw.floor_height(mid, -1)};
    }
    return std::nullopt;
}

// Every g taking the cell onto a floor cell equals (translation) * (one of these).
std::vector<PslMatrix> base_candidates(const RawCellComplex& raw, int dim, const std::vector<int>& vs)
{
    auto w = witness(raw, dim, vs);
    if (!w)
        return {};
    std::vector<int> car = (dim == 0) ? raw.vertex_carriers(vs[0]) : raw.carriers_at(*w);
    std::vector<PslMatrix> out;
    for (auto& u : units_mod_sign(raw.ring)) {
        PslMatrix U = PslMatrix::unit_rotation(u);
        out.push_back(U);
        for (int j : car)
            out.push_back(U * hemisphere_matrix(raw.hemispheres[j]));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool image_points(const RawCellComplex& raw, const PslMatrix& g, const std::vector<int>& vs,
                  std::vector<HPoint>& out)
{
    out.clear();
    for (int v : vs) {
        auto p = image_vertex(g, raw.vertices[v]);
        if (!p)
            return false;
        out.push_back(*p);
    }
    return true;
}

// Vertex ids of the points shifted by k; false if some point is not a floor vertex.
bool lookup_shifted(const RawCellComplex& raw, const std::vector<HPoint>& pts, const Kxy& k, std::vector<int>& ids)
{
    ids.clear();
    for (auto& p : pts) {
        int v = raw.find_vertex(Kxy{p.x + k.x, p.y + k.y});
        if (v < 0 || raw.vertices[v].p.t != p.t)
            return false;
        ids.push_back(v);
    }
    return true;
}

bool is_lattice(const RingSpec& r, const Kxy& k, QuadInt& out)
{
    auto w = QuadInt::omega_coords(r, k);
    if (w[0].get_den() != 1 || w[1].get_den() != 1)
        return false;
    out = QuadInt(r, w[0].get_num(), w[1].get_num());
    return true;
}

std::vector<int> sorted_ids(std::vector<int> v)
{
    std::sort(v.begin(), v.end());
    return v;
}

// All g with g * cell = cell (as a vertex set).
std::vector<PslMatrix> raw_setwise(const RawCellComplex& raw, int dim, const std::vector<int>& vs)
{
    std::vector<PslMatrix> out;
    Kxy an = lexmin(points_of(raw, vs));
    auto target = sorted_ids(vs);
    std::vector<HPoint> pts;
    std::vector<int> ids;
    for (auto& h : base_candidates(raw, dim, vs)) {
        if (!image_points(raw, h, vs, pts))
            continue;
        std::vector<Kxy> zs;
        for (auto& p : pts)
            zs.push_back(p.z());
        Kxy k = an - lexmin(zs);
        QuadInt kq;
        if (!is_lattice(raw.ring, k, kq))
            continue;
        if (!lookup_shifted(raw, pts, k, ids) || sorted_ids(ids) != target)
            continue;
        out.push_back(PslMatrix::translation(kq) * h);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Rat cross2(const Kxy& u, const Kxy& v)
{
    return u.x * v.y - u.y * v.x;
}

// Parameter u of the crossing of the segment a + u (b - a) with the line c + s d.
std::optional<Rat> line_crossing(const Kxy& c, const Kxy& d, const Kxy& a, const Kxy& b)
{
    Kxy e = b - a;
    Rat den = cross2(d, e);
    if (den == 0)
        return std::nullopt;
    return cross2(d, c - a) / den;
}

}  // namespace

std::vector<int> GammaComplex::oriented(int dim, int raw_id) const
{
    if (dim == 0)
        return {raw_id};
    if (dim == 1) {
        int a = raw.edges[raw_id].v0, b = raw.edges[raw_id].v1;
        if (lex_less(raw.vertices[b].p.z(), raw.vertices[a].p.z()))
            std::swap(a, b);
        return {a, b};
    }
    auto bd = raw.faces[raw_id].boundary;
    auto pts = points_of(raw, bd);
    auto it = std::min_element(pts.begin(), pts.end(), lex_less);
    std::rotate(bd.begin(), bd.begin() + (it - pts.begin()), bd.end());
    return bd;
}

Kxy GammaComplex::anchor(int dim, int raw_id) const
{
    return lexmin(points_of(raw, raw.cell_vertices(dim, raw_id)));
}

int GammaComplex::find_cell(int dim, const std::vector<int>& vs) const
{
    if (dim == 0)
        return vs.size() == 1 ? vs[0] : -1;
    if (dim == 1)
        return vs.size() == 2 ? raw.find_edge(vs[0], vs[1]) : -1;
    auto it = face_index_.find(sorted_ids(vs));
    return it == face_index_.end() ? -1 : it->second;
}

void GammaComplex::index_cells()
{
    face_index_.clear();
    for (size_t f = 0; f < raw.faces.size(); ++f)
        face_index_[sorted_ids(raw.faces[f].boundary)] = (int)f;
}

std::vector<int> GammaComplex::fundamental_cells(int dim) const
{
    std::vector<int> out;
    size_t n = dim == 0 ? raw.vertices.size() : dim == 1 ? raw.edges.size() : raw.faces.size();
    for (size_t i = 0; i < n; ++i)
        if (raw.cell_in_region(dim, (int)i) && raw.strip.contains_half_open(anchor(dim, (int)i)))
            out.push_back((int)i);
    return out;
}

std::optional<CellRef> GammaComplex::locate(int dim, int raw_id) const
{
    auto vs = raw.cell_vertices(dim, raw_id);
    QuadInt k = lattice_shift(ring, anchor(dim, raw_id));
    Kxy kk = k.xy();
    std::vector<int> ids;
    for (int v : vs) {
        int w = raw.find_vertex(raw.vertices[v].p.z() - kk);
        if (w < 0)
            return std::nullopt;
        ids.push_back(w);
    }
    int c = find_cell(dim, ids);
    if (c < 0 || located[dim].size() <= (size_t)c || located[dim][c].orbit < 0)
        return std::nullopt;
    CellRef ref = located[dim][c];
    ref.g = PslMatrix::translation(k) * ref.g;
    return ref;
}

std::optional<PslMatrix> find_pairing(const GammaComplex& cx, int dim, int a, int b)
{
    const RawCellComplex& raw = cx.raw;
    auto va = cx.oriented(dim, a), vb = cx.oriented(dim, b);
    if (va.size() != vb.size())
        return std::nullopt;
    Kxy an = lexmin(points_of(raw, vb));
    std::vector<HPoint> pts;
    std::vector<int> ids;
    std::optional<PslMatrix> best;
    for (auto& h : base_candidates(raw, dim, va)) {
        if (!image_points(raw, h, va, pts))
            continue;
        std::vector<Kxy> zs;
        for (auto& p : pts)
            zs.push_back(p.z());
        QuadInt kq;
        if (!is_lattice(raw.ring, an - lexmin(zs), kq))
            continue;
        if (!lookup_shifted(raw, pts, an - lexmin(zs), ids))
            continue;
        bool match = false;
        if (dim == 0 || dim == 1)
            match = ids == vb;
        else
            match = sorted_ids(ids) == sorted_ids(vb);
        if (!match)
            continue;
        PslMatrix g = PslMatrix::translation(kq) * h;
        if (!best || g < *best)
            best = g;
    }
    return best;
}

std::vector<PslMatrix> setwise_stabilizer(const GammaComplex& cx, int dim, int id)
{
    return raw_setwise(cx.raw, dim, cx.raw.cell_vertices(dim, id));
}

StabilizerInfo stabilizer(const GammaComplex& cx, int dim, int id)
{
    const RawCellComplex& raw = cx.raw;
    auto vs = raw.cell_vertices(dim, id);
    if (dim == 0 && raw.vertices[id].singular) {
        auto g = cusp_stabilizer(cx.ring, raw.vertices[id].p.z());
        StabilizerInfo info;
        info.type = StabType::ZxZ;
        info.generators = {g[0], g[1]};
        return info;
    }
    std::vector<PslMatrix> fix;
    std::vector<HPoint> pts;
    for (auto& g : setwise_stabilizer(cx, dim, id)) {
        if (!image_points(raw, g, vs, pts))
            continue;
        bool pointwise = true;
        for (size_t i = 0; i < vs.size(); ++i)
            if (!(pts[i] == raw.vertices[vs[i]].p))
                pointwise = false;
        if (pointwise)
            fix.push_back(g);
    }
    return finite_stabilizer(cx.ring, fix);
}

namespace {

std::vector<std::pair<Rat, Rat>> cell_key(const RawCellComplex& raw, const std::vector<int>& vs)
{
    std::vector<std::pair<Rat, Rat>> key;
    for (int v : vs)
        key.push_back({raw.vertices[v].p.x, raw.vertices[v].p.y});
    std::sort(key.begin(), key.end());
    return key;
}

struct Link {
    int from, to;
    PslMatrix g;   // g * from = to
};

}  // namespace

GammaComplex build_orbits(const RawCellComplex& raw_in)
{
    GammaComplex cx;
    cx.ring = raw_in.ring;
    cx.raw = raw_in;
    cx.index_cells();
    const RawCellComplex& raw = cx.raw;
    const RingSpec& r = cx.ring;

    std::array<std::vector<int>, 3> fund;
    std::array<std::map<int, int>, 3> pos;
    for (int d = 0; d < 3; ++d) {
        fund[d] = cx.fundamental_cells(d);
        for (size_t i = 0; i < fund[d].size(); ++i)
            pos[d][fund[d][i]] = (int)i;
    }
    std::array<std::vector<Link>, 3> links;

    // Normalize a vertex point into the strip and record the link from a fundamental vertex.
    auto link_vertex = [&](int from_v, const HPoint& img, const PslMatrix& g) {
        QuadInt k = lattice_shift(r, img.z());
        Kxy kk = k.xy();
        int w = raw.find_vertex(img.z() - kk);
        if (w < 0 || !pos[0].count(w))
            throw OrbitInconsistency("vertex image is not a floor vertex");
        if (!pos[0].count(from_v))
            return;
        links[0].push_back({pos[0][from_v], pos[0][w], PslMatrix::translation(-k) * g});
    };

    for (int d = 0; d < 3; ++d)
        for (size_t i = 0; i < fund[d].size(); ++i) {
            int c = fund[d][i];
            auto vs = cx.oriented(d, c);
            std::vector<HPoint> pts;
            std::vector<int> ids;
            for (auto& h : base_candidates(raw, d, vs)) {
                if (!image_points(raw, h, vs, pts))
                    continue;
                std::vector<Kxy> zs;
                for (auto& p : pts)
                    zs.push_back(p.z());
                QuadInt k = lattice_shift(r, lexmin(zs));
                Kxy kk = k.xy();
                if (!lookup_shifted(raw, pts, -kk, ids))
                    continue;
                int t = cx.find_cell(d, ids);
                if (t < 0)
                    continue;
                if (!pos[d].count(t))
                    throw OrbitInconsistency("normalized image is not a fundamental cell");
                PslMatrix g = PslMatrix::translation(-k) * h;
                links[d].push_back({(int)i, pos[d][t], g});
                for (size_t j = 0; j < vs.size(); ++j)
                    if (raw.vertices[vs[j]].singular && d > 0) {
                        QuadInt kv = lattice_shift(r, raw.vertices[vs[j]].p.z());
                        int fv = raw.find_vertex(raw.vertices[vs[j]].p.z() - kv.xy());
                        link_vertex(fv, pts[j], h * PslMatrix::translation(kv));
                    }
            }
        }

    for (int d = 0; d < 3; ++d) {
        size_t n = fund[d].size();
        std::vector<std::vector<std::pair<int, PslMatrix>>> adj(n);
        for (auto& l : links[d]) {
            adj[l.from].push_back({l.to, l.g});
            adj[l.to].push_back({l.from, l.g.inverse()});
        }
        std::vector<int> comp(n, -1);
        std::vector<std::vector<int>> comps;
        for (size_t i = 0; i < n; ++i) {
            if (comp[i] >= 0)
                continue;
            std::vector<int> stack{(int)i}, members;
            comp[i] = (int)comps.size();
            while (!stack.empty()) {
                int x = stack.back();
                stack.pop_back();
                members.push_back(x);
                for (auto& [y, g] : adj[x])
                    if (comp[y] < 0) {
                        comp[y] = comp[i];
                        stack.push_back(y);
                    }
            }
            comps.push_back(members);
        }
        // Representative: least sorted vertex key; orbits ordered by their representatives.
        std::vector<std::pair<std::vector<std::pair<Rat, Rat>>, int>> order;
        std::vector<int> rep_of(comps.size());
        for (size_t ci = 0; ci < comps.size(); ++ci) {
            int best = comps[ci][0];
            auto bk = cell_key(raw, raw.cell_vertices(d, fund[d][best]));
            for (int x : comps[ci]) {
                auto k = cell_key(raw, raw.cell_vertices(d, fund[d][x]));
                if (k < bk) {
                    bk = k;
                    best = x;
                }
            }
            rep_of[ci] = best;
            order.push_back({bk, (int)ci});
        }
        std::sort(order.begin(), order.end());
        cx.located[d].assign(d == 0 ? raw.vertices.size() : d == 1 ? raw.edges.size() : raw.faces.size(), CellRef{});
        for (size_t oi = 0; oi < order.size(); ++oi) {
            int ci = order[oi].second;
            int rep = rep_of[ci];
            OrbitRep orb;
            orb.raw = fund[d][rep];
            orb.vertices = cx.oriented(d, orb.raw);
            for (int v : orb.vertices)
                orb.geometry.push_back(raw.vertices[v]);
            // Spread h with h * rep = cell over the orbit.
            std::map<int, PslMatrix> h;
            h.emplace(rep, PslMatrix::identity(r));
            std::vector<int> queue{rep};
            for (size_t qi = 0; qi < queue.size(); ++qi) {
                int x = queue[qi];
                for (auto& [y, g] : adj[x])
                    if (!h.count(y)) {
                        h.emplace(y, g * h.at(x));
                        queue.push_back(y);
                    }
            }
            for (auto& [x, g] : h) {
                int c = fund[d][x];
                orb.members.push_back(c);
                CellRef ref{(int)oi, 1, g};
                if (d > 0) {
                    std::vector<HPoint> pts;
                    image_points(raw, g, orb.vertices, pts);
                    auto target = cx.oriented(d, c);
                    std::vector<int> ids;
                    if (!lookup_shifted(raw, pts, Kxy{0, 0}, ids))
                        throw OrbitInconsistency("orbit map does not land on the cell");
                    if (d == 1) {
                        if (ids == target)
                            ref.sign = 1;
                        else if (ids[0] == target[1] && ids[1] == target[0])
                            ref.sign = -1;
                        else
                            throw OrbitInconsistency("edge orbit map mismatch");
                    } else {
                        auto it = std::find(ids.begin(), ids.end(), target[0]);
                        if (it == ids.end())
                            throw OrbitInconsistency("face orbit map mismatch");
                        std::rotate(ids.begin(), it, ids.end());
                        if (ids == target) {
                            ref.sign = 1;
                        } else {
                            std::reverse(ids.begin() + 1, ids.end());
                            if (ids != target)
                                throw OrbitInconsistency("face orbit map mismatch");
                            ref.sign = -1;
                        }
                    }
                }
                cx.located[d][c] = ref;
            }
            std::sort(orb.members.begin(), orb.members.end());
            orb.stab = stabilizer(cx, d, orb.raw);
            cx.reps[d].push_back(std::move(orb));
        }
    }

    // Boundary incidences of representatives.
    for (auto& orb : cx.reps[1]) {
        const int ends[2] = {orb.vertices[1], orb.vertices[0]};
        const int signs[2] = {1, -1};
        for (int i = 0; i < 2; ++i) {
            auto ref = cx.locate(0, ends[i]);
            if (!ref)
                throw OrbitInconsistency("edge endpoint outside the trusted region");
            orb.boundary.push_back({ref->orbit, signs[i], ref->g});
        }
    }
    for (auto& orb : cx.reps[2]) {
        size_t n = orb.vertices.size();
        for (size_t i = 0; i < n; ++i) {
            int a = orb.vertices[i], b = orb.vertices[(i + 1) % n];
            int e = raw.find_edge(a, b);
            if (e < 0)
                throw OrbitInconsistency("face side is not an edge");
            auto ref = cx.locate(1, e);
            if (!ref)
                throw OrbitInconsistency("face side outside the trusted region");
            auto oe = cx.oriented(1, e);
            int side = oe[0] == a ? 1 : -1;
            orb.boundary.push_back({ref->orbit, side * ref->sign, ref->g});
        }
    }
    return cx;
}

namespace {

struct SplitPoint {
    int a, b;
    Kxy z;
    Rat t;
};

// Fixed point of an edge-reversing element on the edge a-b.
SplitPoint edge_split(const RawCellComplex& raw, const RawEdge& e, const PslMatrix& g)
{
    long m = raw.ring.m;
    EllipticAxis ax = elliptic_axis(g);
    Kxy a = raw.vertices[e.v0].p.z(), b = raw.vertices[e.v1].p.z();
    if (e.carriers.empty())
        throw DegenerateArrangement("edge without carrier");
    const Hemisphere& S = raw.hemispheres[e.carriers[0]];
    Rat u;
    if (ax.vertical) {
        Kxy d = b - a, w = ax.center - a;
        if (cross2(d, w) != 0)
            throw DegenerateArrangement("vertical axis misses the edge");
        u = d.x != 0 ? w.x / d.x : w.y / d.y;
    } else {
        auto c = line_crossing(ax.center, ax.dir, a, b);
        if (c) {
            u = *c;
        } else {
            // Edge projects onto the axis line: equal heights on both circles.
            Kxy d = b - a;
            Rat num = ax.radius_sq - knorm(m, a - ax.center) - S.radius_sq + knorm(m, a - S.center);
            Rat den = 2 * kdot(m, S.center - ax.center, d);
            if (den == 0)
                throw DegenerateArrangement("axis and edge are on one circle");
            u = num / den;
        }
    }
    if (u <= 0 || u >= 1)
        throw DegenerateArrangement("reversing element has no fixed point inside the edge");
    Kxy z{a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)};
    return {e.v0, e.v1, z, S.height(m, z)};
}

// Subdivide face f so its stabilizer g no longer acts on it; true if changed.
bool split_face_by(RawCellComplex& raw, int f, const PslMatrix& g)
{
    long m = raw.ring.m;
    EllipticAxis ax = elliptic_axis(g);
    const Hemisphere S = raw.hemispheres[raw.faces[f].hemi];
    auto bd = raw.faces[f].boundary;
    size_t n = bd.size();
    if (!ax.vertical && ax.center == S.center && ax.radius_sq == S.radius_sq) {
        // Axis lies on the face: cut along it.
        std::vector<std::pair<int, int>> ends;   // (vertex id or -1, side index)
        std::vector<Kxy> pts;
        for (size_t i = 0; i < n; ++i) {
            Kxy p = raw.vertices[bd[i]].p.z(), q = raw.vertices[bd[(i + 1) % n]].p.z();
            auto u = line_crossing(ax.center, ax.dir, p, q);
            if (!u || *u < 0 || *u >= 1)
                continue;
            Kxy z{p.x + *u * (q.x - p.x), p.y + *u * (q.y - p.y)};
            if (std::find(pts.begin(), pts.end(), z) != pts.end())
                continue;
            pts.push_back(z);
            ends.push_back({*u == 0 ? bd[i] : -1, (int)i});
        }
        if (pts.size() != 2)
            throw DegenerateArrangement("axis does not cut the face in a chord");
        int ids[2];
        for (int k = 0; k < 2; ++k) {
            if (ends[k].first >= 0) {
                ids[k] = ends[k].first;
                continue;
            }
            int i = ends[k].second;
            ids[k] = raw.add_vertex(pts[k], S.height(m, pts[k]), false);
            raw.insert_on_side(bd[i], bd[(i + 1) % n], ids[k]);
        }
        raw.split_face(f, ids[0], ids[1]);
        return true;
    }
    // Axis crosses the face at one point: fan around it.
    Kxy q;
    if (ax.vertical) {
        q = ax.center;
    } else {
        Kxy w = ax.center - S.center;
        Rat den = 2 * kdot(m, w, ax.dir);
        if (den == 0)
            throw DegenerateArrangement("axis misses the face hemisphere");
        Rat s = (S.radius_sq - knorm(m, w) - ax.radius_sq) / den;
        q = ax.center + Kxy{s * ax.dir.x, s * ax.dir.y};
    }
    int qv = raw.find_vertex(q);
    if (qv < 0) {
        for (size_t i = 0; i < n && qv < 0; ++i) {
            Kxy p = raw.vertices[bd[i]].p.z(), r = raw.vertices[bd[(i + 1) % n]].p.z();
            if (cross2(r - p, q - p) == 0 && kdot(m, q - p, r - p) > 0 && kdot(m, q - r, p - r) > 0) {
                qv = raw.add_vertex(q, S.height(m, q), false);
                raw.insert_on_side(bd[i], bd[(i + 1) % n], qv);
            }
        }
    }
    if (qv < 0) {
        for (size_t i = 0; i < n; ++i) {
            Kxy p = raw.vertices[bd[i]].p.z(), r = raw.vertices[bd[(i + 1) % n]].p.z();
            if (cross2(r - p, q - p) <= 0)
                throw DegenerateArrangement("rotation centre outside the face");
        }
        qv = raw.add_vertex(q, S.height(m, q), false);
    }
    bd = raw.faces[f].boundary;
    n = bd.size();
    std::vector<std::vector<int>> parts;
    for (size_t i = 0; i < n; ++i) {
        int a = bd[i], b = bd[(i + 1) % n];
        if (a == qv || b == qv)
            continue;
        Kxy p = raw.vertices[a].p.z(), r = raw.vertices[b].p.z();
        if (cross2(p - q, r - q) == 0)
            continue;
        parts.push_back({qv, a, b});
    }
    raw.replace_face(f, parts);
    return true;
}

}  // namespace

GammaComplex rigidify(const GammaComplex& cx_in)
{
    RawCellComplex raw = cx_in.raw;
    int subdivisions = 0;
    for (int round = 0; round < 64; ++round) {
        std::vector<SplitPoint> splits;
        for (size_t e = 0; e < raw.edges.size(); ++e) {
            if (!raw.cell_in_region(1, (int)e))
                continue;
            const RawEdge& ed = raw.edges[e];
            for (auto& g : raw_setwise(raw, 1, {ed.v0, ed.v1})) {
                auto img = image_vertex(g, raw.vertices[ed.v0]);
                if (img && img->z() == raw.vertices[ed.v1].p.z()) {
                    splits.push_back(edge_split(raw, ed, g));
                    break;
                }
            }
        }
        if (!splits.empty()) {
            for (auto& s : splits) {
                int v = raw.add_vertex(s.z, s.t, false);
                raw.insert_on_side(s.a, s.b, v);
            }
            subdivisions += (int)splits.size();
            raw.rebuild();
            continue;
        }
        bool changed = false;
        size_t nf = raw.faces.size();
        for (size_t f = 0; f < nf; ++f) {
            if (!raw.cell_in_region(2, (int)f))
                continue;
            // A rotation whose axis crosses the face fixes a point every stabilizer element fixes.
            const Hemisphere& S = raw.hemispheres[raw.faces[f].hemi];
            std::optional<PslMatrix> pick;
            for (auto& g : raw_setwise(raw, 2, raw.faces[f].boundary)) {
                if (g.is_identity())
                    continue;
                EllipticAxis ax = elliptic_axis(g);
                bool in_face = !ax.vertical && ax.center == S.center && ax.radius_sq == S.radius_sq;
                if (!pick || !in_face)
                    pick = g;
                if (!in_face)
                    break;
            }
            if (pick) {
                split_face_by(raw, (int)f, *pick);
                ++subdivisions;
                changed = true;
            }
        }
        if (!changed)
            break;
        raw.rebuild();
    }
    GammaComplex out = build_orbits(raw);
    out.subdivisions = cx_in.subdivisions + subdivisions;
    for (int d = 1; d < 3; ++d)
        for (auto& orb : out.reps[d])
            for (auto& g : setwise_stabilizer(out, d, orb.raw)) {
                std::vector<HPoint> pts;
                image_points(out.raw, g, orb.vertices, pts);
                for (size_t i = 0; i < pts.size(); ++i)
                    if (!(pts[i] == orb.geometry[i].p))
                        throw OrbitInconsistency("stabilizer still moves a cell after subdivision");
            }
    return out;
}

namespace {

using Seg = std::pair<Kxy, Kxy>;

Seg make_seg(const Kxy& a, const Kxy& b)
{
    return lex_less(b, a) ? Seg{b, a} : Seg{a, b};
}

struct SegLess {
    bool operator()(const Seg& u, const Seg& v) const
    {
        if (!(u.first == v.first))
            return lex_less(u.first, v.first);
        return lex_less(u.second, v.second);
    }
};

using SegSet = std::set<Seg, SegLess>;

bool on_segment(const Kxy& p, const Kxy& a, const Kxy& b)
{
    if (cross2(b - a, p - a) != 0)
        return false;
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

bool on_boundary(const std::vector<Kxy>& poly, const Kxy& p)
{
    for (size_t i = 0; i < poly.size(); ++i)
        if (on_segment(p, poly[i], poly[(i + 1) % poly.size()]))
            return true;
    return false;
}

bool strictly_inside(const std::vector<Kxy>& poly, const Kxy& p)
{
    for (size_t i = 0; i < poly.size(); ++i)
        if (cross2(poly[(i + 1) % poly.size()] - poly[i], p - poly[i]) <= 0)
            return false;
    return true;
}

// Part of the segment a-b inside the convex ccw polygon, if it has positive length.
std::optional<Seg> clip_segment(const std::vector<Kxy>& poly, const Kxy& a, const Kxy& b)
{
    Rat lo = 0, hi = 1;
    Kxy d = b - a;
    for (size_t i = 0; i < poly.size(); ++i) {
        Kxy p = poly[i], e = poly[(i + 1) % poly.size()] - p;
        // Inside means cross(e, z - p) >= 0.
        Rat num = cross2(e, a - p), den = cross2(e, d);
        if (den == 0) {
            if (num < 0)
                return std::nullopt;
            continue;
        }
        Rat u = -num / den;
        if (den > 0)
            lo = std::max(lo, u);
        else
            hi = std::min(hi, u);
    }
    if (lo >= hi)
        return std::nullopt;
    return Seg{Kxy{a.x + lo * d.x, a.y + lo * d.y}, Kxy{a.x + hi * d.x, a.y + hi * d.y}};
}

// Chord of the polygon along the line through p with direction d, unless it runs along a side.
std::optional<Seg> line_chord(const std::vector<Kxy>& poly, const Kxy& p, const Kxy& d)
{
    Rat big = 0;
    for (auto& q : poly)
        big = std::max({big, Rat(abs(q.x - p.x)), Rat(abs(q.y - p.y))});
    big = 2 * big + 2;
    auto c = clip_segment(poly, Kxy{p.x - big * d.x, p.y - big * d.y}, Kxy{p.x + big * d.x, p.y + big * d.y});
    if (!c)
        return std::nullopt;
    Kxy mid{(c->first.x + c->second.x) / 2, (c->first.y + c->second.y) / 2};
    if (!strictly_inside(poly, mid))
        return std::nullopt;
    return c;
}

// Walls of the lattice translates of the strip that cross the polygon.
SegSet wall_cuts(const Strip& strip, bool half, const std::vector<Kxy>& poly)
{
    SegSet out;
    Rat h = strip.im_hi - strip.im_lo;
    Rat x0 = poly[0].x, x1 = x0, y0 = poly[0].y, y1 = y0;
    for (auto& q : poly) {
        x0 = std::min(x0, q.x);
        x1 = std::max(x1, q.x);
        y0 = std::min(y0, q.y);
        y1 = std::max(y1, q.y);
    }
    auto floor_int = [](const Rat& r) {
        Int k;
        mpz_fdiv_q(k.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
        return k;
    };
    for (Int n = floor_int(y0 / h); n * h <= y1; ++n) {
        Rat y = Rat(n) * h;
        if (y > y0 && y < y1)
            if (auto c = line_chord(poly, Kxy{x0, y}, Kxy{1, 0}))
                out.insert(make_seg(c->first, c->second));
        Rat off = (half && n % 2 != 0) ? Rat(1, 2) : Rat(0);
        for (Int j = floor_int(x0 - off); Rat(j) + off <= x1; ++j) {
            Rat x = Rat(j) + off;
            if (!(x > x0 && x < x1))
                continue;
            auto c = line_chord(poly, Kxy{x, y0}, Kxy{0, 1});
            if (!c)
                continue;
            Rat lo = std::max(c->first.y, y), hi = std::min(c->second.y, Rat(y + h));
            if (lo < hi)
                out.insert(make_seg(Kxy{x, lo}, Kxy{x, hi}));
        }
    }
    return out;
}

// Split a convex polygon by the segment's chords until no chord crosses a piece.
std::vector<std::vector<Kxy>> split_polygon(const std::vector<Kxy>& poly, const SegSet& cuts)
{
    std::vector<std::vector<Kxy>> pieces{poly};
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& s : cuts) {
            for (size_t i = 0; i < pieces.size() && !changed; ++i) {
                auto& pc = pieces[i];
                auto c = clip_segment(pc, s.first, s.second);
                if (!c)
                    continue;
                Kxy mid{(c->first.x + c->second.x) / 2, (c->first.y + c->second.y) / 2};
                if (!strictly_inside(pc, mid) || !on_boundary(pc, c->first) || !on_boundary(pc, c->second))
                    continue;
                // Walk the boundary, inserting the chord ends.
                std::vector<Kxy> ring;
                for (size_t k = 0; k < pc.size(); ++k) {
                    Kxy p = pc[k], q = pc[(k + 1) % pc.size()];
                    ring.push_back(p);
                    std::vector<Kxy> on;
                    for (const Kxy* e : {&c->first, &c->second})
                        if (on_segment(*e, p, q) && !(*e == p) && !(*e == q))
                            on.push_back(*e);
                    std::sort(on.begin(), on.end(), [&](const Kxy& u, const Kxy& v) {
                        return kdot(1, u - p, q - p) < kdot(1, v - p, q - p);
                    });
                    ring.insert(ring.end(), on.begin(), on.end());
                }
                auto ia = std::find(ring.begin(), ring.end(), c->first) - ring.begin();
                auto ib = std::find(ring.begin(), ring.end(), c->second) - ring.begin();
                if (ia > ib)
                    std::swap(ia, ib);
                std::vector<Kxy> p1(ring.begin() + ia, ring.begin() + ib + 1);
                std::vector<Kxy> p2(ring.begin() + ib, ring.end());
                p2.insert(p2.end(), ring.begin(), ring.begin() + ia + 1);
                pieces[i] = p1;
                pieces.push_back(p2);
                changed = true;
            }
            if (changed)
                break;
        }
    }
    for (auto& s : cuts)
        for (auto& pc : pieces) {
            auto c = clip_segment(pc, s.first, s.second);
            if (!c)
                continue;
            Kxy mid{(c->first.x + c->second.x) / 2, (c->first.y + c->second.y) / 2};
            if (strictly_inside(pc, mid))
                throw DegenerateArrangement("wall cut ends inside a face");
        }
    return pieces;
}

HPoint lift(const Hemisphere& S, long m, const Kxy& z)
{
    return HPoint{z.x, z.y, S.height(m, z)};
}

std::optional<Kxy> image_point(const PslMatrix& g, const HPoint& p)
{
    if (p.t == 0)
        return act_boundary(g, p.z());
    return act_interior(g, p).z();
}

// Add every vertex lying inside a side of a face to that face's boundary.
void close_t_junctions(RawCellComplex& raw)
{
    std::map<std::pair<long, long>, std::vector<int>> grid;
    const double cell = 1.0 / 8;
    auto key = [&](double x, double y) { return std::pair<long, long>{(long)std::floor(x / cell), (long)std::floor(y / cell)}; };
    for (size_t v = 0; v < raw.vertices.size(); ++v)
        grid[key(raw.vertices[v].p.x.get_d(), raw.vertices[v].p.y.get_d())].push_back((int)v);
    for (auto& f : raw.faces) {
        std::vector<int> out;
        size_t n = f.boundary.size();
        for (size_t i = 0; i < n; ++i) {
            int a = f.boundary[i], b = f.boundary[(i + 1) % n];
            Kxy p = raw.vertices[a].p.z(), q = raw.vertices[b].p.z();
            out.push_back(a);
            auto k0 = key(std::min(p.x.get_d(), q.x.get_d()), std::min(p.y.get_d(), q.y.get_d()));
            auto k1 = key(std::max(p.x.get_d(), q.x.get_d()), std::max(p.y.get_d(), q.y.get_d()));
            std::vector<int> on;
            for (long gx = k0.first - 1; gx <= k1.first + 1; ++gx)
                for (long gy = k0.second - 1; gy <= k1.second + 1; ++gy) {
                    auto it = grid.find({gx, gy});
                    if (it == grid.end())
                        continue;
                    for (int v : it->second) {
                        Kxy z = raw.vertices[v].p.z();
                        if (v != a && v != b && on_segment(z, p, q))
                            on.push_back(v);
                    }
                }
            std::sort(on.begin(), on.end(), [&](int u, int w) {
                return kdot(1, raw.vertices[u].p.z() - p, q - p) < kdot(1, raw.vertices[w].p.z() - p, q - p);
            });
            on.erase(std::unique(on.begin(), on.end()), on.end());
            out.insert(out.end(), on.begin(), on.end());
        }
        f.boundary = out;
    }
}

}  // namespace

RawCellComplex cut_along_walls(const RawCellComplex& raw_in)
{
    GammaComplex cx;
    cx.ring = raw_in.ring;
    cx.raw = raw_in;
    cx.index_cells();
    const RawCellComplex& raw = cx.raw;
    const RingSpec& r = cx.ring;
    long m = r.m;

    auto fund = cx.fundamental_cells(2);
    std::map<int, int> pos;
    for (size_t i = 0; i < fund.size(); ++i)
        pos[fund[i]] = (int)i;
    auto polygon = [&](int f) { return points_of(raw, raw.faces[f].boundary); };

    // Fundamental parent of any face: (index, translation k with face = parent + k).
    auto parent = [&](int f) -> std::optional<std::pair<int, QuadInt>> {
        QuadInt k = lattice_shift(r, cx.anchor(2, f));
        std::vector<int> ids;
        for (int v : raw.faces[f].boundary) {
            int w = raw.find_vertex(raw.vertices[v].p.z() - k.xy());
            if (w < 0)
                return std::nullopt;
            ids.push_back(w);
        }
        int c = cx.find_cell(2, ids);
        if (c < 0 || !pos.count(c))
            return std::nullopt;
        return std::pair<int, QuadInt>{pos[c], k};
    };

    std::vector<SegSet> cuts(fund.size());
    for (size_t i = 0; i < fund.size(); ++i)
        cuts[i] = wall_cuts(raw.strip, r.half(), polygon(fund[i]));

    struct Pairing {
        int from, to;
        PslMatrix g;
    };
    std::vector<Pairing> pairings;
    for (size_t i = 0; i < fund.size(); ++i) {
        auto vs = raw.faces[fund[i]].boundary;
        std::vector<HPoint> pts;
        std::vector<int> ids;
        for (auto& h : base_candidates(raw, 2, vs)) {
            if (!image_points(raw, h, vs, pts))
                continue;
            std::vector<Kxy> zs;
            for (auto& p : pts)
                zs.push_back(p.z());
            QuadInt k = lattice_shift(r, lexmin(zs));
            if (!lookup_shifted(raw, pts, -k.xy(), ids))
                continue;
            int t = cx.find_cell(2, ids);
            if (t < 0 || !pos.count(t))
                continue;
            pairings.push_back({(int)i, pos[t], PslMatrix::translation(-k) * h});
        }
    }

    size_t total = 0;
    for (auto& c : cuts)
        total += c.size();
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& pr : pairings) {
            const Hemisphere& S = raw.hemispheres[raw.faces[fund[pr.from]].hemi];
            std::vector<Seg> add;
            for (auto& s : cuts[pr.from]) {
                auto a = image_point(pr.g, lift(S, m, s.first));
                auto b = image_point(pr.g, lift(S, m, s.second));
                if (!a || !b)
                    throw OrbitInconsistency("face pairing sends a cut to infinity");
                add.push_back(make_seg(*a, *b));
            }
            for (auto& s : add)
                if (cuts[pr.to].insert(s).second) {
                    changed = true;
                    if (++total > 100000)
                        throw DegenerateArrangement("wall cuts do not close up under face pairings");
                }
        }
    }

    RawCellComplex out = raw_in;
    size_t nf = out.faces.size();
    for (size_t f = 0; f < nf; ++f) {
        auto par = parent((int)f);
        if (!par)
            continue;
        Kxy k = par->second.xy();
        SegSet local;
        for (auto& s : cuts[par->first])
            local.insert(make_seg(s.first + k, s.second + k));
        if (local.empty())
            continue;
        const Hemisphere& S = out.hemispheres[out.faces[f].hemi];
        auto pieces = split_polygon(points_of(out, out.faces[f].boundary), local);
        if (pieces.size() == 1)
            continue;
        std::vector<std::vector<int>> parts;
        for (auto& pc : pieces) {
            std::vector<int> ids;
            for (auto& z : pc) {
                int v = out.find_vertex(z);
                ids.push_back(v >= 0 ? v : out.add_vertex(z, S.height(m, z), false));
            }
            parts.push_back(ids);
        }
        out.replace_face((int)f, parts);
    }
    close_t_junctions(out);
    out.rebuild();
    return out;
}

GammaComplex build_gamma_complex(const FloorResult& floor, CellConvention conv)
{
    RawCellComplex raw = extract_cells(floor);
    if (conv == CellConvention::StripWalls)
        raw = cut_along_walls(raw);
    return rigidify(build_orbits(raw));
}

std::vector<Rat> euler_terms(const GammaComplex& cx)
{
    std::vector<Rat> out;
    for (int d = 0; d < 3; ++d)
        for (auto& orb : cx.reps[d]) {
            int n = type_order(orb.stab.type);
            if (n == 0)
                continue;
            out.push_back(Rat(d % 2 ? -1 : 1, n));
        }
    return out;
}

Rat equivariant_euler_characteristic(const GammaComplex& cx)
{
    Rat s = 0;
    for (auto& t : euler_terms(cx))
        s += t;
    return s;
}

nlohmann::json GammaComplex::to_json() const
{
    nlohmann::json j;
    j["m"] = ring.m;
    j["subdivisions"] = subdivisions;
    static const char* names[3] = {"vertices", "edges", "faces"};
    for (int d = 0; d < 3; ++d) {
        nlohmann::json arr = nlohmann::json::array();
        for (auto& orb : reps[d]) {
            nlohmann::json o;
            nlohmann::json pts = nlohmann::json::array();
            for (auto& v : orb.geometry)
                pts.push_back({{"x", rat_json(v.p.x)}, {"y", rat_json(v.p.y)}, {"t", rat_json(v.p.t)},
                               {"singular", v.singular}});
            o["points"] = pts;
            o["stabilizer"] = {{"type", type_name(orb.stab.type)}};
            nlohmann::json gens = nlohmann::json::array();
            for (auto& g : orb.stab.generators)
                gens.push_back(matrix_json(g));
            o["stabilizer"]["generators"] = gens;
            nlohmann::json els = nlohmann::json::array();
            for (auto& g : orb.stab.elements)
                els.push_back(matrix_json(g));
            o["stabilizer"]["elements"] = els;
            o["members"] = (int)orb.members.size();
            nlohmann::json bd = nlohmann::json::array();
            for (auto& inc : orb.boundary)
                bd.push_back({{"orbit", inc.orbit}, {"sign", inc.sign}, {"pairing", matrix_json(inc.pairing)}});
            o["boundary"] = bd;
            arr.push_back(o);
        }
        j[names[d]] = arr;
    }
    return j;
}

GammaComplex GammaComplex::from_json(const nlohmann::json& j)
{
    GammaComplex cx;
    try {
        cx.ring = RingSpec::make(j.at("m").get<long>());
        cx.raw.ring = cx.ring;
        cx.subdivisions = j.at("subdivisions").get<int>();
        static const char* names[3] = {"vertices", "edges", "faces"};
        for (int d = 0; d < 3; ++d)
            for (auto& o : j.at(names[d])) {
                OrbitRep orb;
                for (auto& p : o.at("points")) {
                    RawVertex v{{rat_from_json(p.at("x")), rat_from_json(p.at("y")), rat_from_json(p.at("t"))},
                                p.at("singular").get<bool>()};
                    orb.vertices.push_back(cx.raw.add_vertex(v.p.z(), v.p.t, v.singular));
                    orb.geometry.push_back(v);
                }
                orb.stab.type = type_from_name(o.at("stabilizer").at("type").get<std::string>());
                for (auto& g : o.at("stabilizer").at("generators"))
                    orb.stab.generators.push_back(matrix_from_json(cx.ring, g));
                for (auto& g : o.at("stabilizer").at("elements"))
                    orb.stab.elements.push_back(matrix_from_json(cx.ring, g));
                orb.members.assign(o.at("members").get<int>(), -1);
                for (auto& b : o.at("boundary"))
                    orb.boundary.push_back({b.at("orbit").get<int>(), b.at("sign").get<int>(),
                                            matrix_from_json(cx.ring, b.at("pairing"))});
                cx.reps[d].push_back(std::move(orb));
            }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("complex JSON: ") + e.what());
    }
    return cx;
}

}  // namespace bianchi
