#include "bianchi/finhom.hpp"

#include "bianchi/errors.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

namespace bianchi {

std::string coeff_name(CoeffRing c)
{
    switch (c) {
    case CoeffRing::Z: return "Z";
    case CoeffRing::Z2: return "Z2";
    case CoeffRing::Z3: return "Z3";
    case CoeffRing::Z4: return "Z4";
    }
    return "?";
}

CoeffRing coeff_from_name(const std::string& s)
{
    if (s == "Z") return CoeffRing::Z;
    if (s == "Z2" || s == "Z/2") return CoeffRing::Z2;
    if (s == "Z3" || s == "Z/3") return CoeffRing::Z3;
    if (s == "Z4" || s == "Z/4") return CoeffRing::Z4;
    throw FormatError("unknown coefficient ring '" + s + "'");
}

long coeff_modulus(CoeffRing c)
{
    switch (c) {
    case CoeffRing::Z: return 0;
    case CoeffRing::Z2: return 2;
    case CoeffRing::Z3: return 3;
    case CoeffRing::Z4: return 4;
    }
    return 0;
}

namespace {

long lgcd(long a, long b)
{
    while (b) {
        long t = a % b;
        a = b;
        b = t;
    }
    return a < 0 ? -a : a;
}

// Order of the reduction of Z/o (o = 0 for Z) to coefficients mod n; 1 means the summand vanishes.
long reduced_order(long o, long n)
{
    if (n == 0) return o;
    return o == 0 ? n : lgcd(o, n);
}

FgAbelianGroup elementary(long p, long r)
{
    return FgAbelianGroup::from_orders(IntVec((size_t)std::max(0L, r), Int(p)));
}

// H_q(Z/k; coefficients mod n) for q >= 1.
long cyclic_order(long k, int q, long n)
{
    if (n == 0) return q % 2 ? k : 1;
    return lgcd(k, n);
}

}  // namespace

FgAbelianGroup stab_homology(StabType t, int q, CoeffRing c)
{
    long n = coeff_modulus(c);
    if (q < 0) return {};
    if (q == 0) return FgAbelianGroup::from_orders({Int(n)});
    // Degrees >= 1 with Z/4 agree with Z/2 for every finite type.
    if (c == CoeffRing::Z4 && t != StabType::ZxZ) return stab_homology(t, q, CoeffRing::Z2);
    switch (t) {
    case StabType::Trivial: return {};
    case StabType::C2: return FgAbelianGroup::from_orders({Int(cyclic_order(2, q, n))});
    case StabType::C3: return FgAbelianGroup::from_orders({Int(cyclic_order(3, q, n))});
    case StabType::V4:
        if (n == 0) return elementary(2, q % 2 ? (q + 3) / 2 : q / 2);
        if (n == 2) return elementary(2, q + 1);
        return {};
    case StabType::S3:
        if (n == 0) {
            switch (q % 4) {
            case 1: return FgAbelianGroup::from_orders({2});
            case 3: return FgAbelianGroup::from_orders({6});
            default: return {};
            }
        }
        if (n == 3) return q % 4 == 3 || q % 4 == 0 ? FgAbelianGroup::from_orders({3}) : FgAbelianGroup();
        return FgAbelianGroup::from_orders({2});
    case StabType::A4: {
        int k = (q - 1) / 6;
        int r = (q - 1) % 6 + 1;
        if (n == 3) return FgAbelianGroup::from_orders({3});
        if (n == 2) {
            static const int extra[6] = {0, 1, 2, 1, 2, 3};
            return elementary(2, 2 * k + extra[r - 1]);
        }
        FgAbelianGroup g = elementary(2, k);
        switch (r) {
        case 1: return g + FgAbelianGroup::from_orders({3});
        case 2: return g + FgAbelianGroup::from_orders({2});
        case 3: return g + FgAbelianGroup::from_orders({6});
        case 4: return g;
        case 5: return g + FgAbelianGroup::from_orders({2, 6});
        default: return elementary(2, k + 1);
        }
    }
    case StabType::ZxZ: {
        int r = q == 1 ? 2 : q == 2 ? 1 : 0;
        return FgAbelianGroup::from_orders(IntVec((size_t)r, Int(n)));
    }
    }
    return {};
}

// ---- resolutions over the group ring ----

namespace {

using RingElt = IntVec;   // coefficient per group element

struct FiniteAbelian {
    SmallGroup kind;
    int order;

    int mul(int i, int j) const { return kind == SmallGroup::V4 ? (i ^ j) : (i + j) % order; }
    int inv(int i) const { return kind == SmallGroup::V4 ? i : (order - i) % order; }
    int power(int g, int k) const
    {
        int x = 0;
        for (int i = 0; i < k; ++i) x = mul(x, g);
        return x;
    }
};

FiniteAbelian group_of(SmallGroup g)
{
    switch (g) {
    case SmallGroup::C2: return {g, 2};
    case SmallGroup::C3: return {g, 3};
    case SmallGroup::V4: return {g, 4};
    }
    return {g, 1};
}

RingElt delta(int n, int g, long c = 1)
{
    RingElt r((size_t)n);
    r[g] = c;
    return r;
}

RingElt ring_add(RingElt a, const RingElt& b)
{
    for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

RingElt ring_mul(const FiniteAbelian& G, const RingElt& a, const RingElt& b)
{
    RingElt r((size_t)G.order);
    for (int i = 0; i < G.order; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < G.order; ++j)
            if (b[j] != 0) r[G.mul(i, j)] += a[i] * b[j];
    }
    return r;
}

Int augment(const RingElt& a)
{
    Int s = 0;
    for (auto& x : a) s += x;
    return s;
}

// Differentials as matrices of ring elements: D[q] maps degree q to degree q - 1.
struct Resolution {
    FiniteAbelian G;
    std::vector<int> rank;
    std::vector<std::vector<std::vector<RingElt>>> D;   // D[q][row][col]
};

Resolution build_resolution(SmallGroup kind, int q_max)
{
    Resolution R{group_of(kind), {}, {}};
    const FiniteAbelian& G = R.G;
    int n = G.order;
    auto zero = [&] { return RingElt((size_t)n); };
    // (x - 1) in odd degree, (1 + x) or the norm in even degree.
    auto cyc = [&](int x, int deg) {
        if (deg % 2) return ring_add(delta(n, x), delta(n, 0, -1));
        if (kind == SmallGroup::V4) return ring_add(delta(n, x), delta(n, 0));
        RingElt N((size_t)n);
        for (auto& c : N) c = 1;
        return N;
    };
    for (int q = 0; q <= q_max; ++q) R.rank.push_back(kind == SmallGroup::V4 ? q + 1 : 1);
    R.D.resize((size_t)q_max + 1);
    for (int q = 1; q <= q_max; ++q) {
        auto& M = R.D[q];
        M.assign((size_t)R.rank[q - 1], std::vector<RingElt>((size_t)R.rank[q], zero()));
        if (kind != SmallGroup::V4) {
            M[0][0] = cyc(1, q);
            continue;
        }
        // Basis index b of degree q is e_{q-b} (x) f_b with e over alpha = 1 and f over beta = 2.
        for (int b = 0; b <= q; ++b) {
            int a = q - b;
            if (a >= 1) M[b][b] = ring_add(M[b][b], cyc(1, a));
            if (b >= 1) {
                RingElt t = cyc(2, b);
                if (a % 2)
                    for (auto& x : t) x = -x;
                M[b - 1][b] = ring_add(M[b - 1][b], t);
            }
        }
    }
    return R;
}

// Z-matrix of a matrix of ring elements acting on free modules, index (basis, element).
IntMatrix z_matrix(const FiniteAbelian& G, const std::vector<std::vector<RingElt>>& M, int rows, int cols)
{
    int n = G.order;
    IntMatrix Z(rows * n, cols * n);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            for (int h = 0; h < n; ++h)
                for (int g = 0; g < n; ++g)
                    if (M[i][j][g] != 0) Z.at(i * n + G.mul(g, h), j * n + h) += M[i][j][g];
    return Z;
}

IntMatrix augmented(const std::vector<std::vector<RingElt>>& M, int rows, int cols)
{
    IntMatrix A(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) A.at(i, j) = augment(M[i][j]);
    return A;
}

Homology homology_of(const Resolution& R, int q, long n)
{
    int r = R.rank[q];
    IntMatrix d_in = augmented(R.D[q + 1], r, R.rank[q + 1]);
    IntMatrix d_out = q == 0 ? IntMatrix(0, r) : augmented(R.D[q], R.rank[q - 1], r);
    PresentedGroup at = PresentedGroup::cyclic_sum(IntVec((size_t)r, Int(n)));
    PresentedGroup target = PresentedGroup::cyclic_sum(IntVec((size_t)(q == 0 ? 0 : R.rank[q - 1]), Int(n)));
    return chain_homology(d_in, d_out, at, target);
}

struct OracleCache {
    std::mutex mu;
    std::map<std::pair<SmallGroup, int>, Resolution> resolutions;
    std::map<std::tuple<SmallGroup, int, long>, Homology> homology;
    std::map<std::tuple<SmallGroup, SmallGroup, std::vector<int>, int, long>, std::vector<IntMatrix>> maps;
};

OracleCache& cache()
{
    static OracleCache c;
    return c;
}

const Resolution& resolution(SmallGroup g, int q_max)
{
    auto& c = cache();
    auto key = std::make_pair(g, q_max);
    auto it = c.resolutions.find(key);
    if (it == c.resolutions.end()) it = c.resolutions.emplace(key, build_resolution(g, q_max)).first;
    return it->second;
}

const Homology& homology_cached(SmallGroup g, int q, long n)
{
    auto& c = cache();
    auto key = std::make_tuple(g, q, n);
    auto it = c.homology.find(key);
    if (it == c.homology.end()) it = c.homology.emplace(key, homology_of(resolution(g, q + 1), q, n)).first;
    return it->second;
}

}  // namespace

Homology resolution_homology(SmallGroup g, int q, CoeffRing c)
{
    std::lock_guard<std::mutex> lock(cache().mu);
    return homology_cached(g, q, coeff_modulus(c));
}

std::vector<IntMatrix> resolution_oracle(const SmallHom& hom, int q_max, CoeffRing c)
{
    long n = coeff_modulus(c);
    std::lock_guard<std::mutex> lock(cache().mu);
    auto key = std::make_tuple(hom.source, hom.target, hom.images, q_max, n);
    if (auto it = cache().maps.find(key); it != cache().maps.end()) return it->second;

    const Resolution& P = resolution(hom.source, q_max + 1);
    const Resolution& Q = resolution(hom.target, q_max + 1);
    const FiniteAbelian& H = P.G;
    const FiniteAbelian& G = Q.G;
    // Element map of the homomorphism.
    std::vector<int> phi((size_t)H.order);
    for (int h = 0; h < H.order; ++h) {
        if (H.kind == SmallGroup::V4) {
            int x = 0;
            if (h & 1) x = G.mul(x, hom.images.at(0));
            if (h & 2) x = G.mul(x, hom.images.at(1));
            phi[h] = x;
        } else {
            phi[h] = G.power(hom.images.at(0), h);
        }
    }
    for (int a = 0; a < H.order; ++a)
        for (int b = 0; b < H.order; ++b)
            if (phi[H.mul(a, b)] != G.mul(phi[a], phi[b])) throw LiftFailure("images do not define a homomorphism");
    auto push = [&](const RingElt& x) {
        RingElt y((size_t)G.order);
        for (int h = 0; h < H.order; ++h) y[phi[h]] += x[h];
        return y;
    };

    // f[q][i][j]: ring element at target basis i, source basis j.
    std::vector<std::vector<std::vector<RingElt>>> f((size_t)q_max + 1);
    f[0] = {{delta(G.order, 0)}};
    for (int q = 1; q <= q_max; ++q) {
        IntMatrix DQ = z_matrix(G, Q.D[q], Q.rank[q - 1], Q.rank[q]);
        f[q].assign((size_t)Q.rank[q], std::vector<RingElt>((size_t)P.rank[q], RingElt((size_t)G.order)));
        for (int j = 0; j < P.rank[q]; ++j) {
            // f_{q-1}(d e_j) as an integer vector.
            IntVec b((size_t)Q.rank[q - 1] * G.order);
            for (int i = 0; i < P.rank[q - 1]; ++i) {
                RingElt coef = push(P.D[q][i][j]);
                for (int k = 0; k < Q.rank[q - 1]; ++k) {
                    RingElt t = ring_mul(G, coef, f[q - 1][k][i]);
                    for (int g = 0; g < G.order; ++g) b[(size_t)k * G.order + g] += t[g];
                }
            }
            IntVec y;
            if (!solve_integer(DQ, b, y)) throw LiftFailure("no lift in degree " + std::to_string(q));
            for (int k = 0; k < Q.rank[q]; ++k)
                for (int g = 0; g < G.order; ++g) f[q][k][j][g] = y[(size_t)k * G.order + g];
        }
    }

    std::vector<IntMatrix> out;
    for (int q = 0; q <= q_max; ++q) {
        const Homology& hs = homology_cached(hom.source, q, n);
        const Homology& ht = homology_cached(hom.target, q, n);
        IntMatrix F = augmented(f[q], Q.rank[q], P.rank[q]);
        IntMatrix M((int)ht.orders.size(), (int)hs.orders.size());
        for (int k = 0; k < M.cols; ++k) {
            IntVec img = ht.coords(F.apply(hs.cycles.column(k)));
            for (int i = 0; i < M.rows; ++i) M.at(i, k) = img[i];
        }
        out.push_back(M);
    }
    cache().maps.emplace(key, out);
    return out;
}

// ---- bases and rule-based maps ----

namespace {

// alpha -> beta -> alpha*beta on element indices.
const SmallHom klein_rotation{SmallGroup::V4, SmallGroup::V4, {2, 3}};

// Involution index in the listing alpha, alpha*beta, beta.
int involution_element(int index)
{
    static const int el[3] = {1, 3, 2};
    return el[index];
}

SmallHom klein_inclusion(int index) { return {SmallGroup::C2, SmallGroup::V4, {involution_element(index)}}; }

// 2-primary part of H_q(A4) as the coinvariants of H_q(V4) under the order-three rotation.
Cokernel a4_two_part(int q, CoeffRing c)
{
    Homology h = resolution_homology(SmallGroup::V4, q, c);
    IntMatrix sigma = resolution_oracle(klein_rotation, q, c)[q];
    int r = (int)h.orders.size();
    return cokernel(r, IntMatrix::diagonal(h.orders).hcat(sigma - IntMatrix::identity(r)));
}

void append(StabBasis& b, long order, const std::string& label)
{
    if (order == 1) return;
    b.orders.push_back(order);
    b.labels.push_back(label);
}

StabBasis cyclic_basis(long k, int q, long n, const std::string& tag)
{
    StabBasis b;
    append(b, q == 0 ? n : cyclic_order(k, q, n), tag);
    return b;
}

}  // namespace

StabBasis stab_homology_basis(StabType t, int q, CoeffRing c)
{
    long n = coeff_modulus(c);
    StabBasis b;
    if (q == 0) {
        append(b, n, "1");
        return b;
    }
    switch (t) {
    case StabType::Trivial: break;
    case StabType::C2: return cyclic_basis(2, q, n, "t");
    case StabType::C3: return cyclic_basis(3, q, n, "t");
    case StabType::V4: {
        Homology h = resolution_homology(SmallGroup::V4, q, c);
        for (size_t i = 0; i < h.orders.size(); ++i) append(b, h.orders[i].get_si(), "v" + std::to_string(i));
        break;
    }
    case StabType::S3: {
        append(b, cyclic_order(2, q, n), "2");
        bool three = n == 0 ? q % 4 == 3 : n == 3 && (q % 4 == 3 || q % 4 == 0);
        if (three) append(b, 3, "3");
        break;
    }
    case StabType::A4: {
        Cokernel two = a4_two_part(q, c);
        for (size_t i = 0; i < two.orders.size(); ++i) append(b, two.orders[i].get_si(), "2:" + std::to_string(i));
        append(b, cyclic_order(3, q, n), "3");
        break;
    }
    case StabType::ZxZ: {
        int r = q == 1 ? 2 : q == 2 ? 1 : 0;
        for (int i = 0; i < r; ++i) {
            b.orders.push_back(n);
            b.labels.push_back("s" + std::to_string(i));
        }
        break;
    }
    }
    return b;
}

namespace {

// Multiplication by x on a cyclic summand of the given order.
Int reduce(const Int& x, const Int& order)
{
    if (order == 0) return x;
    Int r = x % order;
    if (r < 0) r += order;
    return r;
}

Int kpow(int k, int i)
{
    Int r = 1;
    for (int j = 0; j < i; ++j) r *= k;
    return r;
}

// Exponent of the power map on H_q of a cyclic group under t -> t^k.
Int cyclic_factor(int k, int q) { return kpow(k, (q + 1) / 2); }

}  // namespace

IntMatrix induced_map(const InclusionData& inc, int q, CoeffRing c)
{
    StabBasis src = stab_homology_basis(inc.source, q, c);
    StabBasis tgt = stab_homology_basis(inc.target, q, c);
    IntMatrix M((int)tgt.orders.size(), (int)src.orders.size());
    if (q == 0) {
        if (M.rows && M.cols) M.at(0, 0) = 1;
        return M;
    }
    if (inc.source == StabType::Trivial) return M;

    auto unsupported = [&] {
        return UnsupportedInclusion(type_name(inc.source) + " into " + type_name(inc.target));
    };
    bool cyclic_source = inc.source == StabType::C2 || inc.source == StabType::C3;
    if (!cyclic_source) throw unsupported();
    if (M.cols == 0) return M;

    switch (inc.target) {
    case StabType::C2:
    case StabType::C3:
        if (inc.target != inc.source) throw unsupported();
        M.at(0, 0) = reduce(cyclic_factor(inc.datum, q), tgt.orders[0]);
        return M;
    case StabType::S3: {
        std::string part = inc.source == StabType::C2 ? "2" : "3";
        for (int i = 0; i < M.rows; ++i)
            if (tgt.labels[i] == part) M.at(i, 0) = 1;
        return M;
    }
    case StabType::V4: {
        if (inc.source != StabType::C2 || inc.datum < 0 || inc.datum > 2) throw unsupported();
        IntMatrix img = resolution_oracle(klein_inclusion(inc.datum), q, c)[q];
        for (int i = 0; i < M.rows; ++i) M.at(i, 0) = img.at(i, 0);
        return M;
    }
    case StabType::A4: {
        if (inc.source == StabType::C3) {
            M.at(M.rows - 1, 0) = reduce(cyclic_factor(inc.datum, q), tgt.orders.back());
            return M;
        }
        Cokernel two = a4_two_part(q, c);
        IntMatrix img = resolution_oracle(klein_inclusion(0), q, c)[q];
        IntVec v = two.coords(img.column(0));
        for (size_t i = 0; i < v.size(); ++i) M.at((int)i, 0) = v[i];
        return M;
    }
    default: throw unsupported();
    }
}

// ---- group elements ----

int element_order(const PslMatrix& g)
{
    PslMatrix x = g;
    for (int k = 1; k <= 12; ++k) {
        if (x.is_identity()) return k;
        x = x * g;
    }
    throw UnboundedStabilizer("element of infinite order: " + g.str());
}

PslMatrix cyclic_generator(const StabilizerInfo& s)
{
    for (auto& e : s.elements)
        if (!e.is_identity()) return e;
    throw UnknownType("stabilizer has no non-identity element");
}

std::vector<PslMatrix> klein_involutions(const StabilizerInfo& s)
{
    std::vector<PslMatrix> inv;
    for (auto& e : s.elements)
        if (!e.is_identity()) inv.push_back(e);
    if (inv.size() != 3) throw UnknownType("not a Klein four group");
    return {inv[0], inv[0] * inv[1], inv[1]};
}

PslMatrix order_three_reference(const StabilizerInfo& s)
{
    for (auto& e : s.elements)
        if (!e.is_identity() && element_order(e) == 3) return e;
    throw UnknownType("no element of order three");
}

namespace {

bool contains(const StabilizerInfo& s, const PslMatrix& g)
{
    return std::binary_search(s.elements.begin(), s.elements.end(), g);
}

// j with g = t^j, for t of order n.
int cyclic_log(const PslMatrix& t, const PslMatrix& g, int n)
{
    PslMatrix x = PslMatrix::identity(t.ring());
    for (int j = 0; j < n; ++j) {
        if (x == g) return j;
        x = x * t;
    }
    throw OrbitInconsistency("element is not a power of the generator");
}

// j in {0, 1, 2} with u in r^j V4, for r the order-three reference of A4.
int a4_coset(const StabilizerInfo& s, const PslMatrix& u)
{
    PslMatrix r = order_three_reference(s);
    PslMatrix x = u;
    PslMatrix ri = r.inverse();
    for (int j = 0; j < 3; ++j) {
        if (element_order(x) <= 2) return j;
        x = ri * x;
    }
    throw OrbitInconsistency("element outside A4");
}

}  // namespace

InclusionData classify_inclusion(const StabilizerInfo& src, const StabilizerInfo& tgt, const PslMatrix& g)
{
    InclusionData d{src.type, tgt.type, 1};
    if (src.type == StabType::Trivial) return d;
    if (src.type != StabType::C2 && src.type != StabType::C3)
        throw UnsupportedInclusion("source " + type_name(src.type) + " is not cyclic");
    if (tgt.type == StabType::ZxZ || tgt.type == StabType::Trivial)
        throw UnsupportedInclusion(type_name(src.type) + " into " + type_name(tgt.type));
    PslMatrix t = cyclic_generator(src);
    PslMatrix tp = g.inverse() * t * g;
    if (!contains(tgt, tp)) throw OrbitInconsistency("conjugated edge stabilizer leaves the vertex stabilizer");
    int n = type_order(src.type);
    switch (tgt.type) {
    case StabType::C2:
    case StabType::C3: {
        if (tgt.type != src.type) throw UnsupportedInclusion(type_name(src.type) + " into " + type_name(tgt.type));
        int k = cyclic_log(cyclic_generator(tgt), tp, n);
        d.datum = k == n - 1 ? -1 : k;
        break;
    }
    case StabType::V4: {
        auto inv = klein_involutions(tgt);
        d.datum = (int)(std::find(inv.begin(), inv.end(), tp) - inv.begin());
        break;
    }
    case StabType::S3:
        if (src.type == StabType::C3) d.datum = tp == order_three_reference(tgt) ? 1 : -1;
        break;
    case StabType::A4:
        if (src.type == StabType::C3) d.datum = a4_coset(tgt, tp) == 1 ? 1 : -1;
        break;
    default: break;
    }
    return d;
}

// ---- H_1 classes ----

namespace {

Kxy cusp_translation(long m, const PslMatrix& u, const Kxy& s, const Kxy& z0)
{
    auto z1 = act_boundary(u, z0);
    if (!z1) throw OrbitInconsistency("base point sent to infinity");
    Kxy one{1, 0};
    return kdiv(m, one, *z1 - s) - kdiv(m, one, z0 - s);
}

}  // namespace

IntVec h1_class(const StabilizerInfo& s, const PslMatrix& u, const std::optional<Kxy>& cusp)
{
    switch (s.type) {
    case StabType::Trivial: return {};
    case StabType::C2:
    case StabType::C3: {
        if (!contains(s, u)) throw OrbitInconsistency("element outside the stabilizer");
        return {cyclic_log(cyclic_generator(s), u, type_order(s.type))};
    }
    case StabType::V4: {
        if (!contains(s, u)) throw OrbitInconsistency("element outside the stabilizer");
        auto inv = klein_involutions(s);
        if (u == inv[0]) return {1, 0};
        if (u == inv[2]) return {0, 1};
        if (u == inv[1]) return {1, 1};
        return {0, 0};
    }
    case StabType::S3:
        if (!contains(s, u)) throw OrbitInconsistency("element outside the stabilizer");
        return {element_order(u) == 2 ? 1 : 0};
    case StabType::A4:
        if (!contains(s, u)) throw OrbitInconsistency("element outside the stabilizer");
        return {a4_coset(s, u)};
    case StabType::ZxZ: {
        if (!cusp) throw CosetUndecidable("cusp point required for a parabolic stabilizer");
        long m = u.ring().m;
        const Kxy& sp = *cusp;
        for (Kxy step : {Kxy{1, 0}, Kxy{0, 1}, Kxy{2, 1}, Kxy{1, 3}}) {
            Kxy z0 = sp + step;
            Kxy tau, t1, t2;
            try {
                tau = cusp_translation(m, u, sp, z0);
                t1 = cusp_translation(m, s.generators.at(0), sp, z0);
                t2 = cusp_translation(m, s.generators.at(1), sp, z0);
            } catch (const OrbitInconsistency&) {
                continue;
            }
            Rat det = t1.x * t2.y - t1.y * t2.x;
            if (det == 0) throw OrbitInconsistency("cusp stabilizer generators are dependent");
            Rat a = (tau.x * t2.y - tau.y * t2.x) / det;
            Rat b = (t1.x * tau.y - t1.y * tau.x) / det;
            if (a.get_den() != 1 || b.get_den() != 1)
                throw OrbitInconsistency("element outside the cusp stabilizer lattice");
            return {a.get_num(), b.get_num()};
        }
        throw OrbitInconsistency("no admissible base point near the cusp");
    }
    }
    return {};
}

IntVec reduce_h1(StabType t, const IntVec& z, CoeffRing c)
{
    long n = coeff_modulus(c);
    StabBasis zb = stab_homology_basis(t, 1, CoeffRing::Z);
    if (zb.orders.size() != z.size()) throw std::invalid_argument("reduce_h1: coordinate count mismatch");
    IntVec out;
    for (size_t i = 0; i < z.size(); ++i) {
        long o = reduced_order(zb.orders[i].get_si(), n);
        if (o == 1) continue;
        out.push_back(reduce(z[i], o));
    }
    return out;
}

}  // namespace bianchi
