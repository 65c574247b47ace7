#include "properties.hpp"

#include "support.hpp"

#include <algorithm>

namespace bianchi::testing {

namespace {

const long rings[] = {1, 2, 3, 5, 6, 7, 10, 11, 13, 15};
const CoeffRing all_coeffs[] = {CoeffRing::Z, CoeffRing::Z2, CoeffRing::Z3, CoeffRing::Z4};

bool same_mod(const IntMatrix& a, const IntMatrix& b, const IntVec& row_orders)
{
    if (a.rows != b.rows || a.cols != b.cols) return false;
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) {
            Int d = a.at(i, j) - b.at(i, j);
            if (row_orders[i] == 0 ? d != 0 : d % row_orders[i] != 0) return false;
        }
    return true;
}

std::string where(const std::string& what, long m, int q)
{
    return what + " (m=" + std::to_string(m) + ", q=" + std::to_string(q) + ")";
}

}  // namespace

std::vector<std::string> norm_multiplicativity(int cases, unsigned seed)
{
    std::vector<std::string> bad;
    std::mt19937 rng(seed);
    for (int i = 0; i < cases; ++i) {
        RingSpec r = RingSpec::make(rings[i % 10]);
        QuadInt u = random_quad(r, rng, 60), v = random_quad(r, rng, 60);
        if (norm(u * v) != norm(u) * norm(v)) bad.push_back("N(uv) != N(u)N(v) for " + u.str() + ", " + v.str());
    }
    return bad;
}

std::vector<std::string> action_law(int cases, unsigned seed)
{
    std::vector<std::string> bad;
    std::mt19937 rng(seed);
    for (int i = 0; i < cases; ++i) {
        RingSpec r = RingSpec::make(rings[i % 10]);
        PslMatrix g = random_element(r, rng, 4), h = random_element(r, rng, 4);
        HPoint p = random_point(rng);
        if (act_interior(g, act_interior(h, p)) != act_interior(g * h, p))
            bad.push_back("g(hp) != (gh)p for " + g.str() + ", " + h.str());
    }
    return bad;
}

std::vector<std::string> smith_canonicity(int cases, unsigned seed)
{
    std::vector<std::string> bad;
    std::mt19937 rng(seed);
    for (int i = 0; i < cases; ++i) {
        int r = 1 + (int)(rng() % 6), c = 1 + (int)(rng() % 6);
        IntMatrix m = random_matrix(r, c, rng, 9);
        SmithForm f = smith_normal_form(m);
        IntVec d = f.diagonal();
        bool chain = std::all_of(d.begin(), d.end(), [](const Int& x) { return x >= 0; });
        for (size_t k = 0; k + 1 < d.size(); ++k)
            if (d[k + 1] != 0 && (d[k] == 0 || d[k + 1] % d[k] != 0)) chain = false;
        IntMatrix p = random_unimodular(r, rng, 12), q = random_unimodular(c, rng, 12);
        if (!(f.U * m * f.V == f.S) || !chain || elementary_divisors(p * m * q) != elementary_divisors(m))
            bad.push_back("Smith form not canonical for " + m.str());
    }
    return bad;
}

std::vector<std::string> oracle_agreement(int q_max)
{
    std::vector<std::string> bad;
    struct Case {
        InclusionData inc;
        SmallHom hom;
    };
    const Case cases[] = {
        {{StabType::C2, StabType::C2, 1}, {SmallGroup::C2, SmallGroup::C2, {1}}},
        {{StabType::C3, StabType::C3, 1}, {SmallGroup::C3, SmallGroup::C3, {1}}},
        {{StabType::C3, StabType::C3, 2}, {SmallGroup::C3, SmallGroup::C3, {2}}},
        {{StabType::C2, StabType::V4, 0}, {SmallGroup::C2, SmallGroup::V4, {1}}},
        {{StabType::C2, StabType::V4, 1}, {SmallGroup::C2, SmallGroup::V4, {3}}},
        {{StabType::C2, StabType::V4, 2}, {SmallGroup::C2, SmallGroup::V4, {2}}},
    };
    for (auto c : all_coeffs)
        for (auto& cs : cases) {
            auto oracle = resolution_oracle(cs.hom, q_max, c);
            for (int q = 0; q <= q_max; ++q) {
                IntVec ord = stab_homology_basis(cs.inc.target, q, c).orders;
                if (!same_mod(induced_map(cs.inc, q, c), oracle[q], ord))
                    bad.push_back(type_name(cs.inc.source) + " -> " + type_name(cs.inc.target) + " datum " +
                                  std::to_string(cs.inc.datum) + " over " + coeff_name(c) + " in degree " +
                                  std::to_string(q));
            }
        }
    // Projection back onto the involution, and rotation of the involutions.
    SmallHom rot{SmallGroup::V4, SmallGroup::V4, {2, 3}};
    for (auto c : all_coeffs) {
        auto a = resolution_oracle({SmallGroup::C2, SmallGroup::V4, {1}}, q_max, c);
        auto b = resolution_oracle({SmallGroup::C2, SmallGroup::V4, {2}}, q_max, c);
        auto pr = resolution_oracle({SmallGroup::V4, SmallGroup::C2, {1, 0}}, q_max, c);
        auto s = resolution_oracle(rot, q_max, c);
        for (int q = 0; q <= q_max; ++q) {
            IntVec o2 = stab_homology_basis(StabType::C2, q, c).orders;
            IntVec o4 = stab_homology_basis(StabType::V4, q, c).orders;
            if (!same_mod(pr[q] * a[q], IntMatrix::identity((int)o2.size()), o2))
                bad.push_back("C2 -> V4 -> C2 is not the identity over " + coeff_name(c));
            if (!same_mod(s[q] * a[q], b[q], o4)) bad.push_back("rotation does not carry alpha to beta");
        }
    }
    return bad;
}

std::vector<std::string> conjugation_covariance(const GammaComplex& cx)
{
    std::vector<std::string> bad;
    for (int d = 0; d < 2; ++d)
        for (int id : cx.fundamental_cells(d)) {
            const CellRef& ref = cx.located[d][id];
            const StabilizerInfo& rep = cx.reps[d][ref.orbit].stab;
            if (rep.type == StabType::ZxZ) continue;
            std::vector<PslMatrix> conj;
            for (auto& s : rep.elements) conj.push_back(ref.g * s * ref.g.inverse());
            std::sort(conj.begin(), conj.end());
            if (stabilizer(cx, d, id).elements != conj)
                bad.push_back(where("stabilizer of cell " + std::to_string(id), cx.ring.m, d));
        }
    return bad;
}

std::vector<std::string> d1_squares_to_zero(const Pipeline& p)
{
    std::vector<std::string> bad;
    for (auto& [c, P] : p.runs)
        for (int q = 0; q <= P.q_max; ++q) {
            IntMatrix dd = P.d1[1][q] * P.d1[2][q];
            const PresentedGroup& g = P.e1[0][q];
            for (int i = 0; i < dd.rows; ++i) {
                Int o = g.relations.at(i, i);
                for (int j = 0; j < dd.cols; ++j)
                    if (o == 0 ? dd.at(i, j) != 0 : dd.at(i, j) % o != 0)
                        bad.push_back(where("d1 d1 over " + coeff_name(c), p.config.m, q));
            }
        }
    return bad;
}

std::vector<std::string> section_independence(const Pipeline& p)
{
    std::vector<std::string> bad;
    for (auto& [c, P] : p.runs) {
        SpectralPages alt = P;
        compute_d2(alt, p.complex, SectionOrder::Max);
        if (!(alt.d2 == P.d2) || alt.e_infinity(0, 1) != P.e_infinity(0, 1))
            bad.push_back(where("d2 depends on the section over " + coeff_name(c), p.config.m, 0));
    }
    return bad;
}

std::vector<std::string> uct_consistency(const Pipeline& p)
{
    std::vector<std::string> bad;
    FgAbelianGroup prev = FgAbelianGroup::free(1);
    for (auto& e : p.homology) {
        for (auto c : {CoeffRing::Z2, CoeffRing::Z3, CoeffRing::Z4}) {
            const SpectralPages& P = p.runs.at(c);
            Int diag = 1;
            for (int k = 0; k <= 2 && k <= e.q; ++k) diag *= P.e_infinity(k, e.q - k).torsion_order();
            if (uct_order(e.group(), prev, coeff_modulus(c)) != diag)
                bad.push_back(where("UCT order over " + coeff_name(c), p.config.m, e.q));
        }
        prev = e.group();
    }
    return bad;
}

}  // namespace bianchi::testing
