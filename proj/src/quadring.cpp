#include "bianchi/quadring.hpp"

#include "bianchi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

namespace bianchi {

bool is_square_free(long m)
{
    if (m < 1)
        return false;
    for (long p = 2; p * p <= m; ++p)
        if (m % (p * p) == 0)
            return false;
    return true;
}

RingSpec RingSpec::make(long m)
{
    if (!is_square_free(m))
        throw InvalidRing("m = " + std::to_string(m) + " is not a square-free positive integer");
    RingSpec r;
    r.m = m;
    if (m % 4 == 3) {
        r.omega_kind = OmegaKind::HalfPlusSqrtM;
        r.discriminant = -m;
    } else {
        r.omega_kind = OmegaKind::SqrtM;
        r.discriminant = -4 * m;
    }
    return r;
}

Kxy operator+(const Kxy& u, const Kxy& v) { return {u.x + v.x, u.y + v.y}; }
Kxy operator-(const Kxy& u, const Kxy& v) { return {u.x - v.x, u.y - v.y}; }
Kxy operator-(const Kxy& u) { return {-u.x, -u.y}; }

Kxy kmul(long m, const Kxy& u, const Kxy& v)
{
    return {u.x * v.x - m * u.y * v.y, u.x * v.y + u.y * v.x};
}

Kxy kconj(const Kxy& u) { return {u.x, -u.y}; }

Rat knorm(long m, const Kxy& u) { return u.x * u.x + m * u.y * u.y; }

Rat kdot(long m, const Kxy& u, const Kxy& v) { return u.x * v.x + m * u.y * v.y; }

Kxy kdiv(long m, const Kxy& u, const Kxy& v)
{
    Rat n = knorm(m, v);
    Kxy w = kmul(m, u, kconj(v));
    return {w.x / n, w.y / n};
}

bool kless(const Kxy& u, const Kxy& v)
{
    if (u.x != v.x)
        return u.x < v.x;
    return u.y < v.y;
}

Kxy QuadInt::xy() const
{
    if (ring.half())
        return {Rat(a) - frac(b, 2), frac(b, 2)};
    return {Rat(a), Rat(b)};
}

std::array<Rat, 2> QuadInt::omega_coords(const RingSpec& r, const Kxy& z)
{
    if (r.half())
        return {z.x + z.y, 2 * z.y};
    return {z.x, z.y};
}

QuadInt QuadInt::from_xy(const RingSpec& r, const Kxy& z)
{
    auto c = omega_coords(r, z);
    c[0].canonicalize();
    c[1].canonicalize();
    return QuadInt(r, c[0].get_num(), c[1].get_num());
}

std::string QuadInt::str() const
{
    if (b == 0)
        return a.get_str();
    std::string s;
    if (a != 0)
        s = a.get_str() + (b > 0 ? "+" : "");
    if (b == 1)
        s += "w";
    else if (b == -1)
        s += "-w";
    else
        s += b.get_str() + "w";
    return s;
}

std::strong_ordering operator<=>(const QuadInt& u, const QuadInt& v)
{
    int c = cmp(u.a, v.a);
    if (c == 0)
        c = cmp(u.b, v.b);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

QuadInt operator+(const QuadInt& u, const QuadInt& v) { return QuadInt(u.ring, u.a + v.a, u.b + v.b); }
QuadInt operator-(const QuadInt& u, const QuadInt& v) { return QuadInt(u.ring, u.a - v.a, u.b - v.b); }
QuadInt operator-(const QuadInt& u) { return QuadInt(u.ring, -u.a, -u.b); }

QuadInt operator*(const QuadInt& u, const QuadInt& v)
{
    // (a + b w)(c + d w) = ac + (ad + bc) w + bd w^2
    Int bd = u.b * v.b;
    return QuadInt(u.ring, u.a * v.a + bd * u.ring.w0(), u.a * v.b + u.b * v.a + bd * u.ring.w1());
}

QuadInt conj(const QuadInt& u)
{
    // conj(w) = -1 - w for the half basis, -w otherwise
    if (u.ring.half())
        return QuadInt(u.ring, u.a - u.b, -u.b);
    return QuadInt(u.ring, u.a, -u.b);
}

Int norm(const QuadInt& x)
{
    if (x.ring.half())
        return x.a * x.a - x.a * x.b + ((1 + x.ring.m) / 4) * x.b * x.b;
    return x.a * x.a + x.ring.m * x.b * x.b;
}

bool exact_div(const QuadInt& u, const QuadInt& v, QuadInt& out)
{
    if (v.is_zero())
        return false;
    QuadInt num = u * conj(v);
    Int n = norm(v);
    if (!mpz_divisible_p(num.a.get_mpz_t(), n.get_mpz_t()) || !mpz_divisible_p(num.b.get_mpz_t(), n.get_mpz_t()))
        return false;
    out = QuadInt(u.ring, num.a / n, num.b / n);
    return true;
}

std::vector<QuadInt> units(const RingSpec& r)
{
    return elements_of_norm(r, 1);
}

bool lex_positive(const QuadInt& x)
{
    return x.a > 0 || (x.a == 0 && x.b > 0);
}

std::vector<QuadInt> elements_of_norm(const RingSpec& r, const Int& n)
{
    std::vector<QuadInt> out;
    for (auto& x : elements_up_to_norm(r, n.get_si()))
        if (norm(x) == n)
            out.push_back(x);
    return out;
}

std::vector<QuadInt> elements_up_to_norm(const RingSpec& r, long bound)
{
    std::vector<QuadInt> out;
    if (bound < 0)
        return out;
    // N = (a - b/2)^2 + m b^2 / 4 in the half basis, a^2 + m b^2 otherwise.
    long bmax = r.half() ? (long)std::floor(2.0 * std::sqrt((double)bound / r.m)) + 1
                         : (long)std::floor(std::sqrt((double)bound / r.m)) + 1;
    long amax = (long)std::floor(std::sqrt((double)bound)) + bmax + 1;
    for (long b = -bmax; b <= bmax; ++b)
        for (long a = -amax; a <= amax; ++a) {
            QuadInt x(r, a, b);
            if (norm(x) <= bound)
                out.push_back(x);
        }
    std::sort(out.begin(), out.end(), [](const QuadInt& u, const QuadInt& v) {
        Int nu = norm(u), nv = norm(v);
        if (nu != nv)
            return nu < nv;
        return u < v;
    });
    return out;
}

std::array<std::array<Int, 2>, 2> hnf_rank2(const std::vector<std::array<Int, 2>>& vecs)
{
    std::vector<std::array<Int, 2>> rows = vecs;
    // Fold all omega-coordinates into one row; the rest have omega-coordinate zero.
    std::array<Int, 2> top{0, 0};
    bool have = false;
    for (auto& v : rows) {
        if (v[1] == 0)
            continue;
        if (!have) {
            top = v;
            have = true;
            continue;
        }
        // extended gcd combination of top and v on coordinate 1
        Int g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), top[1].get_mpz_t(), v[1].get_mpz_t());
        Int p = top[1] / g, q = v[1] / g;
        std::array<Int, 2> nt{s * top[0] + t * v[0], g};
        std::array<Int, 2> rest{q * top[0] - p * v[0], 0};
        top = nt;
        v = rest;
    }
    Int n1 = 0;
    for (auto& v : rows)
        if (v[1] == 0)
            n1 = gcd(n1, v[0]);
    if (have && top[1] < 0) {
        top[0] = -top[0];
        top[1] = -top[1];
    }
    if (!have || n1 == 0)
        throw InvalidRing("hnf_rank2: vectors do not span a rank-2 lattice");
    Int k = top[0] % n1;
    if (k < 0)
        k += n1;
    // Columns are the basis vectors n1 and k + n2 w.
    std::array<std::array<Int, 2>, 2> h;
    h[0] = {n1, k};
    h[1] = {0, top[1]};
    return h;
}

namespace {

std::vector<std::array<Int, 2>> span_vectors(const QuadInt& c, const QuadInt& d)
{
    QuadInt w = QuadInt::omega(c.ring);
    std::vector<std::array<Int, 2>> v;
    for (const QuadInt& x : {c, c * w, d, d * w})
        v.push_back({x.a, x.b});
    return v;
}

OIdeal make_ideal(const RingSpec& r, const std::vector<std::array<Int, 2>>& vecs)
{
    OIdeal I;
    I.ring = r;
    I.hnf = hnf_rank2(vecs);
    I.norm = I.hnf[0][0] * I.hnf[1][1];
    return I;
}

}  // namespace

std::array<QuadInt, 2> ideal_basis(const OIdeal& I)
{
    return {QuadInt(I.ring, I.hnf[0][0], 0), QuadInt(I.ring, I.hnf[0][1], I.hnf[1][1])};
}

bool OIdeal::contains(const QuadInt& x) const
{
    const Int& n1 = hnf[0][0];
    const Int& k = hnf[0][1];
    const Int& n2 = hnf[1][1];
    if (!mpz_divisible_p(x.b.get_mpz_t(), n2.get_mpz_t()))
        return false;
    Int t = x.b / n2;
    Int rem = x.a - t * k;
    return mpz_divisible_p(rem.get_mpz_t(), n1.get_mpz_t()) != 0;
}

OIdeal ideal_from_pair(const QuadInt& c, const QuadInt& d)
{
    if (c.is_zero() && d.is_zero())
        throw ZeroPair("ideal_from_pair(0, 0)");
    return make_ideal(c.ring, span_vectors(c, d));
}

OIdeal ideal_product(const OIdeal& I, const OIdeal& J)
{
    std::vector<std::array<Int, 2>> v;
    for (auto& x : ideal_basis(I))
        for (auto& y : ideal_basis(J)) {
            QuadInt p = x * y;
            v.push_back({p.a, p.b});
        }
    return make_ideal(I.ring, v);
}

OIdeal ideal_conj(const OIdeal& I)
{
    std::vector<std::array<Int, 2>> v;
    for (auto& b : ideal_basis(I)) {
        QuadInt x = conj(b);
        v.push_back({x.a, x.b});
    }
    return make_ideal(I.ring, v);
}

bool is_unimodular_pair(const QuadInt& c, const QuadInt& d)
{
    return ideal_from_pair(c, d).norm == 1;
}

bool principal_generator(const OIdeal& I, QuadInt& gen)
{
    for (auto& x : elements_of_norm(I.ring, I.norm)) {
        if (ideal_from_pair(x, QuadInt(I.ring, 0)) == I) {
            gen = x;
            return true;
        }
    }
    return false;
}

bool ideal_class_is_principal(const OIdeal& I)
{
    QuadInt g;
    return principal_generator(I, g);
}

bool same_ideal_class(const OIdeal& I, const OIdeal& J)
{
    // I ~ J iff I * conj(J) is principal.
    return ideal_class_is_principal(ideal_product(I, ideal_conj(J)));
}

long class_group_order(const RingSpec& r)
{
    // Reduced positive definite forms (a, b, c) with b^2 - 4ac = D.
    long D = r.discriminant;
    long count = 0;
    for (long a = 1; 3 * a * a <= -D; ++a)
        for (long b = -a + 1; b <= a; ++b) {
            long num = b * b - D;
            if (num % (4 * a) != 0)
                continue;
            long c = num / (4 * a);
            if (c < a)
                continue;
            if (c == a && b < 0)
                continue;
            if (std::gcd(std::gcd(a, std::labs(b)), c) != 1)
                continue;
            ++count;
        }
    return count;
}

namespace {

// Row-style extended Euclid on a list of 2-vectors: returns coefficients x with
// sum x_i v_i = target (target = (1, 0)), if the span contains it.
bool express_one(const std::vector<std::array<Int, 2>>& v, std::vector<Int>& coeff)
{
    size_t n = v.size();
    // Track rows together with their coefficient vectors.
    std::vector<std::array<Int, 2>> rows = v;
    std::vector<std::vector<Int>> tr(n, std::vector<Int>(n, 0));
    for (size_t i = 0; i < n; ++i)
        tr[i][i] = 1;
    auto combine = [&](size_t i, size_t j, int col) {
        // make rows[j][col] zero using gcd with rows[i][col]
        Int g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), rows[i][col].get_mpz_t(), rows[j][col].get_mpz_t());
        Int p = rows[i][col] / g, q = rows[j][col] / g;
        std::array<Int, 2> ri, rj;
        for (int c = 0; c < 2; ++c) {
            ri[c] = s * rows[i][c] + t * rows[j][c];
            rj[c] = q * rows[i][c] - p * rows[j][c];
        }
        rows[i] = ri;
        rows[j] = rj;
        std::vector<Int> ti(n), tj(n);
        for (size_t c = 0; c < n; ++c) {
            ti[c] = s * tr[i][c] + t * tr[j][c];
            tj[c] = q * tr[i][c] - p * tr[j][c];
        }
        tr[i] = ti;
        tr[j] = tj;
    };
    // pivot on column 1 into row 1, then column 0 into row 0
    size_t p1 = n;
    for (size_t i = 0; i < n; ++i) {
        if (rows[i][1] == 0)
            continue;
        if (p1 == n) {
            p1 = i;
            continue;
        }
        combine(p1, i, 1);
    }
    size_t p0 = n;
    for (size_t i = 0; i < n; ++i) {
        if (i == p1 || rows[i][0] == 0)
            continue;
        if (p0 == n) {
            p0 = i;
            continue;
        }
        combine(p0, i, 0);
    }
    if (p0 == n || p1 == n)
        return false;
    // Solve target = x * rows[p0] + y * rows[p1] with rows[p0] = (g0, 0), rows[p1] = (r, g1).
    const Int& g0 = rows[p0][0];
    const Int& r = rows[p1][0];
    const Int& g1 = rows[p1][1];
    // need y * g1 = 0 -> y = 0, x * g0 = 1
    (void)r;
    (void)g1;
    if (g0 != 1 && g0 != -1)
        return false;
    coeff.assign(n, 0);
    for (size_t c = 0; c < n; ++c)
        coeff[c] = tr[p0][c] * g0;
    return true;
}

}  // namespace

bool solve_unimodular(const QuadInt& c, const QuadInt& d, QuadInt& a, QuadInt& b)
{
    // 1 = x * c + y * d with x, y in O; then a = y, b = -x gives a d - b c = 1.
    auto v = span_vectors(c, d);
    std::vector<Int> co;
    if (!express_one(v, co))
        return false;
    const RingSpec& r = c.ring;
    QuadInt x(r, co[0], co[1]);
    QuadInt y(r, co[2], co[3]);
    a = y;
    b = -x;
    return a * d - b * c == QuadInt(r, 1);
}

}  // namespace bianchi
