#pragma once

#include <gmpxx.h>

#include <array>
#include <compare>
#include <string>
#include <vector>

namespace bianchi {

using Int = mpz_class;
using Rat = mpq_class;

// Canonical fraction n / d.
inline Rat frac(const Int& n, const Int& d)
{
    Rat q(n, d);
    q.canonicalize();
    return q;
}

enum class OmegaKind { SqrtM, HalfPlusSqrtM };

struct RingSpec {
    long m = 0;
    OmegaKind omega_kind = OmegaKind::SqrtM;
    long discriminant = 0;

    // Throws InvalidRing unless m is a square-free positive integer.
    static RingSpec make(long m);

    bool half() const { return omega_kind == OmegaKind::HalfPlusSqrtM; }
    // omega^2 = w1 * omega + w0
    long w1() const { return half() ? -1 : 0; }
    long w0() const { return half() ? -(1 + m) / 4 : -m; }

    friend bool operator==(const RingSpec&, const RingSpec&) = default;
};

bool is_square_free(long m);

// Element of K in the coordinates z = x + y*sqrt(-m).
struct Kxy {
    Rat x, y;

    friend bool operator==(const Kxy&, const Kxy&) = default;
};

Kxy operator+(const Kxy& u, const Kxy& v);
Kxy operator-(const Kxy& u, const Kxy& v);
Kxy operator-(const Kxy& u);
Kxy kmul(long m, const Kxy& u, const Kxy& v);
Kxy kdiv(long m, const Kxy& u, const Kxy& v);
Kxy kconj(const Kxy& u);
Rat knorm(long m, const Kxy& u);
// Real part of u * conj(v).
Rat kdot(long m, const Kxy& u, const Kxy& v);
bool kless(const Kxy& u, const Kxy& v);

struct QuadInt {
    Int a, b;
    RingSpec ring;

    QuadInt() = default;
    QuadInt(const RingSpec& r, Int a_, Int b_ = 0) : a(std::move(a_)), b(std::move(b_)), ring(r) {}

    static QuadInt omega(const RingSpec& r) { return QuadInt(r, 0, 1); }

    bool is_zero() const { return a == 0 && b == 0; }
    Kxy xy() const;
    // Inverse of xy(); only valid when the coordinates are integral in the omega basis.
    static QuadInt from_xy(const RingSpec& r, const Kxy& z);
    // omega-basis coordinates of a field element.
    static std::array<Rat, 2> omega_coords(const RingSpec& r, const Kxy& z);
    std::string str() const;

    friend bool operator==(const QuadInt& u, const QuadInt& v) { return u.a == v.a && u.b == v.b; }
    friend std::strong_ordering operator<=>(const QuadInt& u, const QuadInt& v);
};

QuadInt operator+(const QuadInt& u, const QuadInt& v);
QuadInt operator-(const QuadInt& u, const QuadInt& v);
QuadInt operator-(const QuadInt& u);
QuadInt operator*(const QuadInt& u, const QuadInt& v);
QuadInt conj(const QuadInt& u);
Int norm(const QuadInt& x);
// Exact quotient u / v if it lies in O, otherwise false.
bool exact_div(const QuadInt& u, const QuadInt& v, QuadInt& out);
// Units of O (all of them, not modulo sign).
std::vector<QuadInt> units(const RingSpec& r);
// Sign-canonical form: (a, b) lexicographically positive.
bool lex_positive(const QuadInt& x);
std::vector<QuadInt> elements_of_norm(const RingSpec& r, const Int& n);
std::vector<QuadInt> elements_up_to_norm(const RingSpec& r, long bound);

// Ideal with HNF [[n1, k], [0, n2]]; its columns n1 and k + n2*omega form a Z-basis.
struct OIdeal {
    std::array<std::array<Int, 2>, 2> hnf;
    Int norm;
    RingSpec ring;

    bool contains(const QuadInt& x) const;
    friend bool operator==(const OIdeal& u, const OIdeal& v) { return u.hnf == v.hnf; }
};

// Hermite basis of the Z-span of the given omega-coordinate vectors (rank 2 required).
std::array<std::array<Int, 2>, 2> hnf_rank2(const std::vector<std::array<Int, 2>>& vecs);

OIdeal ideal_from_pair(const QuadInt& c, const QuadInt& d);
std::array<QuadInt, 2> ideal_basis(const OIdeal& I);
OIdeal ideal_product(const OIdeal& I, const OIdeal& J);
OIdeal ideal_conj(const OIdeal& I);
bool is_unimodular_pair(const QuadInt& c, const QuadInt& d);
bool ideal_class_is_principal(const OIdeal& I);
// Principal generator when one exists.
bool principal_generator(const OIdeal& I, QuadInt& gen);
bool same_ideal_class(const OIdeal& I, const OIdeal& J);
long class_group_order(const RingSpec& r);

// Integral a, b with a*d - b*c = 1 when (c, d) is unimodular.
bool solve_unimodular(const QuadInt& c, const QuadInt& d, QuadInt& a, QuadInt& b);

}  // namespace bianchi
