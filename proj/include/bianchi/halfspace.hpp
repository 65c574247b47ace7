#pragma once

#include "bianchi/quadring.hpp"

#include <compare>
#include <optional>
#include <string>

namespace bianchi {

// Element of PSL2(O) acting by z -> (a z - b) / (-c z + d), stored sign-canonically.
struct PslMatrix {
    QuadInt a, b, c, d;

    PslMatrix() = default;
    // Canonicalizes; throws InvalidRing if the determinant is not 1.
    PslMatrix(QuadInt a_, QuadInt b_, QuadInt c_, QuadInt d_);

    static PslMatrix identity(const RingSpec& r);
    // z -> z + k
    static PslMatrix translation(const QuadInt& k);
    // z -> u^2 z for a unit u
    static PslMatrix unit_rotation(const QuadInt& u);

    const RingSpec& ring() const { return a.ring; }
    PslMatrix inverse() const;
    bool is_identity() const;
    QuadInt trace() const { return a + d; }
    std::string str() const;

    friend bool operator==(const PslMatrix& u, const PslMatrix& v)
    {
        return u.a == v.a && u.b == v.b && u.c == v.c && u.d == v.d;
    }
    friend std::strong_ordering operator<=>(const PslMatrix& u, const PslMatrix& v);
};

PslMatrix operator*(const PslMatrix& g, const PslMatrix& h);

struct HPoint {
    Rat x, y, t;

    Kxy z() const { return {x, y}; }
    friend bool operator==(const HPoint&, const HPoint&) = default;
};

struct Cusp {
    bool infinity = false;
    QuadInt lambda, mu;

    static Cusp at_infinity(const RingSpec& r);
    // Cusp lambda / mu, with the pair scaled to a sign-canonical form.
    static Cusp make(const QuadInt& lambda, const QuadInt& mu);
    // Position on the boundary plane; requires !infinity.
    Kxy value() const;

    friend bool operator==(const Cusp& u, const Cusp& v);
};

HPoint act_interior(const PslMatrix& g, const HPoint& p);
Rat height_after(const PslMatrix& g, const HPoint& p);
Cusp act_cusp(const PslMatrix& g, const Cusp& s);
// Boundary action on a finite point; nullopt when the image is infinity.
std::optional<Kxy> act_boundary(const PslMatrix& g, const Kxy& z);

// Matrix in the textbook convention z -> (A z + B) / (C z + D).
struct StdMatrix {
    QuadInt A, B, C, D;
};
StdMatrix to_standard(const PslMatrix& g);
PslMatrix from_standard(const StdMatrix& s);

}  // namespace bianchi
