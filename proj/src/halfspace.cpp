#include "bianchi/halfspace.hpp"

#include "bianchi/errors.hpp"

namespace bianchi {

namespace {

bool canonical_sign(const PslMatrix& g)
{
    for (const QuadInt* e : {&g.a, &g.b, &g.c, &g.d})
        if (!e->is_zero())
            return lex_positive(*e);
    return true;
}

}  // namespace

PslMatrix::PslMatrix(QuadInt a_, QuadInt b_, QuadInt c_, QuadInt d_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_))
{
    if (a * d - b * c != QuadInt(a.ring, 1))
        throw InvalidRing("PslMatrix determinant is not 1: " + str());
    if (!canonical_sign(*this)) {
        a = -a;
        b = -b;
        c = -c;
        d = -d;
    }
}

PslMatrix PslMatrix::identity(const RingSpec& r)
{
    return PslMatrix(QuadInt(r, 1), QuadInt(r, 0), QuadInt(r, 0), QuadInt(r, 1));
}

PslMatrix PslMatrix::translation(const QuadInt& k)
{
    const RingSpec& r = k.ring;
    return PslMatrix(QuadInt(r, 1), -k, QuadInt(r, 0), QuadInt(r, 1));
}

PslMatrix PslMatrix::unit_rotation(const QuadInt& u)
{
    const RingSpec& r = u.ring;
    QuadInt inv;
    if (!exact_div(QuadInt(r, 1), u, inv))
        throw InvalidRing("unit_rotation: not a unit " + u.str());
    return PslMatrix(u, QuadInt(r, 0), QuadInt(r, 0), inv);
}

PslMatrix PslMatrix::inverse() const
{
    return PslMatrix(d, -b, -c, a);
}

bool PslMatrix::is_identity() const
{
    return *this == identity(ring());
}

std::string PslMatrix::str() const
{
    return "(" + a.str() + ", " + b.str() + "; " + c.str() + ", " + d.str() + ")";
}

std::strong_ordering operator<=>(const PslMatrix& u, const PslMatrix& v)
{
    for (auto [x, y] : {std::pair{&u.a, &v.a}, {&u.b, &v.b}, {&u.c, &v.c}, {&u.d, &v.d}}) {
        auto o = *x <=> *y;
        if (o != 0)
            return o;
    }
    return std::strong_ordering::equal;
}

PslMatrix operator*(const PslMatrix& g, const PslMatrix& h)
{
    // Composition of the actions: via the textbook matrices diag-conjugated by (1, -1).
    StdMatrix G = to_standard(g), H = to_standard(h);
    StdMatrix P{G.A * H.A + G.B * H.C, G.A * H.B + G.B * H.D, G.C * H.A + G.D * H.C, G.C * H.B + G.D * H.D};
    return from_standard(P);
}

StdMatrix to_standard(const PslMatrix& g)
{
    return {g.a, -g.b, -g.c, g.d};
}

PslMatrix from_standard(const StdMatrix& s)
{
    return PslMatrix(s.A, -s.B, -s.C, s.D);
}

Cusp Cusp::at_infinity(const RingSpec& r)
{
    Cusp c;
    c.infinity = true;
    c.lambda = QuadInt(r, 1);
    c.mu = QuadInt(r, 0);
    return c;
}

Cusp Cusp::make(const QuadInt& lambda, const QuadInt& mu)
{
    if (lambda.is_zero() && mu.is_zero())
        throw ZeroPair("cusp (0 : 0)");
    if (mu.is_zero())
        return at_infinity(lambda.ring);
    Cusp c;
    c.lambda = lambda;
    c.mu = mu;
    // Pick the unit multiple whose mu is lexicographically smallest among positive ones.
    bool first = true;
    for (auto& u : units(mu.ring)) {
        QuadInt l2 = lambda * u, m2 = mu * u;
        if (!lex_positive(m2))
            continue;
        if (first || m2 < c.mu || (m2 == c.mu && l2 < c.lambda)) {
            c.lambda = l2;
            c.mu = m2;
            first = false;
        }
    }
    return c;
}

Kxy Cusp::value() const
{
    return kdiv(lambda.ring.m, lambda.xy(), mu.xy());
}

bool operator==(const Cusp& u, const Cusp& v)
{
    if (u.infinity || v.infinity)
        return u.infinity == v.infinity;
    return u.value() == v.value();
}

Rat height_after(const PslMatrix& g, const HPoint& p)
{
    if (p.t <= 0)
        throw NotInterior("height_after needs t > 0");
    long m = g.ring().m;
    Kxy cz_d = kmul(m, g.c.xy(), p.z()) - g.d.xy();
    return knorm(m, cz_d) + p.t * knorm(m, g.c.xy());
}

HPoint act_interior(const PslMatrix& g, const HPoint& p)
{
    if (p.t <= 0)
        throw NotInterior("act_interior needs t > 0");
    long m = g.ring().m;
    Kxy z = p.z();
    Kxy a = g.a.xy(), b = g.b.xy(), c = g.c.xy(), d = g.d.xy();
    Rat D = knorm(m, kmul(m, c, z) - d) + p.t * knorm(m, c);
    Kxy left = kconj(d) - kmul(m, kconj(c), kconj(z));
    Kxy num = kmul(m, left, kmul(m, a, z) - b);
    Kxy ca = kmul(m, kconj(c), a);
    num = num - Kxy{p.t * ca.x, p.t * ca.y};
    return {num.x / D, num.y / D, p.t / (D * D)};
}

std::optional<Kxy> act_boundary(const PslMatrix& g, const Kxy& z)
{
    long m = g.ring().m;
    Kxy den = g.d.xy() - kmul(m, g.c.xy(), z);
    if (den.x == 0 && den.y == 0)
        return std::nullopt;
    return kdiv(m, kmul(m, g.a.xy(), z) - g.b.xy(), den);
}

Cusp act_cusp(const PslMatrix& g, const Cusp& s)
{
    if (s.infinity) {
        // lim z -> inf of (a z - b)/(-c z + d) = a / (-c)
        if (g.c.is_zero())
            return s;
        return Cusp::make(g.a, -g.c);
    }
    return Cusp::make(g.a * s.lambda - g.b * s.mu, g.d * s.mu - g.c * s.lambda);
}

}  // namespace bianchi
