#include "bianchi/swanfloor.hpp"

#include "bianchi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace bianchi {

namespace {

Int ifloor(const Rat& q)
{
    Int f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return f;
}

Int iceil(const Rat& q)
{
    Int f;
    mpz_cdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return f;
}

long isqrt(long n)
{
    long s = (long)std::sqrt((double)n);
    while (s * s > n)
        --s;
    while ((s + 1) * (s + 1) <= n)
        ++s;
    return s;
}

// Disks of squared radii r1, r2 at squared distance d2 meet (tangency included).
bool disks_meet(const Rat& d2, const Rat& r1, const Rat& r2)
{
    Rat e = d2 - r1 - r2;
    return e * e <= 4 * r1 * r2;
}

// Disk 2 lies strictly inside disk 1.
bool disk_inside(const Rat& d2, const Rat& r1, const Rat& r2)
{
    if (r2 >= r1)
        return false;
    Rat e = r1 + r2 - d2;
    return e > 0 && e * e > 4 * r1 * r2;
}

Polygon clip(const Polygon& poly, const Rat& A, const Rat& B, const Rat& C)
{
    Polygon out;
    size_t n = poly.size();
    if (n == 0)
        return out;
    std::vector<Rat> val(n);
    for (size_t i = 0; i < n; ++i)
        val[i] = A * poly[i].x + B * poly[i].y + C;
    for (size_t i = 0; i < n; ++i) {
        size_t j = (i + 1) % n;
        const Kxy& p = poly[i];
        const Kxy& q = poly[j];
        if (val[i] >= 0)
            out.push_back(p);
        if ((val[i] > 0 && val[j] < 0) || (val[i] < 0 && val[j] > 0)) {
            Rat s = val[i] / (val[i] - val[j]);
            out.push_back({p.x + s * (q.x - p.x), p.y + s * (q.y - p.y)});
        }
    }
    Polygon dedup;
    for (auto& p : out)
        if (dedup.empty() || !(dedup.back() == p))
            dedup.push_back(p);
    while (dedup.size() > 1 && dedup.front() == dedup.back())
        dedup.pop_back();
    return dedup;
}

Rat cross(const Kxy& o, const Kxy& a, const Kxy& b)
{
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

nlohmann::json rat_json(const Rat& q)
{
    Rat c = q;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rat rat_from_json(const nlohmann::json& j)
{
    std::string s = j.get<std::string>();
    auto pos = s.find('/');
    if (pos == std::string::npos)
        return Rat(Int(s));
    return frac(Int(s.substr(0, pos)), Int(s.substr(pos + 1)));
}

Hemisphere Hemisphere::make(const QuadInt& lambda, const QuadInt& mu)
{
    Hemisphere h;
    h.lambda = lambda;
    h.mu = mu;
    h.center = kdiv(mu.ring.m, lambda.xy(), mu.xy());
    h.radius_sq = Rat(1) / Rat(norm(mu));
    return h;
}

Rat Hemisphere::height(long m, const Kxy& z) const
{
    return radius_sq - knorm(m, z - center);
}

bool hemisphere_order(const Hemisphere& u, const Hemisphere& v)
{
    if (u.radius_sq != v.radius_sq)
        return u.radius_sq > v.radius_sq;
    return kless(u.center, v.center);
}

bool Strip::contains(const Kxy& z) const
{
    return z.x >= re_lo && z.x <= re_hi && z.y >= im_lo && z.y <= im_hi;
}

bool Strip::contains_half_open(const Kxy& z) const
{
    return z.x >= re_lo && z.x < re_hi && z.y >= im_lo && z.y < im_hi;
}

Strip Strip::grown(long m, const Rat& margin) const
{
    Rat my = margin / Rat(isqrt(m));
    return {re_lo - margin, re_hi + margin, im_lo - my, im_hi + my};
}

Strip fundamental_strip(const RingSpec& r)
{
    return {0, 1, 0, r.half() ? Rat(1, 2) : Rat(1)};
}

QuadInt lattice_shift(const RingSpec& r, const Kxy& z)
{
    if (r.half()) {
        Int kb = ifloor(2 * z.y);
        Rat x1 = z.x + frac(kb, 2);
        Int ka = ifloor(x1);
        return QuadInt(r, ka, kb);
    }
    return QuadInt(r, ifloor(z.x), ifloor(z.y));
}

HemisphereIndex::HemisphereIndex(long m, const std::vector<Hemisphere>& hs)
    : sqrt_m_(std::sqrt((double)m)), cell_(1.0)
{
    for (size_t i = 0; i < hs.size(); ++i) {
        long ix, iy;
        cell_of(hs[i].center, ix, iy);
        buckets_[key(ix, iy)].push_back((int)i);
    }
}

void HemisphereIndex::cell_of(const Kxy& z, long& ix, long& iy) const
{
    ix = (long)std::floor(z.x.get_d() / cell_);
    iy = (long)std::floor(z.y.get_d() * sqrt_m_ / cell_);
}

std::vector<int> HemisphereIndex::near_point(const Kxy& z) const
{
    return near_disk(z, 0.0);
}

std::vector<int> HemisphereIndex::near_disk(const Kxy& c, double radius) const
{
    std::vector<int> out;
    long ix, iy;
    cell_of(c, ix, iy);
    // radii are at most 1, one cell wide
    long reach = (long)std::ceil((radius + 1.0) / cell_) + 1;
    for (long dx = -reach; dx <= reach; ++dx)
        for (long dy = -reach; dy <= reach; ++dy) {
            auto it = buckets_.find(key(ix + dx, iy + dy));
            if (it != buckets_.end())
                out.insert(out.end(), it->second.begin(), it->second.end());
        }
    return out;
}

Hemisphere translate(const Hemisphere& h, const QuadInt& k)
{
    Hemisphere out = h;
    out.lambda = h.lambda + k * h.mu;
    out.center = h.center + k.xy();
    return out;
}

std::vector<QuadInt> lattice_vectors_into(const RingSpec& r, const Kxy& z, const Strip& box)
{
    std::vector<QuadInt> out;
    Rat step = r.half() ? Rat(1, 2) : Rat(1);
    for (Int b = iceil((box.im_lo - z.y) / step); b <= ifloor((box.im_hi - z.y) / step); ++b) {
        Rat sx = r.half() ? frac(-b, 2) : Rat(0);
        for (Int a = iceil(box.re_lo - z.x - sx); a <= ifloor(box.re_hi - z.x - sx); ++a)
            out.push_back(QuadInt(r, a, b));
    }
    return out;
}

namespace {

struct DiskGrid {
    double sm, cell;
    std::unordered_map<long long, std::vector<std::array<double, 3>>> cells;

    long long key(long ix, long iy) const { return (long long)ix * 1000003LL + iy; }
    void add(double x, double y, double rad)
    {
        cells[key((long)std::floor(x / cell), (long)std::floor(y * sm / cell))].push_back({x, y * sm, rad});
    }
    // Some stored disk strictly contains the given one (by a clear floating margin).
    bool covers(double x, double y, double rad, bool& borderline) const
    {
        borderline = false;
        double py = y * sm;
        long ix = (long)std::floor(x / cell), iy = (long)std::floor(py / cell);
        long reach = (long)std::ceil(1.0 / cell) + 1;
        for (long dx = -reach; dx <= reach; ++dx)
            for (long dy = -reach; dy <= reach; ++dy) {
                auto it = cells.find(key(ix + dx, iy + dy));
                if (it == cells.end())
                    continue;
                for (auto& d : it->second) {
                    double slack = d[2] - rad - std::hypot(d[0] - x, d[1] - py);
                    if (slack > 1e-9)
                        return true;
                    if (slack > -1e-9)
                        borderline = true;
                }
            }
        return false;
    }
};

}  // namespace

std::vector<Hemisphere> fundamental_hemispheres(const RingSpec& r, long norm_bound)
{
    long m = r.m;
    Strip st = fundamental_strip(r);
    std::vector<Hemisphere> all;
    for (auto& mu : elements_up_to_norm(r, norm_bound)) {
        if (mu.is_zero() || !lex_positive(mu))
            continue;
        Kxy mxy = mu.xy();
        Rat lo[2], hi[2];
        bool first = true;
        for (const Rat& x : {st.re_lo, st.re_hi})
            for (const Rat& y : {st.im_lo, st.im_hi}) {
                auto w = QuadInt::omega_coords(r, kmul(m, mxy, Kxy{x, y}));
                for (int k = 0; k < 2; ++k) {
                    if (first || w[k] < lo[k])
                        lo[k] = w[k];
                    if (first || w[k] > hi[k])
                        hi[k] = w[k];
                }
                first = false;
            }
        Int nmu = norm(mu);
        QuadInt cmu = conj(mu);
        for (Int b = iceil(lo[1]); b <= ifloor(hi[1]); ++b)
            for (Int a = iceil(lo[0]); a <= ifloor(hi[0]); ++a) {
                QuadInt lam(r, a, b);
                Kxy num = (lam * cmu).xy();
                Kxy c{num.x / nmu, num.y / nmu};
                if (!st.contains_half_open(c))
                    continue;
                if (gcd(norm(lam), nmu) != 1 && !is_unimodular_pair(lam, mu))
                    continue;
                Hemisphere h;
                h.lambda = lam;
                h.mu = mu;
                h.center = c;
                h.radius_sq = Rat(1) / Rat(nmu);
                all.push_back(std::move(h));
            }
    }
    std::sort(all.begin(), all.end(), hemisphere_order);
    // Unit multiples of (lambda, mu) give the same sphere.
    all.erase(std::unique(all.begin(), all.end(),
                          [](const Hemisphere& u, const Hemisphere& v) { return u.same_sphere(v); }),
              all.end());

    // Drop hemispheres lying strictly inside another one (or a translate of it).
    double sm = std::sqrt((double)m);
    DiskGrid grid{sm, 0.25, {}};
    Strip near = st.grown(m, 1);
    std::vector<Hemisphere> kept;
    for (auto& h : all) {
        double x = h.center.x.get_d(), y = h.center.y.get_d(), rad = std::sqrt(h.radius_sq.get_d());
        bool borderline = false;
        if (grid.covers(x, y, rad, borderline))
            continue;
        if (borderline) {
            bool inside = false;
            for (auto& u : kept) {
                for (auto& k : lattice_vectors_into(r, u.center, near)) {
                    Kxy c = u.center + k.xy();
                    if (disk_inside(knorm(m, c - h.center), u.radius_sq, h.radius_sq)) {
                        inside = true;
                        break;
                    }
                }
                if (inside)
                    break;
            }
            if (inside)
                continue;
        }
        for (auto& k : lattice_vectors_into(r, h.center, near)) {
            Kxy c = h.center + k.xy();
            grid.add(c.x.get_d(), c.y.get_d(), rad);
        }
        kept.push_back(h);
    }
    return kept;
}

std::vector<Hemisphere> enumerate_hemispheres(const RingSpec& r, long norm_bound, const Strip& box)
{
    std::vector<Hemisphere> out;
    for (auto& h : fundamental_hemispheres(r, norm_bound))
        for (auto& k : lattice_vectors_into(r, h.center, box))
            out.push_back(translate(h, k));
    std::sort(out.begin(), out.end(), hemisphere_order);
    return out;
}

std::vector<Hemisphere> enumerate_hemispheres(const RingSpec& r, long norm_bound)
{
    return enumerate_hemispheres(r, norm_bound, fundamental_strip(r).grown(r.m, 1));
}

Polygon power_cell(long m, const Hemisphere& h, const std::vector<const Hemisphere*>& candidates)
{
    const Kxy& c = h.center;
    Polygon poly{{c.x - 1, c.y - 1}, {c.x + 1, c.y - 1}, {c.x + 1, c.y + 1}, {c.x - 1, c.y + 1}};
    Rat cs = knorm(m, c);
    for (const Hemisphere* t : candidates) {
        Rat A = 2 * (c.x - t->center.x);
        Rat B = 2 * m * (c.y - t->center.y);
        Rat C = h.radius_sq - t->radius_sq - cs + knorm(m, t->center);
        poly = clip(poly, A, B, C);
        if (poly.size() < 3)
            return {};
    }
    return poly;
}

Rat polygon_area2(long m, const Polygon& p)
{
    (void)m;
    Rat a = 0;
    for (size_t i = 0; i < p.size(); ++i) {
        const Kxy& u = p[i];
        const Kxy& v = p[(i + 1) % p.size()];
        a += u.x * v.y - u.y * v.x;
    }
    return a;
}

namespace {

// Squared Euclidean distance from c to the closed convex polygon.
Rat distance2_to_polygon(long m, const Polygon& p, const Kxy& c)
{
    bool inside = true;
    for (size_t i = 0; i < p.size(); ++i)
        if (cross(p[i], p[(i + 1) % p.size()], c) < 0)
            inside = false;
    if (inside)
        return 0;
    Rat best = -1;
    for (size_t i = 0; i < p.size(); ++i) {
        const Kxy& a = p[i];
        const Kxy& b = p[(i + 1) % p.size()];
        Kxy ab = b - a, ac = c - a;
        Rat len = knorm(m, ab);
        Rat s = len == 0 ? Rat(0) : kdot(m, ac, ab) / len;
        if (s < 0)
            s = 0;
        if (s > 1)
            s = 1;
        Kxy q{a.x + s * ab.x, a.y + s * ab.y};
        Rat d = knorm(m, c - q);
        if (best < 0 || d < best)
            best = d;
    }
    return best;
}

struct DiskD {
    double x, y, r;
};

std::vector<DiskD> disks_double(long m, const std::vector<Hemisphere>& pool)
{
    std::vector<DiskD> out;
    out.reserve(pool.size());
    double sm = std::sqrt((double)m);
    for (auto& h : pool)
        out.push_back({h.center.x.get_d(), h.center.y.get_d() * sm, std::sqrt(h.radius_sq.get_d())});
    return out;
}

std::vector<const Hemisphere*> meeting(long m, const Hemisphere& h, int hi, const std::vector<Hemisphere>& pool,
                                       const std::vector<DiskD>& dd, const std::vector<int>& near, bool& contained)
{
    const double eps = 1e-9;
    contained = false;
    std::vector<const Hemisphere*> out;
    const DiskD& hd = dd[hi];
    for (int j : near) {
        if (j == hi)
            continue;
        const DiskD& td = dd[j];
        double dist = std::hypot(td.x - hd.x, td.y - hd.y);
        if (dist > td.r + hd.r + eps)
            continue;
        if (dist + hd.r < td.r - eps) {
            contained = true;
            return {};
        }
        const Hemisphere& t = pool[j];
        if (t.same_sphere(h))
            continue;
        Rat d2 = knorm(m, t.center - h.center);
        if (disk_inside(d2, t.radius_sq, h.radius_sq)) {
            contained = true;
            return {};
        }
        if (disks_meet(d2, h.radius_sq, t.radius_sq))
            out.push_back(&t);
    }
    std::sort(out.begin(), out.end(), [](const Hemisphere* a, const Hemisphere* b) {
        return a->radius_sq > b->radius_sq;
    });
    return out;
}

}  // namespace

bool is_strictly_below(long m, const std::vector<Hemisphere>& candidates, const Hemisphere& h)
{
    std::vector<int> all(candidates.size());
    for (size_t i = 0; i < all.size(); ++i)
        all[i] = (int)i;
    std::vector<Hemisphere> pool = candidates;
    pool.push_back(h);
    all.push_back((int)candidates.size());
    auto dd = disks_double(m, pool);
    bool contained = false;
    auto nb = meeting(m, h, (int)candidates.size(), pool, dd, all, contained);
    if (contained)
        return true;
    Polygon p = power_cell(m, h, nb);
    if (p.empty())
        return true;
    // The closed region where h is highest must miss the closed disk.
    return distance2_to_polygon(m, p, h.center) > h.radius_sq;
}

namespace {

void fill_certificate(FloorResult& fr)
{
    long m = fr.ring.m;
    Certificate& cert = fr.certificate;
    Strip near = fr.strip.grown(m, Rat(1, 2));
    cert.coverage = true;
    cert.needed_regular = 0;
    cert.uncovered_cusps = true;
    bool have_min = false;
    std::set<std::pair<Rat, Rat>> sing;
    for (auto& f : fr.faces) {
        Rat xlo = f.poly[0].x, xhi = xlo, ylo = f.poly[0].y, yhi = ylo;
        for (auto& v : f.poly) {
            xlo = std::min(xlo, v.x);
            xhi = std::max(xhi, v.x);
            ylo = std::min(ylo, v.y);
            yhi = std::max(yhi, v.y);
        }
        if (xhi < near.re_lo || xlo > near.re_hi || yhi < near.im_lo || ylo > near.im_hi)
            continue;
        const Hemisphere& h = fr.hemispheres[f.hemi];
        std::vector<Rat> ts;
        for (auto& v : f.poly)
            ts.push_back(h.height(m, v));
        for (size_t i = 0; i < ts.size(); ++i) {
            if (ts[i] < 0)
                cert.coverage = false;
            else if (ts[i] == 0) {
                if (sing.insert({f.poly[i].x, f.poly[i].y}).second && !is_singular_cusp(fr.ring, f.poly[i]))
                    cert.uncovered_cusps = false;
            } else if (!have_min || ts[i] < cert.min_height) {
                cert.min_height = ts[i];
                have_min = true;
            }
        }
    }
    if (have_min) {
        Int need = ifloor(Rat(1) / cert.min_height);
        cert.needed_regular = need.get_si();
    }
    fr.singular.clear();
    for (auto& [x, y] : sing)
        fr.singular.push_back({x, y});
}

}  // namespace

FloorResult floor_at_bound(const RingSpec& r, long norm_bound)
{
    long m = r.m;
    FloorResult fr;
    fr.ring = r;
    fr.strip = fundamental_strip(r);
    auto near_pool = enumerate_hemispheres(r, norm_bound, fr.strip.grown(m, 2));
    HemisphereIndex index(m, near_pool);
    auto dd = disks_double(m, near_pool);

    // Cells of hemispheres centred in the strip; the rest are translates.
    std::map<std::pair<Rat, Rat>, Polygon> cells;
    double diam = 0;
    double sm = std::sqrt((double)m);
    for (size_t i = 0; i < near_pool.size(); ++i) {
        const Hemisphere& h = near_pool[i];
        if (!fr.strip.contains_half_open(h.center))
            continue;
        bool contained = false;
        auto near = index.near_disk(h.center, std::sqrt(h.radius_sq.get_d()));
        auto nb = meeting(m, h, (int)i, near_pool, dd, near, contained);
        if (contained)
            continue;
        Polygon p = power_cell(m, h, nb);
        if (p.size() < 3 || polygon_area2(m, p) <= 0)
            continue;
        for (auto& u : p)
            for (auto& v : p)
                diam = std::max(diam, std::hypot(Rat(u.x - v.x).get_d(), Rat(u.y - v.y).get_d() * sm));
        cells[{h.center.x, h.center.y}] = std::move(p);
    }
    fr.cell_diameter = frac((long)std::ceil(diam * 4) + 1, 4);
    fr.face_region = fr.strip.grown(m, fr.cell_diameter + 2);
    fr.hemispheres = enumerate_hemispheres(r, norm_bound, fr.face_region);
    for (size_t i = 0; i < fr.hemispheres.size(); ++i) {
        const Hemisphere& h = fr.hemispheres[i];
        Kxy k = lattice_shift(r, h.center).xy();
        Kxy c = h.center - k;
        auto it = cells.find({c.x, c.y});
        if (it == cells.end())
            continue;
        Polygon p;
        for (auto& v : it->second)
            p.push_back(v + k);
        fr.faces.push_back({(int)i, std::move(p)});
    }
    fr.certificate.norm_bound = norm_bound;
    fill_certificate(fr);
    return fr;
}

FloorResult compute_floor(const RingSpec& r, const FloorOptions& opt)
{
    long nb = std::max(1L, opt.start_bound);
    while (true) {
        if (nb > opt.ceiling)
            throw BoundExceeded("norm bound " + std::to_string(nb) + " exceeds ceiling " + std::to_string(opt.ceiling));
        FloorResult fr = floor_at_bound(r, nb);
        if (fr.certificate.holds())
            return fr;
        long next = nb + nb / 2 + 1;
        if (fr.certificate.coverage) {
            next = std::max(next, fr.certificate.needed_regular);
        }
        if (next > opt.ceiling && nb < opt.ceiling)
            next = opt.ceiling;
        nb = next;
    }
}

bool is_singular_cusp(const RingSpec& r, const Kxy& s)
{
    auto w = QuadInt::omega_coords(r, s);
    Int n = lcm(w[0].get_den(), w[1].get_den());
    QuadInt lam(r, Int(w[0] * n), Int(w[1] * n)), mu(r, n);
    OIdeal I = ideal_from_pair(lam, mu);
    if (ideal_class_is_principal(I))
        return false;
    // A hemisphere covers lambda / mu exactly when I has a nonzero element of norm below N(mu).
    Int nmu = n * n;
    for (auto& x : elements_up_to_norm(r, Int(nmu - 1).get_si()))
        if (!x.is_zero() && I.contains(x))
            return false;
    return true;
}

std::vector<Cusp> singular_points(const RingSpec& r)
{
    long m = r.m;
    Strip st = fundamental_strip(r);
    std::vector<Cusp> out;
    std::vector<OIdeal> classes;
    long bound = std::max(4L, -r.discriminant);
    for (auto& mu : elements_up_to_norm(r, bound)) {
        if (mu.is_zero() || !lex_positive(mu))
            continue;
        // lambda runs over representatives modulo mu * O inside mu * strip
        Kxy mxy = mu.xy();
        Rat lo[2], hi[2];
        bool first = true;
        for (const Rat& x : {st.re_lo, st.re_hi})
            for (const Rat& y : {st.im_lo, st.im_hi}) {
                auto w = QuadInt::omega_coords(r, kmul(m, mxy, Kxy{x, y}));
                for (int k = 0; k < 2; ++k) {
                    if (first || w[k] < lo[k])
                        lo[k] = w[k];
                    if (first || w[k] > hi[k])
                        hi[k] = w[k];
                }
                first = false;
            }
        for (Int b = iceil(lo[1]); b <= ifloor(hi[1]); ++b)
            for (Int a = iceil(lo[0]); a <= ifloor(hi[0]); ++a) {
                QuadInt lam(r, a, b);
                if (lam.is_zero())
                    continue;
                Kxy s = kdiv(m, lam.xy(), mxy);
                if (!st.contains_half_open(s))
                    continue;
                OIdeal I = ideal_from_pair(lam, mu);
                if (ideal_class_is_principal(I))
                    continue;
                bool seen = false;
                for (auto& J : classes)
                    if (same_ideal_class(I, J))
                        seen = true;
                if (seen)
                    continue;
                if (!is_singular_cusp(r, s))
                    continue;
                classes.push_back(I);
                out.push_back(Cusp::make(lam, mu));
            }
    }
    return out;
}

int RawCellComplex::find_vertex(const Kxy& z) const
{
    auto it = vindex_.find({z.x, z.y});
    return it == vindex_.end() ? -1 : it->second;
}

int RawCellComplex::add_vertex(const Kxy& z, const Rat& t, bool singular)
{
    int v = find_vertex(z);
    if (v >= 0)
        return v;
    v = (int)vertices.size();
    vertices.push_back({{z.x, z.y, t}, singular});
    vindex_[{z.x, z.y}] = v;
    return v;
}

int RawCellComplex::find_edge(int a, int b) const
{
    auto it = eindex_.find({std::min(a, b), std::max(a, b)});
    return it == eindex_.end() ? -1 : it->second;
}

void RawCellComplex::build_index()
{
    hindex_ = HemisphereIndex(ring.m, hemispheres);
    vindex_.clear();
    for (size_t i = 0; i < vertices.size(); ++i)
        vindex_[{vertices[i].p.x, vertices[i].p.y}] = (int)i;
    vcarriers_.assign(vertices.size(), {});
    vcarriers_done_.assign(vertices.size(), 0);
}

void RawCellComplex::rebuild()
{
    eindex_.clear();
    edges.clear();
    for (auto& f : faces) {
        size_t n = f.boundary.size();
        for (size_t i = 0; i < n; ++i) {
            int a = f.boundary[i], b = f.boundary[(i + 1) % n];
            auto k = std::make_pair(std::min(a, b), std::max(a, b));
            if (eindex_.count(k))
                continue;
            RawEdge e;
            e.v0 = k.first;
            e.v1 = k.second;
            eindex_[k] = (int)edges.size();
            edges.push_back(e);
        }
    }
    vcarriers_.resize(vertices.size());
    vcarriers_done_.resize(vertices.size(), 0);
    for (auto& e : edges)
        e.carriers = carriers_through(e.v0, e.v1);
}

const std::vector<int>& RawCellComplex::vertex_carriers(int v) const
{
    if ((size_t)v >= vcarriers_.size()) {
        vcarriers_.resize(vertices.size());
        vcarriers_done_.resize(vertices.size(), 0);
    }
    if (!vcarriers_done_[v]) {
        const HPoint& p = vertices[v].p;
        std::vector<int> out;
        for (int j : hindex_.near_point(p.z()))
            if (hemispheres[j].height(ring.m, p.z()) == p.t)
                out.push_back(j);
        std::sort(out.begin(), out.end());
        vcarriers_[v] = std::move(out);
        vcarriers_done_[v] = 1;
    }
    return vcarriers_[v];
}

std::vector<int> RawCellComplex::carriers_through(int a, int b) const
{
    if (vertices[a].singular && vertices[b].singular) {
        // Carriers pass through the midpoint at floor height and through both ends.
        const Kxy pa = vertices[a].p.z(), pb = vertices[b].p.z();
        Kxy mid{(pa.x + pb.x) / 2, (pa.y + pb.y) / 2};
        Rat t = floor_height(mid, -1);
        if (t <= 0)
            throw DegenerateArrangement("edge between singular points leaves the floor");
        std::vector<int> out;
        for (int j : hindex_.near_point(mid))
            if (hemispheres[j].height(ring.m, mid) == t && hemispheres[j].height(ring.m, pa) == 0 &&
                hemispheres[j].height(ring.m, pb) == 0)
                out.push_back(j);
        std::sort(out.begin(), out.end());
        return out;
    }
    if (vertices[a].singular)
        std::swap(a, b);
    std::vector<int> out;
    const HPoint& q = vertices[b].p;
    for (int j : vertex_carriers(a))
        if (hemispheres[j].height(ring.m, q.z()) == q.t)
            out.push_back(j);
    return out;
}

bool RawCellComplex::cell_in_region(int dim, int id) const
{
    for (int v : cell_vertices(dim, id))
        if (!region.contains(vertices[v].p.z()))
            return false;
    return true;
}

std::vector<int> RawCellComplex::cell_vertices(int dim, int id) const
{
    if (dim == 0)
        return {id};
    if (dim == 1)
        return {edges[id].v0, edges[id].v1};
    return faces[id].boundary;
}

Rat RawCellComplex::floor_height(const Kxy& z, int hemi_hint) const
{
    Rat best = hemi_hint >= 0 ? hemispheres[hemi_hint].height(ring.m, z) : Rat(-1);
    for (int j : hindex_.near_point(z)) {
        Rat h = hemispheres[j].height(ring.m, z);
        if (h > best)
            best = h;
    }
    return best;
}

std::vector<int> RawCellComplex::carriers_at(const HPoint& p) const
{
    std::vector<int> out;
    for (int j : hindex_.near_point(p.z()))
        if (hemispheres[j].height(ring.m, p.z()) == p.t)
            out.push_back(j);
    std::sort(out.begin(), out.end());
    return out;
}

void RawCellComplex::insert_on_side(int a, int b, int v)
{
    for (auto& f : faces) {
        auto& bd = f.boundary;
        size_t n = bd.size();
        for (size_t i = 0; i < n; ++i) {
            int u = bd[i], w = bd[(i + 1) % n];
            if ((u == a && w == b) || (u == b && w == a)) {
                bd.insert(bd.begin() + (long)i + 1, v);
                break;
            }
        }
    }
}

void RawCellComplex::split_face(int f, int va, int vb)
{
    auto bd = faces[f].boundary;
    auto ia = std::find(bd.begin(), bd.end(), va) - bd.begin();
    auto ib = std::find(bd.begin(), bd.end(), vb) - bd.begin();
    if (ia == (long)bd.size() || ib == (long)bd.size() || ia == ib)
        throw DegenerateArrangement("split_face: chord ends are not on the face");
    if (ia > ib)
        std::swap(ia, ib);
    std::vector<int> p1(bd.begin() + ia, bd.begin() + ib + 1);
    std::vector<int> p2(bd.begin() + ib, bd.end());
    p2.insert(p2.end(), bd.begin(), bd.begin() + ia + 1);
    if (p1.size() < 3 || p2.size() < 3)
        throw DegenerateArrangement("split_face: chord is a side");
    replace_face(f, {p1, p2});
}

void RawCellComplex::replace_face(int f, const std::vector<std::vector<int>>& parts)
{
    int hemi = faces[f].hemi;
    faces[f].boundary = parts.at(0);
    for (size_t i = 1; i < parts.size(); ++i)
        faces.push_back({hemi, parts[i]});
}

namespace {

nlohmann::json quad_json(const QuadInt& x)
{
    return nlohmann::json::array({x.a.get_str(), x.b.get_str()});
}

}  // namespace

nlohmann::json RawCellComplex::to_json() const
{
    nlohmann::json j;
    j["m"] = ring.m;
    j["strip"] = {rat_json(strip.re_lo), rat_json(strip.re_hi), rat_json(strip.im_lo), rat_json(strip.im_hi)};
    std::map<int, int> used;
    for (auto& f : faces)
        used.emplace(f.hemi, 0);
    for (auto& e : edges)
        for (int c : e.carriers)
            used.emplace(c, 0);
    int k = 0;
    nlohmann::json hs = nlohmann::json::array();
    for (auto& [h, idx] : used) {
        idx = k++;
        const Hemisphere& s = hemispheres[h];
        hs.push_back({{"lambda", quad_json(s.lambda)},
                      {"mu", quad_json(s.mu)},
                      {"center", {rat_json(s.center.x), rat_json(s.center.y)}},
                      {"radius_sq", rat_json(s.radius_sq)}});
    }
    j["hemispheres"] = hs;
    nlohmann::json vs = nlohmann::json::array();
    for (auto& v : vertices)
        vs.push_back({{"x", rat_json(v.p.x)}, {"y", rat_json(v.p.y)}, {"t", rat_json(v.p.t)}, {"singular", v.singular}});
    j["vertices"] = vs;
    nlohmann::json es = nlohmann::json::array();
    for (auto& e : edges) {
        nlohmann::json cs = nlohmann::json::array();
        for (int c : e.carriers)
            cs.push_back(used.at(c));
        es.push_back({{"v", {e.v0, e.v1}}, {"carriers", cs}});
    }
    j["edges"] = es;
    nlohmann::json fs = nlohmann::json::array();
    for (auto& f : faces)
        fs.push_back({{"hemisphere", used.at(f.hemi)}, {"boundary", f.boundary}});
    j["faces"] = fs;
    return j;
}

std::string RawCellComplex::to_obj() const
{
    std::ostringstream os;
    double sm = std::sqrt((double)ring.m);
    os << "# floor complex m=" << ring.m << "\n";
    for (auto& v : vertices)
        os << "v " << v.p.x.get_d() << " " << v.p.y.get_d() * sm << " " << std::sqrt(v.p.t.get_d()) << "\n";
    for (auto& f : faces) {
        os << "f";
        for (int b : f.boundary)
            os << " " << b + 1;
        os << "\n";
    }
    return os.str();
}

RawCellComplex extract_cells(const FloorResult& floor)
{
    long m = floor.ring.m;
    RawCellComplex cx;
    cx.ring = floor.ring;
    cx.strip = floor.strip;
    cx.region = floor.strip.grown(m, floor.cell_diameter);
    cx.hemispheres = floor.hemispheres;
    cx.build_index();

    std::set<std::pair<Rat, Rat>> singular;
    for (auto& s : floor.singular)
        singular.insert({s.x, s.y});

    for (auto& f : floor.faces) {
        const Hemisphere& h = floor.hemispheres[f.hemi];
        RawFace rf;
        rf.hemi = f.hemi;
        for (auto& v : f.poly) {
            Rat t = h.height(m, v);
            if (t < 0)
                continue;
            if (t == 0 && !is_singular_cusp(floor.ring, v))
                throw DegenerateArrangement("floor touches the boundary at a non-singular point");
            rf.boundary.push_back(cx.add_vertex(v, t, t == 0));
        }
        if (rf.boundary.size() == f.poly.size())
            cx.faces.push_back(std::move(rf));
    }

    // Make the faces conforming: insert vertices that lie inside another face's side.
    {
        double sm = std::sqrt((double)m);
        const double cell = 0.125;
        std::unordered_map<long long, std::vector<int>> grid;
        auto gk = [](long ix, long iy) { return (long long)ix * 1000003LL + iy; };
        for (size_t i = 0; i < cx.vertices.size(); ++i) {
            long ix = (long)std::floor(cx.vertices[i].p.x.get_d() / cell);
            long iy = (long)std::floor(cx.vertices[i].p.y.get_d() * sm / cell);
            grid[gk(ix, iy)].push_back((int)i);
        }
        for (auto& f : cx.faces) {
            std::vector<int> nb;
            size_t n = f.boundary.size();
            for (size_t i = 0; i < n; ++i) {
                int a = f.boundary[i], b = f.boundary[(i + 1) % n];
                nb.push_back(a);
                const Kxy pa = cx.vertices[a].p.z(), pb = cx.vertices[b].p.z();
                double x0 = std::min(pa.x.get_d(), pb.x.get_d()), x1 = std::max(pa.x.get_d(), pb.x.get_d());
                double y0 = std::min(pa.y.get_d(), pb.y.get_d()) * sm, y1 = std::max(pa.y.get_d(), pb.y.get_d()) * sm;
                std::vector<std::pair<Rat, int>> inside;
                for (long ix = (long)std::floor(x0 / cell) - 1; ix <= (long)std::floor(x1 / cell) + 1; ++ix)
                    for (long iy = (long)std::floor(y0 / cell) - 1; iy <= (long)std::floor(y1 / cell) + 1; ++iy) {
                        auto it = grid.find(gk(ix, iy));
                        if (it == grid.end())
                            continue;
                        for (int c : it->second) {
                            if (c == a || c == b)
                                continue;
                            Kxy pc = cx.vertices[c].p.z();
                            if (cross(pa, pb, pc) != 0)
                                continue;
                            Kxy ab = pb - pa, ac = pc - pa;
                            Rat s = (ab.x != 0) ? ac.x / ab.x : ac.y / ab.y;
                            if (s > 0 && s < 1)
                                inside.push_back({s, c});
                        }
                    }
                std::sort(inside.begin(), inside.end());
                for (auto& [s, c] : inside)
                    nb.push_back(c);
            }
            f.boundary = nb;
        }
    }
    cx.rebuild();
    return cx;
}

}  // namespace bianchi
