#include "support.hpp"

#include "bianchi/errors.hpp"

#include <mutex>

namespace bianchi::testing {

const Pipeline& pipeline(long m, int q_max)
{
    static std::map<std::pair<long, int>, Pipeline> cache;
    static std::mutex mu;
    std::lock_guard lock(mu);
    auto key = std::make_pair(m, q_max);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    RunConfig cfg;
    cfg.m = m;
    cfg.q_max = q_max;
    Pipeline p = run_geometry(cfg);
    run_homology(p);
    return cache.emplace(key, std::move(p)).first->second;
}

const Fixture& fixture(long m)
{
    static std::map<long, Fixture> cache;
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    auto path = find_fixture(default_fixture_dir(), m);
    if (!path) throw FormatError("no fixture for m = " + std::to_string(m));
    return cache.emplace(m, load_fixture(*path)).first->second;
}

QuadInt random_quad(const RingSpec& r, std::mt19937& rng, int bound)
{
    std::uniform_int_distribution<int> d(-bound, bound);
    return QuadInt(r, d(rng), d(rng));
}

PslMatrix random_element(const RingSpec& r, std::mt19937& rng, int length)
{
    QuadInt zero(r, 0), one(r, 1);
    PslMatrix inv(zero, one, -one, zero);
    auto us = units(r);
    PslMatrix g = PslMatrix::identity(r);
    std::uniform_int_distribution<int> pick(0, 2);
    for (int i = 0; i < length; ++i) {
        switch (pick(rng)) {
        case 0: g = g * PslMatrix::translation(random_quad(r, rng, 2)); break;
        case 1: g = g * PslMatrix::unit_rotation(us[rng() % us.size()]); break;
        default: g = g * inv; break;
        }
    }
    return g;
}

HPoint random_point(std::mt19937& rng)
{
    std::uniform_int_distribution<int> num(-40, 40), den(1, 9), pos(1, 40);
    return {frac(num(rng), den(rng)), frac(num(rng), den(rng)), frac(pos(rng), den(rng))};
}

IntMatrix random_unimodular(int n, std::mt19937& rng, int steps)
{
    IntMatrix u = IntMatrix::identity(n);
    if (n < 2) return u;
    std::uniform_int_distribution<int> idx(0, n - 1), coef(-3, 3);
    for (int s = 0; s < steps; ++s) {
        int i = idx(rng), j = idx(rng);
        if (i == j) continue;
        int c = coef(rng);
        for (int k = 0; k < n; ++k) u.at(i, k) += c * u.at(j, k);
    }
    return u;
}

IntMatrix random_matrix(int rows, int cols, std::mt19937& rng, int bound)
{
    std::uniform_int_distribution<int> d(-bound, bound);
    IntMatrix m(rows, cols);
    for (auto& e : m.entries) e = d(rng);
    return m;
}

}  // namespace bianchi::testing
