#include "properties.hpp"
#include "support.hpp"

#include "bianchi/reportcli.hpp"

#include <iostream>

using namespace bianchi;
using namespace bianchi::testing;

namespace {

const long fixture_rings[] = {5, 6, 10, 13, 15};
const long trivial_rings[] = {1, 2, 3, 7, 11};

struct Criterion {
    bool pass = true;
    std::vector<std::string> notes;

    void take(long m, const std::vector<CheckItem>& items)
    {
        if (items.empty()) fail("m=" + std::to_string(m) + ": nothing checked");
        for (auto& c : items)
            if (!c.pass) fail("m=" + std::to_string(m) + " " + c.name + ": " + c.detail);
    }
    void take(const std::vector<std::string>& failures)
    {
        for (auto& f : failures) fail(f);
    }
    void fail(const std::string& why)
    {
        pass = false;
        notes.push_back(why);
    }
};

std::vector<CheckItem> only(const std::vector<CheckItem>& items, const std::string& needle)
{
    std::vector<CheckItem> out;
    for (auto& c : items)
        if (c.name.find(needle) != std::string::npos) out.push_back(c);
    return out;
}

void report(int n, const std::string& title, const Criterion& c)
{
    std::cout << "criterion " << n << ": " << (c.pass ? "PASS" : "FAIL") << "  " << title << "\n";
    for (size_t i = 0; i < c.notes.size() && i < 5; ++i) std::cout << "    " << c.notes[i] << "\n";
}

}  // namespace

int main()
{
    Criterion c[9];
    try {
        for (long m : fixture_rings) {
            const Pipeline& p = pipeline(m);
            const Fixture& f = *p.fixture;
            const SpectralPages& z = p.runs.at(CoeffRing::Z);
            c[1].take(m, check_geometry(p.complex, f));
            c[2].take(m, check_euler(p.complex, f));
            c[3].take(m, check_d1(z, f));
            if (!f.d2.empty()) c[4].take(m, check_d2(p.runs, f));
            auto e3 = only(check_pages(p.runs, f), "Einf_0,1 over Z");
            if (m != 6) c[4].take(m, e3);
            c[5].take(m, check_homology(p.homology, f));
            if ((int)p.homology.size() != 12) c[5].fail("m=" + std::to_string(m) + ": fewer than 12 degrees");
            c[6].take(m, check_mod_p(p.runs, f));
            if (m == 5 || m == 10 || m == 15) c[8].take(m, check_low_degree(z, f));
        }
        for (long m : trivial_rings)
            for (auto& [ring, P] : pipeline(m).runs)
                if (!P.has_d2 || !P.d2.is_zero()) c[4].fail("m=" + std::to_string(m) + ": d2 nonzero over " + coeff_name(ring));

        c[7].take(norm_multiplicativity(500, 1));
        c[7].take(action_law(500, 2));
        c[7].take(smith_canonicity(200, 3));
        c[7].take(oracle_agreement(12));
        for (long m : {1, 2, 3, 5, 6, 7, 10, 11, 13, 15}) {
            const Pipeline& p = pipeline(m);
            c[7].take(conjugation_covariance(p.complex));
            c[7].take(d1_squares_to_zero(p));
            c[7].take(section_independence(p));
            c[7].take(uct_consistency(p));
        }
    } catch (const std::exception& e) {
        std::cout << "error: " << e.what() << "\n";
        return 1;
    }

    const char* titles[] = {"",
                            "cell orbit counts and stabilizer types",
                            "equivariant Euler characteristic and its summands",
                            "d1 ranks and elementary divisors",
                            "d2 images, kernels and E3",
                            "integral homology for q <= 12, unique extensions",
                            "mod-p dimensions for q <= 12",
                            "property suites",
                            "low-degree sequence against the abelianization"};
    bool all = true;
    for (int i = 1; i <= 8; ++i) {
        report(i, titles[i], c[i]);
        all = all && c[i].pass;
    }
    return all ? 0 : 1;
}
