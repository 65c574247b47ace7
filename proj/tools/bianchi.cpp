#include "bianchi/errors.hpp"
#include "bianchi/quadring.hpp"
#include "bianchi/reportcli.hpp"

#include "CLI11.hpp"

#include <iostream>

using namespace bianchi;

namespace {

std::vector<CoeffRing> parse_coeffs(const std::string& s)
{
    if (s == "all") return {CoeffRing::Z, CoeffRing::Z2, CoeffRing::Z3, CoeffRing::Z4};
    return {coeff_from_name(s)};
}

void add_common(CLI::App* sub, long& m, std::string& coeff, int& q_max, long& ceiling, std::string& export_dir,
                std::string& fixtures, bool& as_json)
{
    sub->add_option("-m", m, "square-free m > 0 for Q(sqrt(-m))")->required()->check([](const std::string& s) {
        long v = 0;
        try {
            v = std::stol(s);
        } catch (const std::exception&) {
            return std::string("not an integer");
        }
        return is_square_free(v) && v > 0 ? std::string() : "m must be a positive square-free integer";
    });
    sub->add_option("--coeff", coeff, "coefficient ring")->check(CLI::IsMember({"Z", "Z2", "Z3", "Z4", "all"}));
    sub->add_option("--qmax", q_max, "highest homological degree")->check(CLI::Range(2, 64));
    sub->add_option("--norm-ceiling", ceiling, "largest hemisphere norm tried")->check(CLI::PositiveNumber);
    sub->add_option("--export-dir", export_dir, "directory for JSON and OBJ exports");
    sub->add_option("--fixtures", fixtures, "fixture directory");
    sub->add_flag("--json", as_json, "machine-readable output");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Homology of Bianchi groups"};
    app.require_subcommand(1);

    long m = 0;
    std::string coeff = "all", export_dir, fixtures;
    int q_max = 12;
    long ceiling = 4000;
    bool as_json = false;

    auto* domain = app.add_subcommand("domain", "fundamental domain and cell orbits");
    auto* homology = app.add_subcommand("homology", "integral homology and mod-p dimensions");
    auto* verify = app.add_subcommand("verify", "compare computed data with the stored fixtures");
    auto* pages = app.add_subcommand("pages", "spectral sequence pages");
    for (auto* s : {domain, homology, verify, pages}) add_common(s, m, coeff, q_max, ceiling, export_dir, fixtures, as_json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    RunConfig cfg;
    cfg.m = m;
    cfg.q_max = q_max;
    cfg.norm_ceiling = ceiling;
    cfg.export_dir = export_dir;
    cfg.fixture_dir = fixtures;
    cfg.json = as_json;
    try {
        cfg.coeffs = parse_coeffs(coeff);
        cfg.validate();
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    if (domain->parsed()) return cmd_domain(cfg, std::cout);
    if (homology->parsed()) return cmd_homology(cfg, std::cout);
    if (verify->parsed()) return cmd_verify(cfg, std::cout);
    return cmd_pages(cfg, std::cout);
}
