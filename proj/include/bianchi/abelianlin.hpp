#pragma once

#include "bianchi/quadring.hpp"

#include <string>
#include <vector>

namespace bianchi {

using IntVec = std::vector<Int>;

// Dense integer matrix, row-major.
struct IntMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Int> entries;

    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), entries((size_t)r * c) {}
    static IntMatrix identity(int n);
    static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);
    static IntMatrix diagonal(const IntVec& d);

    Int& at(int i, int j) { return entries[(size_t)i * cols + j]; }
    const Int& at(int i, int j) const { return entries[(size_t)i * cols + j]; }

    IntMatrix transpose() const;
    bool is_zero() const;
    IntVec column(int j) const;
    IntVec apply(const IntVec& x) const;
    // Columns of this followed by the columns of o.
    IntMatrix hcat(const IntMatrix& o) const;
    // Rows of this followed by the rows of o.
    IntMatrix vcat(const IntMatrix& o) const;
    std::string str() const;

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);

// U * M * V = S with U, V unimodular and S diagonal, each diagonal entry dividing the next.
struct SmithForm {
    IntMatrix U, S, V;
    IntMatrix U_inv;   // inverse of U, kept for change-of-basis bookkeeping

    IntVec diagonal() const;
    int rank() const;
};

SmithForm smith_normal_form(const IntMatrix& M);
// Nonzero diagonal entries of the Smith form.
IntVec elementary_divisors(const IntMatrix& M);
int rank_over_q(const IntMatrix& M);
int rank_mod_p(const IntMatrix& M, long p);

// Columns spanning the same lattice, in column echelon form with positive pivots.
IntMatrix lattice_basis(const IntMatrix& gens);
// Integer solution of A x = b; false when none exists.
bool solve_integer(const IntMatrix& A, const IntVec& b, IntVec& x);
// Basis of the integer kernel of A.
IntMatrix integer_kernel(const IntMatrix& A);

class FgAbelianGroup {
public:
    int free_rank = 0;
    IntVec invariant_factors;   // each >= 2, each dividing the next

    FgAbelianGroup() = default;
    // Cyclic summands of the given orders; 0 means infinite cyclic, 1 is dropped.
    static FgAbelianGroup from_orders(const IntVec& orders);
    static FgAbelianGroup free(int r) { return from_orders(IntVec((size_t)r, Int(0))); }
    // Parses the output of str(), e.g. "Z^2 + Z/4 + (Z/3)^2 + Z/2" or "0".
    static FgAbelianGroup parse(const std::string& s);

    FgAbelianGroup normal_form() const { return from_orders(orders()); }
    IntVec orders() const;
    // Prime-power orders of the torsion, sorted by prime then descending exponent.
    IntVec primary_orders() const;
    bool is_zero() const { return free_rank == 0 && invariant_factors.empty(); }
    Int torsion_order() const;
    // Order of A (x) Z/n and of Tor(A, Z/n).
    Int tensor_order(long n) const;
    Int tor_order(long n) const;
    // Number of cyclic summands of order divisible by p.
    int p_rank(long p) const;
    std::string str() const;

    friend bool operator==(const FgAbelianGroup&, const FgAbelianGroup&) = default;
};

FgAbelianGroup operator+(const FgAbelianGroup& a, const FgAbelianGroup& b);

// Quotient Z^n / im(R) with an explicit cyclic decomposition.
struct Cokernel {
    FgAbelianGroup group;
    IntVec orders;             // per retained coordinate, 0 for infinite order
    IntMatrix to_coords;       // rows map Z^n onto the retained coordinates
    IntMatrix generators;      // n x k lifts of the cyclic generators

    // Coordinates of x, each reduced modulo its order.
    IntVec coords(const IntVec& x) const;
};

Cokernel cokernel(int n, const IntMatrix& relations);

struct PresentedGroup {
    int generators = 0;
    IntMatrix relations;               // generators x k; the group is the cokernel
    std::vector<std::string> labels;   // optional provenance per generator

    static PresentedGroup cyclic_sum(const IntVec& orders, std::vector<std::string> labels = {});
    FgAbelianGroup normal_form() const;
};

// ker(d_out) / im(d_in) with representative cycles.
struct Homology {
    FgAbelianGroup group;
    IntVec orders;
    IntMatrix cycles;                  // one representative cycle per retained coordinate
    IntMatrix kernel_basis;
    Cokernel quotient;

    // Coordinates of a cycle; throws NotAComplex for non-cycles.
    IntVec coords(const IntVec& cycle) const;
};

// Homology at `at` of C_in --d_in--> at --d_out--> target, maps given on free covers.
// Throws NotAComplex when d_out * d_in is not zero modulo the relations of target.
Homology chain_homology(const IntMatrix& d_in, const IntMatrix& d_out, const PresentedGroup& at,
                        const PresentedGroup& target);

// Isomorphism classes of E in 0 -> sub -> E -> quot -> 0.
std::vector<FgAbelianGroup> group_extension_candidates(const FgAbelianGroup& sub, const FgAbelianGroup& quot);

// Whether the Littlewood-Richardson coefficient c^lambda_{mu nu} is positive.
bool lr_positive(const std::vector<int>& lambda, const std::vector<int>& mu, const std::vector<int>& nu);

}  // namespace bianchi
