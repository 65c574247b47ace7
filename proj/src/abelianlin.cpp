#include "bianchi/abelianlin.hpp"

#include "bianchi/errors.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace bianchi {

IntMatrix IntMatrix::identity(int n)
{
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows)
{
    int r = (int)rows.size();
    int c = r ? (int)rows[0].size() : 0;
    IntMatrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m.at(i, j) = rows[i].at(j);
    return m;
}

IntMatrix IntMatrix::diagonal(const IntVec& d)
{
    IntMatrix m((int)d.size(), (int)d.size());
    for (size_t i = 0; i < d.size(); ++i) m.at((int)i, (int)i) = d[i];
    return m;
}

IntMatrix IntMatrix::transpose() const
{
    IntMatrix t(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    return t;
}

bool IntMatrix::is_zero() const
{
    return std::all_of(entries.begin(), entries.end(), [](const Int& x) { return x == 0; });
}

IntVec IntMatrix::column(int j) const
{
    IntVec v(rows);
    for (int i = 0; i < rows; ++i) v[i] = at(i, j);
    return v;
}

IntVec IntMatrix::apply(const IntVec& x) const
{
    IntVec y(rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if (at(i, j) != 0 && x[j] != 0) y[i] += at(i, j) * x[j];
    return y;
}

IntMatrix IntMatrix::hcat(const IntMatrix& o) const
{
    int r = std::max(rows, o.rows);
    IntMatrix m(r, cols + o.cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = at(i, j);
    for (int i = 0; i < o.rows; ++i)
        for (int j = 0; j < o.cols; ++j) m.at(i, cols + j) = o.at(i, j);
    return m;
}

IntMatrix IntMatrix::vcat(const IntMatrix& o) const
{
    int c = std::max(cols, o.cols);
    IntMatrix m(rows + o.rows, c);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = at(i, j);
    for (int i = 0; i < o.rows; ++i)
        for (int j = 0; j < o.cols; ++j) m.at(rows + i, j) = o.at(i, j);
    return m;
}

std::string IntMatrix::str() const
{
    std::ostringstream os;
    for (int i = 0; i < rows; ++i) {
        os << "[";
        for (int j = 0; j < cols; ++j) os << (j ? " " : "") << at(i, j).get_str();
        os << "]\n";
    }
    return os.str();
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b)
{
    if (a.cols != b.rows) throw std::invalid_argument("matrix dimension mismatch");
    IntMatrix c(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            const Int& x = a.at(i, k);
            if (x == 0) continue;
            for (int j = 0; j < b.cols; ++j)
                if (b.at(k, j) != 0) c.at(i, j) += x * b.at(k, j);
        }
    return c;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b)
{
    IntMatrix c = a;
    for (size_t i = 0; i < c.entries.size(); ++i) c.entries[i] -= b.entries[i];
    return c;
}

namespace {

// Smith reduction with the row transform, its inverse and the column transform.
class SmithWork {
public:
    IntMatrix S, U, Ui, V;

    explicit SmithWork(const IntMatrix& M)
        : S(M), U(IntMatrix::identity(M.rows)), Ui(IntMatrix::identity(M.rows)), V(IntMatrix::identity(M.cols))
    {
    }

    void swap_rows(int i, int j)
    {
        if (i == j) return;
        for (int c = 0; c < S.cols; ++c) std::swap(S.at(i, c), S.at(j, c));
        for (int c = 0; c < U.cols; ++c) std::swap(U.at(i, c), U.at(j, c));
        for (int r = 0; r < Ui.rows; ++r) std::swap(Ui.at(r, i), Ui.at(r, j));
    }

    void swap_cols(int i, int j)
    {
        if (i == j) return;
        for (int r = 0; r < S.rows; ++r) std::swap(S.at(r, i), S.at(r, j));
        for (int r = 0; r < V.rows; ++r) std::swap(V.at(r, i), V.at(r, j));
    }

    void negate_row(int i)
    {
        for (int c = 0; c < S.cols; ++c) S.at(i, c) = -S.at(i, c);
        for (int c = 0; c < U.cols; ++c) U.at(i, c) = -U.at(i, c);
        for (int r = 0; r < Ui.rows; ++r) Ui.at(r, i) = -Ui.at(r, i);
    }

    // rows (i, j) <- [[a, b], [c, d]] (rows i, j), determinant 1
    void combine_rows(int i, int j, const Int& a, const Int& b, const Int& c, const Int& d)
    {
        auto mix = [&](IntMatrix& m) {
            for (int k = 0; k < m.cols; ++k) {
                Int x = m.at(i, k), y = m.at(j, k);
                m.at(i, k) = a * x + b * y;
                m.at(j, k) = c * x + d * y;
            }
        };
        mix(S);
        mix(U);
        // inverse is [[d, -b], [-c, a]] acting on columns from the right
        for (int r = 0; r < Ui.rows; ++r) {
            Int x = Ui.at(r, i), y = Ui.at(r, j);
            Ui.at(r, i) = x * d - y * c;
            Ui.at(r, j) = -x * b + y * a;
        }
    }

    // columns (i, j) <- columns combined by [[a, c], [b, d]], determinant 1
    void combine_cols(int i, int j, const Int& a, const Int& b, const Int& c, const Int& d)
    {
        auto mix = [&](IntMatrix& m) {
            for (int k = 0; k < m.rows; ++k) {
                Int x = m.at(k, i), y = m.at(k, j);
                m.at(k, i) = a * x + b * y;
                m.at(k, j) = c * x + d * y;
            }
        };
        mix(S);
        mix(V);
    }

    void run()
    {
        int r = S.rows, c = S.cols;
        for (int t = 0; t < std::min(r, c); ++t) {
            if (!place_pivot(t)) break;
            for (;;) {
                clear_column(t);
                clear_row(t);
                bool clean = true;
                for (int i = t + 1; i < r && clean; ++i)
                    if (S.at(i, t) != 0) clean = false;
                if (!clean) continue;
                int bad = -1;
                for (int i = t + 1; i < r && bad < 0; ++i)
                    for (int j = t + 1; j < c; ++j)
                        if (S.at(i, j) % S.at(t, t) != 0) {
                            bad = i;
                            break;
                        }
                if (bad < 0) break;
                combine_rows(t, bad, 1, 1, 0, 1);
            }
            if (S.at(t, t) < 0) negate_row(t);
        }
    }

private:
    bool place_pivot(int t)
    {
        int bi = -1, bj = -1;
        Int best;
        for (int i = t; i < S.rows; ++i)
            for (int j = t; j < S.cols; ++j) {
                const Int& x = S.at(i, j);
                if (x == 0) continue;
                Int ax = abs(x);
                if (bi < 0 || ax < best) {
                    best = ax;
                    bi = i;
                    bj = j;
                    if (best == 1) goto found;
                }
            }
    found:
        if (bi < 0) return false;
        swap_rows(t, bi);
        swap_cols(t, bj);
        return true;
    }

    void clear_column(int t)
    {
        for (int i = t + 1; i < S.rows; ++i) {
            if (S.at(i, t) == 0) continue;
            Int x = S.at(t, t), y = S.at(i, t);
            if (y % x == 0) {
                Int q = y / x;
                combine_rows(t, i, 1, 0, -q, 1);
                continue;
            }
            Int g, a, b;
            mpz_gcdext(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
            combine_rows(t, i, a, b, -(y / g), x / g);
        }
    }

    void clear_row(int t)
    {
        for (int j = t + 1; j < S.cols; ++j) {
            if (S.at(t, j) == 0) continue;
            Int x = S.at(t, t), y = S.at(t, j);
            if (y % x == 0) {
                Int q = y / x;
                combine_cols(t, j, 1, 0, -q, 1);
                continue;
            }
            Int g, a, b;
            mpz_gcdext(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
            combine_cols(t, j, a, b, -(y / g), x / g);
        }
    }
};

Int mod_nonneg(const Int& x, const Int& n)
{
    if (n == 0) return x;
    Int r = x % n;
    if (r < 0) r += abs(n);
    return r;
}

// Solve K y = x for K in column echelon form; false if x is outside the lattice.
bool echelon_solve(const IntMatrix& K, const IntVec& x, IntVec& y)
{
    y.assign(K.cols, Int(0));
    int row = 0;
    for (int j = 0; j < K.cols; ++j) {
        while (row < K.rows && K.at(row, j) == 0) ++row;
        if (row == K.rows) return false;
        Int rest = x[row];
        for (int l = 0; l < j; ++l) rest -= K.at(row, l) * y[l];
        if (rest % K.at(row, j) != 0) return false;
        y[j] = rest / K.at(row, j);
        ++row;
    }
    return K.apply(y) == x;
}

}  // namespace

IntVec SmithForm::diagonal() const
{
    IntVec d;
    for (int i = 0; i < std::min(S.rows, S.cols); ++i) d.push_back(S.at(i, i));
    return d;
}

int SmithForm::rank() const
{
    int r = 0;
    for (const Int& x : diagonal())
        if (x != 0) ++r;
    return r;
}

SmithForm smith_normal_form(const IntMatrix& M)
{
    SmithWork w(M);
    w.run();
    return {w.U, w.S, w.V, w.Ui};
}

IntVec elementary_divisors(const IntMatrix& M)
{
    IntVec out;
    for (const Int& x : smith_normal_form(M).diagonal())
        if (x != 0) out.push_back(x);
    return out;
}

int rank_over_q(const IntMatrix& M) { return smith_normal_form(M).rank(); }

int rank_mod_p(const IntMatrix& M, long p)
{
    std::vector<std::vector<long>> a(M.rows, std::vector<long>(M.cols));
    Int P = p;
    for (int i = 0; i < M.rows; ++i)
        for (int j = 0; j < M.cols; ++j) a[i][j] = mod_nonneg(M.at(i, j), P).get_si();
    int rank = 0;
    for (int c = 0; c < M.cols && rank < M.rows; ++c) {
        int piv = -1;
        for (int i = rank; i < M.rows; ++i)
            if (a[i][c] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(a[piv], a[rank]);
        long inv = 1;
        for (long k = 1; k < p; ++k)
            if (a[rank][c] * k % p == 1) inv = k;
        for (int j = 0; j < M.cols; ++j) a[rank][j] = a[rank][j] * inv % p;
        for (int i = 0; i < M.rows; ++i) {
            if (i == rank || a[i][c] == 0) continue;
            long f = a[i][c];
            for (int j = 0; j < M.cols; ++j) a[i][j] = ((a[i][j] - f * a[rank][j]) % p + p) % p;
        }
        ++rank;
    }
    return rank;
}

IntMatrix lattice_basis(const IntMatrix& gens)
{
    IntMatrix G = gens;
    int cur = 0;
    for (int i = 0; i < G.rows && cur < G.cols; ++i) {
        for (int j = cur + 1; j < G.cols; ++j) {
            if (G.at(i, j) == 0) continue;
            Int x = G.at(i, cur), y = G.at(i, j);
            Int g, a, b;
            mpz_gcdext(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
            Int cx = x / g, cy = y / g;
            for (int k = 0; k < G.rows; ++k) {
                Int u = G.at(k, cur), v = G.at(k, j);
                G.at(k, cur) = a * u + b * v;
                G.at(k, j) = -cy * u + cx * v;
            }
        }
        if (G.at(i, cur) == 0) continue;
        if (G.at(i, cur) < 0)
            for (int k = 0; k < G.rows; ++k) G.at(k, cur) = -G.at(k, cur);
        for (int l = 0; l < cur; ++l) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), G.at(i, l).get_mpz_t(), G.at(i, cur).get_mpz_t());
            if (q != 0)
                for (int k = 0; k < G.rows; ++k) G.at(k, l) -= q * G.at(k, cur);
        }
        ++cur;
    }
    IntMatrix B(G.rows, cur);
    for (int i = 0; i < G.rows; ++i)
        for (int j = 0; j < cur; ++j) B.at(i, j) = G.at(i, j);
    return B;
}

bool solve_integer(const IntMatrix& A, const IntVec& b, IntVec& x)
{
    SmithForm f = smith_normal_form(A);
    IntVec y = f.U.apply(b);
    IntVec d = f.diagonal();
    IntVec z(A.cols);
    for (int i = 0; i < A.rows; ++i) {
        Int di = i < (int)d.size() ? d[i] : Int(0);
        if (di == 0) {
            if (y[i] != 0) return false;
            continue;
        }
        if (y[i] % di != 0) return false;
        z[i] = y[i] / di;
    }
    x = f.V.apply(z);
    return true;
}

IntMatrix integer_kernel(const IntMatrix& A)
{
    SmithForm f = smith_normal_form(A);
    int r = f.rank();
    IntMatrix K(A.cols, A.cols - r);
    for (int i = 0; i < A.cols; ++i)
        for (int j = r; j < A.cols; ++j) K.at(i, j - r) = f.V.at(i, j);
    return K;
}

namespace {

std::vector<std::pair<long, int>> factor(Int n)
{
    std::vector<std::pair<long, int>> out;
    for (long p = 2; Int(p) * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.push_back({p, e});
    }
    if (n > 1) out.push_back({n.get_si(), 1});
    return out;
}

Int ipow(long p, int e)
{
    Int r = 1;
    for (int i = 0; i < e; ++i) r *= p;
    return r;
}

using Partition = std::vector<int>;

std::map<long, Partition> primary_partitions(const FgAbelianGroup& g)
{
    std::map<long, Partition> out;
    for (const Int& d : g.invariant_factors)
        for (auto [p, e] : factor(d)) out[p].push_back(e);
    for (auto& [p, part] : out) std::sort(part.rbegin(), part.rend());
    return out;
}

}  // namespace

FgAbelianGroup FgAbelianGroup::from_orders(const IntVec& orders)
{
    FgAbelianGroup g;
    std::map<long, std::vector<int>> parts;
    for (const Int& o : orders) {
        Int a = abs(o);
        if (a == 0) {
            ++g.free_rank;
            continue;
        }
        for (auto [p, e] : factor(a)) parts[p].push_back(e);
    }
    size_t n = 0;
    for (auto& [p, es] : parts) {
        std::sort(es.rbegin(), es.rend());
        n = std::max(n, es.size());
    }
    IntVec inv(n, Int(1));
    for (auto& [p, es] : parts)
        for (size_t i = 0; i < es.size(); ++i) inv[n - 1 - i] *= ipow(p, es[i]);
    g.invariant_factors = inv;
    return g;
}

IntVec FgAbelianGroup::orders() const
{
    IntVec o((size_t)free_rank, Int(0));
    o.insert(o.end(), invariant_factors.begin(), invariant_factors.end());
    return o;
}

IntVec FgAbelianGroup::primary_orders() const
{
    IntVec out;
    for (auto& [p, part] : primary_partitions(*this))
        for (int e : part) out.push_back(ipow(p, e));
    return out;
}

Int FgAbelianGroup::torsion_order() const
{
    Int r = 1;
    for (const Int& d : invariant_factors) r *= d;
    return r;
}

Int FgAbelianGroup::tensor_order(long n) const
{
    Int r = 1;
    for (int i = 0; i < free_rank; ++i) r *= n;
    for (const Int& d : invariant_factors) r *= gcd(d, Int(n));
    return r;
}

Int FgAbelianGroup::tor_order(long n) const
{
    Int r = 1;
    for (const Int& d : invariant_factors) r *= gcd(d, Int(n));
    return r;
}

int FgAbelianGroup::p_rank(long p) const
{
    int r = 0;
    for (const Int& d : invariant_factors)
        if (d % p == 0) ++r;
    return r;
}

std::string FgAbelianGroup::str() const
{
    std::vector<std::string> parts;
    if (free_rank == 1) parts.push_back("Z");
    if (free_rank > 1) parts.push_back("Z^" + std::to_string(free_rank));
    IntVec po = primary_orders();
    for (size_t i = 0; i < po.size();) {
        size_t j = i;
        while (j < po.size() && po[j] == po[i]) ++j;
        std::string c = "Z/" + po[i].get_str();
        parts.push_back(j - i == 1 ? c : "(" + c + ")^" + std::to_string(j - i));
        i = j;
    }
    if (parts.empty()) return "0";
    std::string s;
    for (size_t i = 0; i < parts.size(); ++i) s += (i ? " + " : "") + parts[i];
    return s;
}

FgAbelianGroup FgAbelianGroup::parse(const std::string& text)
{
    IntVec orders;
    std::string s;
    for (char ch : text)
        if (!isspace((unsigned char)ch)) s += ch;
    if (s == "0" || s.empty()) return {};
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t next = s.find('+', pos);
        std::string tok = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        int mult = 1;
        if (!tok.empty() && tok[0] == '(') {
            size_t close = tok.find(')');
            if (close == std::string::npos) throw FormatError("bad group term: " + tok);
            std::string rest = tok.substr(close + 1);
            if (rest.size() < 2 || rest[0] != '^') throw FormatError("bad group term: " + tok);
            mult = std::stoi(rest.substr(1));
            tok = tok.substr(1, close - 1);
        }
        if (tok.empty() || tok[0] != 'Z') throw FormatError("bad group term: " + tok);
        Int order = 0;
        if (tok.size() > 1 && tok[1] == '^') {
            mult *= std::stoi(tok.substr(2));
        } else if (tok.size() > 1 && tok[1] == '/') {
            order = Int(tok.substr(2));
        } else if (tok.size() != 1) {
            throw FormatError("bad group term: " + tok);
        }
        for (int i = 0; i < mult; ++i) orders.push_back(order);
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return from_orders(orders);
}

FgAbelianGroup operator+(const FgAbelianGroup& a, const FgAbelianGroup& b)
{
    IntVec o = a.orders();
    IntVec ob = b.orders();
    o.insert(o.end(), ob.begin(), ob.end());
    return FgAbelianGroup::from_orders(o);
}

IntVec Cokernel::coords(const IntVec& x) const
{
    IntVec y = to_coords.apply(x);
    for (size_t i = 0; i < y.size(); ++i) y[i] = mod_nonneg(y[i], orders[i]);
    return y;
}

Cokernel cokernel(int n, const IntMatrix& R)
{
    Cokernel out;
    bool monomial = true;
    for (int j = 0; j < R.cols && monomial; ++j) {
        int nz = 0;
        for (int i = 0; i < R.rows; ++i)
            if (R.at(i, j) != 0) ++nz;
        if (nz > 1) monomial = false;
    }
    IntVec d(n);
    IntMatrix T, Tinv;
    if (monomial) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < R.cols; ++j)
                if (R.at(i, j) != 0) d[i] = gcd(d[i], R.at(i, j));
        T = Tinv = IntMatrix::identity(n);
    } else {
        SmithForm f = smith_normal_form(R);
        IntVec diag = f.diagonal();
        for (size_t i = 0; i < diag.size(); ++i) d[i] = diag[i];
        T = f.U;
        Tinv = f.U_inv;
    }
    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
        if (abs(d[i]) != 1) keep.push_back(i);
    out.to_coords = IntMatrix((int)keep.size(), n);
    out.generators = IntMatrix(n, (int)keep.size());
    for (size_t k = 0; k < keep.size(); ++k) {
        out.orders.push_back(abs(d[keep[k]]));
        for (int j = 0; j < n; ++j) out.to_coords.at((int)k, j) = T.at(keep[k], j);
        for (int i = 0; i < n; ++i) out.generators.at(i, (int)k) = Tinv.at(i, keep[k]);
    }
    out.group = FgAbelianGroup::from_orders(out.orders);
    return out;
}

PresentedGroup PresentedGroup::cyclic_sum(const IntVec& orders, std::vector<std::string> labels)
{
    PresentedGroup g;
    g.generators = (int)orders.size();
    g.relations = IntMatrix::diagonal(orders);
    g.labels = std::move(labels);
    return g;
}

FgAbelianGroup PresentedGroup::normal_form() const
{
    IntMatrix R = relations.rows == generators ? relations : IntMatrix(generators, 0);
    return cokernel(generators, R).group;
}

IntVec Homology::coords(const IntVec& cycle) const
{
    IntVec y;
    if (!echelon_solve(kernel_basis, cycle, y)) throw NotAComplex("vector is not a cycle");
    return quotient.coords(y);
}

namespace {

bool in_image(const IntMatrix& R, const IntVec& v)
{
    bool zero = std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
    if (zero) return true;
    if (R.cols == 0) return false;
    IntVec x;
    return solve_integer(R, v, x);
}

}  // namespace

Homology chain_homology(const IntMatrix& d_in, const IntMatrix& d_out, const PresentedGroup& at,
                        const PresentedGroup& target)
{
    int b = at.generators;
    if (d_in.rows != b || d_out.cols != b || d_out.rows != target.generators)
        throw std::invalid_argument("chain_homology: dimension mismatch");
    IntMatrix Rb = at.relations.rows == b ? at.relations : IntMatrix(b, 0);
    IntMatrix Rc = target.relations.rows == target.generators ? target.relations : IntMatrix(target.generators, 0);

    IntMatrix comp = d_out * d_in;
    for (int j = 0; j < comp.cols; ++j)
        if (!in_image(Rc, comp.column(j))) throw NotAComplex("composite of consecutive maps is nonzero");
    IntMatrix rel_img = d_out * Rb;
    for (int j = 0; j < rel_img.cols; ++j)
        if (!in_image(Rc, rel_img.column(j))) throw NotAComplex("outgoing map does not respect relations");

    Homology h;
    if (target.generators == 0) {
        h.kernel_basis = IntMatrix::identity(b);
    } else {
        IntMatrix A = d_out.hcat(Rc);
        IntMatrix ker = integer_kernel(A);
        IntMatrix proj(b, ker.cols);
        for (int i = 0; i < b; ++i)
            for (int j = 0; j < ker.cols; ++j) proj.at(i, j) = ker.at(i, j);
        h.kernel_basis = lattice_basis(proj);
    }
    IntMatrix gens = d_in.hcat(Rb);
    int r = h.kernel_basis.cols;
    IntMatrix Y(r, gens.cols);
    for (int j = 0; j < gens.cols; ++j) {
        IntVec y;
        if (!echelon_solve(h.kernel_basis, gens.column(j), y)) throw NotAComplex("boundary is not a cycle");
        for (int i = 0; i < r; ++i) Y.at(i, j) = y[i];
    }
    h.quotient = cokernel(r, Y);
    h.group = h.quotient.group;
    h.orders = h.quotient.orders;
    h.cycles = h.kernel_basis * h.quotient.generators;
    return h;
}

namespace {

bool lr_fill(const Partition& lam, const Partition& mu, const Partition& nu, std::vector<std::vector<int>>& tab,
             std::vector<int>& count, int row, int col)
{
    int rows = (int)lam.size();
    if (row == rows) return true;
    int start = row < (int)mu.size() ? mu[row] : 0;
    if (col < start) return lr_fill(lam, mu, nu, tab, count, row + 1, row + 1 < rows ? lam[row + 1] - 1 : 0);
    int hi = (int)nu.size();
    if (col + 1 < lam[row]) hi = std::min(hi, tab[row][col + 1]);
    int lo = 1;
    if (row > 0) {
        int above_start = row - 1 < (int)mu.size() ? mu[row - 1] : 0;
        if (col >= above_start) lo = tab[row - 1][col] + 1;
    }
    for (int v = hi; v >= lo; --v) {
        if (count[v - 1] >= nu[v - 1]) continue;
        if (v > 1 && count[v - 1] + 1 > count[v - 2]) continue;
        tab[row][col] = v;
        ++count[v - 1];
        if (lr_fill(lam, mu, nu, tab, count, row, col - 1)) return true;
        --count[v - 1];
    }
    tab[row][col] = 0;
    return false;
}

void partitions_of(int n, int max_part, int max_len, Partition& cur, std::vector<Partition>& out)
{
    if (n == 0) {
        out.push_back(cur);
        return;
    }
    if ((int)cur.size() == max_len) return;
    for (int p = std::min(n, max_part); p >= 1; --p) {
        cur.push_back(p);
        partitions_of(n - p, p, max_len, cur, out);
        cur.pop_back();
    }
}

int psize(const Partition& p)
{
    int s = 0;
    for (int x : p) s += x;
    return s;
}

bool contained(const Partition& a, const Partition& b)
{
    if (a.size() > b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

std::vector<Partition> sub_partitions(const Partition& p)
{
    std::vector<Partition> out;
    Partition cur;
    std::function<void(size_t, int)> rec = [&](size_t i, int bound) {
        if (i == p.size()) {
            Partition c = cur;
            while (!c.empty() && c.back() == 0) c.pop_back();
            out.push_back(c);
            return;
        }
        for (int x = std::min(bound, p[i]); x >= 0; --x) {
            cur.push_back(x);
            rec(i + 1, x);
            cur.pop_back();
        }
    };
    rec(0, p.empty() ? 0 : p[0]);
    return out;
}

}  // namespace

bool lr_positive(const Partition& lam, const Partition& mu, const Partition& nu)
{
    if (psize(lam) != psize(mu) + psize(nu)) return false;
    if (!contained(mu, lam) || !contained(nu, lam)) return false;
    std::vector<std::vector<int>> tab(lam.size());
    for (size_t i = 0; i < lam.size(); ++i) tab[i].assign(lam[i], 0);
    std::vector<int> count(nu.size(), 0);
    if (lam.empty()) return true;
    return lr_fill(lam, mu, nu, tab, count, 0, lam[0] - 1);
}

std::vector<FgAbelianGroup> group_extension_candidates(const FgAbelianGroup& sub, const FgAbelianGroup& quot)
{
    auto pa = primary_partitions(sub);
    auto pb = primary_partitions(quot);
    std::set<long> primes;
    for (auto& [p, _] : pa) primes.insert(p);
    for (auto& [p, _] : pb) primes.insert(p);
    int a = sub.free_rank;

    // torsion options per prime as lists of prime-power orders
    std::vector<std::vector<IntVec>> options;
    for (long p : primes) {
        Partition mu = pa.count(p) ? pa[p] : Partition{};
        Partition nu = pb.count(p) ? pb[p] : Partition{};
        std::vector<Partition> kappas;
        if (a == 0) {
            kappas.push_back(nu);
        } else {
            for (const Partition& k : sub_partitions(nu)) {
                std::vector<Partition> rhos;
                Partition cur;
                partitions_of(psize(nu) - psize(k), nu.empty() ? 0 : nu[0], a, cur, rhos);
                for (const Partition& r : rhos)
                    if (lr_positive(nu, k, r)) {
                        kappas.push_back(k);
                        break;
                    }
            }
        }
        std::set<Partition> taus;
        for (const Partition& k : kappas) {
            int n = psize(mu) + psize(k);
            int mp = (mu.empty() ? 0 : mu[0]) + (k.empty() ? 0 : k[0]);
            std::vector<Partition> cands;
            Partition cur;
            partitions_of(n, std::max(mp, 0), (int)(mu.size() + k.size()), cur, cands);
            for (const Partition& t : cands)
                if (lr_positive(t, mu, k)) taus.insert(t);
        }
        std::vector<IntVec> opts;
        for (const Partition& t : taus) {
            IntVec o;
            for (int e : t) o.push_back(ipow(p, e));
            opts.push_back(o);
        }
        options.push_back(opts);
    }
    std::set<std::pair<int, IntVec>> seen;
    std::vector<FgAbelianGroup> out;
    IntVec base((size_t)(a + quot.free_rank), Int(0));
    std::function<void(size_t, IntVec)> rec = [&](size_t i, IntVec acc) {
        if (i == options.size()) {
            FgAbelianGroup g = FgAbelianGroup::from_orders(acc);
            if (seen.insert({g.free_rank, g.invariant_factors}).second) out.push_back(g);
            return;
        }
        for (const IntVec& o : options[i]) {
            IntVec next = acc;
            next.insert(next.end(), o.begin(), o.end());
            rec(i + 1, next);
        }
    };
    rec(0, base);
    return out;
}

}  // namespace bianchi
