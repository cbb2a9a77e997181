#include "heegner/repnum.hpp"

#include "heegner/errors.hpp"

#include <algorithm>
#include <optional>

namespace heegner {

namespace {

Int mod_pos(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

// x mod m for a p-integral rational (denominator invertible mod m).
Int rat_mod(const Rat& x, const Int& m) {
    Int num = mod_pos(numerator(x), m);
    Int den = denominator(x);
    if (den == 1) return num;
    Int inv;
    if (mpz_invert(inv.backend().data(), den.backend().data(),
                   m.backend().data()) == 0)
        throw computation_error("rat_mod: denominator not invertible");
    return num * inv % m;
}

using RatMat = std::vector<std::vector<Rat>>;

struct Block {
    std::vector<int> idx;  // one or two coordinates
};

// Congruence transform T with p-unit determinant and p-integral entries (and
// p-integral inverse) such that T^t A T is block diagonal with 1x1 blocks
// and, for p = 2, possibly 2x2 blocks with odd off-diagonal part.
struct PadicSplit {
    RatMat A;  // transformed Gram matrix
    RatMat T;
    std::vector<Block> blocks;
};

long val_or_big(const Rat& x, const Int& p) {
    if (x == 0) return LONG_MAX / 2;
    return valuation(x, p);
}

PadicSplit padic_block_split(const IntMat& gram, const Int& p) {
    int n = static_cast<int>(gram.size());
    PadicSplit out;
    out.A.assign(n, std::vector<Rat>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.A[i][j] = Rat(gram[i][j]);
    out.T.assign(n, std::vector<Rat>(n, Rat(0)));
    for (int i = 0; i < n; ++i) out.T[i][i] = 1;
    RatMat& A = out.A;
    RatMat& T = out.T;

    // col_j -= f * col_i on A (rows mirrored) and on T
    auto eliminate = [&](int i, int j, const Rat& f) {
        for (int k = 0; k < n; ++k) A[k][j] -= f * A[k][i];
        for (int k = 0; k < n; ++k) A[j][k] -= f * A[i][k];
        for (int k = 0; k < n; ++k) T[k][j] -= f * T[k][i];
    };
    auto add_col = [&](int i, int j) {  // col_i += col_j
        for (int k = 0; k < n; ++k) A[k][i] += A[k][j];
        for (int k = 0; k < n; ++k) A[i][k] += A[j][k];
        for (int k = 0; k < n; ++k) T[k][i] += T[k][j];
    };

    std::vector<int> active(n);
    for (int i = 0; i < n; ++i) active[i] = i;

    while (!active.empty()) {
        long vmin = LONG_MAX / 2;
        for (int i : active)
            for (int j : active) vmin = std::min(vmin, val_or_big(A[i][j], p));
        if (vmin >= LONG_MAX / 4)
            throw computation_error("degenerate block in p-adic reduction");

        int di = -1;
        for (int i : active)
            if (val_or_big(A[i][i], p) == vmin) {
                di = i;
                break;
            }
        if (di < 0 && p != 2) {
            // odd p: a row/column addition moves the minimum onto the diagonal
            int bi = -1, bj = -1;
            for (int i : active) {
                for (int j : active)
                    if (i != j && val_or_big(A[i][j], p) == vmin) {
                        bi = i;
                        bj = j;
                        break;
                    }
                if (bi >= 0) break;
            }
            add_col(bi, bj);
            di = bi;
        }
        if (di >= 0) {
            for (int j : active)
                if (j != di) eliminate(di, j, A[di][j] / A[di][di]);
            out.blocks.push_back({{di}});
            active.erase(std::find(active.begin(), active.end(), di));
            continue;
        }
        // p = 2, minimum only off-diagonal: split a 2x2 block
        int bi = -1, bj = -1;
        for (int i : active) {
            for (int j : active)
                if (i < j && val_or_big(A[i][j], p) == vmin) {
                    bi = i;
                    bj = j;
                    break;
                }
            if (bi >= 0) break;
        }
        Rat a = A[bi][bi], b = A[bi][bj], c = A[bj][bj];
        Rat det2 = a * c - b * b;  // v_2(det2) = 2 vmin
        for (int k : active) {
            if (k == bi || k == bj) continue;
            Rat u = A[bi][k], v = A[bj][k];
            // [x;y] = Block^{-1} [u;v]
            Rat x = (c * u - b * v) / det2;
            Rat y = (a * v - b * u) / det2;
            for (int t = 0; t < n; ++t)
                A[t][k] -= x * A[t][bi] + y * A[t][bj];
            for (int t = 0; t < n; ++t)
                A[k][t] -= x * A[bi][t] + y * A[bj][t];
            for (int t = 0; t < n; ++t)
                T[t][k] -= x * T[t][bi] + y * T[t][bj];
        }
        out.blocks.push_back({{bi, bj}});
        active.erase(std::find(active.begin(), active.end(), bi));
        active.erase(std::find(active.begin(), active.end(), bj));
    }
    return out;
}

// Value-count vector over Z/m: counts[t] = #{y : f(y) = t mod m}.
std::vector<Int> count_1dim(const Int& a, const Int& b, const Int& m) {
    if (m > Int(INT32_MAX))
        throw budget_error("modulus too large for enumeration");
    std::uint64_t M = m.convert_to<std::uint64_t>();
    std::uint64_t au = a.convert_to<std::uint64_t>();
    std::uint64_t bu = b.convert_to<std::uint64_t>();
    std::vector<std::uint64_t> counts(M, 0);
    for (std::uint64_t y = 0; y < M; ++y) {
        std::uint64_t v = ((au * y + bu) % M) * y % M;  // (a y + b) y
        counts[v]++;
    }
    std::vector<Int> out(M);
    for (std::uint64_t t = 0; t < M; ++t) out[t] = counts[t];
    return out;
}

std::vector<Int> count_2dim(const Int& a, const Int& b, const Int& c,
                            const Int& l1, const Int& l2, const Int& m) {
    if (m > Int(INT32_MAX))
        throw budget_error("modulus too large for enumeration");
    std::uint64_t M = m.convert_to<std::uint64_t>();
    std::uint64_t au = a.convert_to<std::uint64_t>(),
                  bu = b.convert_to<std::uint64_t>(),
                  cu = c.convert_to<std::uint64_t>(),
                  u1 = l1.convert_to<std::uint64_t>(),
                  u2 = l2.convert_to<std::uint64_t>();
    std::vector<std::uint64_t> counts(M, 0);
    for (std::uint64_t x = 0; x < M; ++x) {
        // a x^2 + u1 x, reused across the inner loop
        std::uint64_t fx = ((au * x + u1) % M) * x % M;
        std::uint64_t bx = bu * x % M;
        for (std::uint64_t y = 0; y < M; ++y) {
            std::uint64_t v =
                (fx + ((cu * y + bx + u2) % M) * y) % M;  // + c y^2 + b x y + u2 y
            counts[v]++;
        }
    }
    std::vector<Int> out(M);
    for (std::uint64_t t = 0; t < M; ++t) out[t] = counts[t];
    return out;
}

std::vector<Int> convolve_mod(const std::vector<Int>& f,
                              const std::vector<Int>& g) {
    size_t M = f.size();
    std::vector<Int> out(M, Int(0));
    for (size_t i = 0; i < M; ++i) {
        if (f[i] == 0) continue;
        for (size_t j = 0; j < M; ++j) {
            if (g[j] == 0) continue;
            size_t k = i + j;
            if (k >= M) k -= M;
            out[k] += f[i] * g[j];
        }
    }
    return out;
}

struct IndexData {
    RatVec rep;       // representative of gamma in L'
    std::vector<Int> w;  // G * rep, integral
    Int c0;           // q(rep) + n, integral
};

IndexData index_data(const EvenLattice& L, const RatVec& gamma_rep,
                     const Rat& n) {
    IndexData d;
    d.rep = gamma_rep;
    int r = L.rank;
    d.w.resize(r);
    for (int i = 0; i < r; ++i) {
        Rat acc(0);
        for (int j = 0; j < r; ++j) acc += Rat(L.gram[i][j]) * gamma_rep[j];
        if (denominator(acc) != 1)
            throw validation_error("gamma representative is not in L'");
        d.w[i] = numerator(acc);
    }
    Rat c0 = L.quad(gamma_rep) + n;
    if (denominator(c0) != 1)
        throw validation_error("n is not in Z - q(gamma)");
    d.c0 = numerator(c0);
    return d;
}

Int count_blocked(const EvenLattice& L, const IndexData& data, const Int& p,
                  int nu, const EnumBudget& budget) {
    if (nu == 0) return 1;
    int r = L.rank;
    Int m = pow_int(p, nu);
    if (m > Int(INT32_MAX)) throw budget_error("p^nu too large");
    std::uint64_t M = m.convert_to<std::uint64_t>();

    PadicSplit split = padic_block_split(L.gram, p);

    // linear part in the transformed coordinates: T^t w
    std::vector<Rat> lin(r, Rat(0));
    for (int i = 0; i < r; ++i)
        for (int k = 0; k < r; ++k)
            lin[i] += split.T[k][i] * Rat(data.w[k]);

    // cost guard: per-block enumeration plus convolutions
    std::uint64_t cost = 0;
    for (const auto& blk : split.blocks)
        cost += blk.idx.size() == 1 ? M : M * M;
    cost += (split.blocks.size() > 1 ? (split.blocks.size() - 1) * M * M : 0);
    if (cost > budget.max_points)
        throw budget_error("enumeration budget exceeded (needs " +
                           std::to_string(cost) + " points)");

    std::optional<std::vector<Int>> acc;
    for (const auto& blk : split.blocks) {
        std::vector<Int> counts;
        if (blk.idx.size() == 1) {
            int i = blk.idx[0];
            Int a = rat_mod(split.A[i][i] / 2, m);
            Int b = rat_mod(-lin[i], m);
            counts = count_1dim(a, b, m);
        } else {
            int i = blk.idx[0], j = blk.idx[1];
            Int a = rat_mod(split.A[i][i] / 2, m);
            Int b = rat_mod(split.A[i][j], m);
            Int c = rat_mod(split.A[j][j] / 2, m);
            Int l1 = rat_mod(-lin[i], m);
            Int l2 = rat_mod(-lin[j], m);
            counts = count_2dim(a, b, c, l1, l2, m);
        }
        acc = acc ? convolve_mod(*acc, counts) : std::move(counts);
    }
    Int target = mod_pos(-data.c0, m);
    return (*acc)[target.convert_to<std::size_t>()];
}

}  // namespace

Rat LocalPolynomial::eval(const Rat& x) const {
    Rat acc(0);
    for (size_t i = coeffs.size(); i-- > 0;) acc = acc * x + Rat(coeffs[i]);
    return acc;
}

Rat LocalPolynomial::eval_deriv(const Rat& x) const {
    Rat acc(0);
    for (size_t i = coeffs.size(); i-- > 1;)
        acc = acc * x + Rat(coeffs[i]) * Rat(static_cast<long>(i));
    return acc;
}

Real LocalPolynomial::eval(const Real& x) const {
    Real acc(0);
    for (size_t i = coeffs.size(); i-- > 0;) acc = acc * x + to_real(coeffs[i]);
    return acc;
}

Real LocalPolynomial::eval_deriv(const Real& x) const {
    Real acc(0);
    for (size_t i = coeffs.size(); i-- > 1;)
        acc = acc * x + to_real(coeffs[i]) * static_cast<long>(i);
    return acc;
}

RepIndex make_rep_index(const DiscGroup& G, const DiscElement& gamma,
                        const Rat& n) {
    Rat sum = n + gamma.q_val;
    if (denominator(sum) != 1)
        throw validation_error("n must lie in Z - q(gamma)");
    RepIndex idx{gamma, n};
    if (n != 0) {
        Int d = gamma.level;
        if (denominator(Rat(d * d) * n) != 1 ||
            denominator(Rat(2 * d) * n) != 1)
            throw validation_error("index violates the level constraints");
    }
    return idx;
}

int w_p(const DiscGroup& G, const RepIndex& idx, const Int& p) {
    if (idx.n == 0)
        throw validation_error("w_p is undefined for n = 0");
    if (!is_prime(p)) throw validation_error("w_p: p must be prime");
    Rat t = 2 * idx.n * Rat(idx.gamma.level);
    long v = valuation(t, p);
    return static_cast<int>(1 + 2 * v);
}

Int rep_count_pp(const DiscGroup& G, const RepIndex& idx, const Int& p,
                 int nu, const EnumBudget& budget) {
    if (!is_prime(p)) throw validation_error("rep_count_pp: p must be prime");
    if (nu < 0) throw validation_error("rep_count_pp: nu must be >= 0");
    if (nu == 0) return 1;
    auto data = index_data(G.lattice(), G.representative(idx.gamma), idx.n);
    return count_blocked(G.lattice(), data, p, nu, budget);
}

Int rep_count_pp_at(const EvenLattice& L, const RatVec& gamma_rep,
                    const Rat& n, const Int& p, int nu,
                    const EnumBudget& budget) {
    if (!is_prime(p)) throw validation_error("rep_count_pp: p must be prime");
    if (nu < 0) throw validation_error("rep_count_pp: nu must be >= 0");
    if (nu == 0) return 1;
    auto data = index_data(L, gamma_rep, n);
    return count_blocked(L, data, p, nu, budget);
}

Int rep_count_naive(const EvenLattice& L, const RatVec& gamma_rep,
                    const Rat& n, const Int& a, const EnumBudget& budget) {
    if (a < 1) throw validation_error("rep_count_naive: a must be positive");
    if (a == 1) return 1;
    auto data = index_data(L, gamma_rep, n);
    int r = L.rank;
    if (a > Int(INT32_MAX)) throw budget_error("modulus too large");
    std::uint64_t A = a.convert_to<std::uint64_t>();
    double cost = std::pow(static_cast<double>(A), r);
    if (cost > static_cast<double>(budget.max_points))
        throw budget_error("enumeration budget exceeded");

    std::uint64_t M = A;
    std::vector<std::uint64_t> g(r * r), w(r);
    for (int i = 0; i < r; ++i) {
        w[i] = mod_pos(data.w[i], a).convert_to<std::uint64_t>();
        for (int j = 0; j < r; ++j)
            // x^t G x is accumulated mod 2a before halving, so entries must
            // be reduced mod 2a
            g[i * r + j] =
                mod_pos(L.gram[i][j], 2 * a).convert_to<std::uint64_t>();
    }
    std::uint64_t c0 = mod_pos(data.c0, a).convert_to<std::uint64_t>();

    std::vector<std::uint64_t> x(r, 0);
    Int count = 0;
    for (;;) {
        // q(x) - x.w + c0 mod a, with q(x) = x^t G x / 2
        std::uint64_t acc2 = 0;  // x^t G x mod 2a
        std::uint64_t m2 = 2 * M;
        for (int i = 0; i < r; ++i) {
            std::uint64_t row = 0;
            for (int j = 0; j < r; ++j) row = (row + g[i * r + j] * x[j]) % m2;
            acc2 = (acc2 + row * x[i]) % m2;
        }
        std::uint64_t q = acc2 / 2;  // even by construction
        std::uint64_t lin = 0;
        for (int i = 0; i < r; ++i) lin = (lin + w[i] * x[i]) % M;
        std::uint64_t val = (q % M + M - lin + c0) % M;
        if (val == 0) ++count;

        int i = 0;
        while (i < r) {
            if (++x[i] < M) break;
            x[i] = 0;
            ++i;
        }
        if (i == r) break;
    }
    return count;
}

Int rep_count(const DiscGroup& G, const RepIndex& idx, const Int& a,
              const EnumBudget& budget) {
    if (a < 1) throw validation_error("rep_count: a must be positive");
    Int acc = 1;
    for (const auto& [p, e] : factorize(a))
        acc *= rep_count_pp(G, idx, p, e, budget);
    return acc;
}

namespace {

LocalPolynomial build_local_poly(const DiscGroup& G, const RepIndex& idx,
                                 const Int& p, int w, int wp_nominal,
                                 const EnumBudget& budget) {
    std::vector<Int> counts(w + 1);
    for (int nu = 0; nu <= w; ++nu)
        counts[nu] = rep_count_pp(G, idx, p, nu, budget);
    // N(p^w) X^w + (1 - p^{r-1} X) sum_{nu<w} N(p^nu) X^nu
    Int pr1 = pow_int(p, G.lattice().rank - 1);
    std::vector<Int> c(w + 1, Int(0));
    for (int nu = 0; nu < w; ++nu) c[nu] += counts[nu];
    for (int nu = 0; nu < w; ++nu) c[nu + 1] -= pr1 * counts[nu];
    c[w] += counts[w];
    while (c.size() > 1 && c.back() == 0) c.pop_back();
    LocalPolynomial poly;
    poly.p = p;
    poly.wp = wp_nominal;
    poly.coeffs = std::move(c);
    return poly;
}

}  // namespace

LocalPolynomial local_poly(const DiscGroup& G, const RepIndex& idx,
                           const Int& p, const EnumBudget& budget) {
    int w = w_p(G, idx, p);
    return build_local_poly(G, idx, p, w, w, budget);
}

LocalPolynomial local_poly_padded(const DiscGroup& G, const RepIndex& idx,
                                  const Int& p, int extra,
                                  const EnumBudget& budget) {
    int w = w_p(G, idx, p);
    return build_local_poly(G, idx, p, w + extra, w, budget);
}

}  // namespace heegner
