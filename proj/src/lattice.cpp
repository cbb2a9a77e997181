#include "heegner/lattice.hpp"

#include "heegner/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>

namespace heegner {

namespace {

Rat mod1(const Rat& x) {
    Int fl;
    mpz_fdiv_q(fl.backend().data(), numerator(x).backend().data(),
               denominator(x).backend().data());
    return x - fl;
}

Int mod_int(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

}  // namespace

Rat EvenLattice::quad(const RatVec& x) const {
    return bilinear(x, x) / 2;
}

Rat EvenLattice::bilinear(const RatVec& x, const RatVec& y) const {
    Rat acc(0);
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) acc += x[i] * Rat(gram[i][j]) * y[j];
    return acc;
}

Int det_int(const IntMat& A) {
    // Bareiss fraction-free elimination with row pivoting
    int n = static_cast<int>(A.size());
    IntMat M = A;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (M[k][k] == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (M[i][k] != 0) {
                    piv = i;
                    break;
                }
            if (piv < 0) return 0;
            std::swap(M[k], M[piv]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev;
        prev = M[k][k];
    }
    return sign * M[n - 1][n - 1];
}

namespace {

// Sylvester inertia by exact symmetric elimination. When every remaining
// diagonal entry vanishes, a row/column addition turns a nonzero off-diagonal
// entry into a usable diagonal pivot (the hyperbolic case contributes (1,1)).
std::pair<int, int> inertia(const IntMat& G) {
    int n = static_cast<int>(G.size());
    std::vector<std::vector<Rat>> A(n, std::vector<Rat>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A[i][j] = Rat(G[i][j]);
    std::vector<int> rem(n);
    std::iota(rem.begin(), rem.end(), 0);
    int pos = 0, neg = 0;
    while (!rem.empty()) {
        int pivot = -1;
        for (int i : rem)
            if (A[i][i] != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0) {
            int a = -1, b = -1;
            for (size_t s = 0; s < rem.size() && a < 0; ++s)
                for (size_t t = s + 1; t < rem.size() && a < 0; ++t)
                    if (A[rem[s]][rem[t]] != 0) {
                        a = rem[s];
                        b = rem[t];
                    }
            if (a < 0)
                throw singular_lattice_error(
                    "degenerate block in signature computation");
            for (int k : rem) A[a][k] += A[b][k];
            for (int k : rem) A[k][a] += A[k][b];
            continue;
        }
        Rat d = A[pivot][pivot];
        if (d > 0)
            ++pos;
        else
            ++neg;
        std::vector<int> rest;
        for (int i : rem)
            if (i != pivot) rest.push_back(i);
        for (int i : rest)
            for (int j : rest) A[i][j] -= A[pivot][i] * A[pivot][j] / d;
        rem = rest;
    }
    return {pos, neg};
}

}  // namespace

EvenLattice parse_lattice(const IntMat& gram, const std::string& name) {
    size_t n = gram.size();
    if (n == 0) throw validation_error("empty Gram matrix");
    for (const auto& row : gram)
        if (row.size() != n)
            throw validation_error("Gram matrix is not square");
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < i; ++j)
            if (gram[i][j] != gram[j][i])
                throw not_symmetric_error("Gram matrix is not symmetric");
    for (size_t i = 0; i < n; ++i)
        if (gram[i][i] % 2 != 0)
            throw odd_diagonal_error(
                "Gram matrix has an odd diagonal entry (lattice not even)");
    EvenLattice L;
    L.gram = gram;
    L.rank = static_cast<int>(n);
    L.det = det_int(gram);
    if (L.det == 0)
        throw singular_lattice_error("Gram matrix has zero determinant");
    auto [p, m] = inertia(gram);
    L.b_plus = p;
    L.b_minus = m;
    L.name = name;
    return L;
}

EvenLattice parse_lattice_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("bad lattice JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("gram") || !j["gram"].is_array())
        throw validation_error("lattice JSON must contain a \"gram\" array");
    IntMat gram;
    for (const auto& row : j["gram"]) {
        if (!row.is_array())
            throw validation_error("\"gram\" must be an array of arrays");
        std::vector<Int> r;
        for (const auto& v : row) {
            if (!v.is_number_integer())
                throw validation_error("Gram entries must be integers");
            r.emplace_back(v.get<long long>());
        }
        gram.push_back(std::move(r));
    }
    std::string name = j.value("name", "");
    return parse_lattice(gram, name);
}

std::vector<Int> smith_normal_form(const IntMat& A, IntMat& U, IntMat& V) {
    int n = static_cast<int>(A.size());
    IntMat M = A;
    auto ident = [n]() {
        IntMat I(n, std::vector<Int>(n, 0));
        for (int i = 0; i < n; ++i) I[i][i] = 1;
        return I;
    };
    U = ident();
    V = ident();

    auto swap_rows = [&](int a, int b) {
        std::swap(M[a], M[b]);
        std::swap(U[a], U[b]);
    };
    auto swap_cols = [&](int a, int b) {
        for (int i = 0; i < n; ++i) std::swap(M[i][a], M[i][b]);
        for (int i = 0; i < n; ++i) std::swap(V[i][a], V[i][b]);
    };
    auto addmul_row = [&](int dst, int src, const Int& f) {
        for (int j = 0; j < n; ++j) M[dst][j] += f * M[src][j];
        for (int j = 0; j < n; ++j) U[dst][j] += f * U[src][j];
    };
    auto addmul_col = [&](int dst, int src, const Int& f) {
        for (int i = 0; i < n; ++i) M[i][dst] += f * M[i][src];
        for (int i = 0; i < n; ++i) V[i][dst] += f * V[i][src];
    };
    auto neg_row = [&](int i) {
        for (int j = 0; j < n; ++j) M[i][j] = -M[i][j];
        for (int j = 0; j < n; ++j) U[i][j] = -U[i][j];
    };

    for (int t = 0; t < n; ++t) {
        for (;;) {
            // move a nonzero entry of minimal absolute value to (t,t)
            int bi = -1, bj = -1;
            for (int i = t; i < n; ++i)
                for (int j = t; j < n; ++j)
                    if (M[i][j] != 0 &&
                        (bi < 0 || abs(M[i][j]) < abs(M[bi][bj]))) {
                        bi = i;
                        bj = j;
                    }
            if (bi < 0)
                throw singular_lattice_error(
                    "matrix is singular (zero block in Smith reduction)");
            if (bi != t) swap_rows(t, bi);
            if (bj != t) swap_cols(t, bj);

            bool clean = true;
            for (int i = t + 1; i < n; ++i)
                if (M[i][t] != 0) {
                    Int q;
                    mpz_fdiv_q(q.backend().data(),
                               M[i][t].backend().data(),
                               M[t][t].backend().data());
                    addmul_row(i, t, -q);
                    if (M[i][t] != 0) clean = false;
                }
            for (int j = t + 1; j < n; ++j)
                if (M[t][j] != 0) {
                    Int q;
                    mpz_fdiv_q(q.backend().data(),
                               M[t][j].backend().data(),
                               M[t][t].backend().data());
                    addmul_col(j, t, -q);
                    if (M[t][j] != 0) clean = false;
                }
            if (!clean) continue;

            // enforce divisibility of the trailing block by the pivot
            bool divisible = true;
            for (int i = t + 1; i < n && divisible; ++i)
                for (int j = t + 1; j < n && divisible; ++j)
                    if (M[i][j] % M[t][t] != 0) {
                        addmul_row(t, i, Int(1));
                        divisible = false;
                    }
            if (divisible) break;
        }
        if (M[t][t] < 0) neg_row(t);
    }
    std::vector<Int> d(n);
    for (int i = 0; i < n; ++i) d[i] = M[i][i];
    return d;
}

DiscGroup::DiscGroup(EvenLattice L) : lattice_(std::move(L)) {
    int n = lattice_.rank;
    IntMat U, V;
    std::vector<Int> d = smith_normal_form(lattice_.gram, U, V);
    order_ = 1;
    for (int i = 0; i < n; ++i) {
        order_ *= d[i];
        if (d[i] > 1) {
            divisors_.push_back(d[i]);
            RatVec g(n);
            for (int k = 0; k < n; ++k) g[k] = Rat(V[k][i], d[i]);
            gens_.push_back(std::move(g));
            coord_map_.push_back(U[i]);
        }
    }
    if (order_ != abs(lattice_.det))
        throw computation_error("discriminant group order mismatch");
}

DiscElement DiscGroup::element(std::vector<Int> coords) const {
    if (coords.size() != divisors_.size())
        throw validation_error("element coordinate count does not match the "
                               "discriminant group rank");
    for (size_t i = 0; i < coords.size(); ++i)
        coords[i] = mod_int(coords[i], divisors_[i]);
    DiscElement g;
    g.coords = std::move(coords);
    g.q_val = q_value_raw(g);
    g.level = level_raw(g);
    return g;
}

DiscElement DiscGroup::zero() const {
    return element(std::vector<Int>(divisors_.size(), 0));
}

DiscElement DiscGroup::neg(const DiscElement& g) const {
    std::vector<Int> c(g.coords.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = -g.coords[i];
    return element(std::move(c));
}

DiscElement DiscGroup::add(const DiscElement& g, const DiscElement& h) const {
    std::vector<Int> c(g.coords.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = g.coords[i] + h.coords[i];
    return element(std::move(c));
}

Rat DiscGroup::q_value(const DiscElement& g) const {
    if (g.coords.size() != divisors_.size())
        throw validation_error("coordinate count mismatch");
    for (size_t i = 0; i < g.coords.size(); ++i)
        if (g.coords[i] < 0 || g.coords[i] >= divisors_[i])
            throw validation_error("element coordinates out of range");
    return q_value_raw(g);
}

Rat DiscGroup::q_value_raw(const DiscElement& g) const {
    return mod1(lattice_.quad(representative(g)));
}

Rat DiscGroup::bilinear_value(const DiscElement& g,
                              const DiscElement& h) const {
    return mod1(lattice_.bilinear(representative(g), representative(h)));
}

Int DiscGroup::level(const DiscElement& g) const { return level_raw(g); }

Int DiscGroup::level_raw(const DiscElement& g) const {
    Int l = 1;
    for (size_t i = 0; i < divisors_.size(); ++i) {
        Int o = divisors_[i] / gcd(divisors_[i], g.coords[i]);
        l = lcm(l, o);
    }
    return l;
}

RatVec DiscGroup::representative(const DiscElement& g) const {
    RatVec v(lattice_.rank, Rat(0));
    for (size_t i = 0; i < gens_.size(); ++i)
        for (int k = 0; k < lattice_.rank; ++k)
            v[k] += Rat(g.coords[i]) * gens_[i][k];
    return v;
}

DiscElement DiscGroup::element_from_dual(const RatVec& gamma) const {
    int n = lattice_.rank;
    if (static_cast<int>(gamma.size()) != n)
        throw validation_error("dual vector has wrong length");
    std::vector<Int> x(n);
    for (int i = 0; i < n; ++i) {
        Rat acc(0);
        for (int j = 0; j < n; ++j) acc += Rat(lattice_.gram[i][j]) * gamma[j];
        if (denominator(acc) != 1)
            throw validation_error("vector is not in the dual lattice");
        x[i] = numerator(acc);
    }
    std::vector<Int> coords(divisors_.size());
    for (size_t i = 0; i < divisors_.size(); ++i) {
        Int acc = 0;
        for (int j = 0; j < n; ++j) acc += coord_map_[i][j] * x[j];
        coords[i] = acc;
    }
    return element(std::move(coords));
}

std::vector<DiscElement> DiscGroup::all_elements(size_t limit) const {
    if (order_ > Int(limit))
        throw computation_error("discriminant group too large to enumerate");
    std::vector<DiscElement> out;
    std::vector<Int> c(divisors_.size(), 0);
    for (;;) {
        out.push_back(element(c));
        size_t i = 0;
        while (i < c.size()) {
            c[i] += 1;
            if (c[i] < divisors_[i]) break;
            c[i] = 0;
            ++i;
        }
        if (i == c.size()) break;
        if (c.empty()) break;
    }
    return out;
}

EvenLattice hyperbolic_sum(const EvenLattice& L) {
    int n = L.rank;
    IntMat g(n + 2, std::vector<Int>(n + 2, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g[i][j] = L.gram[i][j];
    g[n][n + 1] = 1;
    g[n + 1][n] = 1;
    return parse_lattice(g, L.name.empty() ? "L+U" : L.name + "+U");
}

EvenLattice builtin_lattice(const std::string& name, const Int& param) {
    if (name == "sl2") {
        return parse_lattice({{2, 0, 0}, {0, 0, 1}, {0, 1, 0}}, "sl2");
    }
    if (name == "siegel") {
        return parse_lattice({{0, 1, 0, 0, 0},
                              {1, 0, 0, 0, 0},
                              {0, 0, 0, 1, 0},
                              {0, 0, 1, 0, 0},
                              {0, 0, 0, 0, -2}},
                             "siegel");
    }
    if (name == "hilbert") {
        Int D = param;
        if (D <= 0 || D % 4 != 1 || !is_prime(D))
            throw validation_error(
                "hilbert lattice requires a prime fundamental discriminant "
                "D > 0 (D prime, D = 1 mod 4); got D = " + D.str());
        Int w = (D * D - D) / 2;
        return parse_lattice({{0, -1, 0, 0},
                              {-1, 0, 0, 0},
                              {0, 0, 2, D},
                              {0, 0, D, w}},
                             "hilbert(" + D.str() + ")");
    }
    throw validation_error("unknown builtin lattice: " + name);
}

}  // namespace heegner
