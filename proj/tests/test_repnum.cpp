#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "heegner/dirichlet.hpp"
#include "heegner/errors.hpp"
#include "heegner/repnum.hpp"

using namespace heegner;

namespace {

Rat mod1(const Rat& x) {
    Int fl;
    mpz_fdiv_q(fl.backend().data(), numerator(x).backend().data(),
               denominator(x).backend().data());
    return x - fl;
}

// indices (gamma, n) with n != 0 and |2 d^2 n| <= bound
std::vector<RepIndex> small_indices(const DiscGroup& G, const Int& bound) {
    std::vector<RepIndex> out;
    for (const auto& g : G.all_elements()) {
        Int d2 = g.level * g.level;
        Rat start = mod1(-g.q_val);
        for (Rat n = start - 8; n <= 8; n += 1) {
            if (n == 0) continue;
            if (abs(2 * d2 * n) <= bound)
                out.push_back(make_rep_index(G, g, n));
        }
    }
    return out;
}

}  // namespace

TEST_CASE("nu = 0 always counts one point") {
    DiscGroup G(builtin_lattice("sl2"));
    RepIndex idx = make_rep_index(G, G.element({Int(1)}), Rat(3, 4));
    CHECK(rep_count_pp(G, idx, 3, 0) == 1);
    CHECK(rep_count(G, idx, 1) == 1);
}

TEST_CASE("fixture: sl2, gamma != 0, n = 3/4, p = 3, nu = 1") {
    DiscGroup G(builtin_lattice("sl2"));
    DiscElement g = G.element({Int(1)});
    RepIndex idx = make_rep_index(G, g, Rat(3, 4));
    Int naive = rep_count_naive(G.lattice(), G.representative(g), Rat(3, 4),
                                3);
    CHECK(naive == 9);  // 27-point enumeration
    CHECK(rep_count_pp(G, idx, 3, 1) == naive);
}

TEST_CASE("blocked kernel matches the naive oracle") {
    std::vector<EvenLattice> lattices;
    lattices.push_back(builtin_lattice("sl2"));
    lattices.push_back(builtin_lattice("siegel"));
    lattices.push_back(builtin_lattice("hilbert", 5));
    lattices.push_back(parse_lattice(
        {{2, 0, 0, 0}, {0, -2, 0, 0}, {0, 0, -2, 0}, {0, 0, 0, -2}}));
    for (const auto& L : lattices) {
        DiscGroup G(L);
        auto elems = G.all_elements();
        std::vector<DiscElement> gammas = {elems[0]};
        if (elems.size() > 1) gammas.push_back(elems[1]);
        if (elems.size() > 3) gammas.push_back(elems[3]);
        for (const auto& g : gammas) {
            RatVec rep = G.representative(g);
            for (Rat base : {Rat(1), Rat(2)}) {
                Rat n = base - g.q_val;
                if (n == 0) continue;
                RepIndex idx = make_rep_index(G, g, n);
                for (Int p : {Int(2), Int(3), Int(5)}) {
                    int numax = p == 2 ? 3 : (L.rank >= 5 && p == 5 ? 1 : 2);
                    for (int nu = 1; nu <= numax; ++nu) {
                        Int a = pow_int(p, nu);
                        Int expect = rep_count_naive(L, rep, n, a);
                        CHECK(rep_count_pp(G, idx, p, nu) == expect);
                    }
                }
            }
        }
    }
}

TEST_CASE("w_p examples on sl2") {
    DiscGroup G(builtin_lattice("sl2"));
    RepIndex idx = make_rep_index(G, G.element({Int(1)}), Rat(3, 4));
    CHECK(idx.gamma.level == 2);
    // v_3(2 * 3/4 * 2) = v_3(3) = 1
    CHECK(w_p(G, idx, 3) == 3);
    // v_2(3) = 0
    CHECK(w_p(G, idx, 2) == 1);
    CHECK(w_p(G, idx, 5) == 1);
    RepIndex zero_n{G.zero(), Rat(0)};
    CHECK_THROWS_AS(w_p(G, zero_n, 3), validation_error);
    CHECK_THROWS_AS(w_p(G, idx, 4), validation_error);
}

TEST_CASE("stabilization: N(p^{w+1}) = p^{r-1} N(p^w)") {
    std::vector<EvenLattice> lattices;
    lattices.push_back(builtin_lattice("sl2"));
    lattices.push_back(builtin_lattice("siegel"));
    lattices.push_back(builtin_lattice("hilbert", 5));
    for (const auto& L : lattices) {
        DiscGroup G(L);
        for (const auto& idx : small_indices(G, 20)) {
            for (Int p : {Int(2), Int(3), Int(5), Int(7)}) {
                int w = w_p(G, idx, p);
                Int lhs = rep_count_pp(G, idx, p, w + 1);
                Int rhs =
                    pow_int(p, L.rank - 1) * rep_count_pp(G, idx, p, w);
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("multiplicativity of the representation numbers") {
    DiscGroup G(builtin_lattice("sl2"));
    DiscElement g = G.element({Int(1)});
    RepIndex idx = make_rep_index(G, g, Rat(3, 4));
    for (Int a = 1; a <= 30; ++a)
        for (Int b = 1; b <= 30 / a; ++b) {
            if (gcd(a, b) != 1) continue;
            CHECK(rep_count(G, idx, a * b) ==
                  rep_count(G, idx, a) * rep_count(G, idx, b));
        }
    // direct single-modulus check at a = 12
    Int direct = rep_count_naive(G.lattice(), G.representative(g), Rat(3, 4),
                                 12);
    CHECK(rep_count(G, idx, 12) == direct);

    DiscGroup GH(builtin_lattice("hilbert", 5));
    DiscElement h = GH.all_elements()[1];
    Rat n = 1 - h.q_val;
    RepIndex idxh = make_rep_index(GH, h, n);
    for (Int a : {Int(6), Int(10), Int(15)}) {
        Int prod = 1;
        for (const auto& [p, e] : factorize(a))
            prod *= rep_count_pp(GH, idxh, p, e);
        CHECK(rep_count(GH, idxh, a) == prod);
        CHECK(rep_count(GH, idxh, a) ==
              rep_count_naive(GH.lattice(), GH.representative(h), n, a));
    }
}

TEST_CASE("local polynomial basics") {
    DiscGroup G(builtin_lattice("sl2"));
    RepIndex idx = make_rep_index(G, G.element({Int(1)}), Rat(3, 4));
    LocalPolynomial lp = local_poly(G, idx, 3);
    REQUIRE(!lp.coeffs.empty());
    CHECK(lp.coeffs[0] == 1);  // N(p^0) = 1
    CHECK(lp.wp == 3);
    CHECK(static_cast<int>(lp.coeffs.size()) - 1 <= lp.wp);
}

TEST_CASE("w_p padding invariance") {
    std::vector<EvenLattice> lattices;
    lattices.push_back(builtin_lattice("sl2"));
    lattices.push_back(builtin_lattice("hilbert", 5));
    for (const auto& L : lattices) {
        DiscGroup G(L);
        for (const auto& idx : small_indices(G, 12)) {
            for (Int p : {Int(2), Int(3)}) {
                LocalPolynomial a = local_poly(G, idx, p);
                LocalPolynomial b = local_poly_padded(G, idx, p, 2);
                CHECK(a.coeffs == b.coeffs);
            }
        }
    }
}

TEST_CASE("good primes: closed forms, r even") {
    // hilbert:5 has rank 4; D = (-1)^{r/2} det = 5
    DiscGroup G(builtin_lattice("hilbert", 5));
    Int D = G.lattice().det;
    REQUIRE(D == 5);
    for (const auto& g : {G.all_elements()[0], G.all_elements()[1]}) {
        Rat n = 1 - g.q_val;
        if (n == 0) n += 1;
        RepIndex idx = make_rep_index(G, g, n);
        Rat supp = 2 * Rat(g.level * g.level) * n * Rat(G.order());
        for (Int p : {Int(3), Int(7), Int(11), Int(13)}) {
            if (numerator(supp) % p == 0) continue;
            LocalPolynomial lp = local_poly(G, idx, p);
            // 1 - chi_D(p) p^{r/2 - 1} X
            REQUIRE(lp.coeffs.size() <= 2);
            CHECK(lp.coeffs[0] == 1);
            Int expect = -Int(chi(D, p)) * pow_int(p, 1);
            Int got = lp.coeffs.size() > 1 ? lp.coeffs[1] : Int(0);
            CHECK(got == expect);
        }
    }
}

TEST_CASE("good primes: closed forms, r odd") {
    for (auto name : {std::string("sl2"), std::string("siegel")}) {
        DiscGroup G(builtin_lattice(name));
        int r = G.lattice().rank;
        for (const auto& g : G.all_elements()) {
            Rat n = 2 - g.q_val;
            RepIndex idx = make_rep_index(G, g, n);
            Rat d2n = Rat(g.level * g.level) * n;
            // D = 2 (-1)^{(r+1)/2} d^2 n det
            Int sgn = ((r + 1) / 2) % 2 == 0 ? 1 : -1;
            Int D = numerator(2 * sgn * d2n * Rat(G.lattice().det));
            Rat supp = 2 * d2n * Rat(G.order());
            for (Int p : {Int(3), Int(5), Int(7), Int(11), Int(13)}) {
                if (numerator(supp) % p == 0) continue;
                LocalPolynomial lp = local_poly(G, idx, p);
                // L^(p)(X) (1 - chi_D(p) p^{(r-1)/2} X) = 1 - p^{r-1} X^2
                std::vector<Int> prod(lp.coeffs.size() + 1, Int(0));
                Int c1 = -Int(chi(D, p)) * pow_int(p, (r - 1) / 2);
                for (size_t i = 0; i < lp.coeffs.size(); ++i) {
                    prod[i] += lp.coeffs[i];
                    prod[i + 1] += lp.coeffs[i] * c1;
                }
                while (prod.size() > 1 && prod.back() == 0) prod.pop_back();
                REQUIRE(prod.size() == 3);
                CHECK(prod[0] == 1);
                CHECK(prod[1] == 0);
                CHECK(prod[2] == -pow_int(p, r - 1));
            }
        }
    }
}

TEST_CASE("genus relation: coefficients of L+U scale by p^k") {
    for (auto name : {std::string("sl2"), std::string("hilbert")}) {
        EvenLattice L = name == "hilbert" ? builtin_lattice(name, 5)
                                          : builtin_lattice(name);
        EvenLattice LU = hyperbolic_sum(L);
        DiscGroup G(L), GU(LU);
        for (const auto& g : G.all_elements()) {
            RatVec rep = G.representative(g);
            rep.push_back(Rat(0));
            rep.push_back(Rat(0));
            DiscElement gu = GU.element_from_dual(rep);
            Rat n = 1 - g.q_val;
            if (n == 0) n = 2;
            RepIndex idx = make_rep_index(G, g, n);
            RepIndex idxu = make_rep_index(GU, gu, n);
            for (Int p : {Int(2), Int(3), Int(5)}) {
                LocalPolynomial a = local_poly(G, idx, p);
                LocalPolynomial b = local_poly(GU, idxu, p);
                size_t deg = std::max(a.coeffs.size(), b.coeffs.size());
                Int pk = 1;
                for (size_t k = 0; k < deg; ++k) {
                    Int ak = k < a.coeffs.size() ? a.coeffs[k] : Int(0);
                    Int bk = k < b.coeffs.size() ? b.coeffs[k] : Int(0);
                    CHECK(bk == pk * ak);
                    pk *= p;
                }
            }
        }
    }
}

TEST_CASE("counts do not depend on the representative of gamma") {
    DiscGroup G(builtin_lattice("siegel"));
    DiscElement g = G.element({Int(1)});
    RatVec rep = G.representative(g);
    RatVec shifted = rep;
    shifted[0] += 1;  // add a lattice vector
    shifted[4] -= 2;
    for (Int p : {Int(2), Int(3)}) {
        for (int nu = 1; nu <= 2; ++nu) {
            Int a = rep_count_pp_at(G.lattice(), rep, Rat(5, 4), p, nu);
            Int b = rep_count_pp_at(G.lattice(), shifted, Rat(5, 4), p, nu);
            CHECK(a == b);
        }
    }
}

TEST_CASE("budget guard raises instead of truncating") {
    DiscGroup G(builtin_lattice("siegel"));
    RepIndex idx = make_rep_index(G, G.element({Int(1)}), Rat(45, 4));
    EnumBudget tiny{100};
    CHECK_THROWS_AS(rep_count_pp(G, idx, 3, 5, tiny), budget_error);
    EnumBudget tiny2{1000};
    CHECK_THROWS_AS(
        rep_count_naive(G.lattice(), G.representative(G.zero()), Rat(1), 5,
                        tiny2),
        budget_error);
}

TEST_CASE("index validation") {
    DiscGroup G(builtin_lattice("sl2"));
    CHECK_THROWS_AS(make_rep_index(G, G.element({Int(1)}), Rat(1, 2)),
                    validation_error);
    CHECK_THROWS_AS(rep_count_pp(G,
                                 make_rep_index(G, G.zero(), Rat(1)),
                                 Int(6), 1),
                    validation_error);
}
