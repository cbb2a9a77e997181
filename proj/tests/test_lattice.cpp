#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "heegner/errors.hpp"
#include "heegner/lattice.hpp"

using namespace heegner;

namespace {

Rat mod1(const Rat& x) {
    Int fl;
    mpz_fdiv_q(fl.backend().data(), numerator(x).backend().data(),
               denominator(x).backend().data());
    return x - fl;
}

const IntMat kSl2Gram{{2, 0, 0}, {0, 0, 1}, {0, 1, 0}};

}  // namespace

TEST_CASE("parse: rank-3 lattice Z(2) + U") {
    EvenLattice L = parse_lattice(kSl2Gram);
    CHECK(L.rank == 3);
    CHECK(L.b_plus == 2);
    CHECK(L.b_minus == 1);
    CHECK(L.det == -2);
}

TEST_CASE("parse: rank-1 positive form") {
    EvenLattice L = parse_lattice({{2}});
    CHECK(L.b_plus == 1);
    CHECK(L.b_minus == 0);
    CHECK(L.det == 2);
}

TEST_CASE("parse: Z^5 with q = x1 x2 + x3 x4 - x5^2") {
    EvenLattice L = builtin_lattice("siegel");
    CHECK(L.rank == 5);
    CHECK(L.b_plus == 2);
    CHECK(L.b_minus == 3);
    // |L'/L| = 2, so the Gram determinant is -2
    CHECK(L.det == -2);
    CHECK(DiscGroup(L).order() == 2);
}

TEST_CASE("parse: validation errors are distinct") {
    CHECK_THROWS_AS(parse_lattice({{2, 1}, {0, 2}}), not_symmetric_error);
    CHECK_THROWS_AS(parse_lattice({{1}}), odd_diagonal_error);
    CHECK_THROWS_AS(parse_lattice({{2, 2}, {2, 2}}), singular_lattice_error);
}

TEST_CASE("parse: JSON file format") {
    EvenLattice L = parse_lattice_json(
        R"({"name":"demo","gram":[[2,0,0],[0,0,1],[0,1,0]]})");
    CHECK(L.name == "demo");
    CHECK(L.det == -2);
    CHECK_THROWS_AS(parse_lattice_json("{"), validation_error);
    CHECK_THROWS_AS(parse_lattice_json(R"({"gram":[[2.5]]})"),
                    validation_error);
}

TEST_CASE("inertia matches minor signs when all leading minors are nonzero") {
    // sign changes in the sequence of leading principal minors count the
    // negative eigenvalues
    std::vector<IntMat> mats = {
        {{2, 1}, {1, 2}},
        {{-2, 1}, {1, -4}},
        {{2, 1, 0}, {1, -2, 1}, {0, 1, 4}},
        {{4, 1, 1}, {1, -6, 2}, {1, 2, 2}},
    };
    for (const auto& g : mats) {
        int n = static_cast<int>(g.size());
        std::vector<Int> minors{1};
        for (int k = 1; k <= n; ++k) {
            IntMat sub(k, std::vector<Int>(k));
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) sub[i][j] = g[i][j];
            minors.push_back(det_int(sub));
            REQUIRE(minors.back() != 0);
        }
        int flips = 0;
        for (int k = 1; k <= n; ++k)
            if ((minors[k] > 0) != (minors[k - 1] > 0)) ++flips;
        // scale to make diagonals even; inertia is scale-invariant
        IntMat g2 = g;
        for (auto& row : g2)
            for (auto& v : row) v *= 2;
        EvenLattice L = parse_lattice(g2);
        CHECK(L.b_minus == flips);
        CHECK(L.b_plus == n - flips);
    }
}

TEST_CASE("discriminant group orders") {
    CHECK(DiscGroup(parse_lattice(kSl2Gram)).order() == 2);
    // unimodular: trivial group
    EvenLattice U = parse_lattice({{0, 1}, {1, 0}});
    DiscGroup GU(U);
    CHECK(GU.order() == 1);
    CHECK(GU.ngens() == 0);
    CHECK(GU.all_elements().size() == 1);
    // order = |det| on assorted inputs
    for (const IntMat& g : std::vector<IntMat>{{{6}},
                                               {{2, 1}, {1, 2}},
                                               {{2, 0}, {0, 4}},
                                               {{0, 3}, {3, 0}}}) {
        EvenLattice L = parse_lattice(g);
        CHECK(DiscGroup(L).order() == abs(L.det));
    }
}

TEST_CASE("smith normal form transforms verify") {
    IntMat A{{2, 0, 0}, {0, 0, 1}, {0, 1, 0}};
    IntMat U, V;
    auto d = smith_normal_form(A, U, V);
    REQUIRE(d.size() == 3);
    CHECK(d[0] * d[1] * d[2] == 2);
    for (size_t i = 0; i + 1 < d.size(); ++i) CHECK(d[i + 1] % d[i] == 0);
    // U A V = diag(d)
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Int acc = 0;
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) acc += U[i][k] * A[k][l] * V[l][j];
            CHECK(acc == (i == j ? d[i] : Int(0)));
        }
    CHECK(abs(det_int(U)) == 1);
    CHECK(abs(det_int(V)) == 1);
}

TEST_CASE("q values on Z(2) + U") {
    DiscGroup G(parse_lattice(kSl2Gram));
    CHECK(G.q_value(G.zero()) == 0);
    DiscElement g = G.element({Int(1)});
    // dual of the rank-1 factor is (1/2)Z with q(1/2) = 1/4
    CHECK(G.q_value(g) == Rat(1, 4));
    CHECK(G.q_value(G.neg(g)) == G.q_value(g));
}

TEST_CASE("bilinear form on the discriminant group") {
    DiscGroup G(parse_lattice(kSl2Gram));
    DiscElement g = G.element({Int(1)});
    CHECK(G.bilinear_value(G.zero(), g) == 0);
    CHECK(G.bilinear_value(g, g) == mod1(2 * G.q_value(g)));
    CHECK(G.bilinear_value(g, g) == Rat(1, 2));
}

TEST_CASE("q is a quadratic form: polarization on groups of order <= 50") {
    std::vector<EvenLattice> lattices;
    lattices.push_back(parse_lattice(kSl2Gram));
    lattices.push_back(builtin_lattice("siegel"));
    lattices.push_back(builtin_lattice("hilbert", 5));
    lattices.push_back(builtin_lattice("hilbert", 13));
    lattices.push_back(parse_lattice({{2, 1}, {1, 2}}));
    lattices.push_back(parse_lattice({{6}}));
    lattices.push_back(parse_lattice({{2, 0}, {0, 4}}));
    lattices.push_back(parse_lattice({{0, 3}, {3, 0}}));
    lattices.push_back(parse_lattice({{2, 1}, {1, 8}}));
    for (const auto& L : lattices) {
        DiscGroup G(L);
        REQUIRE(G.order() <= 50);
        auto elems = G.all_elements();
        for (const auto& a : elems)
            for (const auto& b : elems) {
                Rat lhs = mod1(G.q_value(a) + G.q_value(b) +
                               G.bilinear_value(a, b));
                CHECK(lhs == G.q_value(G.add(a, b)));
            }
    }
}

TEST_CASE("level: order of the element") {
    DiscGroup G(parse_lattice(kSl2Gram));
    CHECK(G.level(G.zero()) == 1);
    CHECK(G.level(G.element({Int(1)})) == 2);

    DiscGroup GH(builtin_lattice("hilbert", 5));
    Int lcm_div = 1;
    for (const auto& d : GH.elementary_divisors()) lcm_div = lcm(lcm_div, d);
    for (const auto& g : GH.all_elements()) {
        CHECK(lcm_div % GH.level(g) == 0);
        // level * gamma = 0, and no smaller positive multiple vanishes
        DiscElement acc = GH.zero();
        Int seen_zero_at = 0;
        for (Int b = 1; b <= GH.level(g); ++b) {
            acc = GH.add(acc, g);
            if (acc.level == 1 && seen_zero_at == 0) seen_zero_at = b;
        }
        CHECK(seen_zero_at == GH.level(g));
    }
}

TEST_CASE("level equals the representative denominator") {
    for (const auto& name : {std::string("sl2"), std::string("siegel")}) {
        DiscGroup G(builtin_lattice(name));
        for (const auto& g : G.all_elements()) {
            Int den = 1;
            for (const auto& c : G.representative(g))
                den = lcm(den, denominator(c));
            CHECK(den == g.level);
            CHECK(G.order() % g.level == 0);
        }
    }
}

TEST_CASE("builtin lattices") {
    EvenLattice sl2 = builtin_lattice("sl2");
    CHECK(sl2.det == -2);

    EvenLattice h5 = builtin_lattice("hilbert", 5);
    CHECK(h5.rank == 4);
    CHECK(h5.b_plus == 2);
    CHECK(h5.b_minus == 2);
    CHECK(DiscGroup(h5).order() == 5);

    CHECK(DiscGroup(builtin_lattice("hilbert", 13)).order() == 13);

    // the construction assumes a prime fundamental discriminant
    CHECK_THROWS_AS(builtin_lattice("hilbert", 9), validation_error);
    CHECK_THROWS_AS(builtin_lattice("hilbert", 7), validation_error);
    CHECK_THROWS_AS(builtin_lattice("hilbert", 12), validation_error);
    CHECK_THROWS_AS(builtin_lattice("nope"), validation_error);
}

TEST_CASE("hyperbolic sum preserves the discriminant module") {
    EvenLattice L = builtin_lattice("sl2");
    EvenLattice LU = hyperbolic_sum(L);
    CHECK(LU.rank == 5);
    CHECK(LU.b_plus == 3);
    CHECK(LU.b_minus == 2);
    DiscGroup G(L), GU(LU);
    CHECK(GU.order() == G.order());
    // the embedded representative has the same q value and level
    for (const auto& g : G.all_elements()) {
        RatVec rep = G.representative(g);
        rep.push_back(Rat(0));
        rep.push_back(Rat(0));
        DiscElement lifted = GU.element_from_dual(rep);
        CHECK(GU.q_value(lifted) == G.q_value(g));
        CHECK(GU.level(lifted) == G.level(g));
    }
}

TEST_CASE("element_from_dual rejects vectors outside L'") {
    DiscGroup G(parse_lattice(kSl2Gram));
    CHECK_THROWS_AS(G.element_from_dual({Rat(1, 3), Rat(0), Rat(0)}),
                    validation_error);
    // and the canonical representatives round-trip
    for (const auto& g : G.all_elements())
        CHECK(G.element_from_dual(G.representative(g)).coords == g.coords);
}

TEST_CASE("q_value validates coordinate ranges") {
    DiscGroup G(parse_lattice(kSl2Gram));
    DiscElement bad;
    bad.coords = {Int(7)};
    CHECK_THROWS_AS(G.q_value(bad), validation_error);
    DiscElement wrong;
    wrong.coords = {};
    CHECK_THROWS_AS(G.q_value(wrong), validation_error);
}
