#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "heegner/dirichlet.hpp"
#include "heegner/errors.hpp"

using namespace heegner;

namespace {

Real tol_digits(int d) { return pow_real(Real(10), Real(-d)); }

bool close_rel(const Real& a, const Real& b, int digits) {
    Real scale = abs(b);
    if (scale == 0) return abs(a) < tol_digits(digits);
    return abs(a - b) / scale < tol_digits(digits);
}

}  // namespace

TEST_CASE("kronecker symbol against the GMP oracle") {
    for (long D = -30; D <= 30; ++D)
        for (long a = -60; a <= 60; ++a) {
            Int DD(D), aa(a);
            int mine = kronecker(DD, aa);
            int ref = mpz_kronecker(DD.backend().data(), aa.backend().data());
            CHECK(mine == ref);
        }
}

TEST_CASE("kronecker specific values") {
    CHECK(kronecker(Int(-3), Int(1)) == 1);
    CHECK(kronecker(Int(5), Int(1)) == 1);
    // -3 = 5 mod 8
    CHECK(kronecker(Int(-3), Int(2)) == -1);
    // complete multiplicativity: (5/4) = (5/2)^2 = 1
    CHECK(kronecker(Int(5), Int(4)) == 1);
}

TEST_CASE("kronecker: multiplicative and periodic for fundamental D") {
    for (Int D : {Int(-3), Int(-4), Int(5), Int(8), Int(12), Int(-7)}) {
        Int m = abs(D);
        for (Int a = 1; a <= 200; ++a) {
            CHECK(chi(D, a + m) == chi(D, a));
            for (Int b = 1; b * a <= 200; ++b)
                CHECK(chi(D, a * b) == chi(D, a) * chi(D, b));
        }
    }
}

TEST_CASE("fundamental decomposition") {
    auto d1 = fundamental_decomposition(Int(-3));
    CHECK(d1.D0 == -3);
    CHECK(d1.f == 1);
    CHECK(d1.delta == 1);

    auto d2 = fundamental_decomposition(Int(12));
    CHECK(d2.D0 == 12);
    CHECK(d2.f == 1);

    auto d3 = fundamental_decomposition(Int(45));
    CHECK(d3.D0 == 5);
    CHECK(d3.f == 3);
    CHECK(d3.delta == 0);

    auto d4 = fundamental_decomposition(Int(-12));
    CHECK(d4.D0 == -3);
    CHECK(d4.f == 2);

    auto d5 = fundamental_decomposition(Int(8));
    CHECK(d5.D0 == 8);
    CHECK(d5.f == 1);

    // perfect squares decompose to the trivial character
    auto d6 = fundamental_decomposition(Int(4));
    CHECK(d6.D0 == 1);
    CHECK(d6.f == 2);

    CHECK_THROWS_AS(fundamental_decomposition(Int(7)), validation_error);
    CHECK_THROWS_AS(fundamental_decomposition(Int(0)), validation_error);
    CHECK_THROWS_AS(fundamental_decomposition(Int(-5)), validation_error);
}

TEST_CASE("bernoulli numbers and polynomials") {
    CHECK(bernoulli_number(0) == 1);
    CHECK(bernoulli_number(1) == Rat(-1, 2));
    CHECK(bernoulli_number(2) == Rat(1, 6));
    CHECK(bernoulli_number(4) == Rat(-1, 30));
    CHECK(bernoulli_number(12) == Rat(-691, 2730));
    CHECK(bernoulli_number(3) == 0);

    // B_2(x) = x^2 - x + 1/6
    for (Rat x : {Rat(0), Rat(1, 2), Rat(3, 7)})
        CHECK(bernoulli_poly(2, x) == x * x - x + Rat(1, 6));
    CHECK(bernoulli_poly(1, Rat(0)) == Rat(-1, 2));
}

TEST_CASE("generalized Bernoulli and the zeta_K(-1) oracle") {
    // L(chi_5, -1) = -B_{2,chi_5}/2 and zeta(-1) L(chi_5,-1) = zeta_K(-1)
    // = 1/30 for K = Q(sqrt 5)
    Rat b = gen_bernoulli(Int(5), 2);
    CHECK(b == Rat(4, 5));
    Rat lval = L_exact(Int(5), -1);
    CHECK(lval == Rat(-2, 5));
    CHECK(zeta_exact(-1) * lval == Rat(1, 30));
}

TEST_CASE("exact L values") {
    CHECK(L_exact(Int(-3), 0) == Rat(1, 3));
    CHECK(zeta_exact(-3) == Rat(1, 120));
    CHECK(zeta_exact(-1) == Rat(-1, 12));
    CHECK(zeta_exact(0) == Rat(-1, 2));
    CHECK(zeta_exact(-2) == 0);
    // parity forces exact zeros: chi_5 is even, so L(chi_5, 0) = 0
    CHECK(L_exact(Int(5), 0) == 0);
    CHECK(L_exact(Int(-3), -1) == 0);
    // trivial character reduces to zeta
    CHECK(L_exact(Int(1), -3) == zeta_exact(-3));
}

TEST_CASE("hurwitz zeta reduces to zeta") {
    unsigned digits = 50;
    PrecisionGuard guard(80);
    Real z2 = hurwitz_zeta(Real(2), Rat(1), digits);
    Real pi = pi_value();
    CHECK(close_rel(z2, pi * pi / 6, 45));

    // exact Bernoulli values at non-positive integers
    CHECK(close_rel(hurwitz_zeta(Real(-1), Rat(1), digits),
                    to_real(Rat(-1, 12)), 45));
    CHECK(close_rel(hurwitz_zeta(Real(-3), Rat(1), digits),
                    to_real(Rat(1, 120)), 45));
    // zeta_H(0, x) = 1/2 - x
    CHECK(close_rel(hurwitz_zeta(Real(0), Rat(1, 3), digits),
                    to_real(Rat(1, 2) - Rat(1, 3)), 45));
    CHECK_THROWS_AS(hurwitz_zeta(Real(1), Rat(1), digits), computation_error);
    CHECK_THROWS_AS(hurwitz_zeta(Real(2), Rat(2), digits), validation_error);
}

TEST_CASE("derivatives match central finite differences") {
    unsigned digits = 50;
    PrecisionGuard guard(80);
    Real h = tol_digits(10);
    struct Probe {
        Real s;
        Rat x;
    };
    for (const Probe& pr : {Probe{Real(2), Rat(1)}, Probe{Real(-1.5), Rat(1, 3)},
                            Probe{Real(-1), Rat(2, 5)},
                            Probe{Real(0.25), Rat(1, 2)}}) {
        Real ds = hurwitz_zeta_ds(pr.s, pr.x, digits);
        Real fd = (hurwitz_zeta(pr.s + h, pr.x, digits) -
                   hurwitz_zeta(pr.s - h, pr.x, digits)) /
                  (2 * h);
        CHECK(close_rel(fd, ds, 8));
    }
    // same for the assembled L-series derivative
    for (Int D : {Int(-3), Int(5)}) {
        Real s(-1.25);
        auto pair = L_numeric_pair(D, s, digits);
        Real fd = (L_numeric(D, s + h, digits) - L_numeric(D, s - h, digits)) /
                  (2 * h);
        CHECK(close_rel(fd, pair.deriv, 8));
    }
}

TEST_CASE("numeric L agrees with exact L at non-positive integers") {
    unsigned digits = 50;
    PrecisionGuard guard(80);
    for (Int D : {Int(-3), Int(-4), Int(5), Int(8), Int(12), Int(-7)}) {
        for (long s : {0L, -1L, -2L, -3L}) {
            Rat exact = L_exact(D, s);
            Real numeric = L_numeric(D, Real(s), digits);
            if (exact == 0)
                CHECK(abs(numeric) < tol_digits(40));
            else
                CHECK(close_rel(numeric, to_real(exact), 40));
        }
    }
    CHECK(close_rel(L_numeric(Int(-3), Real(0), digits), to_real(Rat(1, 3)),
                    45));
}

TEST_CASE("zeta functional equation at negative odd integers") {
    unsigned digits = 50;
    PrecisionGuard guard(80);
    for (long s : {-1L, -3L, -5L}) {
        Real lhs = zeta_numeric(Real(s), digits);
        Real rhs = zeta_via_functional_eq(Real(s), digits);
        CHECK(abs(lhs - rhs) < tol_digits(20));
    }
}

TEST_CASE("L functional equation for primitive real characters") {
    unsigned digits = 50;
    PrecisionGuard guard(80);
    for (Int D : {Int(5), Int(-3), Int(8), Int(-7)}) {
        for (long s : {-1L, -2L}) {
            Real lhs = L_numeric(D, Real(s), digits);
            Real rhs = L_via_functional_eq(D, Real(s), digits);
            CHECK(abs(lhs - rhs) < tol_digits(20));
        }
    }
}

TEST_CASE("zeta log-derivative: two independent evaluation paths") {
    unsigned digits = 50;
    PrecisionGuard guard(digits);
    // direct Hurwitz path at s = -1
    Real direct = zeta_logderiv(Real(-1), digits);
    // functional equation path: zeta'/zeta(s) = log(2 pi)
    //   + (pi/2) cot(pi s/2) - psi(1-s) - zeta'/zeta(1-s); the cot term
    //   vanishes at s = -1
    Real pi = pi_value();
    Real other = log(2 * pi) - digamma(Real(2), digits) -
                 zeta_logderiv(Real(2), digits);
    CHECK(abs(direct - other) < tol_digits(20));
}

TEST_CASE("gamma and digamma") {
    unsigned digits = 50;
    PrecisionGuard guard(digits);
    CHECK(close_rel(gamma_real(Real(5), digits), Real(24), 45));
    CHECK(close_rel(gamma_real(Real(0.5), digits), sqrt(pi_value()), 45));
    // Gamma(5/2) = 3/4 sqrt(pi)
    CHECK(close_rel(gamma_real(Real(2.5), digits),
                    3 * sqrt(pi_value()) / 4, 45));
    // reflection: Gamma(-1/2) = -2 sqrt(pi)
    CHECK(close_rel(gamma_real(Real(-0.5), digits), -2 * sqrt(pi_value()),
                    45));
    // psi(1) = -euler_gamma, psi(1/2) = -euler_gamma - 2 log 2
    CHECK(close_rel(digamma(Real(1), digits), -euler_gamma_value(), 45));
    CHECK(close_rel(digamma(Real(0.5), digits),
                    -euler_gamma_value() - 2 * log(Real(2)), 45));
    // recurrence consistency: psi(x+1) = psi(x) + 1/x
    CHECK(close_rel(digamma(Real(3.25), digits),
                    digamma(Real(2.25), digits) + 1 / Real(2.25), 45));
}

TEST_CASE("precision scales with the request") {
    // evaluating at 50 and 80 digits agrees to at least 45
    Real a = L_numeric(Int(5), Real(-1), 50);
    Real b = L_numeric(Int(5), Real(-1), 80);
    PrecisionGuard guard(80);
    CHECK(abs(a - b) < tol_digits(45));
}
