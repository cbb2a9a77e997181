#pragma once

#include "heegner/numeric.hpp"

namespace heegner {

// Kronecker symbol (a/n) with the usual conventions at 2, -1 and 0.
int kronecker(const Int& a, const Int& n);

// chi_D(a) = (D/a) for a discriminant D (nonzero, 0 or 1 mod 4).
int chi(const Int& D, const Int& a);

// D = D0 * f^2 with D0 the fundamental discriminant of Q(sqrt(D)).
struct Discriminant {
    Int D;
    Int D0;
    Int f;
    int delta;  // 0 if D0 > 0, 1 if D0 < 0
};
Discriminant fundamental_decomposition(const Int& D);

// --- exact special values -------------------------------------------------

Rat bernoulli_number(unsigned k);
Rat bernoulli_poly(unsigned k, const Rat& x);
// Generalized Bernoulli number B_{k,chi_D}.
Rat gen_bernoulli(const Int& D, unsigned k);

// L(chi_D, 1-k) = -B_{k,chi_D}/k for k >= 1; s must be a non-positive
// integer.
Rat L_exact(const Int& D, long s);
// zeta(s) at integers s <= 0.
Rat zeta_exact(long s);

// --- high precision numerics ----------------------------------------------

struct ValueWithDeriv {
    Real value;
    Real deriv;  // d/ds
};

// Hurwitz zeta and its s-derivative by Euler-Maclaurin summation; x in (0,1],
// s != 1.
ValueWithDeriv hurwitz_zeta_pair(const Real& s, const Rat& x, unsigned digits);
Real hurwitz_zeta(const Real& s, const Rat& x, unsigned digits);
Real hurwitz_zeta_ds(const Real& s, const Rat& x, unsigned digits);

ValueWithDeriv L_numeric_pair(const Int& D, const Real& s, unsigned digits);
Real L_numeric(const Int& D, const Real& s, unsigned digits);
Real L_logderiv(const Int& D, const Real& s, unsigned digits);

ValueWithDeriv zeta_numeric_pair(const Real& s, unsigned digits);
Real zeta_numeric(const Real& s, unsigned digits);
Real zeta_logderiv(const Real& s, unsigned digits);

// Gamma by Stirling series with recurrence shift; x > 0 unless noted.
Real log_gamma(const Real& x, unsigned digits);
Real gamma_real(const Real& x, unsigned digits);  // reflection for x < 0
Real digamma(const Real& x, unsigned digits);

// 1 / (cos(pi (s - delta)/2) Gamma(s)), written without the pole/zero
// cancellation at negative integers.
Real inv_cos_gamma(const Real& s, int delta, unsigned digits);

// Right hand sides of the functional equations, for consistency checks:
// zeta(s) = 2^{s-1} pi^s / (cos(pi s/2) Gamma(s)) * zeta(1-s) and the
// analogue for primitive real characters with conductor |D0|.
Real zeta_via_functional_eq(const Real& s, unsigned digits);
Real L_via_functional_eq(const Int& D0, const Real& s, unsigned digits);

}  // namespace heegner
