#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace heegner {

using Int =
    boost::multiprecision::number<boost::multiprecision::gmp_int,
                                  boost::multiprecision::et_off>;
using Rat =
    boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                  boost::multiprecision::et_off>;
using Real =
    boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                  boost::multiprecision::et_off>;

// Sets the working mpfr precision (decimal digits) for the lifetime of the
// guard and restores the previous value on destruction.
class PrecisionGuard {
  public:
    explicit PrecisionGuard(unsigned digits)
        : saved_(Real::default_precision()) {
        Real::default_precision(digits);
    }
    ~PrecisionGuard() { Real::default_precision(saved_); }
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

  private:
    unsigned saved_;
};

Real to_real(const Rat& q);
Real to_real(const Int& n);
// Copy of x carrying the current default precision; mixed-precision
// arithmetic otherwise inherits the (possibly lower) precision of an
// operand.
Real to_working(const Real& x);
Real pi_value();
Real euler_gamma_value();
Real log_real(const Real& x);
Real exp_real(const Real& x);

// x^y for real x>0 and real y, exp(y log x).
Real pow_real(const Real& x, const Real& y);
// q^k for rational q and integer k (exact).
Rat pow_rat(const Rat& q, long k);
Int pow_int(const Int& b, unsigned long e);

// Minimal complex type over Real; std::complex is not specified for
// user-defined floating point types.
struct Cplx {
    Real re, im;

    Cplx() : re(0), im(0) {}
    Cplx(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    explicit Cplx(const Real& r) : re(r), im(0) {}

    Cplx operator+(const Cplx& o) const { return {re + o.re, im + o.im}; }
    Cplx operator-(const Cplx& o) const { return {re - o.re, im - o.im}; }
    Cplx operator*(const Cplx& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    Cplx operator*(const Real& s) const { return {re * s, im * s}; }
    Cplx operator/(const Cplx& o) const;
    Cplx& operator+=(const Cplx& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Cplx conj() const { return {re, -im}; }
    Real abs() const;
};

// e(x) = exp(2 pi i x) for rational x, evaluated exactly mod 1.
Cplx unit_exp(const Rat& x);
// Principal square root, arg in (-pi/2, pi/2].
Cplx sqrt_principal(const Cplx& z);

// --- small integer arithmetic helpers -----------------------------------

bool is_prime(const Int& n);
// p-adic valuation; n must be nonzero.
long valuation(const Int& n, const Int& p);
long valuation(const Rat& q, const Int& p);
// prime -> exponent, ascending primes; |n| >= 1.
std::vector<std::pair<Int, int>> factorize(const Int& n);
std::vector<Int> divisors(const Int& n);
int moebius(const Int& n);
Int squarefree_part(const Int& n);  // n = squarefree_part * square

}  // namespace heegner
