#include "heegner/numeric.hpp"

#include "heegner/errors.hpp"

#include <algorithm>
#include <map>

namespace heegner {

Real to_real(const Rat& q) {
    Real r(q);
    return r;
}

Real to_real(const Int& n) {
    Real r(n);
    return r;
}

Real to_working(const Real& x) {
    Real r = x;
    r.precision(Real::default_precision());
    return r;
}

Real pi_value() {
    Real r(0);
    mpfr_const_pi(r.backend().data(), MPFR_RNDN);
    return r;
}

Real euler_gamma_value() {
    Real r(0);
    mpfr_const_euler(r.backend().data(), MPFR_RNDN);
    return r;
}

Real log_real(const Real& x) { return log(x); }
Real exp_real(const Real& x) { return exp(x); }

Real pow_real(const Real& x, const Real& y) {
    if (x <= 0) throw computation_error("pow_real: base must be positive");
    return exp(y * log(x));
}

Rat pow_rat(const Rat& q, long k) {
    if (k == 0) return Rat(1);
    if (k < 0) {
        if (q == 0) throw computation_error("pow_rat: zero to negative power");
        return 1 / pow_rat(q, -k);
    }
    Rat acc(1), base(q);
    unsigned long e = static_cast<unsigned long>(k);
    while (e) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

Int pow_int(const Int& b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.backend().data(), b.backend().data(), e);
    return r;
}

Cplx Cplx::operator/(const Cplx& o) const {
    Real d = o.re * o.re + o.im * o.im;
    if (d == 0) throw computation_error("complex division by zero");
    return {(re * o.re + im * o.im) / d, (im * o.re - re * o.im) / d};
}

Real Cplx::abs() const { return sqrt(re * re + im * im); }

Cplx unit_exp(const Rat& x) {
    // reduce mod 1 so large numerators do not hurt precision
    Int n = numerator(x), d = denominator(x);
    Int rem = n % d;
    if (rem < 0) rem += d;
    Real theta = 2 * pi_value() * to_real(Rat(rem, d));
    return {cos(theta), sin(theta)};
}

Cplx sqrt_principal(const Cplx& z) {
    Real r = z.abs();
    if (r == 0) return Cplx(Real(0));
    Real theta = atan2(z.im, z.re);  // principal arg in (-pi, pi]
    Real s = sqrt(r);
    return {s * cos(theta / 2), s * sin(theta / 2)};
}

bool is_prime(const Int& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.backend().data(), 30) != 0;
}

long valuation(const Int& n, const Int& p) {
    if (n == 0) throw computation_error("valuation of zero");
    Int m = abs(n);
    long v = 0;
    while (m % p == 0) {
        m /= p;
        ++v;
    }
    return v;
}

long valuation(const Rat& q, const Int& p) {
    if (q == 0) throw computation_error("valuation of zero");
    return valuation(numerator(q), p) - valuation(denominator(q), p);
}

namespace {

Int pollard_rho(const Int& n) {
    // Brent's variant; n odd composite, not a prime power of small primes
    for (Int c = 1;; ++c) {
        Int x = 2, y = 2, d = 1;
        Int ys = y, q = 1;
        auto f = [&](const Int& v) { return (v * v + c) % n; };
        long m = 128;
        long r = 1;
        while (d == 1) {
            x = y;
            for (long i = 0; i < r; ++i) y = f(y);
            long k = 0;
            while (k < r && d == 1) {
                ys = y;
                for (long i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = q * abs(x - y) % n;
                }
                d = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if (d == n) {
            d = 1;
            while (d == 1) {
                ys = f(ys);
                d = gcd(abs(x - ys), n);
            }
        }
        if (d != n) return d;
    }
}

void factor_into(Int n, std::map<Int, int>& out) {
    if (n <= 1) return;
    if (is_prime(n)) {
        out[n]++;
        return;
    }
    for (Int p : {Int(2), Int(3), Int(5), Int(7), Int(11), Int(13)}) {
        while (n % p == 0) {
            out[p]++;
            n /= p;
        }
    }
    if (n == 1) return;
    if (is_prime(n)) {
        out[n]++;
        return;
    }
    // trial division covers everything we meet in practice; rho is the
    // fallback for stray large composites
    Int d = 17;
    while (d * d <= n && d < 100000) {
        while (n % d == 0) {
            out[d]++;
            n /= d;
        }
        d += 2;
    }
    if (n == 1) return;
    if (is_prime(n)) {
        out[n]++;
        return;
    }
    Int f = pollard_rho(n);
    factor_into(f, out);
    factor_into(n / f, out);
}

}  // namespace

std::vector<std::pair<Int, int>> factorize(const Int& n) {
    if (n == 0) throw computation_error("factorize(0)");
    std::map<Int, int> m;
    factor_into(abs(n), m);
    return {m.begin(), m.end()};
}

std::vector<Int> divisors(const Int& n) {
    auto f = factorize(n);
    std::vector<Int> ds{Int(1)};
    for (const auto& [p, e] : f) {
        size_t sz = ds.size();
        Int pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (size_t j = 0; j < sz; ++j) ds.push_back(ds[j] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

int moebius(const Int& n) {
    auto f = factorize(n);
    for (const auto& [p, e] : f)
        if (e > 1) return 0;
    return f.size() % 2 == 0 ? 1 : -1;
}

Int squarefree_part(const Int& n) {
    if (n == 0) throw computation_error("squarefree_part(0)");
    Int s = n < 0 ? -1 : 1;
    for (const auto& [p, e] : factorize(n))
        if (e % 2 == 1) s *= p;
    return s;
}

}  // namespace heegner
