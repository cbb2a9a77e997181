#include "heegner/dirichlet.hpp"

#include "heegner/errors.hpp"

#include <mutex>
#include <vector>

namespace heegner {

int kronecker(const Int& a, const Int& n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    Int aa = a, nn = n;
    int t = 1;
    if (nn < 0) {
        nn = -nn;
        if (aa < 0) t = -t;
    }
    // factor of 2 in the denominator
    while (nn % 2 == 0) {
        nn /= 2;
        if (aa % 2 == 0) return 0;
        Int r = aa % 8;
        if (r < 0) r += 8;
        if (r == 3 || r == 5) t = -t;
    }
    aa %= nn;
    if (aa < 0) aa += nn;
    while (aa != 0) {
        while (aa % 2 == 0) {
            aa /= 2;
            Int r = nn % 8;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(aa, nn);
        if (aa % 4 == 3 && nn % 4 == 3) t = -t;
        aa %= nn;
    }
    return nn == 1 ? t : 0;
}

int chi(const Int& D, const Int& a) { return kronecker(D, a); }

Discriminant fundamental_decomposition(const Int& D) {
    if (D == 0) throw validation_error("discriminant must be nonzero");
    Int r = D % 4;
    if (r < 0) r += 4;
    if (r != 0 && r != 1)
        throw validation_error("not a discriminant: " + D.str() +
                               " (must be 0 or 1 mod 4)");
    Int s = squarefree_part(D);
    Int m2 = D / s;  // positive perfect square
    Int m = sqrt(m2);
    Discriminant out;
    out.D = D;
    Int smod = s % 4;
    if (smod < 0) smod += 4;
    if (smod == 1) {
        out.D0 = s;
        out.f = m;
    } else {
        out.D0 = 4 * s;
        out.f = m / 2;
        if (out.D0 * out.f * out.f != D)
            throw validation_error("not a discriminant: " + D.str());
    }
    out.delta = out.D0 > 0 ? 0 : 1;
    return out;
}

// --- Bernoulli machinery ----------------------------------------------------

namespace {

std::vector<Rat>& bernoulli_cache() {
    static std::vector<Rat> cache{Rat(1)};
    return cache;
}
std::mutex bernoulli_mutex;

Rat binom(unsigned n, unsigned k) {
    Int r;
    mpz_bin_uiui(r.backend().data(), n, k);
    return Rat(r);
}

}  // namespace

Rat bernoulli_number(unsigned k) {
    std::lock_guard<std::mutex> lock(bernoulli_mutex);
    auto& cache = bernoulli_cache();
    while (cache.size() <= k) {
        unsigned m = static_cast<unsigned>(cache.size());
        // sum_{j=0}^{m} C(m+1,j) B_j = 0
        Rat acc(0);
        for (unsigned j = 0; j < m; ++j) acc += binom(m + 1, j) * cache[j];
        cache.push_back(-acc / binom(m + 1, m));
    }
    return cache[k];
}

Rat bernoulli_poly(unsigned k, const Rat& x) {
    Rat acc(0);
    Rat xp(1);
    // B_k(x) = sum_j C(k,j) B_{k-j} x^j
    for (unsigned j = 0; j <= k; ++j) {
        acc += binom(k, j) * bernoulli_number(k - j) * xp;
        xp *= x;
    }
    return acc;
}

Rat gen_bernoulli(const Int& D, unsigned k) {
    Int m = abs(D);
    if (m == 1) return bernoulli_poly(k, Rat(1));
    Rat acc(0);
    for (Int a = 1; a <= m; ++a) {
        int c = chi(D, a);
        if (c != 0) acc += Rat(c) * bernoulli_poly(k, Rat(a, m));
    }
    return pow_rat(Rat(m), static_cast<long>(k) - 1) * acc;
}

Rat L_exact(const Int& D, long s) {
    if (s > 0) throw validation_error("L_exact needs s <= 0");
    unsigned k = static_cast<unsigned>(1 - s);
    return -gen_bernoulli(D, k) / Rat(k);
}

Rat zeta_exact(long s) {
    if (s > 0) throw validation_error("zeta_exact needs s <= 0");
    unsigned k = static_cast<unsigned>(1 - s);
    // B_k(1) rather than B_k, so that zeta(0) = -1/2
    return -bernoulli_poly(k, Rat(1)) / Rat(k);
}

// --- Hurwitz zeta via Euler-Maclaurin ---------------------------------------

namespace {

// value and s-derivative of the product (s)(s+1)...(s+m-1); the running pair
// stays finite when a factor vanishes.
ValueWithDeriv rising_factorial_pair(const Real& s, unsigned m) {
    ValueWithDeriv r{Real(1), Real(0)};
    for (unsigned i = 0; i < m; ++i) {
        Real f = s + i;
        r.deriv = r.deriv * f + r.value;
        r.value = r.value * f;
    }
    return r;
}

}  // namespace

ValueWithDeriv hurwitz_zeta_pair(const Real& s, const Rat& x,
                                 unsigned digits) {
    if (x <= 0 || x > 1)
        throw validation_error("hurwitz_zeta requires x in (0,1]");
    unsigned work = digits + 12;
    PrecisionGuard guard(work);
    Real sw = to_working(s);
    if (abs(sw - 1) < pow_real(Real(10), Real(-static_cast<long>(work))))
        throw computation_error("hurwitz_zeta pole at s = 1");

    Real eps = pow_real(Real(10), Real(-static_cast<long>(work) - 5));
    Real xs = to_real(x);

    double sd = sw.convert_to<double>();
    unsigned shift = 16;
    for (int attempt = 0; attempt < 8; ++attempt) {
        unsigned need = static_cast<unsigned>(std::max(
            15.0, std::max(2.0 * std::abs(sd) + 1.0, 0.4 * work + 1.0)));
        unsigned N = std::max(shift, need);

        Real value(0), deriv(0);
        for (unsigned k = 0; k < N; ++k) {
            Real base = xs + k;
            Real lg = log(base);
            Real term = exp(-sw * lg);
            value += term;
            deriv -= lg * term;
        }
        Real X = xs + N;
        Real lX = log(X);
        // integral term X^{1-s}/(s-1)
        Real x1ms = exp((1 - sw) * lX);
        value += x1ms / (sw - 1);
        deriv += -x1ms * (lX / (sw - 1) + 1 / ((sw - 1) * (sw - 1)));
        // half term X^{-s}/2
        Real xms = exp(-sw * lX);
        value += xms / 2;
        deriv += -lX * xms / 2;

        // Bernoulli corrections; the series is asymptotic, so abandon the
        // attempt and push X out if terms stop shrinking before eps
        bool converged = false;
        bool diverging = false;
        Real X2 = X * X;
        Real fac = xms / X;  // X^{-s-1}
        Real prev_mag(-1);
        for (unsigned j = 1; j <= work; ++j) {
            auto rf = rising_factorial_pair(sw, 2 * j - 1);
            Rat b = bernoulli_number(2 * j);
            Int f;
            mpz_fac_ui(f.backend().data(), 2 * j);
            Real coef = to_real(b / Rat(f));
            Real term_v = coef * rf.value * fac;
            Real term_d = coef * (rf.deriv * fac - rf.value * lX * fac);
            Real mag = abs(term_v) + abs(term_d);
            if (prev_mag >= 0 && mag > prev_mag) {
                diverging = true;
                break;
            }
            value += term_v;
            deriv += term_d;
            prev_mag = mag;
            Real scale = abs(value) + abs(deriv) + 1;
            if (mag < eps * scale) {
                converged = true;
                break;
            }
            fac /= X2;
        }
        if (converged && !diverging) return {value, deriv};
        shift *= 2;
    }
    throw computation_error("hurwitz_zeta failed to converge");
}

Real hurwitz_zeta(const Real& s, const Rat& x, unsigned digits) {
    return hurwitz_zeta_pair(s, x, digits).value;
}

Real hurwitz_zeta_ds(const Real& s, const Rat& x, unsigned digits) {
    return hurwitz_zeta_pair(s, x, digits).deriv;
}

// --- Dirichlet L-functions --------------------------------------------------

ValueWithDeriv L_numeric_pair(const Int& D, const Real& s, unsigned digits) {
    unsigned work = digits + 10;
    PrecisionGuard guard(work);
    Int m = abs(D);
    if (m == 1) return zeta_numeric_pair(s, digits);
    Real sw = to_working(s);
    Real value(0), deriv(0);
    for (Int a = 1; a <= m; ++a) {
        int c = chi(D, a);
        if (c == 0) continue;
        auto h = hurwitz_zeta_pair(sw, Rat(a, m), work);
        value += c * h.value;
        deriv += c * h.deriv;
    }
    Real lm = log(to_real(m));
    Real scale = exp(-sw * lm);  // |D|^{-s}
    // d/ds (|D|^{-s} H(s)) = |D|^{-s} (H' - log|D| H)
    return {scale * value, scale * (deriv - lm * value)};
}

Real L_numeric(const Int& D, const Real& s, unsigned digits) {
    return L_numeric_pair(D, s, digits).value;
}

Real L_logderiv(const Int& D, const Real& s, unsigned digits) {
    auto p = L_numeric_pair(D, s, digits);
    if (p.value == 0) throw computation_error("L_logderiv at a zero of L");
    return p.deriv / p.value;
}

ValueWithDeriv zeta_numeric_pair(const Real& s, unsigned digits) {
    return hurwitz_zeta_pair(s, Rat(1), digits);
}

Real zeta_numeric(const Real& s, unsigned digits) {
    return zeta_numeric_pair(s, digits).value;
}

Real zeta_logderiv(const Real& s, unsigned digits) {
    auto p = zeta_numeric_pair(s, digits);
    if (p.value == 0) throw computation_error("zeta_logderiv at a zero");
    return p.deriv / p.value;
}

// --- Gamma / digamma by Stirling with recurrence shift ------------------------

Real log_gamma(const Real& x, unsigned digits) {
    unsigned work = digits + 10;
    PrecisionGuard guard(work);
    if (x <= 0) throw computation_error("log_gamma requires x > 0");
    Real z = to_working(x);
    unsigned zmin = std::max<unsigned>(20, static_cast<unsigned>(0.6 * work));
    Real shift_log(0);
    while (z < zmin) {
        shift_log += log(z);
        z += 1;
    }
    Real lz = log(z);
    Real acc = (z - Real(0.5)) * lz - z + log(2 * pi_value()) / 2;
    Real zpow = z;
    Real eps = pow_real(Real(10), Real(-static_cast<long>(work) - 5));
    for (unsigned j = 1; j < 4 * work; ++j) {
        Rat c = bernoulli_number(2 * j) / Rat(2 * j * (2 * j - 1));
        Real term = to_real(c) / zpow;
        acc += term;
        if (abs(term) < eps * (abs(acc) + 1)) break;
        zpow *= z * z;
    }
    return acc - shift_log;
}

Real gamma_real(const Real& x, unsigned digits) {
    unsigned work = digits + 10;
    PrecisionGuard guard(work);
    Real xw = to_working(x);
    if (xw > 0) return exp(log_gamma(xw, work));
    // reflection: Gamma(x) = pi / (sin(pi x) Gamma(1-x))
    Real pi = pi_value();
    Real s = sin(pi * xw);
    if (s == 0) throw computation_error("gamma pole at non-positive integer");
    return pi / (s * exp(log_gamma(1 - xw, work)));
}

Real digamma(const Real& x, unsigned digits) {
    unsigned work = digits + 10;
    PrecisionGuard guard(work);
    if (x <= 0) throw computation_error("digamma requires x > 0");
    Real z = to_working(x);
    unsigned zmin = std::max<unsigned>(20, static_cast<unsigned>(0.6 * work));
    Real shift(0);
    while (z < zmin) {
        shift += 1 / z;
        z += 1;
    }
    Real acc = log(z) - 1 / (2 * z);
    Real z2 = z * z;
    Real zpow = z2;
    Real eps = pow_real(Real(10), Real(-static_cast<long>(work) - 5));
    for (unsigned j = 1; j < 4 * work; ++j) {
        Real term = to_real(bernoulli_number(2 * j) / Rat(2 * j)) / zpow;
        acc -= term;
        if (abs(term) < eps * (abs(acc) + 1)) break;
        zpow *= z2;
    }
    return acc - shift;
}

Real inv_cos_gamma(const Real& s, int delta, unsigned digits) {
    unsigned work = digits + 10;
    PrecisionGuard guard(work);
    // 1/(cos(pi(s-delta)/2) Gamma(s)) = (2/pi) Gamma(1-s) sin(pi s/2) for
    // delta = 0 and (2/pi) Gamma(1-s) cos(pi s/2) for delta = 1; both sides
    // follow from the reflection formula and stay finite where the cosine
    // zero cancels the Gamma pole.
    Real sw = to_working(s);
    Real pi = pi_value();
    Real trig = delta == 0 ? sin(pi * sw / 2) : cos(pi * sw / 2);
    return 2 / pi * gamma_real(1 - sw, work) * trig;
}

Real zeta_via_functional_eq(const Real& s, unsigned digits) {
    unsigned work = digits + 10;
    PrecisionGuard guard(work);
    Real sw = to_working(s);
    Real pi = pi_value();
    Real pref = exp((sw - 1) * log(Real(2)) + sw * log(pi));
    return pref * inv_cos_gamma(sw, 0, work) * zeta_numeric(1 - sw, work);
}

Real L_via_functional_eq(const Int& D0, const Real& s, unsigned digits) {
    unsigned work = digits + 10;
    PrecisionGuard guard(work);
    auto dec = fundamental_decomposition(D0);
    if (dec.f != 1)
        throw validation_error("functional equation needs a fundamental "
                               "discriminant");
    Real sw = to_working(s);
    Real pi = pi_value();
    Real ad = to_real(abs(D0));
    Real pref = exp((sw - 1) * log(Real(2)) + sw * log(pi) +
                    (Real(0.5) - sw) * log(ad));
    return pref * inv_cos_gamma(sw, dec.delta, work) *
           L_numeric(D0, 1 - sw, work);
}

}  // namespace heegner
