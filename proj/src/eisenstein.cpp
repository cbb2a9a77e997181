#include "heegner/eisenstein.hpp"

#include "heegner/errors.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace heegner {

namespace {

Rat mod1(const Rat& x) {
    Int fl;
    mpz_fdiv_q(fl.backend().data(), numerator(x).backend().data(),
               denominator(x).backend().data());
    return x - fl;
}

}  // namespace

Rat kappa_of(const EvenLattice& L, bool formal_sl2) {
    if (L.b_plus != 2)
        throw validation_error("formula layer requires signature (2,p)");
    int p = L.b_minus;
    if (p < 2 && !formal_sl2)
        throw validation_error(
            "signature (2,1) is only available in formal mode");
    return Rat(L.rank, 2);  // 1 + p/2
}

HeegnerIndex make_heegner_index(const DiscGroup& G, const DiscElement& beta,
                                const Rat& m) {
    if (m >= 0) throw validation_error("Heegner index needs m < 0");
    if (denominator(m - beta.q_val) != 1)
        throw validation_error("m must lie in Z + q(beta)");
    return {beta, m};
}

Discriminant disc_data(const DiscGroup& G, const DiscElement& gamma,
                       const Rat& n) {
    const EvenLattice& L = G.lattice();
    int r = L.rank;
    if (n == 0) throw validation_error("disc_data needs n != 0");
    Int D;
    if (r % 2 == 0) {
        D = (r / 2) % 2 == 0 ? L.det : -L.det;
    } else {
        Rat dn = Rat(gamma.level * gamma.level) * n;
        if (denominator(dn) != 1)
            throw computation_error("d_gamma^2 n is not integral");
        Int sign = ((r + 1) / 2) % 2 == 0 ? 1 : -1;
        Rat Dr = 2 * sign * dn * Rat(L.det);
        D = numerator(Dr);
    }
    Int rm = D % 4;
    if (rm < 0) rm += 4;
    if (rm != 0 && rm != 1)
        throw computation_error("internal: D = " + D.str() +
                                " is not a discriminant");
    Discriminant dec = fundamental_decomposition(D);

    // sgn(D0) table indexed by b+ - b- mod 4 and sgn(n)
    static const int table_pos[4] = {+1, -1, -1, +1};
    static const int table_neg[4] = {+1, +1, -1, -1};
    int col = ((L.b_plus - L.b_minus) % 4 + 4) % 4;
    int expect = n > 0 ? table_pos[col] : table_neg[col];
    if ((dec.D0 > 0 ? +1 : -1) != expect)
        throw computation_error("internal: sgn(D0) disagrees with the table");
    return dec;
}

SigmaValue sigma(const DiscGroup& G, const DiscElement& gamma, const Rat& n,
                 const EisensteinOptions& opts,
                 const std::vector<Int>& extra_primes) {
    const EvenLattice& L = G.lattice();
    int r = L.rank;
    if (n <= 0) throw validation_error("sigma needs n > 0");

    Discriminant dec = disc_data(G, gamma, n);
    RepIndex idx = make_rep_index(G, gamma, n);

    // primes dividing 2 d^2 n det(L)
    Rat prod = 2 * Rat(gamma.level * gamma.level) * n * Rat(L.det);
    Int support = abs(numerator(prod));
    std::set<Int> primes;
    for (const auto& [p, e] : factorize(support)) primes.insert(p);
    for (const Int& p : extra_primes) {
        if (!is_prime(p)) throw validation_error("extra prime is not prime");
        primes.insert(p);
    }

    SigmaValue sv;
    sv.value_at_kappa = 1;
    for (const Int& p : primes) {
        LocalFactor lf;
        lf.poly = local_poly(G, idx, p, opts.budget);
        lf.chi_p = chi(dec.D0, p);
        sv.local_factors.push_back(lf);

        Rat X = Rat(1, pow_int(p, r - 1));  // p^{1-r/2-kappa} = p^{1-r}
        Rat Lx = lf.poly.eval(X);
        Rat Ldx = lf.poly.eval_deriv(X);
        Rat alpha;
        Rat factor;
        if (r % 2 == 0) {
            long kappa = r / 2;
            Rat cpk = Rat(lf.chi_p) / Rat(pow_int(p, kappa));
            Rat denom = 1 - cpk;
            factor = Lx / denom;
            if (Lx != 0) alpha = -X * Ldx / Lx - cpk / denom;
        } else {
            long u = (r - 1) / 2;
            Rat cpu = Rat(lf.chi_p) / Rat(pow_int(p, u));
            Rat p1r = Rat(1, pow_int(p, r - 1));
            factor = (1 - cpu) * Lx / (1 - p1r);
            if (Lx != 0)
                alpha = cpu / (1 - cpu) - 2 * p1r / (1 - p1r) - X * Ldx / Lx;
        }
        sv.value_at_kappa *= factor;
        if (Lx != 0 && alpha != 0) sv.logderiv_at_kappa.push_back({p, alpha});
    }
    if (sv.value_at_kappa == 0) sv.logderiv_at_kappa.clear();
    return sv;
}

Real sigma_numeric(const DiscGroup& G, const SigmaValue& sv, const Real& s,
                   unsigned digits) {
    PrecisionGuard guard(digits);
    int r = G.lattice().rank;
    Real sw = to_working(s);
    Real acc(1);
    for (const auto& lf : sv.local_factors) {
        Real lp = log(to_real(lf.poly.p));
        Real X = exp((Real(1) - Real(r) / 2 - sw) * lp);
        Real Lx = lf.poly.eval(X);
        if (r % 2 == 0) {
            Real denom = 1 - lf.chi_p * exp(-sw * lp);
            acc *= Lx / denom;
        } else {
            Real numer = 1 - lf.chi_p * exp((Real(0.5) - sw) * lp);
            Real denom = 1 - exp((1 - 2 * sw) * lp);
            acc *= numer * Lx / denom;
        }
    }
    return acc;
}

namespace {

// deg(H(beta,-n))/B via the sign-resolved closed forms; provably rational.
Rat degree_ratio_over_B(const DiscGroup& G, const DiscElement& gamma,
                        const Rat& n, const EisensteinOptions& opts) {
    const EvenLattice& L = G.lattice();
    int r = L.rank;
    kappa_of(L, opts.formal_sl2);
    if (n <= 0) throw validation_error("degree formula needs n > 0");

    Discriminant dec = disc_data(G, gamma, n);
    SigmaValue sv = sigma(G, gamma, n, opts);
    Int aD0 = abs(dec.D0);

    if (r % 2 == 0) {
        long kappa = r / 2;
        long e = kappa - dec.delta;
        if (e % 2 != 0)
            throw computation_error("internal: sign exponent not integral");
        int sign = (e / 2) % 2 == 0 ? 1 : -1;
        Rat lv = L_exact(dec.D0, 1 - kappa);
        if (lv == 0) throw computation_error("L(chi_D0, 1-kappa) vanishes");
        return Rat(sign) * 2 * pow_rat(n, kappa - 1) *
               Rat(pow_int(aD0, kappa - 1), dec.f) * sv.value_at_kappa / lv;
    }
    long u = (r - 1) / 2;  // kappa - 1/2
    long e = u + dec.delta;
    if (e % 2 != 0)
        throw computation_error("internal: sign exponent not integral");
    int sign = (e / 2) % 2 == 0 ? 1 : -1;
    Rat lv = L_exact(dec.D0, 1 - u);
    Rat zv = zeta_exact(1 - 2 * u);
    if (zv == 0) throw computation_error("zeta(2-2kappa) vanishes");
    // 2^{2k-3/2} n^{k-1} |D0|^{1-k} / sqrt|L'/L| = 4^u n^u |D0|^{-u} d/f
    return Rat(sign) * pow_rat(Rat(4) * n / Rat(aD0), u) *
           Rat(gamma.level, dec.f) * lv / zv * sv.value_at_kappa;
}

}  // namespace

Rat degree_ratio(const DiscGroup& G, const HeegnerIndex& h,
                 const EisensteinOptions& opts) {
    return degree_ratio_over_B(G, h.beta, -h.m, opts);
}

Rat coeff_C0(const DiscGroup& G, const DiscElement& gamma, const Rat& n,
             const EisensteinOptions& opts) {
    kappa_of(G.lattice(), opts.formal_sl2);
    if (n == 0)
        throw validation_error("the n = 0 coefficient is handled by qexp_E0");
    if (n < 0) return Rat(0);  // 1/Gamma(0) kills the term at s = 0
    return -2 * degree_ratio_over_B(G, gamma, n, opts);
}

Real coeff_C_numeric(const DiscGroup& G, const DiscElement& gamma,
                     const Rat& n, const Real& s, unsigned digits,
                     const EisensteinOptions& opts) {
    unsigned work = digits + 10;
    PrecisionGuard guard(work);
    const EvenLattice& L = G.lattice();
    int r = L.rank;
    Rat kappa = kappa_of(L, opts.formal_sl2);
    if (n <= 0)
        throw validation_error("coeff_C_numeric needs n > 0");

    Discriminant dec = disc_data(G, gamma, n);
    SigmaValue sv = sigma(G, gamma, n, opts);

    Real pi = pi_value();
    Real kap = to_real(kappa);
    Real sr = to_working(s);
    Real nn = to_real(n);
    Real aD0 = to_real(abs(dec.D0));
    Real sqG = sqrt(to_real(G.order()));
    Real sig = sigma_numeric(G, sv, 2 * sr + kap, work);
    Real g2 = gamma_real(2 * sr + kap, work);
    Real g1 = gamma_real(sr + kap, work);
    int bdiff = L.b_minus - L.b_plus;

    if (r % 2 == 0) {
        Real lv = L_numeric(dec.D0, 1 - 2 * sr - kap, work);
        Real cosarg =
            pi * (sr - Real(dec.delta) / 2 + Real(bdiff) / 4);
        Real pref = exp((2 - 2 * sr) * log(Real(2)) - sr * log(pi) +
                        (kap + sr - 1) * log(nn) +
                        (2 * sr + kap - Real(0.5)) * log(aD0));
        return pref * cos(cosarg) * g2 / (sqG * g1) * sig / lv;
    }
    Real lv = L_numeric(dec.D0, Real(1.5) - 2 * sr - kap, work);
    Real zv = zeta_numeric(2 - 4 * sr - 2 * kap, work);
    Real cosarg = pi * (sr - Real(dec.delta) / 2 + Real(bdiff - 1) / 4);
    Real pref = exp((2 * sr + 2 * kap - Real(0.5)) * log(Real(2)) -
                    sr * log(pi) + (kap + sr - 1) * log(nn) +
                    (1 - kap - 2 * sr) * log(aD0));
    return pref * sin(pi * (2 * sr + kap)) * g2 /
           (cos(cosarg) * sqG * g1) * lv / zv * sig;
}

SymbolicValue green_integral(const DiscGroup& G, const HeegnerIndex& h,
                             const EisensteinOptions& opts) {
    const EvenLattice& L = G.lattice();
    int r = L.rank;
    kappa_of(L, opts.formal_sl2);
    Rat n = -h.m;

    Discriminant dec = disc_data(G, h.beta, n);
    SigmaValue sv = sigma(G, h.beta, n, opts);
    if (sv.value_at_kappa == 0)
        throw computation_error("sigma(kappa) = 0: divisor is empty");

    SymbolicValue out;
    for (const auto& [p, alpha] : sv.logderiv_at_kappa)
        out += SymbolicValue::log_int(2 * alpha, p);

    if (r % 2 == 0) {
        long kappa = r / 2;
        out += SymbolicValue::l_logderiv_term(Rat(2), dec.D0,
                                              Rat(1 - kappa));
        // log|m D0^2|
        out += SymbolicValue::log_rational(
            Rat(1), abs(h.m) * Rat(dec.D0 * dec.D0));
        Rat harmonic(0);
        for (long j = 1; j <= kappa - 1; ++j) harmonic += Rat(1, j);
        out += SymbolicValue::rational(harmonic);
    } else {
        long u = (r - 1) / 2;
        out += SymbolicValue::zeta_logderiv_term(Rat(4), Rat(1 - 2 * u));
        out += SymbolicValue::l_logderiv_term(Rat(-2), dec.D0, Rat(1 - u));
        out += SymbolicValue::log_rational(
            Rat(1), 4 * abs(h.m) / Rat(dec.D0 * dec.D0));
        Rat odd(0);
        for (long j = 1; j <= u; ++j) odd += Rat(2, 2 * j - 1);
        out += SymbolicValue::rational(odd);
    }
    return out;
}

SymbolicValue coeff_logderiv(const DiscGroup& G, const HeegnerIndex& h,
                             const EisensteinOptions& opts) {
    SymbolicValue v = green_integral(G, h, opts);
    // subtract log(4 pi) - Gamma'(1) = 2 log 2 + log pi + euler_gamma
    v += SymbolicValue::log_int(Rat(-2), Int(2));
    v += SymbolicValue::constant(Rat(-1), "log_pi");
    v += SymbolicValue::constant(Rat(-1), "euler_gamma");
    return v;
}

std::vector<DivisorTerm> symmetrize_divisor(const DiscGroup& G,
                                            std::vector<DivisorTerm> divisor,
                                            bool* added_mirror) {
    if (added_mirror) *added_mirror = false;
    std::map<std::pair<std::vector<Int>, Rat>, Int> table;
    for (const auto& t : divisor) {
        auto key = std::make_pair(t.index.beta.coords, t.index.m);
        auto it = table.find(key);
        if (it != table.end() && it->second != t.mult)
            throw validation_error("divisor lists conflicting multiplicities "
                                   "for the same index");
        table[key] = t.mult;
    }
    for (const auto& t : divisor) {
        DiscElement mb = G.neg(t.index.beta);
        auto key = std::make_pair(mb.coords, t.index.m);
        auto it = table.find(key);
        if (it == table.end()) {
            table[key] = t.mult;
            if (added_mirror) *added_mirror = true;
        } else if (it->second != t.mult) {
            throw validation_error(
                "divisor is not symmetric under beta -> -beta");
        }
    }
    std::vector<DivisorTerm> out;
    for (const auto& [key, mult] : table) {
        DiscElement beta = G.element(key.first);
        out.push_back({make_heegner_index(G, beta, key.second), mult});
    }
    return out;
}

Rat weight_of_divisor(const DiscGroup& G, std::vector<DivisorTerm> divisor,
                      const EisensteinOptions& opts) {
    auto sym = symmetrize_divisor(G, std::move(divisor));
    Rat k(0);
    for (const auto& t : sym)
        k += -Rat(t.mult) * coeff_C0(G, t.index.beta, -t.index.m, opts) / 4;
    return k;
}

SymbolicValue borcherds_integral(const DiscGroup& G,
                                 std::vector<DivisorTerm> divisor,
                                 const EisensteinOptions& opts) {
    auto sym = symmetrize_divisor(G, std::move(divisor));
    Rat k(0);
    SymbolicValue deriv_part;
    for (const auto& t : sym) {
        Rat c0 = coeff_C0(G, t.index.beta, -t.index.m, opts);
        if (c0 == 0) {
            if (t.mult != 0)
                throw computation_error(
                    "C(beta,-m,0) = 0: C' is not recoverable from the "
                    "log-derivative; use coeff_C_numeric finite differences");
            continue;
        }
        k += -Rat(t.mult) * c0 / 4;
        // C'(beta,-m,0) = C(beta,-m,0) * (C'/C)
        SymbolicValue cprime = coeff_logderiv(G, t.index, opts) * c0;
        deriv_part += cprime * Rat(-t.mult, 4);
    }
    // k (log 4 pi - Gamma'(1))
    SymbolicValue out;
    out += SymbolicValue::log_int(2 * k, Int(2));
    out += SymbolicValue::constant(k, "log_pi");
    out += SymbolicValue::constant(k, "euler_gamma");
    out += deriv_part;
    return out;
}

std::vector<QexpEntry> qexp_E0(const DiscGroup& G, const Rat& max_index,
                               bool ack_kappa2, const EisensteinOptions& opts) {
    const EvenLattice& L = G.lattice();
    Rat kappa = kappa_of(L, opts.formal_sl2);
    if (kappa < 2)
        throw validation_error("q-expansion needs kappa >= 2");
    if (kappa == 2 && !ack_kappa2)
        throw validation_error(
            "kappa = 2: an extra y^{-1} term may occur in the constant "
            "coefficient; pass the acknowledgment flag to proceed");
    if (max_index <= 0) throw validation_error("max_index must be positive");

    std::vector<QexpEntry> out;
    for (const auto& gamma : G.all_elements()) {
        if (gamma.level == 1)  // gamma = 0 in L'/L
            out.push_back({gamma, Rat(0), Rat(2)});
        Rat start = mod1(-gamma.q_val);
        if (start == 0) start = 1;
        for (Rat n = start; n <= max_index; n += 1)
            out.push_back({gamma, n, coeff_C0(G, gamma, n, opts)});
    }
    return out;
}

}  // namespace heegner
