#include "heegner/weilrep.hpp"

#include "heegner/dirichlet.hpp"
#include "heegner/errors.hpp"

#include <algorithm>

namespace heegner {

namespace {

Int mod_pos(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

// Moebius transform M tau at tau = 2i.
Cplx moebius_at_test(const Mat2& m) {
    PrecisionGuard guard(40);
    Cplx tau(Real(0), Real(2));
    Cplx num = Cplx(to_real(m[0][0])) * tau + Cplx(to_real(m[0][1]));
    Cplx den = Cplx(to_real(m[1][0])) * tau + Cplx(to_real(m[1][1]));
    return num / den;
}

// phi(tau) = branch * principal sqrt(c tau + d) at tau.
Cplx phi_value(const Mat2& m, int branch, const Cplx& tau) {
    Cplx ct = Cplx(to_real(m[1][0])) * tau + Cplx(to_real(m[1][1]));
    Cplx r = sqrt_principal(ct);
    if (branch < 0) return Cplx(Real(0)) - r;
    return r;
}

Mat2 mat2_mul(const Mat2& a, const Mat2& b) {
    Mat2 c;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return c;
}

Int round_div(const Int& a, const Int& b) {
    // nearest integer to a/b, ties toward zero
    Int q, r;
    mpz_fdiv_qr(q.backend().data(), r.backend().data(), a.backend().data(),
                b.backend().data());
    Int ab = abs(b);
    if (2 * r > ab) q += 1;
    return q;
}

}  // namespace

std::vector<WordToken> decompose_word(const Mat2& m) {
    if (m[0][0] * m[1][1] - m[0][1] * m[1][0] != 1)
        throw validation_error("matrix must have determinant 1");
    std::vector<WordToken> word;
    Mat2 r = m;
    // peel T^q S from the left while c != 0
    while (r[1][0] != 0) {
        Int q = round_div(r[0][0], r[1][0]);
        word.push_back({false, q});
        word.push_back({true, 0});
        // r <- S^{-1} T^{-q} r = (c, d; -(a - q c), -(b - q d))
        Mat2 nr;
        nr[0][0] = r[1][0];
        nr[0][1] = r[1][1];
        nr[1][0] = -(r[0][0] - q * r[1][0]);
        nr[1][1] = -(r[0][1] - q * r[1][1]);
        r = nr;
    }
    if (r[0][0] == 1) {
        if (r[0][1] != 0) word.push_back({false, r[0][1]});
    } else {
        // r = -T^{-b}: -I = S^2
        word.push_back({true, 0});
        word.push_back({true, 0});
        if (r[0][1] != 0) word.push_back({false, -r[0][1]});
    }
    // drop T^0 tokens
    word.erase(std::remove_if(word.begin(), word.end(),
                              [](const WordToken& t) {
                                  return !t.is_s && t.t_power == 0;
                              }),
               word.end());
    return word;
}

Mat2 word_matrix(const std::vector<WordToken>& word) {
    Mat2 acc{{{Int(1), Int(0)}, {Int(0), Int(1)}}};
    for (const auto& tok : word) {
        Mat2 g;
        if (tok.is_s)
            g = Mat2{{{Int(0), Int(-1)}, {Int(1), Int(0)}}};
        else
            g = Mat2{{{Int(1), tok.t_power}, {Int(0), Int(1)}}};
        acc = mat2_mul(acc, g);
    }
    return acc;
}

MetaplecticElement mp_identity() {
    return {Mat2{{{Int(1), Int(0)}, {Int(0), Int(1)}}}, +1};
}

MetaplecticElement mp_generator_t(const Int& k) {
    return {Mat2{{{Int(1), k}, {Int(0), Int(1)}}}, +1};
}

MetaplecticElement mp_generator_s() {
    return {Mat2{{{Int(0), Int(-1)}, {Int(1), Int(0)}}}, +1};
}

MetaplecticElement mp_multiply(const MetaplecticElement& a,
                               const MetaplecticElement& b, unsigned digits) {
    PrecisionGuard guard(digits);
    Mat2 prod = mat2_mul(a.m, b.m);
    // phi_prod(tau) = phi_a(b tau) phi_b(tau), compared against the
    // principal branch at tau = 2i
    Cplx tau(Real(0), Real(2));
    Cplx val = phi_value(a.m, a.branch, moebius_at_test(b.m)) *
               phi_value(b.m, b.branch, tau);
    Cplx principal = phi_value(prod, +1, tau);
    Cplx ratio = val / principal;
    Real margin(1e-6);
    if ((ratio - Cplx(Real(1))).abs() < margin) return {prod, +1};
    if ((ratio + Cplx(Real(1))).abs() < margin) return {prod, -1};
    throw computation_error("metaplectic branch tracking lost the sign");
}

WeilRep::WeilRep(const DiscGroup& G, const Rat& kappa, unsigned digits)
    : group_(&G), kappa_(kappa), digits_(digits) {
    const EvenLattice& L = G.lattice();
    // parity assumption of the coefficient formulas
    Rat par = 2 * kappa - L.b_minus + L.b_plus;
    if (denominator(par) != 1 || numerator(par) % 4 != 0)
        throw validation_error(
            "2 kappa - b^- + b^+ = 0 mod 4 is required; the = 2 mod 4 "
            "variant is not supported");
    if (G.order() > 2000)
        throw validation_error("discriminant group too large for dense "
                               "Weil matrices");
    PrecisionGuard guard(digits_);
    elements_ = G.all_elements(4000);
    for (size_t i = 0; i < elements_.size(); ++i)
        index_[elements_[i].coords] = i;

    size_t n = elements_.size();
    rho_t_.assign(n, std::vector<Cplx>(n, Cplx()));
    for (size_t i = 0; i < n; ++i)
        rho_t_[i][i] = unit_exp(elements_[i].q_val);

    int bdiff = L.b_minus - L.b_plus;
    scalar_sign_ = ((bdiff % 2) + 2) % 2 == 0 ? 1 : -1;
    // sqrt(i)^{b^- - b^+} / sqrt(|L'/L|)
    Cplx phase = unit_exp(Rat(bdiff, 8));
    Real scale = 1 / sqrt(to_real(G.order()));
    rho_s_.assign(n, std::vector<Cplx>(n, Cplx()));
    for (size_t col = 0; col < n; ++col)
        for (size_t row = 0; row < n; ++row) {
            Rat b = G.bilinear_value(elements_[col], elements_[row]);
            rho_s_[row][col] = phase * unit_exp(-b) * scale;
        }
}

CMat WeilRep::rho_z() const {
    PrecisionGuard guard(digits_);
    size_t n = elements_.size();
    int bdiff = group_->lattice().b_minus - group_->lattice().b_plus;
    Cplx phase = unit_exp(Rat(bdiff, 4));
    CMat z(n, std::vector<Cplx>(n, Cplx()));
    for (size_t col = 0; col < n; ++col) {
        size_t row = index_.at(group_->neg(elements_[col]).coords);
        z[row][col] = phase;
    }
    return z;
}

size_t WeilRep::index_of(const DiscElement& g) const {
    return index_.at(g.coords);
}

CMat mat_multiply(const CMat& a, const CMat& b) {
    size_t n = a.size();
    CMat c(n, std::vector<Cplx>(n, Cplx()));
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < n; ++k) {
            const Cplx& aik = a[i][k];
            if (aik.re == 0 && aik.im == 0) continue;
            for (size_t j = 0; j < n; ++j) c[i][j] += aik * b[k][j];
        }
    return c;
}

CMat WeilRep::rho_of_word(const std::vector<WordToken>& word,
                          int* branch) const {
    PrecisionGuard guard(digits_);
    size_t n = elements_.size();
    CMat acc(n, std::vector<Cplx>(n, Cplx()));
    for (size_t i = 0; i < n; ++i) acc[i][i] = Cplx(Real(1));
    MetaplecticElement mp = mp_identity();
    for (const auto& tok : word) {
        if (tok.is_s) {
            acc = mat_multiply(acc, rho_s_);
            mp = mp_multiply(mp, mp_generator_s(), digits_);
        } else {
            // rho(T)^k is diagonal with entries e(k q(gamma))
            for (size_t col = 0; col < n; ++col) {
                Cplx d = unit_exp(Rat(tok.t_power) * elements_[col].q_val);
                for (size_t row = 0; row < n; ++row)
                    acc[row][col] = acc[row][col] * d;
            }
            mp = mp_multiply(mp, mp_generator_t(tok.t_power), digits_);
        }
    }
    if (branch) *branch = mp.branch;
    return acc;
}

const CMat& WeilRep::rho_matrix(const Mat2& m) const {
    std::array<Int, 4> key{m[0][0], m[0][1], m[1][0], m[1][1]};
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    auto word = decompose_word(m);
    int branch = +1;
    CMat rho = rho_of_word(word, &branch);
    if (branch < 0 && scalar_sign_ < 0) {
        // (M, principal) = (M, -principal) (I, -1); rho(Z^2) is the scalar
        for (auto& row : rho)
            for (auto& v : row) v = Cplx(Real(0)) - v;
    }
    return cache_.emplace(key, std::move(rho)).first->second;
}

Cplx WeilRep::kloosterman_bruteforce(const DiscElement& beta, const Rat& m,
                                     const DiscElement& gamma, const Rat& n,
                                     const Int& c) const {
    if (c == 0) throw validation_error("kloosterman sum needs c != 0");
    PrecisionGuard guard(digits_);
    Int ac = abs(c);
    size_t bi = index_of(beta), gi = index_of(gamma);
    Cplx acc;
    for (Int d = 1; d <= ac; ++d) {
        if (gcd(d, ac) != 1) continue;
        Int a;
        if (mpz_invert(a.backend().data(), d.backend().data(),
                       ac.backend().data()) == 0)
            continue;
        if (a == 0) a = ac;  // least positive inverse (c = +-1)
        Int b = (a * d - 1) / c;
        Mat2 mat{{{a, b}, {c, d}}};
        const CMat& rho = rho_matrix(mat);
        Cplx coeff = rho[bi][gi];
        Rat phase = (m * Rat(a) + n * Rat(d)) / Rat(c);
        acc += coeff * unit_exp(phase);
    }
    int sgn = c > 0 ? 1 : -1;
    Cplx pref = unit_exp(-Rat(sgn) * kappa_ / 4);  // e^{-pi i sgn(c) kappa/2}
    return pref * acc * (1 / to_real(ac));
}

Real WeilRep::kloosterman_closed(const DiscElement& gamma, const Rat& n,
                                 const Int& c, const EnumBudget& budget) const {
    if (c == 0) throw validation_error("kloosterman sum needs c != 0");
    PrecisionGuard guard(digits_);
    const EvenLattice& L = group_->lattice();
    int r = L.rank;
    Int ac = abs(c);
    RepIndex idx = make_rep_index(*group_, gamma, n);

    Rat par4 = (2 * kappa_ - L.b_minus + L.b_plus) / 4;
    int sign = numerator(par4) % 2 == 0 ? 1 : -1;

    Rat sum(0);
    for (const Int& a : divisors(ac)) {
        int mu = moebius(ac / a);
        if (mu == 0) continue;
        Int na = rep_count(*group_, idx, a, budget);
        sum += Rat(mu) * Rat(na, pow_int(a, r - 1));
    }
    // |c|^{-1 + r/2}
    Real cpow = exp((Real(r) / 2 - 1) * log(to_real(ac)));
    return Real(sign) * cpow * to_real(sum) / sqrt(to_real(group_->order()));
}

WeilRep::TruncatedCoeff WeilRep::coeff_via_kloosterman(
    const DiscElement& gamma, const Rat& n, const Real& s,
    const Int& c_max) const {
    PrecisionGuard guard(digits_);
    if (n <= 0) throw validation_error("coefficient series needs n > 0");
    Real sw = to_working(s);
    Real kap = to_real(kappa_);
    Real expo = 1 - kap - 2 * sw;  // |c|^{1 - kappa - 2s}
    if (expo >= -1)
        throw computation_error(
            "kappa + 2s <= 2: the coefficient series does not converge");

    DiscElement zero = group_->zero();
    Cplx csum;
    for (Int c = 1; c <= c_max; ++c) {
        Real w = exp(expo * log(to_real(c)));
        Cplx hp = kloosterman_bruteforce(zero, Rat(0), gamma, n, c);
        Cplx hm = kloosterman_bruteforce(zero, Rat(0), gamma, n, -c);
        csum += (hp + hm) * w;
    }
    // prefactor 2^kappa pi^{s+kappa} n^{s+kappa-1} / Gamma(s+kappa)
    Real pi = pi_value();
    Real pref = exp(kap * log(Real(2)) + (sw + kap) * log(pi) +
                    (sw + kap - 1) * log(to_real(n)));
    pref /= gamma_real(sw + kap, digits_);

    // |H_c^*| <= phi(|c|)/|c| <= 1 by unitarity, so the dropped tail is at
    // most sum_{|c|>c_max} |c|^{expo} <= 2 (c_max^{expo+1}/(-expo-1)
    // + c_max^{expo})
    Real cm = to_real(c_max);
    Real tail_sum =
        2 * (exp((expo + 1) * log(cm)) / (-expo - 1) + exp(expo * log(cm)));
    Real tail = pref * tail_sum;
    return {csum * pref, tail};
}

}  // namespace heegner
