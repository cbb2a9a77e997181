#pragma once

#include "heegner/lattice.hpp"
#include "heegner/numeric.hpp"
#include "heegner/repnum.hpp"

#include <array>
#include <map>
#include <vector>

namespace heegner {

using CMat = std::vector<std::vector<Cplx>>;
using Mat2 = std::array<std::array<Int, 2>, 2>;

// Element (M, phi) of the metaplectic double cover; phi is determined by its
// sign relative to the principal square root of c tau + d, tracked by the
// value at tau = 2i.
struct MetaplecticElement {
    Mat2 m;
    int branch = +1;
};

// Word in the generators: S, or T^k collapsed into one token.
struct WordToken {
    bool is_s = false;
    Int t_power = 0;
};

std::vector<WordToken> decompose_word(const Mat2& m);
Mat2 word_matrix(const std::vector<WordToken>& word);

MetaplecticElement mp_identity();
MetaplecticElement mp_generator_t(const Int& k = 1);
MetaplecticElement mp_generator_s();
MetaplecticElement mp_multiply(const MetaplecticElement& a,
                               const MetaplecticElement& b, unsigned digits);

// Dense Weil representation matrices at fixed precision; the weight kappa
// must satisfy 2 kappa - b^- + b^+ = 0 mod 4.
class WeilRep {
  public:
    WeilRep(const DiscGroup& G, const Rat& kappa, unsigned digits);

    const DiscGroup& group() const { return *group_; }
    const Rat& kappa() const { return kappa_; }
    unsigned digits() const { return digits_; }
    size_t dim() const { return elements_.size(); }

    const CMat& rho_t() const { return rho_t_; }
    const CMat& rho_s() const { return rho_s_; }
    CMat rho_z() const;

    // rho of (M, principal branch), via word decomposition and the numeric
    // branch fix.
    const CMat& rho_matrix(const Mat2& m) const;

    size_t index_of(const DiscElement& g) const;
    const DiscElement& element_at(size_t i) const { return elements_[i]; }

    // H_c^*(beta, m, gamma, n) summed over primitive residues d mod c.
    Cplx kloosterman_bruteforce(const DiscElement& beta, const Rat& m,
                                const DiscElement& gamma, const Rat& n,
                                const Int& c) const;

    // Divisor-sum identity for H_c^*(0,0,gamma,n); real-valued.
    Real kloosterman_closed(const DiscElement& gamma, const Rat& n,
                            const Int& c, const EnumBudget& budget = {}) const;

    struct TruncatedCoeff {
        Cplx value;
        Real tail_bound;
    };
    // 2^kappa pi^{s+kappa} n^{s+kappa-1} / Gamma(s+kappa) times the c-sum
    // truncated at |c| <= c_max.
    TruncatedCoeff coeff_via_kloosterman(const DiscElement& gamma,
                                         const Rat& n, const Real& s,
                                         const Int& c_max) const;

  private:
    CMat rho_of_word(const std::vector<WordToken>& word, int* branch) const;

    const DiscGroup* group_;
    Rat kappa_;
    unsigned digits_;
    std::vector<DiscElement> elements_;
    std::map<std::vector<Int>, size_t> index_;
    CMat rho_t_;
    CMat rho_s_;
    int scalar_sign_;  // rho(Z^2) = (-1)^{b^- - b^+}
    mutable std::map<std::array<Int, 4>, CMat> cache_;
};

CMat mat_multiply(const CMat& a, const CMat& b);

}  // namespace heegner
