#pragma once

#include "heegner/lattice.hpp"
#include "heegner/numeric.hpp"

#include <cstdint>

namespace heegner {

// Enumeration cap for the counting kernels, measured in evaluated points
// (including convolution work). Exceeding it raises budget_error.
struct EnumBudget {
    std::uint64_t max_points = 100000000;  // 1e8
};

// Index (gamma, n) with n in Z - q(gamma).
struct RepIndex {
    DiscElement gamma;
    Rat n;
};

RepIndex make_rep_index(const DiscGroup& G, const DiscElement& gamma,
                        const Rat& n);

// Integer polynomial built from the counts N(p^0), ..., N(p^{w_p}).
struct LocalPolynomial {
    Int p;
    int wp = 0;
    std::vector<Int> coeffs;  // degree <= wp

    Rat eval(const Rat& x) const;
    Rat eval_deriv(const Rat& x) const;
    Real eval(const Real& x) const;
    Real eval_deriv(const Real& x) const;
    bool operator==(const LocalPolynomial& o) const {
        return p == o.p && coeffs == o.coeffs;
    }
};

// w_p = 1 + 2 v_p(2 n d_gamma); n must be nonzero.
int w_p(const DiscGroup& G, const RepIndex& idx, const Int& p);

// N_{gamma,n}(p^nu) = #{x in L/p^nu L : q(x - gamma) + n = 0 mod p^nu}.
Int rep_count_pp(const DiscGroup& G, const RepIndex& idx, const Int& p,
                 int nu, const EnumBudget& budget = {});

// Same count with an explicit representative of gamma in L'.
Int rep_count_pp_at(const EvenLattice& L, const RatVec& gamma_rep,
                    const Rat& n, const Int& p, int nu,
                    const EnumBudget& budget = {});

// Direct single-modulus enumeration over (Z/a)^r; oracle and small-case path.
Int rep_count_naive(const EvenLattice& L, const RatVec& gamma_rep,
                    const Rat& n, const Int& a,
                    const EnumBudget& budget = {});

// N_{gamma,n}(a) assembled multiplicatively over the prime powers of a.
Int rep_count(const DiscGroup& G, const RepIndex& idx, const Int& a,
              const EnumBudget& budget = {});

LocalPolynomial local_poly(const DiscGroup& G, const RepIndex& idx,
                           const Int& p, const EnumBudget& budget = {});
// Same polynomial computed with w_p + extra counts; used by the padding
// invariance checks.
LocalPolynomial local_poly_padded(const DiscGroup& G, const RepIndex& idx,
                                  const Int& p, int extra,
                                  const EnumBudget& budget = {});

}  // namespace heegner
