#pragma once

#include "heegner/dirichlet.hpp"
#include "heegner/lattice.hpp"
#include "heegner/repnum.hpp"
#include "heegner/symbolic.hpp"

#include <vector>

namespace heegner {

// Heegner divisor index (beta, m) with m < 0, m in Z + q(beta).
struct HeegnerIndex {
    DiscElement beta;
    Rat m;
};

HeegnerIndex make_heegner_index(const DiscGroup& G, const DiscElement& beta,
                                const Rat& m);

struct EisensteinOptions {
    bool formal_sl2 = false;  // allow signature (2,1)
    EnumBudget budget;
};

// One factor of the generalized divisor sum, kept for evaluation at general s.
struct LocalFactor {
    LocalPolynomial poly;
    int chi_p = 0;  // chi_{D0}(p)
};

struct SigmaValue {
    Rat value_at_kappa;
    // sigma'/sigma(kappa) = sum alpha_p log p over primes with alpha_p != 0
    std::vector<std::pair<Int, Rat>> logderiv_at_kappa;
    std::vector<LocalFactor> local_factors;
};

// D, D0, f, delta for the index (gamma, n), with the sign table check.
Discriminant disc_data(const DiscGroup& G, const DiscElement& gamma,
                       const Rat& n);

SigmaValue sigma(const DiscGroup& G, const DiscElement& gamma, const Rat& n,
                 const EisensteinOptions& opts = {},
                 const std::vector<Int>& extra_primes = {});

// Numeric value of the finite Euler product at real argument s.
Real sigma_numeric(const DiscGroup& G, const SigmaValue& sv, const Real& s,
                   unsigned digits);

// deg(H(beta, m)) / B as an exact rational (closed form, both parities).
Rat degree_ratio(const DiscGroup& G, const HeegnerIndex& h,
                 const EisensteinOptions& opts = {});

// C(gamma, n, 0); exact; zero for n < 0.
Rat coeff_C0(const DiscGroup& G, const DiscElement& gamma, const Rat& n,
             const EisensteinOptions& opts = {});

// Full coefficient formula at real s near 0.
Real coeff_C_numeric(const DiscGroup& G, const DiscElement& gamma,
                     const Rat& n, const Real& s, unsigned digits,
                     const EisensteinOptions& opts = {});

// (2 / deg H(beta,m)) * integral of the Green function, as a closed form.
SymbolicValue green_integral(const DiscGroup& G, const HeegnerIndex& h,
                             const EisensteinOptions& opts = {});

// C'(beta,-m,0)/C(beta,-m,0) = green_integral - log(4 pi) + Gamma'(1).
SymbolicValue coeff_logderiv(const DiscGroup& G, const HeegnerIndex& h,
                             const EisensteinOptions& opts = {});

struct DivisorTerm {
    HeegnerIndex index;
    Int mult;
};

// Symmetrized divisor with a(beta,m) = a(-beta,m); mirrors are added when
// missing, conflicting explicit multiplicities are rejected.
std::vector<DivisorTerm> symmetrize_divisor(const DiscGroup& G,
                                            std::vector<DivisorTerm> divisor,
                                            bool* added_mirror = nullptr);

Rat weight_of_divisor(const DiscGroup& G, std::vector<DivisorTerm> divisor,
                      const EisensteinOptions& opts = {});

// (1/B) * integral of log ||F||^2 for a Borcherds product with the given
// divisor.
SymbolicValue borcherds_integral(const DiscGroup& G,
                                 std::vector<DivisorTerm> divisor,
                                 const EisensteinOptions& opts = {});

struct QexpEntry {
    DiscElement gamma;
    Rat n;
    Rat coeff;
};

// Fourier coefficients of E_0(tau, 0) up to max_index; constant term is
// 2 e_0. kappa = 2 requires the acknowledgment flag.
std::vector<QexpEntry> qexp_E0(const DiscGroup& G, const Rat& max_index,
                               bool ack_kappa2 = false,
                               const EisensteinOptions& opts = {});

// kappa = 1 + p/2 = r/2 for signature (2,p); validates the signature.
Rat kappa_of(const EvenLattice& L, bool formal_sl2);

}  // namespace heegner
