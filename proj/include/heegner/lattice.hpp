#pragma once

#include "heegner/numeric.hpp"

#include <string>
#include <vector>

namespace heegner {

using IntMat = std::vector<std::vector<Int>>;
using RatVec = std::vector<Rat>;

// Even lattice given by the Gram matrix of its bilinear form. Entries are
// (e_i, e_j); the quadratic form is q(x) = (x,x)/2, so diagonal entries are
// even.
struct EvenLattice {
    IntMat gram;
    int rank = 0;
    int b_plus = 0;
    int b_minus = 0;
    Int det;
    std::string name;

    // q(x) for a rational vector in lattice-basis coordinates
    Rat quad(const RatVec& x) const;
    // (x, y)
    Rat bilinear(const RatVec& x, const RatVec& y) const;
};

// Element of L'/L in canonical coordinates (one residue per invariant
// factor > 1 of the discriminant group).
struct DiscElement {
    std::vector<Int> coords;
    Rat q_val;   // q(gamma) mod 1, in [0,1)
    Int level;   // least b > 0 with b*gamma in L
};

// The finite quadratic module (L'/L, q) with a fixed choice of
// representatives in L'.
class DiscGroup {
  public:
    explicit DiscGroup(EvenLattice L);

    const EvenLattice& lattice() const { return lattice_; }
    const std::vector<Int>& elementary_divisors() const { return divisors_; }
    const Int& order() const { return order_; }
    size_t ngens() const { return divisors_.size(); }

    DiscElement element(std::vector<Int> coords) const;
    DiscElement zero() const;
    DiscElement neg(const DiscElement& g) const;
    DiscElement add(const DiscElement& g, const DiscElement& h) const;

    Rat q_value(const DiscElement& g) const;
    Rat bilinear_value(const DiscElement& g, const DiscElement& h) const;
    Int level(const DiscElement& g) const;

    // Fixed representative in L', lattice-basis coordinates.
    RatVec representative(const DiscElement& g) const;
    // Canonical coordinates of a dual vector (throws if not in L').
    DiscElement element_from_dual(const RatVec& gamma) const;

    // All |L'/L| elements; guarded against huge groups.
    std::vector<DiscElement> all_elements(size_t limit = 100000) const;

  private:
    Rat q_value_raw(const DiscElement& g) const;
    Int level_raw(const DiscElement& g) const;

    EvenLattice lattice_;
    std::vector<Int> divisors_;            // d_1 | d_2 | ... , each > 1
    std::vector<RatVec> gens_;             // representatives of generators
    std::vector<std::vector<Int>> coord_map_;  // rows of U for divisor slots
    Int order_;
};

// Validates and completes a lattice from its Gram matrix.
EvenLattice parse_lattice(const IntMat& gram, const std::string& name = "");
EvenLattice parse_lattice_json(const std::string& text);
EvenLattice builtin_lattice(const std::string& name, const Int& param = 0);
// L + hyperbolic plane U
EvenLattice hyperbolic_sum(const EvenLattice& L);

// Smith normal form: U * A * V = D diagonal with d_1 | d_2 | ...; U, V
// unimodular. Returns the diagonal; U and V are written through.
std::vector<Int> smith_normal_form(const IntMat& A, IntMat& U, IntMat& V);

Int det_int(const IntMat& A);

}  // namespace heegner
