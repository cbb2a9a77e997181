#pragma once

#include "heegner/numeric.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace heegner {

// Finite sum of exactly representable transcendental terms. Normalized form:
// at most one rational term, log arguments factored into primes, constants
// restricted to euler_gamma and log_pi (log 2 folds into log_int).
class SymbolicValue {
  public:
    enum class Kind { rational, log_int, zeta_logderiv, l_logderiv, constant };

    struct Term {
        Kind kind;
        Rat coeff;
        Int m;             // log_int: positive integer argument
        Rat arg;           // zeta_logderiv / l_logderiv argument
        Int D0;            // l_logderiv character
        std::string name;  // constant: euler_gamma | log_pi | log_2
    };

    SymbolicValue() = default;

    static SymbolicValue rational(const Rat& q);
    static SymbolicValue log_int(const Rat& coeff, const Int& m);
    static SymbolicValue log_rational(const Rat& coeff, const Rat& x);
    static SymbolicValue zeta_logderiv_term(const Rat& coeff, const Rat& arg);
    static SymbolicValue l_logderiv_term(const Rat& coeff, const Int& D0,
                                         const Rat& arg);
    static SymbolicValue constant(const Rat& coeff, const std::string& name);

    SymbolicValue& operator+=(const SymbolicValue& o);
    SymbolicValue operator+(const SymbolicValue& o) const;
    SymbolicValue operator*(const Rat& s) const;

    const std::vector<Term>& terms() const { return terms_; }
    bool operator==(const SymbolicValue& o) const;

    // Exact rational content if the value has no transcendental part.
    bool is_rational() const;
    Rat rational_part() const;

    Real evaluate(unsigned digits) const;
    nlohmann::json to_json() const;
    std::string to_string() const;

  private:
    void normalize();
    std::vector<Term> terms_;
};

}  // namespace heegner
