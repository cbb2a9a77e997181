#include "heegner/symbolic.hpp"

#include "heegner/dirichlet.hpp"
#include "heegner/errors.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace heegner {

namespace {

std::string rat_str(const Rat& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

int kind_rank(SymbolicValue::Kind k) { return static_cast<int>(k); }

auto term_key(const SymbolicValue::Term& t) {
    return std::make_tuple(kind_rank(t.kind), t.name, t.m, t.D0, t.arg);
}

}  // namespace

SymbolicValue SymbolicValue::rational(const Rat& q) {
    SymbolicValue v;
    v.terms_.push_back({Kind::rational, q, 0, Rat(0), 0, ""});
    v.normalize();
    return v;
}

SymbolicValue SymbolicValue::log_int(const Rat& coeff, const Int& m) {
    if (m <= 0) throw validation_error("log_int argument must be positive");
    SymbolicValue v;
    v.terms_.push_back({Kind::log_int, coeff, m, Rat(0), 0, ""});
    v.normalize();
    return v;
}

SymbolicValue SymbolicValue::log_rational(const Rat& coeff, const Rat& x) {
    if (x <= 0) throw validation_error("log argument must be positive");
    SymbolicValue v;
    v.terms_.push_back({Kind::log_int, coeff, numerator(x), Rat(0), 0, ""});
    v.terms_.push_back({Kind::log_int, -coeff, denominator(x), Rat(0), 0, ""});
    v.normalize();
    return v;
}

SymbolicValue SymbolicValue::zeta_logderiv_term(const Rat& coeff,
                                                const Rat& arg) {
    SymbolicValue v;
    v.terms_.push_back({Kind::zeta_logderiv, coeff, 0, arg, 0, ""});
    v.normalize();
    return v;
}

SymbolicValue SymbolicValue::l_logderiv_term(const Rat& coeff, const Int& D0,
                                             const Rat& arg) {
    SymbolicValue v;
    v.terms_.push_back({Kind::l_logderiv, coeff, 0, arg, D0, ""});
    v.normalize();
    return v;
}

SymbolicValue SymbolicValue::constant(const Rat& coeff,
                                      const std::string& name) {
    if (name != "euler_gamma" && name != "log_pi" && name != "log_2")
        throw validation_error("unknown symbolic constant: " + name);
    SymbolicValue v;
    if (name == "log_2") {
        v.terms_.push_back({Kind::log_int, coeff, 2, Rat(0), 0, ""});
    } else {
        v.terms_.push_back({Kind::constant, coeff, 0, Rat(0), 0, name});
    }
    v.normalize();
    return v;
}

SymbolicValue& SymbolicValue::operator+=(const SymbolicValue& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    normalize();
    return *this;
}

SymbolicValue SymbolicValue::operator+(const SymbolicValue& o) const {
    SymbolicValue v = *this;
    v += o;
    return v;
}

SymbolicValue SymbolicValue::operator*(const Rat& s) const {
    SymbolicValue v = *this;
    for (auto& t : v.terms_) t.coeff *= s;
    v.normalize();
    return v;
}

void SymbolicValue::normalize() {
    std::vector<Term> flat;
    for (const auto& t : terms_) {
        if (t.coeff == 0) continue;
        if (t.kind == Kind::log_int) {
            if (t.m == 1) continue;
            for (const auto& [p, e] : factorize(t.m))
                flat.push_back({Kind::log_int, t.coeff * e, p, Rat(0), 0, ""});
        } else {
            flat.push_back(t);
        }
    }
    std::sort(flat.begin(), flat.end(), [](const Term& a, const Term& b) {
        return term_key(a) < term_key(b);
    });
    std::vector<Term> merged;
    for (const auto& t : flat) {
        if (!merged.empty() && term_key(merged.back()) == term_key(t)) {
            merged.back().coeff += t.coeff;
        } else {
            merged.push_back(t);
        }
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const Term& t) { return t.coeff == 0; }),
                 merged.end());
    terms_ = std::move(merged);
}

bool SymbolicValue::operator==(const SymbolicValue& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (size_t i = 0; i < terms_.size(); ++i) {
        const Term &a = terms_[i], &b = o.terms_[i];
        if (term_key(a) != term_key(b) || a.coeff != b.coeff) return false;
    }
    return true;
}

bool SymbolicValue::is_rational() const {
    return terms_.empty() ||
           (terms_.size() == 1 && terms_[0].kind == Kind::rational);
}

Rat SymbolicValue::rational_part() const {
    for (const auto& t : terms_)
        if (t.kind == Kind::rational) return t.coeff;
    return Rat(0);
}

Real SymbolicValue::evaluate(unsigned digits) const {
    PrecisionGuard guard(digits);
    Real acc(0);
    for (const auto& t : terms_) {
        Real c = to_real(t.coeff);
        switch (t.kind) {
            case Kind::rational:
                acc += c;
                break;
            case Kind::log_int:
                acc += c * log(to_real(t.m));
                break;
            case Kind::zeta_logderiv:
                acc += c * zeta_logderiv(to_real(t.arg), digits);
                break;
            case Kind::l_logderiv:
                acc += c * L_logderiv(t.D0, to_real(t.arg), digits);
                break;
            case Kind::constant:
                if (t.name == "euler_gamma")
                    acc += c * euler_gamma_value();
                else if (t.name == "log_pi")
                    acc += c * log(pi_value());
                break;
        }
    }
    return acc;
}

nlohmann::json SymbolicValue::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : terms_) {
        nlohmann::json o;
        o["coeff"] = rat_str(t.coeff);
        switch (t.kind) {
            case Kind::rational:
                o["kind"] = "rational";
                break;
            case Kind::log_int:
                o["kind"] = "log_int";
                o["m"] = t.m.convert_to<long long>();
                break;
            case Kind::zeta_logderiv:
                o["kind"] = "zeta_logderiv";
                o["arg"] = rat_str(t.arg);
                break;
            case Kind::l_logderiv:
                o["kind"] = "l_logderiv";
                o["arg"] = rat_str(t.arg);
                o["D0"] = t.D0.convert_to<long long>();
                break;
            case Kind::constant:
                o["kind"] = "constant";
                o["name"] = t.name;
                break;
        }
        arr.push_back(o);
    }
    return arr;
}

std::string SymbolicValue::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        if (!first) os << " + ";
        first = false;
        os << rat_str(t.coeff);
        switch (t.kind) {
            case Kind::rational:
                break;
            case Kind::log_int:
                os << "*log(" << t.m << ")";
                break;
            case Kind::zeta_logderiv:
                os << "*zeta'/zeta(" << rat_str(t.arg) << ")";
                break;
            case Kind::l_logderiv:
                os << "*L'/L(chi_" << t.D0 << "," << rat_str(t.arg) << ")";
                break;
            case Kind::constant:
                os << "*" << t.name;
                break;
        }
    }
    return os.str();
}

}  // namespace heegner
