#include "heegner/cli.hpp"

#include "heegner/dirichlet.hpp"
#include "heegner/eisenstein.hpp"
#include "heegner/errors.hpp"
#include "heegner/lattice.hpp"
#include "heegner/repnum.hpp"
#include "heegner/weilrep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

namespace heegner {

namespace {

Rat parse_rat(const std::string& s) {
    try {
        Rat q(s);
        if (denominator(q) == 0) throw validation_error("zero denominator");
        return q;
    } catch (const std::exception&) {
        throw validation_error("malformed rational: '" + s + "'");
    }
}

std::vector<Int> parse_coords(const std::string& s) {
    std::vector<Int> out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.emplace_back(item);
        } catch (const std::exception&) {
            throw validation_error("malformed coordinate: '" + item + "'");
        }
    }
    return out;
}

struct LatticeSpec {
    std::string file;
    std::string builtin;
};

EvenLattice load_lattice(const LatticeSpec& spec) {
    if (!spec.file.empty() && !spec.builtin.empty())
        throw validation_error("--lattice and --builtin are exclusive");
    if (!spec.file.empty()) {
        std::ifstream in(spec.file);
        if (!in) throw validation_error("cannot open " + spec.file);
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_lattice_json(ss.str());
    }
    if (spec.builtin.empty())
        throw validation_error("one of --lattice or --builtin is required");
    std::string name = spec.builtin;
    std::string param;
    auto colon = name.find(':');
    if (colon != std::string::npos) {
        param = name.substr(colon + 1);
        name = name.substr(0, colon);
    }
    if (name == "hyperbolic_sum") {
        if (param.empty())
            throw validation_error("hyperbolic_sum needs a base lattice, "
                                   "e.g. --builtin hyperbolic_sum:sl2");
        return hyperbolic_sum(load_lattice({"", param}));
    }
    Int p = 0;
    if (!param.empty()) {
        try {
            p = Int(param);
        } catch (const std::exception&) {
            throw validation_error("malformed builtin parameter: " + param);
        }
    }
    return builtin_lattice(name, p);
}

DiscElement parse_gamma(const DiscGroup& G, const std::string& text) {
    if (text.empty()) return G.zero();
    auto coords = parse_coords(text);
    if (coords.size() != G.ngens())
        throw validation_error(
            "--gamma needs " + std::to_string(G.ngens()) +
            " coordinate(s) for this lattice (got " +
            std::to_string(coords.size()) + ")");
    return G.element(coords);
}

struct TermSpec {
    std::string gamma;
    Rat m;
    Int mult;
};

TermSpec parse_term(const std::string& text) {
    TermSpec t;
    t.mult = 1;
    bool have_m = false;
    std::stringstream ss(text);
    std::string kv;
    while (std::getline(ss, kv, ';')) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw validation_error("malformed --term entry: '" + kv + "'");
        std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        if (key == "gamma") {
            t.gamma = val;
        } else if (key == "m") {
            t.m = parse_rat(val);
            have_m = true;
        } else if (key == "a") {
            try {
                t.mult = Int(val);
            } catch (const std::exception&) {
                throw validation_error("malformed multiplicity: " + val);
            }
        } else {
            throw validation_error("unknown --term key: " + key);
        }
    }
    if (!have_m) throw validation_error("--term needs m=...");
    return t;
}

std::string rat_str(const Rat& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

std::string real_str(const Real& x, unsigned digits) {
    std::ostringstream os;
    os << std::setprecision(static_cast<int>(digits)) << x;
    return os.str();
}

nlohmann::json result_json(const std::optional<Rat>& exact,
                           const SymbolicValue& sym, const Real& numeric,
                           unsigned digits, bool formal) {
    nlohmann::json j;
    j["exact"] = exact ? nlohmann::json(rat_str(*exact)) : nlohmann::json();
    j["symbolic"] = sym.to_json();
    j["numeric"] = real_str(numeric, digits);
    j["precision_digits"] = digits;
    j["formal_mode"] = formal;
    return j;
}

void emit(std::ostream& out, const nlohmann::json& j, bool as_json,
          const std::string& human) {
    if (as_json)
        out << j.dump(2) << "\n";
    else
        out << human;
}

// Exact volumes of the named quotients, used to print absolute degrees.
std::optional<Rat> builtin_volume(const EvenLattice& L) {
    if (L.name == "sl2") return Rat(1, 12);
    if (L.name == "siegel") return -zeta_exact(-1) * zeta_exact(-3);
    if (L.name.rfind("hilbert(", 0) == 0) {
        Int D(L.name.substr(8, L.name.size() - 9));
        return zeta_exact(-1) * L_exact(D, -1);
    }
    return std::nullopt;
}

int verify_suite(const std::string& which, unsigned digits, std::ostream& out,
                 const EisensteinOptions& opts);

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"Eisenstein coefficients, Heegner divisor degrees and "
                 "Green function integrals for even lattices of signature "
                 "(2,p)"};
    app.require_subcommand(1);

    LatticeSpec spec;
    unsigned digits = 50;
    bool as_json = false;
    bool formal = false;
    std::uint64_t budget = EnumBudget{}.max_points;
    std::string gamma_text, n_text, m_text;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--lattice", spec.file, "lattice JSON file");
        cmd->add_option("--builtin", spec.builtin,
                        "builtin lattice NAME[:PARAM] (sl2, siegel, "
                        "hilbert:D, hyperbolic_sum:NAME)");
        cmd->add_option("--precision", digits, "working decimal digits")
            ->default_val(50);
        cmd->add_flag("--json", as_json, "emit JSON");
        cmd->add_flag("--formal", formal, "allow the signature (2,1) lattice");
        cmd->add_option("--budget", budget, "enumeration point budget");
    };

    auto* info = app.add_subcommand("info", "lattice and L'/L summary");
    add_common(info);

    auto* repnum =
        app.add_subcommand("repnum", "representation numbers N_{gamma,n}(a)");
    add_common(repnum);
    repnum->add_option("--gamma", gamma_text, "canonical coordinates c1,c2,..");
    repnum->add_option("--n", n_text, "index n as p/q")->required();
    std::string a_text = "1";
    repnum->add_option("--a", a_text, "modulus a (positive integer)");
    std::string p_text;
    int nu = -1;
    repnum->add_option("--p", p_text, "prime for a single local count");
    repnum->add_option("--nu", nu, "exponent for the local count");

    auto* sigma_cmd =
        app.add_subcommand("sigma", "generalized divisor sum at kappa");
    add_common(sigma_cmd);
    sigma_cmd->add_option("--gamma", gamma_text, "canonical coordinates");
    sigma_cmd->add_option("--n", n_text, "index n as p/q")->required();

    auto* coeff = app.add_subcommand("coeff", "Eisenstein coefficient");
    add_common(coeff);
    coeff->add_option("--gamma", gamma_text, "canonical coordinates");
    coeff->add_option("--n", n_text, "index n as p/q")->required();
    std::string s_text;
    coeff->add_option("--s", s_text, "evaluate numerically at real s");

    auto* degree = app.add_subcommand("degree", "Heegner divisor degree");
    add_common(degree);
    degree->add_option("--gamma", gamma_text, "canonical coordinates");
    degree->add_option("--m", m_text, "negative index m as -p/q")->required();

    auto* qexp = app.add_subcommand("qexp", "q-expansion of E_0(tau,0)");
    add_common(qexp);
    std::string max_text = "4";
    qexp->add_option("--max", max_text, "largest index n");
    bool ack2 = false;
    qexp->add_flag("--ack-kappa2", ack2,
                   "acknowledge the kappa = 2 constant-term caveat");

    auto* weight = app.add_subcommand("weight", "Borcherds product weight");
    add_common(weight);
    std::vector<std::string> term_texts;
    weight->add_option("--term", term_texts,
                       "divisor term gamma=..;m=..;a=.. (repeatable)");

    auto* integral =
        app.add_subcommand("integral", "Green function / Borcherds integral");
    add_common(integral);
    integral->add_option("--gamma", gamma_text, "canonical coordinates");
    integral->add_option("--m", m_text, "negative index m");
    integral->add_option("--term", term_texts,
                         "divisor term for the Borcherds integral");

    auto* verify = app.add_subcommand("verify", "built-in identity checks");
    add_common(verify);

    try {
        std::vector<std::string> argv = args;
        std::reverse(argv.begin(), argv.end());
        app.parse(argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    if (const char* env = std::getenv("HEEGNER_BUDGET")) {
        try {
            budget = std::stoull(env);
        } catch (const std::exception&) {
            err << "error: malformed HEEGNER_BUDGET\n";
            return 1;
        }
    }

    try {
        EisensteinOptions opts;
        opts.formal_sl2 = formal;
        opts.budget.max_points = budget;

        if (app.got_subcommand(verify)) {
            std::string which = spec.builtin.empty() ? "all" : spec.builtin;
            return verify_suite(which, digits, out, opts);
        }

        EvenLattice L = load_lattice(spec);
        DiscGroup G(L);

        if (app.got_subcommand(info)) {
            nlohmann::json j;
            j["name"] = L.name;
            j["rank"] = L.rank;
            j["signature"] = {L.b_plus, L.b_minus};
            j["det"] = L.det.convert_to<long long>();
            j["group_order"] = G.order().convert_to<long long>();
            std::ostringstream hs;
            hs << "lattice " << (L.name.empty() ? "(unnamed)" : L.name)
               << ": rank " << L.rank << ", signature (" << L.b_plus << ","
               << L.b_minus << "), det " << L.det << ", |L'/L| = "
               << G.order() << "\n";
            if (G.order() <= 500) {
                nlohmann::json elems = nlohmann::json::array();
                hs << "  coords      q(gamma)    level\n";
                for (const auto& g : G.all_elements()) {
                    std::string coords;
                    for (size_t i = 0; i < g.coords.size(); ++i)
                        coords += (i ? "," : "") + g.coords[i].str();
                    if (coords.empty()) coords = "-";
                    nlohmann::json e;
                    e["coords"] = coords;
                    e["q"] = rat_str(g.q_val);
                    e["level"] = g.level.convert_to<long long>();
                    elems.push_back(e);
                    hs << "  " << coords << "      " << rat_str(g.q_val)
                       << "      " << g.level << "\n";
                }
                j["elements"] = elems;
            }
            emit(out, j, as_json, hs.str());
            return 0;
        }

        if (app.got_subcommand(repnum)) {
            DiscElement g = parse_gamma(G, gamma_text);
            RepIndex idx = make_rep_index(G, g, parse_rat(n_text));
            Int value;
            if (!p_text.empty()) {
                if (nu < 0)
                    throw validation_error("--p needs --nu");
                value = rep_count_pp(G, idx, Int(p_text), nu, opts.budget);
            } else {
                value = rep_count(G, idx, Int(a_text), opts.budget);
            }
            nlohmann::json j;
            j["count"] = value.str();
            emit(out, j, as_json, "N = " + value.str() + "\n");
            return 0;
        }

        if (app.got_subcommand(sigma_cmd)) {
            DiscElement g = parse_gamma(G, gamma_text);
            SigmaValue sv = sigma(G, g, parse_rat(n_text), opts);
            SymbolicValue logd;
            for (const auto& [p, a] : sv.logderiv_at_kappa)
                logd += SymbolicValue::log_int(a, p);
            nlohmann::json j = result_json(sv.value_at_kappa, logd,
                                           logd.evaluate(digits), digits,
                                           formal);
            j["value_at_kappa"] = rat_str(sv.value_at_kappa);
            std::ostringstream hs;
            hs << "sigma(kappa) = " << rat_str(sv.value_at_kappa) << "\n"
               << "sigma'/sigma(kappa) = " << logd.to_string() << "\n";
            emit(out, j, as_json, hs.str());
            return 0;
        }

        if (app.got_subcommand(coeff)) {
            DiscElement g = parse_gamma(G, gamma_text);
            Rat n = parse_rat(n_text);
            if (!s_text.empty()) {
                PrecisionGuard guard(digits);
                Real s(s_text);
                Real c = coeff_C_numeric(G, g, n, s, digits, opts);
                nlohmann::json j = result_json(std::nullopt, SymbolicValue(),
                                               c, digits, formal);
                emit(out, j, as_json,
                     "C(gamma,n," + s_text + ") = " + real_str(c, digits) +
                         "\n");
                return 0;
            }
            Rat c0 = coeff_C0(G, g, n, opts);
            nlohmann::json j =
                result_json(c0, SymbolicValue::rational(c0),
                            to_real(c0), digits, formal);
            emit(out, j, as_json, "C(gamma,n,0) = " + rat_str(c0) + "\n");
            return 0;
        }

        if (app.got_subcommand(degree)) {
            DiscElement g = parse_gamma(G, gamma_text);
            HeegnerIndex h = make_heegner_index(G, g, parse_rat(m_text));
            Rat dr = degree_ratio(G, h, opts);
            nlohmann::json j = result_json(dr, SymbolicValue::rational(dr),
                                           to_real(dr), digits, formal);
            std::ostringstream hs;
            hs << "deg(H(beta,m))/B = " << rat_str(dr) << "\n";
            if (auto B = builtin_volume(L)) {
                Rat deg = dr * *B;
                j["degree_absolute"] = rat_str(deg);
                hs << "deg(H(beta,m)) = " << rat_str(deg)
                   << "   (B = " << rat_str(*B) << ")\n";
            }
            emit(out, j, as_json, hs.str());
            return 0;
        }

        if (app.got_subcommand(qexp)) {
            auto table = qexp_E0(G, parse_rat(max_text), ack2, opts);
            nlohmann::json rows = nlohmann::json::array();
            std::ostringstream hs;
            hs << "  gamma      n      coefficient\n";
            for (const auto& e : table) {
                std::string coords;
                for (size_t i = 0; i < e.gamma.coords.size(); ++i)
                    coords += (i ? "," : "") + e.gamma.coords[i].str();
                if (coords.empty()) coords = "-";
                nlohmann::json r;
                r["gamma"] = coords;
                r["n"] = rat_str(e.n);
                r["coeff"] = rat_str(e.coeff);
                rows.push_back(r);
                hs << "  " << coords << "      " << rat_str(e.n) << "      "
                   << rat_str(e.coeff) << "\n";
            }
            nlohmann::json j;
            j["qexp"] = rows;
            if (kappa_of(L, formal) == 2)
                j["kappa2_caveat"] = "constant term may carry an extra "
                                     "y^{-1} contribution";
            emit(out, j, as_json, hs.str());
            return 0;
        }

        auto build_divisor = [&]() {
            std::vector<DivisorTerm> div;
            for (const auto& t : term_texts) {
                TermSpec ts = parse_term(t);
                DiscElement b = parse_gamma(G, ts.gamma);
                div.push_back({make_heegner_index(G, b, ts.m), ts.mult});
            }
            return div;
        };

        if (app.got_subcommand(weight)) {
            Rat k = weight_of_divisor(G, build_divisor(), opts);
            nlohmann::json j = result_json(k, SymbolicValue::rational(k),
                                           to_real(k), digits, formal);
            emit(out, j, as_json, "weight = " + rat_str(k) + "\n");
            return 0;
        }

        if (app.got_subcommand(integral)) {
            SymbolicValue v;
            if (!term_texts.empty()) {
                v = borcherds_integral(G, build_divisor(), opts);
            } else {
                if (m_text.empty())
                    throw validation_error(
                        "integral needs --m (with --gamma) or --term");
                DiscElement g = parse_gamma(G, gamma_text);
                HeegnerIndex h = make_heegner_index(G, g, parse_rat(m_text));
                v = green_integral(G, h, opts);
            }
            Real num = v.evaluate(digits);
            nlohmann::json j =
                result_json(v.is_rational()
                                ? std::optional<Rat>(v.rational_part())
                                : std::nullopt,
                            v, num, digits, formal);
            std::ostringstream hs;
            hs << "value = " << v.to_string() << "\n"
               << "      = " << real_str(num, digits) << "\n";
            emit(out, j, as_json, hs.str());
            return 0;
        }

        err << "error: no subcommand\n";
        return 1;
    } catch (const validation_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const budget_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const computation_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

namespace {

struct VerifyReporter {
    std::ostream& out;
    int failures = 0;

    void check(const std::string& name, bool ok) {
        out << (ok ? "PASS" : "FAIL") << ": " << name << "\n";
        if (!ok) ++failures;
    }
};

void verify_siegel(VerifyReporter& rep, unsigned digits,
                   const EisensteinOptions& opts) {
    EvenLattice L = builtin_lattice("siegel");
    DiscGroup G(L);
    DiscElement g1 = G.element({Int(1)});

    SigmaValue sv = sigma(G, g1, Rat(5, 4), opts);
    rep.check("siegel: sigma(beta, 5/4) = 1",
              sv.value_at_kappa == 1 && sv.logderiv_at_kappa.empty());

    HeegnerIndex h = make_heegner_index(G, g1, Rat(-5, 4));
    Rat dr = degree_ratio(G, h, opts);
    Rat B = -zeta_exact(-1) * zeta_exact(-3);
    rep.check("siegel: Humbert degree deg H(5) = 1/60",
              dr / 2 * B == Rat(1, 60));
    rep.check("siegel: C(beta,5/4,0) = -2 deg/B",
              coeff_C0(G, g1, Rat(5, 4), opts) == -2 * dr);

    SymbolicValue green = green_integral(G, h, opts);
    SymbolicValue expect =
        SymbolicValue::zeta_logderiv_term(Rat(4), Rat(-3)) +
        SymbolicValue::l_logderiv_term(Rat(-2), Int(5), Rat(-1)) +
        SymbolicValue::rational(Rat(8, 3)) +
        SymbolicValue::log_int(Rat(-1), Int(5));
    rep.check("siegel: Green integral closed form for D = 5", green == expect);

    WeilRep W(G, Rat(5, 2), digits);
    bool ok = true;
    for (Int c = 1; c <= 4; ++c) {
        Cplx bf = W.kloosterman_bruteforce(G.zero(), Rat(0), g1, Rat(5, 4), c);
        Real cl = W.kloosterman_closed(g1, Rat(5, 4), c, opts.budget);
        Real tol = pow_real(Real(10), Real(-20));
        if ((bf - Cplx(cl)).abs() > tol) ok = false;
    }
    rep.check("siegel: Kloosterman two-path agreement, |c| <= 4", ok);
}

void verify_hilbert(VerifyReporter& rep, const Int& D,
                    const EisensteinOptions& opts) {
    EvenLattice L = builtin_lattice("hilbert", D);
    DiscGroup G(L);

    // T(1) divisor: both classes beta with q(beta) = -1/D mod 1
    std::vector<DivisorTerm> div;
    for (const auto& g : G.all_elements()) {
        if (g.level == 1) continue;
        Rat m = -Rat(1, D);
        if (denominator(m - g.q_val) == 1)
            div.push_back({make_heegner_index(G, g, m), Int(1)});
    }
    rep.check("hilbert: T(1) has two classes", div.size() == 2);
    Rat k = weight_of_divisor(G, div, opts);
    rep.check("hilbert: weight of T(1) divisor = 5 (D = 5)",
              D != 5 || k == 5);

    Rat B = zeta_exact(-1) * L_exact(D, -1);
    Rat degT1 = degree_ratio(G, div[0].index, opts) * B;
    rep.check("hilbert: deg T(1) = 1/6 (D = 5)",
              D != 5 || degT1 == Rat(1, 6));
}

void verify_sl2(VerifyReporter& rep, unsigned digits,
                const EisensteinOptions& opts) {
    EisensteinOptions fopts = opts;
    fopts.formal_sl2 = true;
    EvenLattice L = builtin_lattice("sl2");
    DiscGroup G(L);
    DiscElement g1 = G.element({Int(1)});

    HeegnerIndex h = make_heegner_index(G, g1, Rat(-3, 4));
    SymbolicValue green = green_integral(G, h, fopts);
    Real lhs = green.evaluate(digits);
    PrecisionGuard guard(digits);
    Real rhs = 2 * (2 * zeta_logderiv(Real(-1), digits) + 1 -
                    L_logderiv(Int(-3), Real(0), digits) -
                    log(Real(3)) / 2);
    Real tol = pow_real(Real(10), Real(-30)) * abs(rhs);
    rep.check("sl2 (formal): Green integral matches the classical identity",
              abs(lhs - rhs) <= tol);

    WeilRep W(G, Rat(3, 2), digits);
    bool ok = true;
    for (Int c = 1; c <= 6; ++c)
        for (int sgn : {1, -1}) {
            Cplx bf = W.kloosterman_bruteforce(G.zero(), Rat(0), g1,
                                               Rat(3, 4), sgn * c);
            Real cl = W.kloosterman_closed(g1, Rat(3, 4), sgn * c,
                                           opts.budget);
            if ((bf - Cplx(cl)).abs() > pow_real(Real(10), Real(-20)))
                ok = false;
        }
    rep.check("sl2: Kloosterman two-path agreement, |c| <= 6", ok);
}

int verify_suite(const std::string& which, unsigned digits, std::ostream& out,
                 const EisensteinOptions& opts) {
    VerifyReporter rep{out};
    std::string name = which;
    Int param = 5;
    auto colon = name.find(':');
    if (colon != std::string::npos) {
        param = Int(name.substr(colon + 1));
        name = name.substr(0, colon);
    }
    if (name == "all" || name == "siegel") verify_siegel(rep, digits, opts);
    if (name == "all" || name == "hilbert") verify_hilbert(rep, param, opts);
    if (name == "all" || name == "sl2") verify_sl2(rep, digits, opts);
    out << (rep.failures == 0 ? "verify: all checks passed\n"
                              : "verify: FAILURES\n");
    return rep.failures == 0 ? 0 : 3;
}

}  // namespace

}  // namespace heegner
