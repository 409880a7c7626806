#include "ccwb/certificate.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ccwb::conv {

namespace {

std::string strip_ws(const std::string& s) {
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    return out;
}

Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(boost::multiprecision::cpp_int(s));
    return Rat(boost::multiprecision::cpp_int(s.substr(0, slash)),
               boost::multiprecision::cpp_int(s.substr(slash + 1)));
}

Perm parse_perm(const std::string& s) {
    Perm p{};
    std::istringstream in(s);
    std::string tok;
    int i = 0;
    while (std::getline(in, tok, ',')) {
        if (i >= 3) throw std::runtime_error("bad permutation " + s);
        p[static_cast<std::size_t>(i++)] = std::stoi(tok);
    }
    if (i != 3 || !is_perm(p)) throw std::runtime_error("bad permutation " + s);
    return p;
}

// Inner text of a balanced "NAME(...)" expression starting at pos of '('.
std::string paren_body(const std::string& s, std::size_t open, std::size_t* after) {
    if (open >= s.size() || s[open] != '(') throw std::runtime_error("expected ( in " + s);
    int depth = 0;
    for (std::size_t i = open; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')' && --depth == 0) {
            if (after) *after = i + 1;
            return s.substr(open + 1, i - open - 1);
        }
    }
    throw std::runtime_error("unbalanced parentheses in " + s);
}

} // namespace

std::vector<UniverseEquality> universe_equalities(const Universe& u) {
    std::vector<UniverseEquality> out;
    auto add = [&](const std::string& name, std::initializer_list<std::pair<int, const char*>> terms) {
        UniverseEquality eq;
        eq.name = name;
        for (const auto& [c, set] : terms) eq.form.add(c, u.parse_set(set));
        eq.form = eq.form.canonicalized(u);
        out.push_back(std::move(eq));
    };
    if (u.has("K1") && u.has("Z1") && u.has("X213") && u.has("W1"))
        add("K1", {{1, "K1"}, {-1, "Z1,X213"}, {-1, "W1"}, {1, "W1,Z1,X213"}});
    if (u.has("K2") && u.has("W1") && u.has("X123") && u.has("W2"))
        add("K2", {{1, "K2"}, {-1, "W1,X123"}, {-1, "W2"}, {1, "W1,W2,X123"}});
    if (u.has("G") && u.has("X213") && u.has("W1") && u.has("X123")) {
        add("G1", {{1, "G,W1"}, {-1, "G"}, {-1, "W1,X213"}, {1, "X213"}});
        add("G2", {{1, "G,X123"}, {-1, "G"}, {-1, "X123,X213"}, {1, "X213"}});
        add("G3", {{1, "G,W1,X123"}, {-1, "G"}, {-1, "W1,X123,X213"}, {1, "X213"}});
    }
    return out;
}

LinearForm parse_entropy_expr(const std::string& raw, const Universe& u, bool* is_equality) {
    std::string s = strip_ws(raw);
    if (s.size() > 3 && s.compare(s.size() - 3, 3, ">=0") == 0) s.resize(s.size() - 3);
    if (is_equality) *is_equality = false;
    LinearForm f;
    if (s.rfind("I(", 0) == 0) {
        std::size_t after = 0;
        std::string body = paren_body(s, 1, &after);
        if (after != s.size()) throw std::runtime_error("trailing text in " + raw);
        auto semi = body.find(';');
        if (semi == std::string::npos) throw std::runtime_error("I() needs two arguments: " + raw);
        std::string a_str = body.substr(0, semi), rest = body.substr(semi + 1);
        auto bar = rest.find('|');
        std::string b_str = bar == std::string::npos ? rest : rest.substr(0, bar);
        std::string c_str = bar == std::string::npos ? "" : rest.substr(bar + 1);
        Mask a = u.parse_set(a_str), b = u.parse_set(b_str);
        Mask c = c_str.empty() ? 0 : u.parse_set(c_str);
        if (!a || !b) throw std::runtime_error("empty argument in " + raw);
        f.add(1, a | c);
        f.add(1, b | c);
        f.add(-1, a | b | c);
        f.add(-1, c);
        return f;
    }
    if (s.rfind("H(", 0) == 0) {
        std::size_t after = 0;
        std::string body = paren_body(s, 1, &after);
        if (after == s.size()) {
            auto bar = body.find('|');
            if (bar == std::string::npos) {
                f.add(1, u.parse_set(body));
            } else {
                Mask a = u.parse_set(body.substr(0, bar));
                Mask c = u.parse_set(body.substr(bar + 1));
                f.add(1, a | c);
                f.add(-1, c);
            }
            return f;
        }
        // falls through: a signed sum of H() terms
    }
    // general form: (+|-)H(S)(+|-)H(S)...=0
    std::string body = s;
    auto eq = body.find('=');
    if (eq != std::string::npos) {
        if (body.substr(eq) != "=0") throw std::runtime_error("equality must end with =0: " + raw);
        body.resize(eq);
        if (is_equality) *is_equality = true;
    }
    std::size_t i = 0;
    while (i < body.size()) {
        int sign = 1;
        if (body[i] == '+') ++i;
        else if (body[i] == '-') { sign = -1; ++i; }
        if (body.compare(i, 2, "H(") != 0) throw std::runtime_error("expected H( in " + raw);
        std::size_t after = 0;
        std::string inner = paren_body(body, i + 1, &after);
        if (inner.find('|') != std::string::npos)
            throw std::runtime_error("no conditional terms in sums: " + raw);
        f.add(sign, u.parse_set(inner));
        i = after;
    }
    return f;
}

namespace {

LinearBound parse_target(const std::string& raw) {
    // "10*M + 6*R >= 15"
    std::string s = strip_ws(raw);
    auto m = s.find("*M+");
    auto r = s.find("*R>=");
    if (m == std::string::npos || r == std::string::npos || r < m)
        throw std::runtime_error("bad target line: " + raw);
    LinearBound b;
    b.a = parse_rat(s.substr(0, m));
    b.b = parse_rat(s.substr(m + 3, r - m - 3));
    b.c = parse_rat(s.substr(r + 4));
    return b;
}

std::map<std::string, std::string> parse_kv(const std::string& line) {
    std::map<std::string, std::string> kv;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw std::runtime_error("expected key=value: " + line);
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return kv;
}

} // namespace

Certificate parse_certificate(const std::string& text, const Universe& u) {
    Certificate cert;
    bool have_target = false;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        auto b = line.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t");
        line = line.substr(b, e - b + 1);
        try {
            if (line.rfind("target:", 0) == 0) {
                cert.target = parse_target(line.substr(7));
                have_target = true;
            } else if (line.rfind("step:", 0) == 0) {
                auto kv = parse_kv(line.substr(5));
                CertStep step;
                step.coeff = parse_rat(kv.at("coeff"));
                step.kind = kv.at("kind");
                if (step.kind == "symmetry-rewrite") {
                    CertRewrite rw;
                    rw.rule = "sym";
                    rw.lhs = u.parse_set(kv.at("lhs"));
                    rw.rhs = u.parse_set(kv.at("rhs"));
                    rw.pibar = parse_perm(kv.at("pibar"));
                    rw.pihat = parse_perm(kv.at("pihat"));
                    step.text = "H(" + u.set_name(rw.lhs) + ")-H(" + u.set_name(rw.rhs) + ")=0";
                    step.rewrites.push_back(rw);
                } else {
                    step.text = kv.at("ineq");
                }
                step.form = parse_entropy_expr(step.text, u, &step.equality);
                cert.steps.push_back(std::move(step));
            } else if (line.rfind("rewrite:", 0) == 0) {
                if (cert.steps.empty())
                    throw std::runtime_error("rewrite before any step");
                auto kv = parse_kv(line.substr(8));
                CertRewrite rw;
                rw.rule = kv.at("rule");
                rw.lhs = u.parse_set(kv.at("lhs"));
                rw.rhs = u.parse_set(kv.at("rhs"));
                if (rw.rule == "sym") {
                    rw.pibar = parse_perm(kv.at("pibar"));
                    rw.pihat = parse_perm(kv.at("pihat"));
                }
                cert.steps.back().rewrites.push_back(rw);
            } else {
                throw std::runtime_error("unrecognized line");
            }
        } catch (const std::exception& ex) {
            throw std::runtime_error("certificate line " + std::to_string(lineno) + ": " + ex.what());
        }
    }
    if (!have_target) throw std::runtime_error("certificate has no target line");
    return cert;
}

Certificate load_certificate(const std::string& path, const Universe& u) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_certificate(buf.str(), u);
}

std::string serialize_certificate(const Certificate& cert, const Universe& u) {
    std::ostringstream os;
    os << "target: " << cert.target.a << "*M + " << cert.target.b << "*R >= "
       << cert.target.c << "\n";
    for (const auto& step : cert.steps) {
        os << "step: coeff=" << step.coeff << " kind=" << step.kind;
        if (step.kind == "symmetry-rewrite") {
            const auto& rw = step.rewrites.at(0);
            os << " lhs=" << u.set_name(rw.lhs) << " rhs=" << u.set_name(rw.rhs)
               << " pibar=" << rw.pibar[0] << ',' << rw.pibar[1] << ',' << rw.pibar[2]
               << " pihat=" << rw.pihat[0] << ',' << rw.pihat[1] << ',' << rw.pihat[2] << "\n";
            continue;
        }
        os << " ineq=" << step.text << "\n";
        for (const auto& rw : step.rewrites) {
            os << "rewrite: rule=" << rw.rule << " lhs=" << u.set_name(rw.lhs)
               << " rhs=" << u.set_name(rw.rhs);
            if (rw.rule == "sym") {
                os << " pibar=" << rw.pibar[0] << ',' << rw.pibar[1] << ',' << rw.pibar[2]
                   << " pihat=" << rw.pihat[0] << ',' << rw.pihat[1] << ',' << rw.pihat[2];
            }
            os << "\n";
        }
    }
    return os.str();
}

namespace {

// forms equal as canonical functionals, up to the given sign
bool forms_match(const LinearForm& a, const LinearForm& b, int sign) {
    std::map<Mask, Rat> diff;
    for (const auto& [c, s] : a.terms) diff[s] += c;
    for (const auto& [c, s] : b.terms) diff[s] -= sign * c;
    for (const auto& [s, c] : diff)
        if (c != 0) return false;
    return true;
}

} // namespace

CheckResult check_certificate(const Certificate& cert, const Universe& u) {
    CheckResult res;
    auto fail = [&](const std::string& why) {
        res.ok = false;
        res.failure = why;
        return res;
    };
    if (cert.target.a < 0 || cert.target.b < 0)
        return fail("target coefficients must be nonnegative");

    auto equalities = universe_equalities(u);
    LinearForm total;
    for (std::size_t si = 0; si < cert.steps.size(); ++si) {
        const auto& step = cert.steps[si];
        std::string where = "step " + std::to_string(si + 1) + " (" + step.text + ")";
        if (step.coeff <= 0) return fail(where + ": coefficient must be positive");

        if (step.kind == "shannon") {
            if (step.equality) return fail(where + ": shannon steps are inequalities");
            std::string s = strip_ws(step.text);
            if (s.rfind("I(", 0) != 0 && s.rfind("H(", 0) != 0)
                return fail(where + ": not an elemental form");
        } else if (step.kind == "dependency-equality" || step.kind == "symmetry-rewrite") {
            if (!step.equality || step.form.terms.size() != 2)
                return fail(where + ": equality needs two terms");
            const auto& [c0, s0] = step.form.terms[0];
            const auto& [c1, s1] = step.form.terms[1];
            if (c0 + c1 != 0) return fail(where + ": coefficients must be +1/-1");
            if (step.kind == "dependency-equality" && u.closure(s0) != u.closure(s1))
                return fail(where + ": sides do not have equal closures");
            // symmetry-rewrite steps are justified by the mandatory rewrite
            // record validated below
            if (step.kind == "symmetry-rewrite" &&
                (step.rewrites.size() != 1 || step.rewrites[0].rule != "sym"))
                return fail(where + ": symmetry-rewrite step must name one (pibar,pihat) pair");
        } else if (step.kind == "common-info-equality" || step.kind == "aux-equality") {
            if (!step.equality) return fail(where + ": must be an equality");
            LinearForm canon = step.form.canonicalized(u);
            bool matched = false;
            for (const auto& eq : equalities) {
                bool ci = eq.name == "K1" || eq.name == "K2";
                if ((step.kind == "common-info-equality") != ci) continue;
                if (forms_match(canon, eq.form, 1) || forms_match(canon, eq.form, -1)) {
                    matched = true;
                    break;
                }
            }
            if (!matched) return fail(where + ": does not match a registered identity");
        } else {
            return fail(where + ": unknown kind " + step.kind);
        }

        for (const auto& rw : step.rewrites) {
            if (rw.rule == "sym") {
                auto img = u.apply_pair(rw.lhs, rw.pibar, rw.pihat);
                if (!img)
                    return fail(where + ": symmetry pair not applicable to " + u.set_name(rw.lhs));
                if (u.closure(*img) != u.closure(rw.rhs))
                    return fail(where + ": symmetry rewrite " + u.set_name(rw.lhs) + " -> " +
                                u.set_name(rw.rhs) + " is not licensed");
            } else if (rw.rule == "dec") {
                if (u.closure(rw.lhs) != u.closure(rw.rhs))
                    return fail(where + ": decoding rewrite has unequal closures");
            } else {
                return fail(where + ": unknown rewrite rule " + rw.rule);
            }
        }

        for (const auto& [c, s] : step.form.terms) total.add(step.coeff * c, s);
    }

    res.residual = total.canonicalized(u);
    Mask cls_z1 = u.canonical(u.bit("Z1"));
    Mask cls_x123 = u.canonical(u.bit("X123"));
    Rat got_a = 0, got_b = 0, implied_c = 0;
    for (const auto& [c, s] : res.residual.terms) {
        if (s == cls_z1) {
            got_a = c;
        } else if (s == cls_x123) {
            got_b = c;
        } else if (auto v = u.pinned_value(s)) {
            implied_c -= c * *v;
        } else {
            return fail("residual has unresolved term " + u.set_name(s));
        }
    }
    if (got_a != cert.target.a || got_b != cert.target.b)
        return fail("residual objective coefficients are (" + got_a.str() + "," + got_b.str() +
                    "), target says (" + cert.target.a.str() + "," + cert.target.b.str() + ")");
    res.certified_c = implied_c;
    if (implied_c < cert.target.c)
        return fail("steps only certify >= " + implied_c.str() + ", target claims >= " +
                    cert.target.c.str());
    res.ok = true;
    return res;
}

} // namespace ccwb::conv
