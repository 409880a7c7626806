#include <doctest.h>

#include "ccwb/certificate.hpp"
#include "ccwb/converse.hpp"
#include "ccwb/entropy_lp.hpp"

#include <fstream>
#include <map>
#include <sstream>

using namespace ccwb::conv;

namespace {

const std::string kData = CCWB_DATA_DIR;

Universe big_universe() {
    return Universe::load(kData + "/universes/bound_10_6.uni");
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::map<Mask, Rat> as_map(const LinearForm& f) {
    std::map<Mask, Rat> m;
    for (const auto& [c, s] : f.terms) m[s] += c;
    for (auto it = m.begin(); it != m.end();)
        it = it->second == 0 ? m.erase(it) : std::next(it);
    return m;
}

} // namespace

TEST_CASE("permutation helpers") {
    CHECK(is_perm(Perm{2, 3, 1}));
    CHECK_FALSE(is_perm(Perm{1, 1, 3}));
    CHECK(inverse(Perm{2, 3, 1}) == Perm{3, 1, 2});
    CHECK(all_perms().size() == 6);
}

TEST_CASE("universe naming round trips") {
    const Universe u = big_universe();
    CHECK(u.size() == 10);
    CHECK(u.has("K2"));
    CHECK_FALSE(u.has("X231"));
    const Mask s = u.parse_set("W1, Z1 ,X123");
    CHECK(u.set_name(s) == "W1,Z1,X123");
    CHECK(u.parse_set(u.set_name(s)) == s);
    CHECK_THROWS(u.bit("X231"));
}

TEST_CASE("closure implements the decoding and common-information rules") {
    const Universe u = big_universe();
    CHECK(u.closure(u.parse_set("W1,W2,W3")) == u.full_mask());
    // user 1 holds Z1 and hears X^213, so it decodes W2; K1 and K2 follow
    CHECK(u.closure(u.parse_set("Z1,X213")) == u.parse_set("W2,Z1,X213,K1,K2"));
    CHECK(u.closure(u.parse_set("W1")) == u.parse_set("W1,K1"));
    CHECK(u.closure(u.parse_set("W1,X123")) == u.parse_set("W1,X123,K1,K2"));
    CHECK(u.closure(u.parse_set("Z2,X123")) == u.parse_set("W2,Z2,X123,K2"));
    CHECK(u.closure(u.parse_set("Z1")) == u.parse_set("Z1"));
}

TEST_CASE("symmetry pairs act on caches, files and demands") {
    const Universe u = big_universe();
    const Perm id{1, 2, 3};
    const Perm swap12{2, 1, 3};
    // pibar permutes cache/user indices: X^123 -> X^213
    CHECK(u.apply_pair(u.bit("X123"), swap12, id) == u.parse_set("X213"));
    // pihat relabels files, same demand image here
    CHECK(u.apply_pair(u.bit("X123"), id, swap12) == u.parse_set("X213"));
    CHECK(u.apply_pair(u.parse_set("W1,Z1"), swap12, swap12) == u.parse_set("W2,Z2"));
    // X^123 -> X^312 leaves this universe
    CHECK_FALSE(u.apply_pair(u.bit("X123"), Perm{2, 3, 1}, id).has_value());
    // common information never moves
    CHECK_FALSE(u.apply_pair(u.parse_set("Z1,K1"), swap12, swap12).has_value());
}

TEST_CASE("canonicalization merges symmetric classes") {
    const Universe u = big_universe();
    CHECK(u.canonical(u.bit("Z1")) == u.canonical(u.bit("Z2")));
    CHECK(u.canonical(u.bit("Z1")) == u.canonical(u.bit("Z3")));
    CHECK(u.class_size(u.bit("Z1")) == 3);
    CHECK(u.canonical(u.bit("W1")) == u.canonical(u.bit("W2")));
    CHECK(u.canonical(u.bit("Z1")) != u.canonical(u.bit("W1")));
    // canonical forms are closed and respect closure merging
    CHECK(u.canonical(u.parse_set("Z1,X123")) ==
          u.canonical(u.parse_set("W1,Z1,X123,K1,K2")));
    // sets pinned by auxiliary variables keep their closure
    const Mask k = u.closure(u.bit("K1"));
    CHECK(u.canonical(u.bit("K1")) == k);
}

TEST_CASE("pinned classes reflect file independence") {
    const Universe u = big_universe();
    CHECK(u.pinned_value(u.closure(u.bit("W1"))) == 1);
    CHECK(u.pinned_value(u.closure(u.parse_set("W1,W2"))) == 2);
    CHECK(u.pinned_value(u.full_mask()) == 3);
    CHECK_FALSE(u.pinned_value(u.closure(u.bit("Z1"))).has_value());
    CHECK_FALSE(u.pinned_value(u.closure(u.bit("K1"))).has_value());
    CHECK(u.pinned_value(u.canonical(u.bit("W1"))) == 1);
}

TEST_CASE("registered identities track the universe contents") {
    CHECK(universe_equalities(big_universe()).size() == 2);
    CHECK(universe_equalities(Universe::load(kData + "/universes/cutset_1_1.uni")).empty());
    CHECK(universe_equalities(Universe::load(kData + "/universes/improved_g.uni")).size() == 5);
}

TEST_CASE("entropy expression parsing") {
    const Universe u = big_universe();
    bool eq = false;
    const auto f = parse_entropy_expr("I(W1;W2|Z1)", u, &eq);
    CHECK_FALSE(eq);
    std::map<Mask, Rat> want = {
        {u.parse_set("W1,Z1"), 1},
        {u.parse_set("W2,Z1"), 1},
        {u.parse_set("W1,W2,Z1"), -1},
        {u.parse_set("Z1"), -1},
    };
    CHECK(as_map(f) == want);

    const auto h = parse_entropy_expr("H(X123|Z1) >= 0", u, &eq);
    CHECK_FALSE(eq);
    CHECK(as_map(h) == std::map<Mask, Rat>{{u.parse_set("Z1,X123"), 1}, {u.bit("Z1"), -1}});

    const auto s = parse_entropy_expr("H(K1)-H(Z1)=0", u, &eq);
    CHECK(eq);
    CHECK(as_map(s) == std::map<Mask, Rat>{{u.bit("K1"), 1}, {u.bit("Z1"), -1}});

    CHECK_THROWS(parse_entropy_expr("I(W1)", u));
    CHECK_THROWS(parse_entropy_expr("H(W1", u));
}

TEST_CASE("bundled certificates verify exactly") {
    const Universe u10 = big_universe();
    const Certificate c10 = load_certificate(kData + "/certs/bound_10_6.cert", u10);
    const CheckResult r10 = check_certificate(c10, u10);
    INFO(r10.failure);
    CHECK(r10.ok);
    CHECK(r10.certified_c == Rat(15));

    const Universe u12 = Universe::load(kData + "/universes/bound_5_4.uni");
    const Certificate c12 = load_certificate(kData + "/certs/bound_5_4.cert", u12);
    const CheckResult r12 = check_certificate(c12, u12);
    INFO(r12.failure);
    CHECK(r12.ok);
    CHECK(r12.certified_c == Rat(9));
}

TEST_CASE("serialization round trips through the checker") {
    const Universe u = big_universe();
    const Certificate cert = load_certificate(kData + "/certs/bound_10_6.cert", u);
    const Certificate again = parse_certificate(serialize_certificate(cert, u), u);
    const CheckResult r = check_certificate(again, u);
    CHECK(r.ok);
    CHECK(r.certified_c == Rat(15));
}

TEST_CASE("a tampered multiplier is rejected") {
    const Universe u = big_universe();
    std::string text = slurp(kData + "/certs/bound_10_6.cert");
    const auto pos = text.find("coeff=7");
    REQUIRE(pos != std::string::npos);
    text[pos + 6] = '8';
    const Certificate cert = parse_certificate(text, u);
    const CheckResult r = check_certificate(cert, u);
    CHECK_FALSE(r.ok);
    CHECK_FALSE(r.failure.empty());
}

TEST_CASE("symmetry-rewrite steps require a licensing pair") {
    const Universe u = big_universe();
    const std::string good =
        "step: coeff=1 kind=symmetry-rewrite lhs=Z1 rhs=Z2 pibar=2,1,3 pihat=2,1,3\n"
        "target: 0*M + 0*R >= 0\n";
    const CheckResult ok = check_certificate(parse_certificate(good, u), u);
    INFO(ok.failure);
    CHECK(ok.ok);

    const std::string bad =
        "step: coeff=1 kind=symmetry-rewrite lhs=Z1 rhs=Z2 pibar=1,2,3 pihat=1,2,3\n"
        "target: 0*M + 0*R >= 0\n";
    const CheckResult rej = check_certificate(parse_certificate(bad, u), u);
    CHECK_FALSE(rej.ok);
}

TEST_CASE("dependency equalities need equal closures") {
    const Universe u = big_universe();
    const std::string good =
        "step: coeff=1 kind=dependency-equality ineq=H(Z1,X123)-H(W1,Z1,X123)=0\n"
        "target: 0*M + 0*R >= 0\n";
    CHECK(check_certificate(parse_certificate(good, u), u).ok);

    const std::string bad =
        "step: coeff=1 kind=dependency-equality ineq=H(Z1)-H(W1,Z1)=0\n"
        "target: 0*M + 0*R >= 0\n";
    CHECK_FALSE(check_certificate(parse_certificate(bad, u), u).ok);
}

TEST_CASE("common-information steps must match a registered identity") {
    const Universe u = big_universe();
    const std::string bad =
        "step: coeff=1 kind=common-info-equality ineq=H(K1)-H(Z1)-H(W1)+H(W1,Z1)=0\n"
        "target: 0*M + 0*R >= 0\n";
    const CheckResult r = check_certificate(parse_certificate(bad, u), u);
    CHECK_FALSE(r.ok);
}

TEST_CASE("cut-set universes solve and certify") {
    const Universe u11 = Universe::load(kData + "/universes/cutset_1_1.uni");
    const LpInstance lp11 = build_lp(u11, 1, 1);
    const SolveResult r11 = solve_and_certify(lp11);
    INFO(r11.note);
    REQUIRE(r11.certified);
    CHECK(r11.bound.c == Rat(2));
    CHECK(check_certificate(r11.certificate, u11).ok);

    const Universe u31 = Universe::load(kData + "/universes/cutset_3_1.uni");
    const SolveResult r31 = solve_and_certify(build_lp(u31, 3, 1));
    REQUIRE(r31.certified);
    CHECK(r31.bound.c == Rat(3));
}
