#pragma once

#include "ccwb/converse.hpp"

#include <string>
#include <vector>

namespace ccwb::conv {

// Justification attached to a certificate step: the step as written uses a
// term that the summation treats as equal to another.
//   rule=sym : applying (pibar, pihat) to lhs gives a set with the same
//              closure as rhs; lhs must be free of auxiliary variables.
//   rule=dec : closure(lhs) == closure(rhs).
struct CertRewrite {
    std::string rule;  // "sym" or "dec"
    Mask lhs = 0, rhs = 0;
    Perm pibar{1, 2, 3}, pihat{1, 2, 3};
};

// One line of a converse proof. Kinds:
//   shannon      : I(A;B|C) >= 0, H(A|B) >= 0 or H(A) >= 0
//   common-info  : the defining identity of K1 or K2 (any closure-equal form)
//   dependency-eq: H(S1) - H(S2) = 0 with closure(S1) == closure(S2)
//   aux-eq       : a registered identity of the auxiliary variable G
struct CertStep {
    Rat coeff;
    std::string kind;
    std::string text;  // e.g. "I(W1;W3|W2,Z3,K1,K2)"
    LinearForm form;   // signed expansion of text
    bool equality = false;
    std::vector<CertRewrite> rewrites;
};

struct Certificate {
    std::vector<CertStep> steps;
    LinearBound target;
};

// Registered equality functionals of a universe, in canonical form.
// Common information: H(K) - H(A) - H(B) + H(A,B) = 0.
// G identities (when G, X213 present):
//   H(G,Z1,X213) - H(Z1,X213) = 0
//   H(G,W1) - H(W1) = 0
//   H(G) - H(K1) - H(K2) + H(K1,K2)... (see build_universe_equalities)
struct UniverseEquality {
    std::string name;
    LinearForm form;  // canonicalized, = 0
};
std::vector<UniverseEquality> universe_equalities(const Universe& u);

// Parse "I(A;B|C)", "H(A|B)", "H(A)" or "+-H(..)+-H(..)..=0" into a form.
LinearForm parse_entropy_expr(const std::string& text, const Universe& u,
                              bool* is_equality = nullptr);

Certificate parse_certificate(const std::string& text, const Universe& u);
Certificate load_certificate(const std::string& path, const Universe& u);
std::string serialize_certificate(const Certificate& cert, const Universe& u);

struct CheckResult {
    bool ok = false;
    std::string failure;       // empty when ok
    LinearForm residual;       // canonical residual of the summation
    Rat certified_c;           // value implied by the residual when valid
};

// Trusted validator: checks each step is a licensed instance, each rewrite
// is justified, and the exact rational sum telescopes to
// target.a*H(Z1) + target.b*H(X123) - target.c.
CheckResult check_certificate(const Certificate& cert, const Universe& u);

} // namespace ccwb::conv
