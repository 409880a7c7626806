#pragma once

#include "ccwb/certificate.hpp"
#include "ccwb/converse.hpp"

#include <string>
#include <unordered_map>
#include <vector>

namespace ccwb::conv {

// Sparse column over class indices.
struct SparseCol {
    std::vector<std::pair<int, int>> terms;  // (class, integer coeff)
    std::string text;                        // source inequality / equality
};

struct LpEquality {
    std::vector<std::pair<int, int>> terms;
    Rat rhs;
    std::string name;   // "pin1","pin2","pin3","K1","K2","G1".."G3"
    std::string text;   // emitted into certificates for the identity kinds
};

// min a*h[cls(Z1)] + b*h[cls(X123)]
//   s.t. every (deduplicated, symmetry-reduced) elemental Shannon
//   inequality >= 0, the pinned-entropy and auxiliary identities hold,
//   and h >= 0.
struct LpInstance {
    const Universe* u = nullptr;
    Rat a, b;
    std::vector<Mask> class_rep;                 // canonical mask per class id
    std::unordered_map<Mask, int> class_id;
    std::vector<SparseCol> ineqs;
    std::vector<LpEquality> eqs;
    int cls_z1 = -1, cls_x123 = -1;

    int classes() const { return static_cast<int>(class_rep.size()); }
};

LpInstance build_lp(const Universe& u, const Rat& a, const Rat& b,
                    std::size_t class_cap = 100000);

struct SolveResult {
    bool certified = false;
    LinearBound bound;        // exact, from the verified certificate
    double float_optimum = 0; // solver's floating-point objective
    Certificate certificate;
    std::string note;
};

// Solves the LP dual with a floating tableau, recovers exact rational
// multipliers, emits a step-by-step certificate and runs it through
// check_certificate before reporting.
SolveResult solve_and_certify(const LpInstance& lp);

} // namespace ccwb::conv
