#pragma once

#include "ccwb/scheme.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace ccwb {

// A set of cache/file random variables, e.g. {Z1, W1, W2}. Variables
// are named "Z1".."Z3" and "W1".."W3".
using VarSet = std::set<std::string>;

std::string varset_name(const VarSet& s);       // canonical "Z1Z2W1" spelling
VarSet varset_from_name(const std::string& s);  // inverse of the above

// Joint entropies in subfile units (1 unit = F/t bits); entropy of a
// set equals the rank of the stacked generators.
using EntropyProfile = std::map<VarSet, int>;

// (file count, cache count) of a delivery-free variable set.
struct TypeVector {
    int num_files = 0;
    int num_caches = 0;
    auto operator<=>(const TypeVector&) const = default;
};

TypeVector type_of(const VarSet& s);

struct DecodeCheck {
    Demand demand;
    int user = 0;  // 1-based
    bool pass = false;
};

struct VerifyReport {
    std::vector<DecodeCheck> checks;        // demand-lexicographic, then user
    std::array<int, 3> cache_ranks{};       // rank(Z_k)
    std::map<Demand, int> delivery_ranks;   // rank(X^D)
    std::map<Demand, int> delivery_rows;    // row count of X^D
    Frac achieved_memory{0, 1};             // max_k rank(Z_k) / t
    Frac achieved_rate{0, 1};               // max_D rank(X^D) / t
    std::vector<std::string> violations;

    bool accepted() const { return violations.empty(); }
    std::string text() const;
    std::string json() const;
};

// Zero-error decodability: for every delivery present in the scheme and
// every user k, each row of W_{d_k}'s generator must lie in the row
// space of [Z_k; X^D]. With all_demands=true the 27 demands must all be
// present (run expand_all_deliveries first); otherwise only the
// populated deliveries are checked.
VerifyReport check_decodability(const Scheme& sch, bool all_demands = true);

// Ranks of stacked generators for the requested sets.
EntropyProfile entropy_profile(const Scheme& sch, const std::vector<VarSet>& sets);

// The variable sets of the published entropy table for the (0.6,1.5)
// corner point, plus the full set.
std::vector<VarSet> standard_profile_sets();

struct TypeSymmetryResult {
    bool symmetric = true;
    // Pairs of same-type sets with different entropies, if any.
    std::vector<std::pair<VarSet, VarSet>> counterexamples;
};

// Checks that all 63 nonempty delivery-free sets with equal type have
// equal entropy.
TypeSymmetryResult check_type_symmetry(const Scheme& sch);

} // namespace ccwb
