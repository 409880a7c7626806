#pragma once

#include "ccwb/scheme.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ccwb::conv {

using Rat = boost::multiprecision::cpp_rational;

// Subset of universe variables, bit i = variable i in declaration order.
using Mask = std::uint32_t;

// One-line permutation of {1,2,3}: perm[i-1] is the image of i.
using Perm = std::array<int, 3>;

bool is_perm(const Perm& p);
Perm inverse(const Perm& p);
const std::array<Perm, 6>& all_perms();

struct Variable {
    enum class Kind { File, Cache, Delivery, CommonInfo, Aux };
    std::string name;
    Kind kind;
    int index = 0;   // W_j / Z_k / K_i index, 1-based
    Demand demand;   // Delivery only
};

// The random-variable universe of one entropy LP: variables, functional
// dependencies (closure), and the user/file permutation symmetry.
//
// Closure rules:
//   - {W1,W2,W3} determines everything;
//   - W_{d_k} is decodable from {Z_k, X^D};
//   - K1 from {Z1, X^213} or from {W1};
//   - K2 from {W1, X^123} or from {W2};
//   - G from {W1, X^123}.
//
// The symmetry pair (pibar, pihat) acts as W_i -> W_{pihat(i)},
// Z_i -> Z_{pibar(i)}, and X^(d_1,d_2,d_3) -> X^(e_1,e_2,e_3) with
// e_k = pihat(d_{pibar^-1(k)}); it never applies to terms containing
// auxiliary variables.
class Universe {
public:
    static Universe from_names(const std::vector<std::string>& names);
    static Universe load(const std::string& path);

    int size() const { return static_cast<int>(vars_.size()); }
    const Variable& var(int i) const { return vars_[static_cast<std::size_t>(i)]; }
    const std::vector<Variable>& vars() const { return vars_; }
    int index_of(const std::string& name) const;  // -1 when absent
    bool has(const std::string& name) const { return index_of(name) >= 0; }
    Mask full_mask() const { return (Mask{1} << size()) - 1; }
    Mask bit(const std::string& name) const;

    Mask closure(Mask s) const;

    // Image under (pibar, pihat); nullopt when s contains an auxiliary
    // variable or a delivery image leaves the universe.
    std::optional<Mask> apply_pair(Mask s, const Perm& pibar, const Perm& pihat) const;

    // Canonical class representative: closure, then (for subsets whose
    // closure is reproduced by their auxiliary-free part) the smallest
    // closed orbit member. Cached over all subsets.
    Mask canonical(Mask s) const;

    // Number of subsets whose canonical form equals canonical(s).
    int class_size(Mask s) const;

    // Value of a class fixed by file independence: |W-part| when the
    // closed set is implied by its W-part alone, nullopt otherwise.
    std::optional<int> pinned_value(Mask closed) const;

    std::string set_name(Mask s) const;                  // "W1,Z1,X123"
    Mask parse_set(const std::string& csv) const;        // inverse

    std::string describe() const;

private:
    void build_tables() const;

    std::vector<Variable> vars_;
    std::map<std::string, int> by_name_;
    Mask w_mask_ = 0;  // all file variables
    mutable std::vector<Mask> canon_;       // lazily built, size 2^n
    mutable std::vector<int> class_sizes_;  // indexed like canon_
};

// A rational combination of joint-entropy terms.
struct LinearForm {
    std::vector<std::pair<Rat, Mask>> terms;

    void add(const Rat& coeff, Mask set);
    LinearForm canonicalized(const Universe& u) const;  // merge per canonical class
    bool empty_zero() const;
};

// The claim a*M + b*R >= c with M >= H(Z1), R >= H(X123) in file units.
struct LinearBound {
    Rat a, b, c;
    std::string str() const;
};

} // namespace ccwb::conv
