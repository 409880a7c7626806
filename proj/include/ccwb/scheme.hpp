#pragma once

#include "ccwb/gf2.hpp"

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ccwb {

// Exact rational in lowest terms with a positive denominator.
struct Frac {
    long long num = 0;
    long long den = 1;

    static Frac of(long long n, long long d);
    bool operator==(const Frac&) const = default;
    std::string str() const;
};

// The (3,3) problem instance plus the subfile-index shift that defines
// operator g. Subfile indices not fixed by g live on a single cycle
// 1..t-|fixed| advanced by g_shift; fixed indices map to themselves.
struct ProblemConfig {
    int n_files = 3;
    int n_users = 3;
    int subfiles = 10;       // t
    Frac memory{3, 5};       // M, in file units
    Frac rate{3, 2};         // R, in file units
    int g_shift = 3;
    std::vector<int> g_fixed = {10};   // 1-based subfile indices

    int width() const { return n_files * subfiles; }
    int cache_rows() const;     // M * t, throws if not integral
    int delivery_rows() const;  // R * t, throws if not integral
    void validate() const;      // also checks g^3 = id on the non-fixed cycle

    bool is_fixed(int subfile) const;
    int g_image(int subfile) const;  // 1-based in, 1-based out

    // Bit position of subfile `idx` of file `file` (both 1-based,
    // file 1=A, 2=B, 3=C). Layout: column (file-1)*t + idx, 1-based in
    // the file format, 0-based here.
    int bit_of(int file, int idx) const { return (file - 1) * subfiles + (idx - 1); }
};

// A demand (d1,d2,d3), each entry in {1,2,3} (files A/B/C).
struct Demand {
    std::array<int, 3> d{1, 1, 1};

    static Demand from_letters(const std::string& s);  // "ABC"
    std::string letters() const;
    auto operator<=>(const Demand&) const = default;
};

std::vector<Demand> all_demands();  // all 27, lexicographic

// A word in the commuting operator group <f,g> = Z3 x Z3: apply f
// `f_count` times, then g `g_count` times (order is immaterial).
struct TransformWord {
    int f_count = 0;
    int g_count = 0;
    bool identity() const { return f_count % 3 == 0 && g_count % 3 == 0; }
    std::string str() const;
};

// Which of the five representatives covers a demand, and the word
// carrying the representative's delivery matrix to the demand's.
struct DemandOrbit {
    Demand representative;
    TransformWord transform;
};

struct Scheme {
    ProblemConfig config;
    std::array<gf2::BitMatrix, 3> caches;  // Z1, Z2, Z3
    std::map<Demand, gf2::BitMatrix> deliveries;
};

// Column-block rotation A->B->C->A.
gf2::BitMatrix op_f(const gf2::BitMatrix& m, const ProblemConfig& cfg);

// Per-block subfile-index shift i -> i + g_shift on the non-fixed cycle.
gf2::BitMatrix op_g(const gf2::BitMatrix& m, const ProblemConfig& cfg);

gf2::BitMatrix apply_word(const gf2::BitMatrix& m, const ProblemConfig& cfg,
                          const TransformWord& w);

// Demand relabeling induced by the operators: f advances every file
// letter, g rotates user positions (e_k = d_{k-1} cyclically).
Demand apply_word(const Demand& d, const TransformWord& w);

// Z1 = [seed; f(seed); f^2(seed)], Z2 = g(Z1), Z3 = g(Z2).
std::array<gf2::BitMatrix, 3> expand_cache_seed(const gf2::BitMatrix& seed,
                                                const ProblemConfig& cfg);

// [seed; op(seed); op^2(seed)] where op is the given word. The main
// scheme uses op = g.f for X^ABC and op = g^2.f for X^ACB; both words
// fix the representative's demand.
gf2::BitMatrix expand_delivery_seed(const gf2::BitMatrix& seed, const ProblemConfig& cfg,
                                    const TransformWord& op);

// Word fixing demand d (e_k = d_k under the relabeling), if one exists
// among the nine words; used to pick the delivery seed structure.
std::optional<TransformWord> demand_fixing_word(const Demand& d);

DemandOrbit resolve_orbit(const Demand& d);

// The five orbit representatives: AAA, ABC, ACB, ABB, ACC.
const std::vector<Demand>& orbit_representatives();

// Populates all 27 demands from the representatives' matrices. Throws
// if a needed representative is missing.
Scheme expand_all_deliveries(const Scheme& sch);

// Generator of file j (1-based): t identity rows on the file's block.
gf2::BitMatrix file_generator(int file, const ProblemConfig& cfg);

// Text format, see README. Parse errors carry a line number.
Scheme parse_scheme(const std::string& text);
Scheme load_scheme(const std::string& path);
std::string serialize_scheme(const Scheme& sch);

// One row as "+"-joined subfile tokens, e.g. "A2+B1"; "0" for a zero row.
std::string row_to_string(std::uint64_t row, const ProblemConfig& cfg);
std::uint64_t row_from_string(const std::string& text, const ProblemConfig& cfg);

} // namespace ccwb
