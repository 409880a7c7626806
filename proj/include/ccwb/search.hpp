#pragma once

#include "ccwb/scheme.hpp"
#include "ccwb/verify.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ccwb {

// A (file, subfile) token naming one possibly-active bit of a seed row.
struct SubfileToken {
    int file = 1;  // 1..3
    int index = 1; // 1..t
    auto operator<=>(const SubfileToken&) const = default;
    std::string str() const;
};

// Brute-force cache-seed search: candidate seeds are all assignments of
// the active bits; candidate index bits select tokens in row order,
// file-major index-minor within a row.
struct SearchSpec {
    ProblemConfig config;
    std::vector<std::vector<SubfileToken>> row_masks;  // one entry per seed row
    EntropyProfile target;
    std::uint64_t budget = std::uint64_t{1} << 24;
    std::uint64_t max_results = 1u << 16;

    int total_bits() const;
    std::uint64_t candidate_count() const { return std::uint64_t{1} << total_bits(); }
    gf2::BitMatrix seed_of(std::uint64_t index) const;
};

SearchSpec parse_search_spec(const std::string& text);
SearchSpec load_search_spec(const std::string& path);

struct SearchResult {
    std::uint64_t seed_index = 0;
    gf2::BitMatrix seed;
    EntropyProfile profile;
    bool matched = false;
};

// Enumerates candidates in [from, candidate_count), in index order, and
// returns the matched results (ascending seed_index). Entries of the
// target profile are evaluated cheapest-first with early exit; jobs > 1
// splits the index range across threads, the matched set is identical.
std::vector<SearchResult> enumerate_cache_seeds(const SearchSpec& spec,
                                                std::uint64_t from = 0, int jobs = 1);

// Candidate rows for the delivery search: combinations of up to
// max_terms subfiles from the demanded files (all files when
// include_all_files), plus the cache rows themselves.
std::vector<std::uint64_t> default_delivery_pool(const Scheme& sch, const Demand& rep,
                                                 int max_terms = 4,
                                                 bool include_all_files = false);

// Depth-first search with backtracking for a delivery seed whose
// expansion decodes `rep` against the scheme's caches. Returns the seed
// (r rows when rep is fixed by an f/g word, the full matrix otherwise),
// or nullopt once `budget` search nodes are spent. Deterministic given
// pool order; exhaustion is not an infeasibility claim.
std::optional<gf2::BitMatrix> search_delivery(const Scheme& sch, const Demand& rep,
                                              const std::vector<std::uint64_t>& pool,
                                              std::uint64_t budget);

} // namespace ccwb
