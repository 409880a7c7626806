#include <doctest.h>

#include "ccwb/search.hpp"

using namespace ccwb;

namespace {

// tiny spec: 6 active bits, targets that only constrain H(Z1)
const char* kTinySpec = R"(
[config]
subfiles=10
memory=3/5
rate=3/2
gshift=3
gfixed=10
[masks]
row=A1,A2,B1
row=A3,B2,B3
[target]
Z1=6
)";

} // namespace

TEST_CASE("seed_of maps index bits in row order") {
    const SearchSpec spec = parse_search_spec(kTinySpec);
    CHECK(spec.total_bits() == 6);
    CHECK(spec.candidate_count() == 64);
    const gf2::BitMatrix seed = spec.seed_of(0b000101);
    // bit 0 -> first token of row 1 (A1), bit 2 -> third token (B1)
    CHECK(seed.row_count() == 2);
    CHECK(seed.row(0) == row_from_string("A1+B1", spec.config));
    CHECK(seed.row(1) == 0);
    const gf2::BitMatrix top = spec.seed_of(0b111000);
    CHECK(top.row(0) == 0);
    CHECK(top.row(1) == row_from_string("A3+B2+B3", spec.config));
}

TEST_CASE("enumeration is deterministic across jobs and resume points") {
    const SearchSpec spec = parse_search_spec(kTinySpec);
    const auto seq = enumerate_cache_seeds(spec, 0, 1);
    const auto par = enumerate_cache_seeds(spec, 0, 4);
    REQUIRE(seq.size() == par.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        CHECK(seq[i].seed_index == par[i].seed_index);
        CHECK(seq[i].seed == par[i].seed);
    }
    REQUIRE(seq.size() >= 2);
    const std::uint64_t mid = seq[seq.size() / 2].seed_index;
    const auto tail = enumerate_cache_seeds(spec, mid, 2);
    CHECK(tail.size() == seq.size() - seq.size() / 2);
    CHECK(tail.front().seed_index == mid);
    CHECK(tail.back().seed_index == seq.back().seed_index);
}

TEST_CASE("impossible targets yield no matches") {
    SearchSpec spec = parse_search_spec(kTinySpec);
    spec.target[varset_from_name("Z1")] = 7;  // caches have 6 rows
    CHECK(enumerate_cache_seeds(spec).empty());
}

TEST_CASE("matched seeds really match and are type symmetric") {
    const SearchSpec spec = parse_search_spec(kTinySpec);
    const auto results = enumerate_cache_seeds(spec);
    REQUIRE_FALSE(results.empty());
    for (const auto& res : results) {
        CHECK(res.matched);
        Scheme sch;
        sch.config = spec.config;
        auto caches = expand_cache_seed(res.seed, spec.config);
        sch.caches = caches;
        for (const auto& [set, h] : spec.target)
            CHECK(entropy_profile(sch, {set}).at(set) == h);
        CHECK(check_type_symmetry(sch).symmetric);
    }
}

TEST_CASE("delivery search finds a constant-demand matrix") {
    const Scheme sch = load_scheme(std::string(CCWB_DATA_DIR) + "/schemes/p06_15.scheme");
    const Demand aaa = Demand::from_letters("AAA");
    const auto pool = default_delivery_pool(sch, aaa, 2);
    const auto found = search_delivery(sch, aaa, pool, 1u << 20);
    REQUIRE(found.has_value());
    // whatever was found must decode for all users
    Scheme probe = sch;
    probe.deliveries.clear();
    probe.deliveries[aaa] = *found;
    CHECK(check_decodability(probe, false).accepted());
}

TEST_CASE("budget guard rejects oversized specs") {
    SearchSpec spec = parse_search_spec(kTinySpec);
    std::string big(kTinySpec);
    big += "[limits]\nbudget=32\n";
    CHECK_THROWS(parse_search_spec(big));  // 64 candidates > 32 budget
}
