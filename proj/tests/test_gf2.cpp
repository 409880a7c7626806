#include <doctest.h>

#include "ccwb/gf2.hpp"

#include <random>

using namespace ccwb::gf2;

TEST_CASE("rank of known matrices") {
    CHECK(rank(BitMatrix(3, {0b001, 0b010, 0b011})) == 2);
    CHECK(rank(BitMatrix(4, {0b0001, 0b0010, 0b0100, 0b1000})) == 4);
    CHECK(rank(BitMatrix(5, {0b10101, 0b10101})) == 1);
    CHECK(rank(BitMatrix(5, {0, 0})) == 0);
    CHECK(rank(BitMatrix(2)) == 0);
    // rank is invariant under row order and row sums
    CHECK(rank(BitMatrix(3, {0b011, 0b001, 0b010})) == 2);
    CHECK(rank(BitMatrix(3, {0b111, 0b110, 0b001})) == 2);
}

TEST_CASE("stack keeps rows in order and validates widths") {
    BitMatrix a(3, {0b001});
    BitMatrix b(3, {0b010, 0b100});
    BitMatrix s = stack({a, b});
    CHECK(s.row_count() == 3);
    CHECK(s.row(0) == 0b001);
    CHECK(s.row(2) == 0b100);
    CHECK_THROWS(stack({a, BitMatrix(4, {0b1000})}));
}

TEST_CASE("row space membership") {
    BitMatrix m(4, {0b0011, 0b0110});
    CHECK(in_rowspace(0b0101, m));  // sum of both rows
    CHECK(in_rowspace(0b0011, m));
    CHECK(in_rowspace(0, m));
    CHECK_FALSE(in_rowspace(0b1000, m));
    CHECK_FALSE(in_rowspace(0b0001, m));
}

TEST_CASE("column permutation") {
    BitMatrix m(3, {0b011});
    // send column 0 to 2, 1 to 0, 2 to 1
    std::vector<int> perm = {2, 0, 1};
    BitMatrix p = permute_columns(m, perm);
    CHECK(p.row(0) == 0b101);
    std::vector<int> bad = {0, 0, 1};
    CHECK_THROWS(permute_columns(m, bad));
}

TEST_CASE("rank is monotone and submodular (fuzz)") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 2000; ++iter) {
        const int width = 1 + static_cast<int>(rng() % 12);
        const std::uint64_t mask = width == 64 ? ~0ull : (1ull << width) - 1;
        auto random_rows = [&](int n) {
            std::vector<std::uint64_t> rows;
            for (int i = 0; i < n; ++i) rows.push_back(rng() & mask);
            return rows;
        };
        const auto a = random_rows(static_cast<int>(rng() % 5));
        const auto b = random_rows(static_cast<int>(rng() % 5));
        const auto c = random_rows(static_cast<int>(rng() % 5));
        auto cat = [&](std::initializer_list<const std::vector<std::uint64_t>*> parts) {
            std::vector<std::uint64_t> rows;
            for (auto* p : parts) rows.insert(rows.end(), p->begin(), p->end());
            return BitMatrix(width, rows);
        };
        const int ra = rank(cat({&a}));
        const int rab = rank(cat({&a, &b}));
        const int rac = rank(cat({&a, &c}));
        const int rabc = rank(cat({&a, &b, &c}));
        CHECK(rab >= ra);                 // monotone
        CHECK(rab + rac >= rabc + ra);    // submodular
    }
}
