#include "ccwb/gf2.hpp"

#include <algorithm>

namespace ccwb::gf2 {

namespace {

// Reduces rows in place to a row-echelon basis; returns the rank.
// Pivot order is lowest-index column first.
int eliminate(std::vector<std::uint64_t>& rows, int width) {
    int r = 0;
    for (int col = 0; col < width && r < static_cast<int>(rows.size()); ++col) {
        const std::uint64_t bit = std::uint64_t{1} << col;
        int pivot = -1;
        for (int i = r; i < static_cast<int>(rows.size()); ++i) {
            if (rows[static_cast<std::size_t>(i)] & bit) { pivot = i; break; }
        }
        if (pivot < 0) continue;
        std::swap(rows[static_cast<std::size_t>(r)], rows[static_cast<std::size_t>(pivot)]);
        for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
            if (i != r && (rows[static_cast<std::size_t>(i)] & bit))
                rows[static_cast<std::size_t>(i)] ^= rows[static_cast<std::size_t>(r)];
        }
        ++r;
    }
    return r;
}

} // namespace

int rank(const BitMatrix& m) {
    std::vector<std::uint64_t> rows = m.rows();
    return eliminate(rows, m.width());
}

BitMatrix stack(std::span<const BitMatrix> ms) {
    if (ms.empty()) throw std::invalid_argument("stack requires at least one matrix");
    BitMatrix out(ms.front().width());
    for (const auto& m : ms) {
        if (m.width() != out.width()) throw std::invalid_argument("stack: width mismatch");
        for (auto r : m.rows()) out.append_row(r);
    }
    return out;
}

BitMatrix stack(std::initializer_list<BitMatrix> ms) {
    return stack(std::span<const BitMatrix>(ms.begin(), ms.size()));
}

bool in_rowspace(std::uint64_t v, const BitMatrix& m) {
    if (m.width() < 64 && (v >> m.width()) != 0)
        throw std::invalid_argument("in_rowspace: vector length mismatch");
    std::vector<std::uint64_t> rows = m.rows();
    eliminate(rows, m.width());
    for (auto r : rows) {
        if (r == 0) break;
        // lowest set bit of r is its pivot column
        const std::uint64_t pivot_bit = r & (~r + 1);
        if (v & pivot_bit) v ^= r;
    }
    return v == 0;
}

BitMatrix permute_columns(const BitMatrix& m, std::span<const int> perm) {
    const int w = m.width();
    if (static_cast<int>(perm.size()) != w)
        throw std::invalid_argument("permute_columns: permutation size mismatch");
    std::vector<bool> seen(static_cast<std::size_t>(w), false);
    for (int p : perm) {
        if (p < 0 || p >= w || seen[static_cast<std::size_t>(p)])
            throw std::invalid_argument("permute_columns: not a bijection");
        seen[static_cast<std::size_t>(p)] = true;
    }
    BitMatrix out(w);
    for (auto r : m.rows()) {
        std::uint64_t nr = 0;
        for (int j = 0; j < w; ++j)
            if (r & (std::uint64_t{1} << j)) nr |= std::uint64_t{1} << perm[static_cast<std::size_t>(j)];
        out.append_row(nr);
    }
    return out;
}

} // namespace ccwb::gf2
