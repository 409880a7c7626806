#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace ccwb::gf2 {

// Row-major binary matrix, one machine word per row. Widths up to 64
// columns; the caching problem needs 30 (t=10) and 18 (t=6).
class BitMatrix {
public:
    BitMatrix() = default;
    explicit BitMatrix(int width) : width_(check_width(width)) {}
    BitMatrix(int width, std::vector<std::uint64_t> rows)
        : width_(check_width(width)), rows_(std::move(rows)) {
        for (auto r : rows_)
            if (width_ < 64 && (r >> width_) != 0)
                throw std::invalid_argument("row has bits beyond matrix width");
    }

    int width() const { return width_; }
    int row_count() const { return static_cast<int>(rows_.size()); }
    bool empty() const { return rows_.empty(); }
    std::uint64_t row(int i) const { return rows_.at(static_cast<std::size_t>(i)); }
    const std::vector<std::uint64_t>& rows() const { return rows_; }

    void append_row(std::uint64_t r) {
        if (width_ < 64 && (r >> width_) != 0)
            throw std::invalid_argument("row has bits beyond matrix width");
        rows_.push_back(r);
    }

    bool operator==(const BitMatrix&) const = default;

private:
    static int check_width(int w) {
        if (w <= 0 || w > 64) throw std::invalid_argument("width must be in [1,64]");
        return w;
    }

    int width_ = 1;
    std::vector<std::uint64_t> rows_;
};

// GF(2) row rank; Gaussian elimination on a copy, pivoting on the
// lowest-index column first.
int rank(const BitMatrix& m);

// Vertical concatenation, row order preserved. Throws on width mismatch.
BitMatrix stack(std::span<const BitMatrix> ms);
BitMatrix stack(std::initializer_list<BitMatrix> ms);

// True iff v is a linear combination of m's rows.
bool in_rowspace(std::uint64_t v, const BitMatrix& m);

// Output column perm[j] = input column j. perm is 0-based and must be a
// bijection on [0, width).
BitMatrix permute_columns(const BitMatrix& m, std::span<const int> perm);

} // namespace ccwb::gf2
