#pragma once

#include <cstdint>
#include <vector>

namespace sheafrig {

// Dense matrix over the prime field GF(p). Entries are kept reduced in [0, p).
class GFMatrix {
public:
    GFMatrix() = default;
    GFMatrix(int rows, int cols, int p);

    static GFMatrix identity(int n, int p);
    static GFMatrix from_rows(const std::vector<std::vector<long long>>& rows, int p);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int characteristic() const { return p_; }

    uint32_t operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }
    void set(int r, int c, long long v);

    GFMatrix operator*(const GFMatrix& other) const;
    bool is_zero() const;
    bool operator==(const GFMatrix& other) const = default;

    int rank() const;
    // columns form a basis of {x : A x = 0}
    GFMatrix kernel() const;
    // columns c0..c1 (exclusive end) / selected columns
    GFMatrix columns(const std::vector<int>& idx) const;
    GFMatrix hconcat(const GFMatrix& right) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    int p_ = 2;
    std::vector<uint32_t> data_;
};

bool is_prime(int p);
uint32_t gf_inverse(uint32_t a, int p);

} // namespace sheafrig
