#include "sheafrig/gf.hpp"

#include "sheafrig/error.hpp"

#include <utility>

namespace sheafrig {

bool is_prime(int p)
{
    if (p < 2)
        return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0)
            return false;
    return true;
}

uint32_t gf_inverse(uint32_t a, int p)
{
    // Fermat: a^(p-2)
    uint64_t result = 1, base = a % p;
    for (int e = p - 2; e > 0; e >>= 1) {
        if (e & 1)
            result = result * base % p;
        base = base * base % p;
    }
    return static_cast<uint32_t>(result);
}

GFMatrix::GFMatrix(int rows, int cols, int p) : rows_(rows), cols_(cols), p_(p), data_(static_cast<size_t>(rows) * cols, 0)
{
    if (rows < 0 || cols < 0)
        throw Error(ErrorCode::InvalidArgument, "negative matrix shape");
    if (!is_prime(p))
        throw Error(ErrorCode::InvalidArgument, "field characteristic must be prime");
}

GFMatrix GFMatrix::identity(int n, int p)
{
    GFMatrix m(n, n, p);
    for (int i = 0; i < n; ++i)
        m.set(i, i, 1);
    return m;
}

GFMatrix GFMatrix::from_rows(const std::vector<std::vector<long long>>& rows, int p)
{
    int r = static_cast<int>(rows.size());
    int c = r ? static_cast<int>(rows[0].size()) : 0;
    GFMatrix m(r, c, p);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c)
            throw Error(ErrorCode::InvalidArgument, "ragged matrix rows");
        for (int j = 0; j < c; ++j)
            m.set(i, j, rows[i][j]);
    }
    return m;
}

void GFMatrix::set(int r, int c, long long v)
{
    long long m = v % p_;
    if (m < 0)
        m += p_;
    data_[static_cast<size_t>(r) * cols_ + c] = static_cast<uint32_t>(m);
}

GFMatrix GFMatrix::operator*(const GFMatrix& o) const
{
    if (cols_ != o.rows_ || p_ != o.p_)
        throw Error(ErrorCode::DimensionMismatch, "matrix product shape or field mismatch");
    GFMatrix out(rows_, o.cols_, p_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            uint64_t a = (*this)(i, k);
            if (!a)
                continue;
            for (int j = 0; j < o.cols_; ++j) {
                size_t idx = static_cast<size_t>(i) * o.cols_ + j;
                out.data_[idx] = static_cast<uint32_t>((out.data_[idx] + a * o(k, j)) % p_);
            }
        }
    return out;
}

bool GFMatrix::is_zero() const
{
    for (auto v : data_)
        if (v)
            return false;
    return true;
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(std::vector<std::vector<uint32_t>>& a, int cols, int p)
{
    std::vector<int> pivots;
    int r = 0;
    int rows = static_cast<int>(a.size());
    for (int c = 0; c < cols && r < rows; ++c) {
        int sel = -1;
        for (int i = r; i < rows; ++i)
            if (a[i][c]) {
                sel = i;
                break;
            }
        if (sel < 0)
            continue;
        std::swap(a[r], a[sel]);
        uint64_t inv = gf_inverse(a[r][c], p);
        for (int j = 0; j < cols; ++j)
            a[r][j] = static_cast<uint32_t>(a[r][j] * inv % p);
        for (int i = 0; i < rows; ++i) {
            if (i == r || !a[i][c])
                continue;
            uint64_t f = a[i][c];
            for (int j = 0; j < cols; ++j)
                a[i][j] = static_cast<uint32_t>((a[i][j] + (p - f) * a[r][j]) % p);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

} // namespace

int GFMatrix::rank() const
{
    std::vector<std::vector<uint32_t>> a(rows_, std::vector<uint32_t>(cols_));
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            a[i][j] = (*this)(i, j);
    return static_cast<int>(rref(a, cols_, p_).size());
}

GFMatrix GFMatrix::kernel() const
{
    std::vector<std::vector<uint32_t>> a(rows_, std::vector<uint32_t>(cols_));
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            a[i][j] = (*this)(i, j);
    auto pivots = rref(a, cols_, p_);
    std::vector<bool> is_pivot(cols_, false);
    for (int c : pivots)
        is_pivot[c] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < cols_; ++c)
        if (!is_pivot[c])
            free_cols.push_back(c);
    GFMatrix k(cols_, static_cast<int>(free_cols.size()), p_);
    for (size_t f = 0; f < free_cols.size(); ++f) {
        int fc = free_cols[f];
        k.set(fc, static_cast<int>(f), 1);
        for (size_t r = 0; r < pivots.size(); ++r)
            k.set(pivots[r], static_cast<int>(f), -static_cast<long long>(a[r][fc]));
    }
    return k;
}

GFMatrix GFMatrix::columns(const std::vector<int>& idx) const
{
    GFMatrix out(rows_, static_cast<int>(idx.size()), p_);
    for (int i = 0; i < rows_; ++i)
        for (size_t j = 0; j < idx.size(); ++j)
            out.data_[static_cast<size_t>(i) * out.cols_ + j] = (*this)(i, idx[j]);
    return out;
}

GFMatrix GFMatrix::hconcat(const GFMatrix& right) const
{
    if (rows_ != right.rows_ || p_ != right.p_)
        throw Error(ErrorCode::DimensionMismatch, "hconcat shape mismatch");
    GFMatrix out(rows_, cols_ + right.cols_, p_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j)
            out.data_[static_cast<size_t>(i) * out.cols_ + j] = (*this)(i, j);
        for (int j = 0; j < right.cols_; ++j)
            out.data_[static_cast<size_t>(i) * out.cols_ + cols_ + j] = right(i, j);
    }
    return out;
}

} // namespace sheafrig
