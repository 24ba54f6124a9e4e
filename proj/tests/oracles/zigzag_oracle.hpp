#pragma once
// Independent checks for zigzag decompositions: the generalized rank of the
// restricted zigzag (image of its limit in its colimit) counts the interval
// summands containing a given position range, whatever decomposition is used.

#include "sheafrig/barcode.hpp"

#include <random>
#include <vector>

namespace oracle {

using sheafrig::GFMatrix;
using sheafrig::ZigzagPresentation;

inline int generalized_rank(const ZigzagPresentation& pres, int i, int j)
{
    const int p = pres.field.characteristic;
    std::vector<int> offset;
    int total = 0;
    for (int pos = i; pos <= j; ++pos) {
        offset.push_back(total);
        total += pres.stalk_dims[pos];
    }
    if (total == 0)
        return 0;
    auto off = [&](int pos) { return offset[pos - i]; };

    // constraint rows: v_target - A v_source = 0, relation columns: e_source(x) - e_target(A x)
    std::vector<std::vector<long long>> constraints;
    std::vector<std::vector<long long>> relations;
    for (int q = i; q <= j; ++q) {
        if (q % 2 == 0)
            continue;
        const int m = (q - 1) / 2;
        for (int side = 0; side < 2; ++side) {
            int target = side == 0 ? q - 1 : q + 1;
            if (target < i || target > j)
                continue;
            const GFMatrix& A = side == 0 ? pres.lambda[m] : pres.rho[m];
            for (int r = 0; r < A.rows(); ++r) {
                std::vector<long long> row(total, 0);
                row[off(target) + r] = 1;
                for (int c = 0; c < A.cols(); ++c)
                    row[off(q) + c] -= A(r, c);
                constraints.push_back(row);
            }
            for (int c = 0; c < A.cols(); ++c) {
                std::vector<long long> col(total, 0);
                col[off(q) + c] = 1;
                for (int r = 0; r < A.rows(); ++r)
                    col[off(target) + r] -= A(r, c);
                relations.push_back(col);
            }
        }
    }
    GFMatrix lim_basis;
    if (constraints.empty())
        lim_basis = GFMatrix::identity(total, p);
    else
        lim_basis = GFMatrix::from_rows(constraints, p).kernel();
    // image of the limit in V_i, embedded in the direct sum
    std::vector<std::vector<long long>> cols = relations;
    const size_t rel_count = relations.size();
    for (int c = 0; c < lim_basis.cols(); ++c) {
        std::vector<long long> col(total, 0);
        for (int r = 0; r < pres.stalk_dims[i]; ++r)
            col[off(i) + r] = lim_basis(off(i) + r, c);
        cols.push_back(col);
    }
    auto rank_of_columns = [&](size_t count) {
        if (count == 0)
            return 0;
        std::vector<std::vector<long long>> rows(total, std::vector<long long>(count));
        for (size_t c = 0; c < count; ++c)
            for (int r = 0; r < total; ++r)
                rows[r][c] = cols[c][r];
        return GFMatrix::from_rows(rows, p).rank();
    };
    return rank_of_columns(cols.size()) - rank_of_columns(rel_count);
}

// Position range [lo, hi] occupied by a bar of a barcode over the given critical points.
inline std::pair<int, int> bar_positions(const sheafrig::Bar& bar, const sheafrig::OpenInterval& amb, const std::vector<double>& pts)
{
    const int k = static_cast<int>(pts.size());
    auto index = [&](double v) {
        for (int m = 0; m < k; ++m)
            if (pts[m] == v)
                return m + 1;
        return -1;
    };
    int lo, hi;
    if (sheafrig::left_is_ambient(bar, amb))
        lo = 0;
    else
        lo = bar.left.closed ? 2 * index(bar.left.value) - 1 : 2 * index(bar.left.value);
    if (sheafrig::right_is_ambient(bar, amb))
        hi = 2 * k;
    else
        hi = bar.right.closed ? 2 * index(bar.right.value) - 1 : 2 * index(bar.right.value) - 2;
    return {lo, hi};
}

inline ZigzagPresentation random_presentation(std::mt19937_64& rng, int p, int max_dim, int max_points)
{
    std::uniform_int_distribution<int> kdist(0, max_points);
    std::uniform_int_distribution<int> ddist(0, max_dim);
    std::uniform_int_distribution<int> edist(0, p - 1);
    ZigzagPresentation pres;
    pres.field.characteristic = p;
    const int k = kdist(rng);
    for (int m = 0; m < k; ++m)
        pres.critical_points.push_back(static_cast<double>(m));
    for (int pos = 0; pos <= 2 * k; ++pos)
        pres.stalk_dims.push_back(ddist(rng));
    auto random_matrix = [&](int r, int c) {
        GFMatrix a(r, c, p);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                a.set(i, j, edist(rng));
        return a;
    };
    for (int m = 0; m < k; ++m) {
        pres.lambda.push_back(random_matrix(pres.stalk_dims[2 * m], pres.stalk_dims[2 * m + 1]));
        pres.rho.push_back(random_matrix(pres.stalk_dims[2 * m + 2], pres.stalk_dims[2 * m + 1]));
    }
    return pres;
}

// Compares every generalized rank of `pres` with the number of bars covering the range,
// and with the generalized ranks of the re-presented barcode. Returns mismatch count.
inline int rank_mismatches(const ZigzagPresentation& pres, const sheafrig::Barcode& bc)
{
    const int k = pres.num_points();
    int bad = 0;
    std::vector<std::pair<int, int>> ranges;
    for (const auto& bar : bc.bars)
        ranges.push_back(bar_positions(bar, bc.ambient, pres.critical_points));
    ZigzagPresentation again = sheafrig::present(bc, pres.critical_points);
    for (int i = 0; i <= 2 * k; ++i)
        for (int j = i; j <= 2 * k; ++j) {
            int covering = 0;
            for (auto [lo, hi] : ranges)
                if (lo <= i && hi >= j)
                    ++covering;
            int r = generalized_rank(pres, i, j);
            if (r != covering || generalized_rank(again, i, j) != r)
                ++bad;
        }
    return bad;
}

} // namespace oracle
