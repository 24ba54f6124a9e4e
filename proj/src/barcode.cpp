#include "sheafrig/barcode.hpp"

#include "sheafrig/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <tuple>

namespace sheafrig {

void FieldConfig::validate() const
{
    if (!is_prime(characteristic))
        throw Error(ErrorCode::InvalidArgument, "characteristic " + std::to_string(characteristic) + " is not prime");
}

Endpoint ambient_left(const OpenInterval& amb)
{
    return std::isinf(amb.lo) ? Endpoint::neg_inf() : Endpoint::open_at(amb.lo);
}

Endpoint ambient_right(const OpenInterval& amb)
{
    return std::isinf(amb.hi) ? Endpoint::pos_inf() : Endpoint::open_at(amb.hi);
}

bool left_is_ambient(const Bar& bar, const OpenInterval& amb)
{
    if (bar.left.kind == Endpoint::Kind::NegInfinity)
        return true;
    return bar.left.finite() && !bar.left.closed && bar.left.value == amb.lo;
}

bool right_is_ambient(const Bar& bar, const OpenInterval& amb)
{
    if (bar.right.kind == Endpoint::Kind::PosInfinity)
        return true;
    return bar.right.finite() && !bar.right.closed && bar.right.value == amb.hi;
}

bool is_full(const Bar& bar, const OpenInterval& amb)
{
    return left_is_ambient(bar, amb) && right_is_ambient(bar, amb);
}

bool is_sigma_positive(const Bar& bar, const OpenInterval& amb)
{
    bool left_ok = left_is_ambient(bar, amb) || bar.left.closed;
    bool right_ok = right_is_ambient(bar, amb) || !bar.right.closed;
    return left_ok && right_ok;
}

bool is_sigma_negative(const Bar& bar, const OpenInterval& amb)
{
    bool left_ok = left_is_ambient(bar, amb) || !bar.left.closed;
    bool right_ok = right_is_ambient(bar, amb) || bar.right.closed;
    return left_ok && right_ok;
}

bool bar_nonempty(const Bar& bar)
{
    if (bar.left.kind == Endpoint::Kind::PosInfinity || bar.right.kind == Endpoint::Kind::NegInfinity)
        return false;
    if (!bar.left.finite() || !bar.right.finite())
        return true;
    if (bar.left.value < bar.right.value)
        return true;
    return bar.left.value == bar.right.value && bar.left.closed && bar.right.closed;
}

namespace {

int kind_rank(Endpoint::Kind k)
{
    return k == Endpoint::Kind::NegInfinity ? 0 : (k == Endpoint::Kind::Finite ? 1 : 2);
}

// closed left ends sort before open ones at equal value, closed right ends after open ones
auto left_key(const Endpoint& e) { return std::make_tuple(kind_rank(e.kind), e.finite() ? e.value : 0.0, e.closed ? 0 : 1); }
auto right_key(const Endpoint& e) { return std::make_tuple(kind_rank(e.kind), e.finite() ? e.value : 0.0, e.closed ? 1 : 0); }

} // namespace

bool bar_less(const Bar& a, const Bar& b)
{
    if (left_key(a.left) != left_key(b.left))
        return left_key(a.left) < left_key(b.left);
    if (right_key(a.right) != right_key(b.right))
        return right_key(a.right) < right_key(b.right);
    return a.degree < b.degree;
}

void Barcode::validate() const
{
    field.validate();
    if (!(ambient.lo < ambient.hi))
        throw Error(ErrorCode::InvalidArgument, "ambient interval is empty");
    for (const auto& bar : bars) {
        if (!bar_nonempty(bar))
            throw Error(ErrorCode::InvalidArgument, "empty bar " + to_string(bar));
        bool left_in = bar.left.kind == Endpoint::Kind::NegInfinity
            ? std::isinf(ambient.lo)
            : (bar.left.finite() && (bar.left.value > ambient.lo || (bar.left.value == ambient.lo && !bar.left.closed)));
        bool right_in = bar.right.kind == Endpoint::Kind::PosInfinity
            ? std::isinf(ambient.hi)
            : (bar.right.finite() && (bar.right.value < ambient.hi || (bar.right.value == ambient.hi && !bar.right.closed)));
        if (!left_in || !right_in)
            throw Error(ErrorCode::InvalidArgument, "bar " + to_string(bar) + " leaves the ambient interval");
    }
}

void Barcode::sort()
{
    std::sort(bars.begin(), bars.end(), bar_less);
}

void ZigzagPresentation::validate() const
{
    field.validate();
    const int k = num_points();
    for (int i = 0; i < k; ++i) {
        if (!(critical_points[i] > ambient.lo && critical_points[i] < ambient.hi))
            throw Error(ErrorCode::InvalidPresentation, "critical point outside ambient interval");
        if (i > 0 && !(critical_points[i] > critical_points[i - 1]))
            throw Error(ErrorCode::InvalidPresentation, "critical points must be strictly increasing");
    }
    if (static_cast<int>(stalk_dims.size()) != 2 * k + 1)
        throw Error(ErrorCode::InvalidPresentation, "expected 2k+1 stalk dimensions");
    if (static_cast<int>(lambda.size()) != k || static_cast<int>(rho.size()) != k)
        throw Error(ErrorCode::InvalidPresentation, "expected one lambda and one rho per critical point");
    for (int d : stalk_dims)
        if (d < 0)
            throw Error(ErrorCode::InvalidPresentation, "negative stalk dimension");
    for (int m = 0; m < k; ++m) {
        const GFMatrix& l = lambda[m];
        const GFMatrix& r = rho[m];
        if (l.rows() != stalk_dims[2 * m] || l.cols() != stalk_dims[2 * m + 1])
            throw Error(ErrorCode::InvalidPresentation, "lambda[" + std::to_string(m) + "] has the wrong shape");
        if (r.rows() != stalk_dims[2 * m + 2] || r.cols() != stalk_dims[2 * m + 1])
            throw Error(ErrorCode::InvalidPresentation, "rho[" + std::to_string(m) + "] has the wrong shape");
        if (l.characteristic() != field.characteristic || r.characteristic() != field.characteristic)
            throw Error(ErrorCode::InvalidPresentation, "matrix field differs from presentation field");
    }
}

namespace {

using Vec = std::vector<uint32_t>;

struct Field {
    int p;
    uint32_t add(uint32_t a, uint32_t b) const { return static_cast<uint32_t>((a + b) % p); }
    uint32_t mul(uint32_t a, uint32_t b) const { return static_cast<uint32_t>(uint64_t(a) * b % p); }
    uint32_t neg(uint32_t a) const { return a ? p - a : 0; }
    uint32_t inv(uint32_t a) const { return gf_inverse(a, p); }
    // y += c x
    void axpy(Vec& y, uint32_t c, const Vec& x) const
    {
        if (!c)
            return;
        for (size_t i = 0; i < y.size(); ++i)
            y[i] = add(y[i], mul(c, x[i]));
    }
};

Vec matvec(const GFMatrix& m, const Vec& v)
{
    const int p = m.characteristic();
    Vec out(m.rows(), 0);
    for (int i = 0; i < m.rows(); ++i) {
        uint64_t acc = 0;
        for (int j = 0; j < m.cols(); ++j)
            acc = (acc + uint64_t(m(i, j)) * v[j]) % p;
        out[i] = static_cast<uint32_t>(acc);
    }
    return out;
}

// Basis changes z_j += c z_k keep the partial decomposition valid exactly when the
// interval of j admits a nonzero morphism onto the interval of k. Sorting births
// with odd ones first (descending) and even ones after (ascending) makes every
// "earlier" summand absorbable by every later one.
std::pair<int, int> absorb_key(int birth)
{
    return birth % 2 ? std::make_pair(0, -birth) : std::make_pair(1, birth);
}

struct LiveBar {
    Vec vec;
    int birth;
};

Endpoint left_endpoint(int pos, const ZigzagPresentation& pres)
{
    if (pos % 2 == 0) {
        if (pos == 0)
            return ambient_left(pres.ambient);
        return Endpoint::open_at(pres.critical_points[pos / 2 - 1]);
    }
    return Endpoint::closed_at(pres.critical_points[(pos + 1) / 2 - 1]);
}

Endpoint right_endpoint(int pos, const ZigzagPresentation& pres)
{
    const int k = pres.num_points();
    if (pos % 2 == 0) {
        if (pos == 2 * k)
            return ambient_right(pres.ambient);
        return Endpoint::open_at(pres.critical_points[pos / 2]);
    }
    return Endpoint::closed_at(pres.critical_points[(pos + 1) / 2 - 1]);
}

// Complete `vecs` (independent) to a basis of F^dim with standard vectors.
std::vector<Vec> complement(const std::vector<Vec>& vecs, int dim, const Field& f)
{
    std::vector<Vec> echelon;
    std::vector<int> pivot;
    auto reduce = [&](Vec v) {
        for (size_t e = 0; e < echelon.size(); ++e)
            if (v[pivot[e]])
                f.axpy(v, f.neg(f.mul(v[pivot[e]], f.inv(echelon[e][pivot[e]]))), echelon[e]);
        return v;
    };
    auto insert = [&](const Vec& v) {
        Vec r = reduce(v);
        for (int i = 0; i < dim; ++i)
            if (r[i]) {
                echelon.push_back(r);
                pivot.push_back(i);
                return true;
            }
        return false;
    };
    for (const auto& v : vecs)
        insert(v);
    std::vector<Vec> out;
    for (int i = 0; i < dim && static_cast<int>(echelon.size()) < dim; ++i) {
        Vec e(dim, 0);
        e[i] = 1;
        if (insert(e))
            out.push_back(e);
    }
    return out;
}

} // namespace

Barcode decompose(const ZigzagPresentation& pres)
{
    pres.validate();
    const Field f{pres.field.characteristic};
    const int k = pres.num_points();
    const int last = 2 * k;

    std::vector<std::pair<int, int>> intervals; // (birth, death) positions
    std::vector<LiveBar> live;
    for (int i = 0; i < pres.stalk_dims[0]; ++i) {
        Vec e(pres.stalk_dims[0], 0);
        e[i] = 1;
        live.push_back({e, 0});
    }

    for (int i = 0; i < last; ++i) {
        const int next_dim = pres.stalk_dims[i + 1];
        std::vector<size_t> order(live.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return absorb_key(live[a].birth) < absorb_key(live[b].birth); });

        std::vector<LiveBar> next;
        if (i % 2 == 1) {
            // forward arrow rho : V_i -> V_{i+1}
            const GFMatrix& rho = pres.rho[(i - 1) / 2];
            std::vector<Vec> pivot_img;
            std::vector<int> pivot_row;
            for (size_t idx : order) {
                Vec img = matvec(rho, live[idx].vec);
                bool zero = true;
                for (;;) {
                    int r = -1;
                    for (int t = 0; t < next_dim; ++t)
                        if (img[t]) {
                            r = t;
                            break;
                        }
                    if (r < 0)
                        break;
                    auto it = std::find(pivot_row.begin(), pivot_row.end(), r);
                    if (it == pivot_row.end()) {
                        pivot_row.push_back(r);
                        pivot_img.push_back(img);
                        zero = false;
                        break;
                    }
                    const Vec& piv = pivot_img[it - pivot_row.begin()];
                    f.axpy(img, f.neg(f.mul(img[r], f.inv(piv[r]))), piv);
                }
                if (zero)
                    intervals.emplace_back(live[idx].birth, i);
                else
                    next.push_back({img, live[idx].birth});
            }
            std::vector<Vec> imgs;
            for (const auto& lb : next)
                imgs.push_back(lb.vec);
            for (auto& v : complement(imgs, next_dim, f))
                next.push_back({v, i + 1});
        } else {
            // backward arrow lambda : V_{i+1} -> V_i
            const GFMatrix& lam = pres.lambda[i / 2];
            const int dim = pres.stalk_dims[i];
            const int n = static_cast<int>(live.size());
            // coordinates of lambda's columns in the live basis: solve B X = lambda
            GFMatrix basis(dim, n, f.p);
            for (int j = 0; j < n; ++j)
                for (int r = 0; r < dim; ++r)
                    basis.set(r, j, live[j].vec[r]);
            GFMatrix aug = basis.hconcat(lam);
            // row reduce [B | lambda]; B invertible so the right block becomes B^{-1} lambda
            std::vector<Vec> rows(dim, Vec(n + next_dim));
            for (int r = 0; r < dim; ++r)
                for (int c = 0; c < n + next_dim; ++c)
                    rows[r][c] = aug(r, c);
            for (int c = 0, r = 0; c < n; ++c, ++r) {
                int sel = r;
                while (sel < dim && !rows[sel][c])
                    ++sel;
                std::swap(rows[r], rows[sel]);
                uint32_t inv = f.inv(rows[r][c]);
                for (auto& x : rows[r])
                    x = f.mul(x, inv);
                for (int t = 0; t < dim; ++t)
                    if (t != r && rows[t][c])
                        f.axpy(rows[t], f.neg(rows[t][c]), rows[r]);
            }
            // M[j][c]: coordinate of lambda column c along live vector j
            std::vector<Vec> M(n, Vec(next_dim));
            for (int j = 0; j < n; ++j)
                for (int c = 0; c < next_dim; ++c)
                    M[j][c] = rows[j][n + c];
            std::vector<Vec> T(next_dim, Vec(next_dim, 0)); // T[c] = domain vector of column c
            for (int c = 0; c < next_dim; ++c)
                T[c][c] = 1;
            std::vector<int> rank_of(n);
            for (int pos = 0; pos < n; ++pos)
                rank_of[order[pos]] = pos;

            std::vector<std::pair<int, int>> pivots; // (row, column)
            std::vector<int> kernel_cols;
            for (int c = 0; c < next_dim; ++c) {
                for (auto [pr, pc] : pivots) {
                    uint32_t x = M[pr][c];
                    if (!x)
                        continue;
                    for (int j = 0; j < n; ++j)
                        M[j][c] = f.add(M[j][c], f.neg(f.mul(x, M[j][pc])));
                    f.axpy(T[c], f.neg(x), T[pc]);
                }
                int p = -1;
                for (int j = 0; j < n; ++j)
                    if (M[j][c] && (p < 0 || rank_of[j] > rank_of[p]))
                        p = j;
                if (p < 0) {
                    kernel_cols.push_back(c);
                    continue;
                }
                uint32_t pinv = f.inv(M[p][c]);
                for (int j = 0; j < n; ++j) {
                    if (j == p || !M[j][c])
                        continue;
                    uint32_t factor = f.mul(M[j][c], pinv);
                    for (int cc = 0; cc < next_dim; ++cc)
                        M[j][cc] = f.add(M[j][cc], f.neg(f.mul(factor, M[p][cc])));
                }
                for (int j = 0; j < n; ++j)
                    M[j][c] = f.mul(M[j][c], pinv);
                for (auto& x : T[c])
                    x = f.mul(x, pinv);
                pivots.emplace_back(p, c);
            }
            std::vector<bool> continues(n, false);
            for (auto [pr, pc] : pivots) {
                continues[pr] = true;
                next.push_back({T[pc], live[pr].birth});
            }
            for (int j = 0; j < n; ++j)
                if (!continues[j])
                    intervals.emplace_back(live[j].birth, i);
            for (int c : kernel_cols)
                next.push_back({T[c], i + 1});
        }
        live = std::move(next);
    }
    for (const auto& lb : live)
        intervals.emplace_back(lb.birth, last);

    Barcode bc;
    bc.ambient = pres.ambient;
    bc.field = pres.field;
    for (auto [b, d] : intervals)
        bc.bars.push_back({left_endpoint(b, pres), right_endpoint(d, pres), 0});
    bc.sort();
    return bc;
}

namespace {

int position_of_left(const Bar& bar, const OpenInterval& amb, const std::vector<double>& pts)
{
    if (left_is_ambient(bar, amb))
        return 0;
    auto it = std::find(pts.begin(), pts.end(), bar.left.value);
    if (it == pts.end())
        throw Error(ErrorCode::InvalidArgument, "bar endpoint is not a critical point");
    int m = static_cast<int>(it - pts.begin()) + 1;
    return bar.left.closed ? 2 * m - 1 : 2 * m;
}

int position_of_right(const Bar& bar, const OpenInterval& amb, const std::vector<double>& pts)
{
    if (right_is_ambient(bar, amb))
        return 2 * static_cast<int>(pts.size());
    auto it = std::find(pts.begin(), pts.end(), bar.right.value);
    if (it == pts.end())
        throw Error(ErrorCode::InvalidArgument, "bar endpoint is not a critical point");
    int m = static_cast<int>(it - pts.begin()) + 1;
    return bar.right.closed ? 2 * m - 1 : 2 * m - 2;
}

} // namespace

ZigzagPresentation present(const Barcode& bc, const std::vector<double>& critical_points)
{
    bc.validate();
    for (size_t i = 1; i < bc.bars.size(); ++i)
        if (bc.bars[i].degree != bc.bars[0].degree)
            throw Error(ErrorCode::InvalidArgument, "a presentation encodes a single degree");
    const int k = static_cast<int>(critical_points.size());
    const int p = bc.field.characteristic;
    std::vector<std::vector<int>> alive(2 * k + 1);
    for (size_t b = 0; b < bc.bars.size(); ++b) {
        int lo = position_of_left(bc.bars[b], bc.ambient, critical_points);
        int hi = position_of_right(bc.bars[b], bc.ambient, critical_points);
        for (int pos = lo; pos <= hi; ++pos)
            alive[pos].push_back(static_cast<int>(b));
    }
    ZigzagPresentation pres;
    pres.ambient = bc.ambient;
    pres.critical_points = critical_points;
    pres.field = bc.field;
    for (const auto& a : alive)
        pres.stalk_dims.push_back(static_cast<int>(a.size()));
    auto structure_map = [&](int from, int to) {
        GFMatrix m(pres.stalk_dims[to], pres.stalk_dims[from], p);
        for (size_t r = 0; r < alive[to].size(); ++r)
            for (size_t c = 0; c < alive[from].size(); ++c)
                if (alive[to][r] == alive[from][c])
                    m.set(static_cast<int>(r), static_cast<int>(c), 1);
        return m;
    };
    for (int m = 0; m < k; ++m) {
        pres.lambda.push_back(structure_map(2 * m + 1, 2 * m));
        pres.rho.push_back(structure_map(2 * m + 1, 2 * m + 2));
    }
    pres.validate();
    return pres;
}

bool MicrosupportProfile1D::has_minus() const
{
    return std::any_of(entries.begin(), entries.end(), [](const ProfileEntry& e) { return e.minus; });
}

bool MicrosupportProfile1D::has_plus() const
{
    return std::any_of(entries.begin(), entries.end(), [](const ProfileEntry& e) { return e.plus; });
}

namespace {

bool bijective(const GFMatrix& m)
{
    return m.rows() == m.cols() && m.rank() == m.rows();
}

void add_flag(std::vector<ProfileEntry>& entries, double point, bool plus, bool minus)
{
    for (auto& e : entries)
        if (e.point == point) {
            e.plus = e.plus || plus;
            e.minus = e.minus || minus;
            return;
        }
    entries.push_back({point, plus, minus});
}

void finish(std::vector<ProfileEntry>& entries)
{
    std::erase_if(entries, [](const ProfileEntry& e) { return !e.plus && !e.minus; });
    std::sort(entries.begin(), entries.end(), [](const ProfileEntry& a, const ProfileEntry& b) { return a.point < b.point; });
}

} // namespace

MicrosupportProfile1D microsupport_profile(const ZigzagPresentation& pres)
{
    pres.validate();
    MicrosupportProfile1D out;
    for (int m = 0; m < pres.num_points(); ++m) {
        bool plus = !bijective(pres.lambda[m]);
        bool minus = !bijective(pres.rho[m]);
        if (plus || minus)
            out.entries.push_back({pres.critical_points[m], plus, minus});
    }
    return out;
}

MicrosupportProfile1D microsupport_profile(const Barcode& bc)
{
    MicrosupportProfile1D out;
    for (const auto& bar : bc.bars) {
        if (!left_is_ambient(bar, bc.ambient))
            add_flag(out.entries, bar.left.value, bar.left.closed, !bar.left.closed);
        if (!right_is_ambient(bar, bc.ambient))
            add_flag(out.entries, bar.right.value, !bar.right.closed, bar.right.closed);
    }
    finish(out.entries);
    return out;
}

namespace {

void require_sigma_positive(const Barcode& bc)
{
    for (const auto& bar : bc.bars)
        if (!is_sigma_positive(bar, bc.ambient))
            throw Error(ErrorCode::MixedDirectionBar, "bar " + to_string(bar) + " is not left-closed/right-open");
}

} // namespace

std::vector<double> s_infty(const Barcode& bc)
{
    require_sigma_positive(bc);
    std::vector<double> out;
    for (const auto& bar : bc.bars) {
        bool la = left_is_ambient(bar, bc.ambient);
        bool ra = right_is_ambient(bar, bc.ambient);
        if (la && !ra)
            out.push_back(bar.right.value);
        else if (ra && !la)
            out.push_back(bar.left.value);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<BoundedBar> bounded_bars(const Barcode& bc)
{
    require_sigma_positive(bc);
    std::vector<BoundedBar> out;
    for (const auto& bar : bc.bars)
        if (!left_is_ambient(bar, bc.ambient) && !right_is_ambient(bar, bc.ambient))
            out.push_back({bar.left.value, bar.right.value, bar.degree});
    std::sort(out.begin(), out.end());
    return out;
}

std::map<int, int> global_sections(const Barcode& bc, const OpenInterval& U)
{
    // For Z = B ∩ U each side is: reaching the end of U, closed inside U, or open inside U.
    // H^0(U; k_Z) = k when neither side is open inside U; H^1 = k when both are; else 0.
    std::map<int, int> dims;
    for (const auto& bar : bc.bars) {
        const double lv = bar.left.finite() ? bar.left.value : -std::numeric_limits<double>::infinity();
        const double rv = bar.right.finite() ? bar.right.value : std::numeric_limits<double>::infinity();
        const bool left_reaches = lv <= U.lo;
        const bool right_reaches = rv >= U.hi;
        const double zl = left_reaches ? U.lo : lv;
        const double zr = right_reaches ? U.hi : rv;
        bool empty;
        if (zl < zr)
            empty = false;
        else if (zl == zr)
            empty = left_reaches || right_reaches || !(bar.left.closed && bar.right.closed);
        else
            empty = true;
        if (empty)
            continue;
        const bool left_open = !left_reaches && !bar.left.closed;
        const bool right_open = !right_reaches && !bar.right.closed;
        int h;
        if (!left_open && !right_open)
            h = 0;
        else if (left_open && right_open)
            h = 1;
        else
            continue;
        dims[h - bar.degree] += 1;
    }
    return dims;
}

MicrosupportProfile1D limsup_microsupport(const std::vector<MicrosupportProfile1D>& seq, double tolerance)
{
    if (seq.empty())
        throw Error(ErrorCode::EmptySequence, "limsup of an empty sequence");
    if (!(tolerance >= 0))
        throw Error(ErrorCode::InvalidArgument, "negative clustering tolerance");
    const size_t n = seq.size();
    const size_t tail = n / 2;
    const size_t tail_len = n - tail;

    std::vector<ProfileEntry> out;
    for (int dir = 0; dir < 2; ++dir) {
        struct Item {
            double x;
            size_t index;
        };
        std::vector<Item> items;
        for (size_t t = tail; t < n; ++t)
            for (const auto& e : seq[t].entries)
                if (dir == 0 ? e.plus : e.minus)
                    items.push_back({e.point, t});
        std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
            return a.x != b.x ? a.x < b.x : a.index < b.index;
        });
        // single-linkage clusters on the line are runs with gaps <= tolerance
        size_t start = 0;
        while (start < items.size()) {
            size_t end = start + 1;
            while (end < items.size() && items[end].x - items[end - 1].x <= tolerance)
                ++end;
            std::vector<size_t> idx;
            for (size_t t = start; t < end; ++t)
                idx.push_back(items[t].index);
            std::sort(idx.begin(), idx.end());
            idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
            // a cluster recurs if it is hit by at least two tail members (or the tail has one member)
            if (idx.size() >= 2 || tail_len == 1) {
                size_t latest = idx.back();
                double sum = 0;
                int count = 0;
                for (size_t t = start; t < end; ++t)
                    if (items[t].index == latest) {
                        sum += items[t].x;
                        ++count;
                    }
                double rep = sum / count;
                bool merged = false;
                for (auto& e : out)
                    if (std::abs(e.point - rep) <= tolerance) {
                        (dir == 0 ? e.plus : e.minus) = true;
                        merged = true;
                        break;
                    }
                if (!merged)
                    out.push_back({rep, dir == 0, dir == 1});
            }
            start = end;
        }
    }
    finish(out);
    return {out};
}

FiberHull conv_fiber(bool plus, bool minus)
{
    return {plus, minus, !(plus && minus)};
}

std::string to_string(const Bar& bar)
{
    std::ostringstream os;
    auto val = [](const Endpoint& e) -> std::string {
        if (e.kind == Endpoint::Kind::NegInfinity)
            return "-inf";
        if (e.kind == Endpoint::Kind::PosInfinity)
            return "+inf";
        std::ostringstream v;
        v << e.value;
        return v.str();
    };
    os << (bar.left.closed ? '[' : '(') << val(bar.left) << ", " << val(bar.right) << (bar.right.closed ? ']' : ')');
    if (bar.degree)
        os << "[" << bar.degree << "]";
    return os.str();
}

} // namespace sheafrig
