#include "sheafrig/convolution.hpp"

#include "sheafrig/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sheafrig {

namespace {

enum class End { Inf, Closed, Open };

End kind_of(const Endpoint& e)
{
    if (!e.finite())
        return End::Inf;
    return e.closed ? End::Closed : End::Open;
}

Bar make(Endpoint l, Endpoint r, int d) { return Bar{l, r, d}; }

const Endpoint kNegInf = Endpoint::neg_inf();
const Endpoint kPosInf = Endpoint::pos_inf();

void require_line(const Barcode& bc)
{
    bc.validate();
    if (!std::isinf(bc.ambient.lo) || !std::isinf(bc.ambient.hi))
        throw Error(ErrorCode::InvalidArgument, "cut-off functors act on barcodes over the whole line");
}

enum class Table { P, Q, ConeU, ConeV };

// gamma = (-inf, 0]; the Right tables are conjugate by x -> -x
std::vector<Bar> left_table(const Bar& bar, Table t)
{
    const End l = kind_of(bar.left), r = kind_of(bar.right);
    const int d = bar.degree;
    const double a = bar.left.value, b = bar.right.value;
    using E = End;
    switch (t) {
    case Table::P:
        if (l == E::Inf && r == E::Closed)
            return {make(kNegInf, kPosInf, d)};
        if (l == E::Open && (r == E::Inf || r == E::Closed))
            return {};
        if (l == E::Closed && r == E::Closed)
            return {make(Endpoint::closed_at(a), kPosInf, d)};
        if (l == E::Open && r == E::Open)
            return {make(Endpoint::closed_at(b), kPosInf, d - 1)};
        return {bar};
    case Table::Q:
        if ((l == E::Inf && r == E::Closed) || (l == E::Open && r == E::Closed))
            return {};
        if (l == E::Open && r == E::Inf)
            return {make(kNegInf, kPosInf, d)};
        if (l == E::Closed && r == E::Closed)
            return {make(kNegInf, Endpoint::open_at(a), d + 1)};
        if (l == E::Open && r == E::Open)
            return {make(kNegInf, Endpoint::open_at(b), d)};
        return {bar};
    case Table::ConeU:
        if (r == E::Closed && l != E::Open)
            return {make(Endpoint::open_at(b), kPosInf, d + 1)};
        if (l == E::Open && (r == E::Inf || r == E::Closed))
            return {bar};
        if (l == E::Open && r == E::Open)
            return {make(Endpoint::open_at(a), kPosInf, d)};
        return {};
    case Table::ConeV:
        if (r == E::Closed && l != E::Closed)
            return {make(bar.left, bar.right, d + 1)};
        if (l == E::Closed && r == E::Closed)
            return {make(kNegInf, Endpoint::closed_at(b), d + 1)};
        if (l == E::Open && (r == E::Inf || r == E::Open))
            return {make(kNegInf, Endpoint::closed_at(a), d)};
        return {};
    }
    return {};
}

Barcode apply_table(const Barcode& bc, HalfLine gamma, Table t)
{
    require_line(bc);
    Barcode out;
    out.ambient = bc.ambient;
    out.field = bc.field;
    for (const auto& bar : bc.bars) {
        if (gamma == HalfLine::Left) {
            for (auto& b : left_table(bar, t))
                out.bars.push_back(b);
        } else {
            for (auto& b : left_table(mirror(bar), t))
                out.bars.push_back(mirror(b));
        }
    }
    out.sort();
    return out;
}

}  // namespace

Bar mirror(const Bar& bar)
{
    auto flip = [](const Endpoint& e) {
        switch (e.kind) {
        case Endpoint::Kind::NegInfinity:
            return Endpoint::pos_inf();
        case Endpoint::Kind::PosInfinity:
            return Endpoint::neg_inf();
        default:
            return Endpoint{Endpoint::Kind::Finite, e.value == 0 ? 0.0 : -e.value, e.closed};
        }
    };
    return Bar{flip(bar.right), flip(bar.left), bar.degree};
}

Barcode mirror(const Barcode& bc)
{
    Barcode out;
    out.ambient = {-bc.ambient.hi, -bc.ambient.lo};
    out.field = bc.field;
    for (const auto& b : bc.bars)
        out.bars.push_back(mirror(b));
    out.sort();
    return out;
}

Barcode p_cutoff_bar(const Barcode& bc, HalfLine gamma) { return apply_table(bc, gamma, Table::P); }
Barcode q_cutoff_bar(const Barcode& bc, HalfLine gamma) { return apply_table(bc, gamma, Table::Q); }
Barcode cone_of_u(const Barcode& bc, HalfLine gamma) { return apply_table(bc, gamma, Table::ConeU); }
Barcode cone_of_v(const Barcode& bc, HalfLine gamma) { return apply_table(bc, gamma, Table::ConeV); }

bool ConvexIndicator::contains(const Vec& x, double tol) const
{
    if (A.rows() == 0)
        return true;
    return ((A * x) - b).maxCoeff() <= tol;
}

PolyhedralCone as_polyhedral(const CutoffCone& gamma, int dim)
{
    PolyhedralCone out;
    if (const auto* p = std::get_if<PolyhedralCone>(&gamma)) {
        out = *p;
    } else {
        const auto& r = std::get<RoundCone>(gamma);
        r.validate();
        if (r.dim > 2)
            throw Error(ErrorCode::InvalidArgument, "round cones are polyhedral only in dimension <= 2");
        Mat g(r.dim == 1 ? 1 : 2, r.dim);
        if (r.dim == 1) {
            g(0, 0) = -r.sign();
        } else {
            g << 1.0, -r.sign() * r.slope, -1.0, -r.sign() * r.slope;
        }
        out = PolyhedralCone::from_generators(g, r.dim);
    }
    if (out.dim != dim)
        throw Error(ErrorCode::DimensionMismatch, "cone and polyhedron live in different dimensions");
    return out;
}

namespace {

// homogenization: {(x, t) : t >= 0, b t - A x >= 0}
Mat homogeneous_normals(const ConvexIndicator& B)
{
    const int n = B.dim();
    Mat H(B.A.rows() + 1, n + 1);
    H.topLeftCorner(B.A.rows(), n) = -B.A;
    H.topRightCorner(B.A.rows(), 1) = B.b;
    H.row(B.A.rows()).setZero();
    H(B.A.rows(), n) = 1.0;
    return H;
}

ConvexIndicator dehomogenize(const Mat& normals, int n, int degree)
{
    std::vector<int> keep;
    for (int i = 0; i < normals.rows(); ++i)
        if (normals.row(i).head(n).norm() > 1e-12)
            keep.push_back(i);
    ConvexIndicator out;
    out.A.resize(keep.size(), n);
    out.b.resize(keep.size());
    out.degree = degree;
    for (size_t k = 0; k < keep.size(); ++k) {
        // alpha . x + beta >= 0  <=>  (-alpha) . x <= beta
        Eigen::RowVectorXd row = normals.row(keep[k]);
        double s = row.head(n).norm();
        out.A.row(k) = -row.head(n) / s;
        out.b(k) = row(n) / s;
    }
    return out;
}

Mat homogeneous_generators(const ConvexIndicator& B)
{
    const int n = B.dim();
    if (n < 1 || B.b.size() != B.A.rows())
        throw Error(ErrorCode::DimensionMismatch, "polyhedron needs rows of A matching b");
    if (n > 4)
        throw Error(ErrorCode::InvalidArgument, "polyhedral cut-off supports dimension <= 4");
    Mat gens = extreme_generators(homogeneous_normals(B), n + 1);
    bool nonempty = false;
    for (int i = 0; i < gens.rows(); ++i)
        nonempty = nonempty || gens(i, n) > 1e-12;
    if (!nonempty)
        throw Error(ErrorCode::InvalidArgument, "polyhedron is empty");
    return gens;
}

ConvexIndicator normalized(const ConvexIndicator& B)
{
    const int n = B.dim();
    Mat gens = homogeneous_generators(B);
    return dehomogenize(extreme_generators(gens, n + 1), n, B.degree);
}

}  // namespace

ConvexIndicator cutoff_convex(const ConvexIndicator& B, const CutoffCone& gamma)
{
    const int n = B.dim();
    PolyhedralCone g = as_polyhedral(gamma, n);
    Mat gens = homogeneous_generators(B);
    // recession directions of B + gamma^a gain the generators of -gamma
    Mat all(gens.rows() + g.generators.rows(), n + 1);
    all.topRows(gens.rows()) = gens;
    for (int i = 0; i < g.generators.rows(); ++i) {
        all.row(gens.rows() + i).head(n) = -g.generators.row(i);
        all(gens.rows() + i, n) = 0.0;
    }
    return dehomogenize(extreme_generators(all, n + 1), n, B.degree);
}

namespace {

bool profile_has(const Barcode& bc, bool plus)
{
    auto prof = microsupport_profile(bc);
    return plus ? prof.has_plus() : prof.has_minus();
}

}  // namespace

CutoffCheck cutoff_cone_check(const Barcode& bc, HalfLine gamma)
{
    // gamma°a = {sigma >= 0} for Left, {sigma <= 0} for Right
    const bool forbidden_out = gamma == HalfLine::Left ? false : true;  // plus flag for outputs
    CutoffCheck out;
    Barcode p = p_cutoff_bar(bc, gamma), q = q_cutoff_bar(bc, gamma);
    if (profile_has(p, forbidden_out)) {
        out.output_in_polar = false;
        out.notes.push_back("P output has microsupport outside the antipodal polar");
    }
    if (profile_has(q, forbidden_out)) {
        out.output_in_polar = false;
        out.notes.push_back("Q output has microsupport outside the antipodal polar");
    }
    const bool interior = gamma == HalfLine::Left;  // plus flag meaning Int(gamma°a)
    if (profile_has(cone_of_u(bc, gamma), interior)) {
        out.cone_clear = false;
        out.notes.push_back("cone of u meets the interior of the antipodal polar");
    }
    if (profile_has(cone_of_v(bc, gamma), interior)) {
        out.cone_clear = false;
        out.notes.push_back("cone of v meets the interior of the antipodal polar");
    }
    return out;
}

CutoffCheck cutoff_cone_check(const ConvexIndicator& B, const CutoffCone& gamma)
{
    const int n = B.dim();
    PolyhedralCone g = as_polyhedral(gamma, n);
    ConvexIndicator P = cutoff_convex(B, gamma);
    ConvexIndicator Bn = normalized(B);
    CutoffCheck out;
    constexpr double tol = 1e-9;
    // inward normal -a lies in gamma°a iff <v, a> >= 0 on the generators of gamma
    for (int i = 0; i < P.A.rows(); ++i) {
        for (int j = 0; j < g.generators.rows(); ++j) {
            if (g.generators.row(j).dot(P.A.row(i)) < -tol) {
                out.output_in_polar = false;
                out.notes.push_back("output facet normal outside the antipodal polar");
            }
        }
    }
    // facets of B swallowed by the sum carry the SS of the cone of u
    for (int i = 0; i < Bn.A.rows(); ++i) {
        bool kept = false;
        for (int k = 0; k < P.A.rows(); ++k)
            kept = kept || ((Bn.A.row(i) - P.A.row(k)).norm() < 1e-8 && std::abs(Bn.b(i) - P.b(k)) < 1e-8);
        if (kept)
            continue;
        bool interior = g.generators.rows() > 0;
        for (int j = 0; j < g.generators.rows(); ++j)
            interior = interior && g.generators.row(j).dot(Bn.A.row(i)) > tol;
        if (interior) {
            out.cone_clear = false;
            out.notes.push_back("hidden facet normal in the interior of the antipodal polar");
        }
    }
    return out;
}

DirectionSplit split_by_direction(const Barcode& bc)
{
    bc.validate();
    DirectionSplit out;
    for (Barcode* part : {&out.plus, &out.minus, &out.constant}) {
        part->ambient = bc.ambient;
        part->field = bc.field;
    }
    for (const auto& bar : bc.bars) {
        if (is_full(bar, bc.ambient))
            out.constant.bars.push_back(bar);
        else if (is_sigma_positive(bar, bc.ambient))
            out.plus.bars.push_back(bar);
        else if (is_sigma_negative(bar, bc.ambient))
            out.minus.bars.push_back(bar);
        else
            throw Error(ErrorCode::MixedDirectionBar, "bar " + to_string(bar) + " has both directions");
    }
    return out;
}

double min_mixed_bar_length(const Barcode& bc)
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& bar : bc.bars) {
        if (is_full(bar, bc.ambient) || is_sigma_positive(bar, bc.ambient) || is_sigma_negative(bar, bc.ambient))
            continue;
        best = std::min(best, bar.right.value - bar.left.value);
    }
    return best;
}

Barcode restrict_to(const Barcode& bc, const OpenInterval& J)
{
    bc.validate();
    if (!(J.lo < J.hi) || J.lo < bc.ambient.lo || J.hi > bc.ambient.hi)
        throw Error(ErrorCode::InvalidArgument, "restriction interval must be a nonempty subinterval of the ambient");
    Barcode out;
    out.ambient = J;
    out.field = bc.field;
    for (const auto& bar : bc.bars) {
        Bar r = bar;
        double lv = bar.left.finite() ? bar.left.value : -std::numeric_limits<double>::infinity();
        double rv = bar.right.finite() ? bar.right.value : std::numeric_limits<double>::infinity();
        if (lv <= J.lo)
            r.left = ambient_left(J);
        if (rv >= J.hi)
            r.right = ambient_right(J);
        double nl = r.left.finite() ? r.left.value : -std::numeric_limits<double>::infinity();
        double nr = r.right.finite() ? r.right.value : std::numeric_limits<double>::infinity();
        if (nl > nr || (nl == nr && !(r.left.closed && r.right.closed)))
            continue;
        out.bars.push_back(r);
    }
    out.sort();
    return out;
}

}  // namespace sheafrig
