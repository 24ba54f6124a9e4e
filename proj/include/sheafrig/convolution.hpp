#pragma once

#include "sheafrig/barcode.hpp"
#include "sheafrig/cones.hpp"

#include <string>
#include <variant>
#include <vector>

namespace sheafrig {

// gamma = (-inf, 0] (Left) or [0, inf) (Right) in R
enum class HalfLine { Left, Right };

// Bar-wise cut-off functors on barcodes over the whole line.
Barcode p_cutoff_bar(const Barcode& bc, HalfLine gamma);
Barcode q_cutoff_bar(const Barcode& bc, HalfLine gamma);
// Third vertices of P F -> F -> cone(u) and F -> Q F -> cone(v).
Barcode cone_of_u(const Barcode& bc, HalfLine gamma);
Barcode cone_of_v(const Barcode& bc, HalfLine gamma);

Bar mirror(const Bar& bar);
Barcode mirror(const Barcode& bc);

// k_B[degree] for the closed polyhedron B = {x : A x <= b}
struct ConvexIndicator {
    Mat A;
    Vec b;
    int degree = 0;

    int dim() const { return static_cast<int>(A.cols()); }
    bool contains(const Vec& x, double tol = 1e-10) const;
};

using CutoffCone = std::variant<PolyhedralCone, RoundCone>;

PolyhedralCone as_polyhedral(const CutoffCone& gamma, int dim);

// P_gamma(k_B) = k_{B + gamma^a}
ConvexIndicator cutoff_convex(const ConvexIndicator& B, const CutoffCone& gamma);

struct CutoffCheck {
    bool output_in_polar = true;   // SS of the outputs inside V x gamma°a
    bool cone_clear = true;        // cones of u (and v) have no SS over Int(gamma°a)
    std::vector<std::string> notes;

    bool pass() const { return output_in_polar && cone_clear; }
};

CutoffCheck cutoff_cone_check(const Barcode& bc, HalfLine gamma);
CutoffCheck cutoff_cone_check(const ConvexIndicator& B, const CutoffCone& gamma);

struct DirectionSplit {
    Barcode plus;
    Barcode minus;
    Barcode constant;
};

DirectionSplit split_by_direction(const Barcode& bc);

// shortest [a,b] or (a,b) bar; infinity when there is none
double min_mixed_bar_length(const Barcode& bc);

// F restricted to the open interval J (bars cut at J, ends beyond J become ambient)
Barcode restrict_to(const Barcode& bc, const OpenInterval& J);

}  // namespace sheafrig
